"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The criteria share one certification ledger, so criterion 10 audits the
inclusion checks made by the sweeps and sandwiches before it.
"""

import pytest

from reinhardt_kobayashi import acceptance


@pytest.fixture(scope="module")
def ledger():
    return acceptance.CertLedger()


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, ledger, capsys):
    result = acceptance.run_criterion(number, ledger)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
