"""Invariant distances on one-dimensional model domains.

All distances use the normalisation ``p(0, x) = artanh(x)`` for the unit disc,
so that every other formula here is the pull-back of that one through an
explicit biholomorphism or covering map.  Points are Python complex numbers.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

from .errors import DomainViolationError, InvalidStripError, PrecisionLossError

# Points closer than this to a chart boundary are rejected at entry.
ENTRY_TOL = 1e-12


def _artanh(x: float, one_minus_x2: float) -> float:
    """artanh(x) for x in [0, 1), given an accurately computed 1 - x**2.

    Near x = 1 the complement cannot be recovered from x itself, so callers
    pass it in closed form.
    """
    if not (one_minus_x2 > 0.0) or math.isinf(one_minus_x2):
        raise PrecisionLossError(f"artanh argument indistinguishable from 1 (1-x^2={one_minus_x2!r})")
    return math.log1p(x) - 0.5 * math.log(one_minus_x2)


def _check_finite(*points: complex) -> None:
    for p in points:
        if not (math.isfinite(p.real) and math.isfinite(p.imag)):
            raise DomainViolationError(f"non-finite point {p!r}")


def poincare_distance(a: complex, b: complex) -> float:
    """Poincare distance artanh |(a - b) / (1 - conj(b) a)| on the unit disc."""
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    for p in (a, b):
        if 1.0 - abs(p) <= ENTRY_TOL:
            raise DomainViolationError(f"{p!r} is not inside the unit disc")
    if a == b:
        return 0.0
    den = 1.0 - b.conjugate() * a
    den2 = abs(den) ** 2
    x = abs(a - b) / abs(den)
    # 1 - |phi|^2 = (1 - |a|^2)(1 - |b|^2) / |1 - conj(b) a|^2
    ra, rb = abs(a), abs(b)
    comp = (1.0 - ra) * (1.0 + ra) * (1.0 - rb) * (1.0 + rb) / den2
    return _artanh(min(x, 1.0), comp)


def halfplane_distance(a: complex, b: complex) -> float:
    """Distance artanh |(a - b) / (a - conj(b))| in the upper half-plane."""
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    for p in (a, b):
        if not p.imag > ENTRY_TOL * abs(p):
            raise DomainViolationError(f"{p!r} is not in the upper half-plane")
    if a == b:
        return 0.0
    den = a - b.conjugate()
    x = abs(a - b) / abs(den)
    comp = 4.0 * a.imag * b.imag / abs(den) ** 2
    return _artanh(min(x, 1.0), comp)


def _log_cosh_minus_cos(ds: float, dth: float) -> float:
    """log(cosh(ds) - cos(dth)), written as sums of squares to avoid cancellation."""
    if ds < 40.0:
        return math.log(2.0 * math.sinh(0.5 * ds) ** 2 + 2.0 * math.sin(0.5 * dth) ** 2)
    return ds - math.log(2.0) + math.log1p(-2.0 * math.cos(dth) * math.exp(-ds) + math.exp(-2.0 * ds))


def _check_strip(lo: float, hi: float, *points: complex) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise InvalidStripError(f"invalid strip ({lo}, {hi})")
    for p in points:
        gap = min(p.real - lo, hi - p.real)
        if gap <= ENTRY_TOL * max(1.0, abs(lo), abs(hi)):
            raise DomainViolationError(f"Re {p!r} not inside strip ({lo}, {hi})")


def strip_distance(a: complex, b: complex, lo: float, hi: float) -> float:
    """Kobayashi distance in the vertical strip {lo < Re z < hi}.

    The chart z -> exp(pi i (z - lo) / (hi - lo)) sends the strip onto the
    upper half-plane; the half-plane distance is then written in polar form,
    cosh(2p) = 1 + (cosh(ds) - cos(th1 - th2)) / (sin th1 sin th2),
    which needs no exponentials of the imaginary parts and so survives
    large vertical offsets and points close to either edge.
    """
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    _check_strip(lo, hi, a, b)
    if a == b:
        return 0.0
    width = hi - lo
    ds = math.pi * abs(b.imag - a.imag) / width

    def angle(z: complex) -> tuple[float, float]:
        near_lo = (z.real - lo) / width
        near_hi = (hi - z.real) / width
        return math.pi * near_lo, math.sin(math.pi * min(near_lo, near_hi))

    th1, sin1 = angle(a)
    th2, sin2 = angle(b)
    log_x = _log_cosh_minus_cos(ds, th1 - th2) - math.log(sin1) - math.log(sin2)
    if log_x > 300.0:
        # arccosh(1 + X) = log(2X) + log1p(1/X) + O(X^-2)
        return 0.5 * (log_x + math.log(2.0) + math.exp(-log_x))
    x = math.exp(log_x)
    return 0.5 * math.log1p(x + math.sqrt(x * (x + 2.0)))


def disc_distance(a: complex, b: complex, center: complex, radius: float) -> float:
    """Distance in the disc of the given center and radius."""
    if not radius > 0:
        raise DomainViolationError(f"radius must be positive, got {radius}")
    a, b, center = complex(a), complex(b), complex(center)
    return poincare_distance((a - center) / radius, (b - center) / radius)


def deck_search(objective: Callable[[int], float], patience: int = 2) -> tuple[float, int]:
    """Minimise ``objective`` over the integers.

    Scans m = 0, 1, 2, ... and m = -1, -2, ... and stops on each side after
    ``patience`` consecutive increases.  The lifted distance is convex in the
    deck index, so the first increase already certifies the minimum; the
    extra step guards against round-off ties.
    """
    best_val, best_m = objective(0), 0
    for step in (1, -1):
        prev = best_val
        rises = 0
        m = step
        while rises < patience:
            val = objective(m)
            if val < best_val:
                best_val, best_m = val, m
            rises = rises + 1 if val > prev else 0
            prev = val
            m += step
    return best_val, best_m


def deck_scan(objective: Callable[[int], float], window: int) -> tuple[float, int]:
    """Brute-force minimum of ``objective`` over -window..window."""
    vals = [(objective(m), m) for m in range(-window, window + 1)]
    return min(vals, key=lambda v: (v[0], abs(v[1])))


def _punctured_objective(a: complex, b: complex, radius: float) -> Callable[[int], float]:
    # Covering exp: {Re w < log r} -> r D_*; rotate the left half-plane to the upper one.
    log_r = math.log(radius)
    wa = 1j * (log_r - cmath.log(a))
    wb = 1j * (log_r - cmath.log(b))
    return lambda m: halfplane_distance(wa, wb + 2.0 * math.pi * m)


def punctured_disc_distance(a: complex, b: complex, radius: float) -> float:
    """Kobayashi distance of the punctured disc {0 < |z| < radius}."""
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    if not radius > 0:
        raise DomainViolationError(f"radius must be positive, got {radius}")
    for p in (a, b):
        if abs(p) <= ENTRY_TOL or radius - abs(p) <= ENTRY_TOL * radius:
            raise DomainViolationError(f"{p!r} not in the punctured disc of radius {radius}")
    if a == b:
        return 0.0
    return deck_search(_punctured_objective(a, b, radius))[0]


def _annulus_objective(a: complex, b: complex, r_in: float, r_out: float) -> Callable[[int], float]:
    lo, hi = math.log(r_in), math.log(r_out)
    la, lb = cmath.log(a), cmath.log(b)
    return lambda m: strip_distance(la, lb + 2j * math.pi * m, lo, hi)


def annulus_distance(a: complex, b: complex, r_in: float, r_out: float) -> float:
    """Kobayashi distance of the annulus {r_in < |z| < r_out}, via the strip cover."""
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    if not (0 < r_in < r_out):
        raise DomainViolationError(f"invalid annulus radii ({r_in}, {r_out})")
    for p in (a, b):
        if abs(p) - r_in <= ENTRY_TOL * r_in or r_out - abs(p) <= ENTRY_TOL * r_out:
            raise DomainViolationError(f"{p!r} not in the annulus ({r_in}, {r_out})")
    if a == b:
        return 0.0
    return deck_search(_annulus_objective(a, b, r_in, r_out))[0]
