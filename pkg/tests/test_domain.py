import json
import math

import numpy as np
import pytest

from reinhardt_kobayashi import domain as D
from reinhardt_kobayashi.errors import (
    AmbiguousSupportError,
    PreconditionError,
    SpecSchemaError,
    SpecValidationError,
)

# sqrt(2) * (2 - 2 log 2): distance from (-2, -2) to the symmetric boundary
# point of log(e^{x/2} + e^{y/2}) < 0, at 40 digits.
DBETA_DLOG = 0.8679108378090957141755740011489293945564


def disc_spec(b=0.0):
    return D.affine_spec("disc", [((1.0,), b)], (True,), (-1.0 - b,) if b < 0 else (-1.0,))


@pytest.fixture(scope="module")
def specs():
    return {name: D.shipped_spec(name) for name in D.SHIPPED}


def random_interior(spec, rng, count, box=1.0):
    out = []
    while len(out) < count:
        z = rng.uniform(0, box, spec.n)
        if D.moduli_margin(spec, z) < -1e-6:
            out.append(z)
    return out


BOXES = {"bidisc": 1.0, "disc_punctured_disc": 1.0, "product_lt_one": 2.5, "d_beta_half": 1.0, "remark_polyhedral": 2.0}


class TestLseMargin:
    def test_affine(self):
        c = D.LogConstraint((D.LogTerm((1, 1), 0),))
        assert D.lse_margin(c, [-1, -1]) == -2

    def test_equal_terms(self):
        c = D.LogConstraint((D.LogTerm((1, 0), -2), D.LogTerm((0, 1), -2)))
        assert D.lse_margin(c, [-1, -1]) == pytest.approx(-3 + math.log(2), abs=1e-15)

    def test_no_underflow(self):
        c = D.LogConstraint((D.LogTerm((1,), 0), D.LogTerm((1,), -1)))
        assert D.lse_margin(c, [-1000]) == pytest.approx(-1000 + math.log1p(math.exp(-1)), abs=1e-12)

    def test_vectorised(self):
        c = D.LogConstraint((D.LogTerm((1, 0), 0), D.LogTerm((0, 1), 0)))
        X = np.array([[-1.0, -2.0], [0.0, 0.0]])
        np.testing.assert_allclose(D.lse_margin(c, X), [D.lse_margin(c, x) for x in X])


class TestLogMembership:
    def test_witness_inside(self, specs):
        for spec in specs.values():
            assert D.log_membership(spec, np.array(spec.witness)) < 0

    def test_ray_bisection_boundary(self, specs):
        rng = np.random.default_rng(5)
        for spec in specs.values():
            w = np.array(spec.witness)
            for _ in range(20):
                u = rng.standard_normal(2)
                u /= np.linalg.norm(u)
                if D.log_membership(spec, w + 100 * u) < 0:
                    continue
                lo, hi = 0.0, 100.0
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    lo, hi = (lo, mid) if D.log_membership(spec, w + mid * u) >= 0 else (mid, hi)
                assert abs(D.log_membership(spec, w + hi * u)) <= 1e-9

    def test_far_outside(self, specs):
        spec = specs["product_lt_one"]
        assert D.log_membership(spec, [5.0, 5.0]) > 0


class TestValidation:
    def test_sign_rule(self):
        with pytest.raises(SpecValidationError):
            D.affine_spec("x", [((1, -1), 0)], (True, True), (-2, -1))

    def test_sign_rule_excluded_ok(self):
        spec = D.affine_spec("x", [((1, -1), 0)], (True, False), (-2, -1))
        assert D.completeness_profile(spec).complete_dirs == frozenset({0})

    def test_witness_outside(self):
        with pytest.raises(SpecValidationError):
            D.affine_spec("x", [((1,), 0)], (True,), (0.5,))

    def test_witness_on_boundary(self):
        with pytest.raises(SpecValidationError):
            D.affine_spec("x", [((1,), 0)], (True,), (0.0,))

    def test_dimension_mismatch(self):
        with pytest.raises(SpecValidationError):
            D.affine_spec("x", [((1, 0), 0)], (True,), (-1,))

    def test_nonfinite(self):
        with pytest.raises(SpecValidationError):
            D.LogTerm((math.nan,), 0)

    def test_immutable(self, specs):
        with pytest.raises(AttributeError):
            specs["bidisc"].name = "other"


class TestMembership:
    def test_zero_on_included_axis(self, specs):
        assert D.membership(specs["bidisc"], [0, 0.5]) is D.Membership.INTERIOR

    def test_zero_on_excluded_axis(self, specs):
        assert D.membership(specs["disc_punctured_disc"], [0.5, 0]) is D.Membership.BOUNDARY

    def test_exterior(self, specs):
        assert D.membership(specs["bidisc"], [1.5, 0.5]) is D.Membership.EXTERIOR

    def test_boundary_face(self, specs):
        assert D.membership(specs["bidisc"], [1.0, 0.5]) is D.Membership.BOUNDARY

    def test_excluded_axis_outside_closure(self, specs):
        assert D.membership(specs["disc_punctured_disc"], [1.5, 0]) is D.Membership.EXTERIOR

    def test_negative_exponent_at_zero(self):
        spec = D.affine_spec("x", [((1, -1), 0), ((0, 1), 0)], (True, False), (-2, -1))
        assert D.membership(spec, [0.1, 0.0]) is D.Membership.EXTERIOR

    def test_tolerance(self, specs):
        spec = specs["bidisc"]
        assert D.membership(spec, [1 - 1e-9, 0.5]) is D.Membership.BOUNDARY
        assert D.membership(spec, [1 - 1e-9, 0.5], tol=0.0) is D.Membership.INTERIOR

    def test_bad_points(self, specs):
        with pytest.raises(PreconditionError):
            D.membership(specs["bidisc"], [-0.1, 0.5])
        with pytest.raises(PreconditionError):
            D.membership(specs["bidisc"], [0.1])


class TestCompleteness:
    def test_bidisc_fu(self, specs):
        prof = D.completeness_profile(specs["bidisc"])
        assert prof.fu_satisfied and prof.relatively_complete
        assert prof.complete_dirs == frozenset({0, 1})

    def test_disc_punctured_disc(self, specs):
        prof = D.completeness_profile(specs["disc_punctured_disc"])
        assert prof.axis_boundary_met[1] and not prof.axis_included[1]
        assert not prof.fu_satisfied

    def test_bounded_away_from_axis(self):
        # an annulus-type constraint x > -1 keeps the log image away from -inf
        spec = D.affine_spec("annulus", [((1, 0), 0), ((-1, 0), -1), ((0, 1), 0)], (False, True), (-0.5, -1))
        prof = D.completeness_profile(spec)
        assert prof.axis_boundary_met == (False, True)
        assert prof.fu_satisfied

    def test_fu_definition(self, specs):
        for spec in specs.values():
            p = D.completeness_profile(spec)
            expected = all(inc or not met for met, inc in zip(p.axis_boundary_met, p.axis_included))
            assert p.fu_satisfied == expected


class TestDLog:
    def test_point_to_plane(self, specs):
        sol = D.d_log(specs["product_lt_one"], [-1, -1])
        assert sol.distance == pytest.approx(math.sqrt(2), abs=1e-15)
        np.testing.assert_allclose(sol.witness, [0, 0], atol=1e-15)

    def test_faces(self, specs):
        assert D.d_log(specs["bidisc"], [-0.3, -0.7]).distance == pytest.approx(0.3, abs=1e-15)

    def test_d_beta_grid_oracle(self, specs):
        sol = D.d_log(specs["d_beta_half"], [-2, -2])
        x1 = -np.geomspace(1e-9, 60, 400001)
        x2 = 2 * np.log1p(-np.exp(x1 / 2))
        ref = np.min(np.hypot(x1 + 2, x2 + 2))
        assert sol.converged
        assert sol.distance == pytest.approx(ref, abs=1e-4)
        assert sol.distance == pytest.approx(DBETA_DLOG, rel=1e-10)
        assert abs(D.log_membership(specs["d_beta_half"], sol.witness)) <= 1e-7

    def test_not_interior(self, specs):
        with pytest.raises(PreconditionError):
            D.d_log(specs["bidisc"], [0.0, -1.0])

    def test_ball_inside(self, specs):
        rng = np.random.default_rng(11)
        dirs = rng.standard_normal((200, 2))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for name, spec in specs.items():
            for z in random_interior(spec, rng, 50, BOXES[name]):
                x = np.log(z)
                r = D.d_log(spec, x).distance * (1 - 1e-9)
                assert np.all(D.log_membership(spec, x + r * dirs) < 0), name

    def test_three_dimensions(self):
        spec = D.ReinhardtDomainSpec(
            "l1",
            (D.LogConstraint(tuple(D.LogTerm(tuple(float(i == j) for i in range(3)), 0) for j in range(3))),),
            (True,) * 3,
            (-2, -2, -2),
        )
        sol = D.d_log(spec, [-2, -2, -2])
        assert sol.distance == pytest.approx(math.sqrt(3) * (2 - math.log(3)), rel=1e-9)


class TestDAbs:
    def test_unit_disc(self):
        sol = D.d_abs(disc_spec(), [0.3])
        assert sol.distance == pytest.approx(0.7, abs=1e-12)
        assert sol.converged

    def test_bidisc(self, specs):
        assert D.d_abs(specs["bidisc"], [0.3, 0.5]).distance == pytest.approx(0.5, abs=1e-12)

    def test_product_hyperbola(self, specs):
        spec = specs["product_lt_one"]
        sol = D.d_abs(spec, [0.5, 0.5])
        assert sol.distance == pytest.approx(math.sqrt(2) * 0.5, rel=1e-9)
        np.testing.assert_allclose(sol.witness, [1, 1], atol=1e-6)
        # polar grid over the boundary hyperbola r2 = 1 / r1
        th = np.linspace(1e-4, np.pi / 2 - 1e-4, 2_000_001)
        s = 1 / np.sqrt(np.cos(th) * np.sin(th))
        ref = np.min(np.hypot(s * np.cos(th) - 0.5, s * np.sin(th) - 0.5))
        assert sol.distance == pytest.approx(ref, rel=1e-3)

    def test_excluded_face(self, specs):
        # the punctured axis r2 = 0 is boundary
        assert D.d_abs(specs["disc_punctured_disc"], [0.5, 0.1]).distance == pytest.approx(0.1, abs=1e-12)
        assert D.d_abs(specs["bidisc"], [0.5, 0.1]).distance == pytest.approx(0.5, abs=1e-12)

    def test_polydisc_closed_form_matches_search(self, specs):
        # a slack constraint sends the same domain through the ray search
        rng = np.random.default_rng(7)
        for name in ("bidisc", "disc_punctured_disc"):
            spec = specs[name]
            slack = D.ReinhardtDomainSpec(
                name, spec.constraints + (D.LogConstraint((D.LogTerm((1.0, 1.0), -10.0),)),),
                spec.axis_included, spec.witness,
            )
            for z in rng.uniform(0.05, 0.95, (5, 2)):
                fast, slow = D.d_abs(spec, z), D.d_abs(slack, z)
                assert "closed_form" in fast.details and "closed_form" not in slow.details
                assert fast.distance == pytest.approx(slow.distance, rel=1e-7)

    def test_point_on_included_axis(self, specs):
        sol = D.d_abs(specs["d_beta_half"], [0.5, 0.0])
        # sqrt(r1) + sqrt(r2) < 1; nearest point found by a dense scan
        u = np.linspace(0, 1, 2_000_001)
        ref = np.min(np.hypot(u**2 - 0.5, (1 - u) ** 2))
        assert sol.distance == pytest.approx(ref, rel=1e-6)

    def test_witness_is_boundary(self, specs):
        rng = np.random.default_rng(12)
        for name, spec in specs.items():
            for z in random_interior(spec, rng, 5, BOXES[name]):
                sol = D.d_abs(spec, z)
                assert sol.distance > 0
                assert D.membership(spec, sol.witness) is D.Membership.BOUNDARY
                assert np.linalg.norm(sol.witness - z) == pytest.approx(sol.distance, rel=1e-6)

    def test_reproducible(self, specs):
        rng = np.random.default_rng(13)
        for name, spec in specs.items():
            z = random_interior(spec, rng, 1, BOXES[name])[0]
            a, b = D.d_abs(spec, z), D.d_abs(spec, z.copy())
            assert a.distance == pytest.approx(b.distance, rel=1e-7)

    def test_three_dimensions(self):
        spec = D.ReinhardtDomainSpec(
            "l1",
            (D.LogConstraint(tuple(D.LogTerm(tuple(float(i == j) for i in range(3)), 0) for j in range(3))),),
            (True,) * 3,
            (-2, -2, -2),
        )
        sol = D.d_abs(spec, [0.2, 0.3, 0.1])
        assert sol.distance == pytest.approx(0.4 / math.sqrt(3), rel=1e-7)
        assert sol.converged

    def test_not_interior(self, specs):
        with pytest.raises(PreconditionError):
            D.d_abs(specs["bidisc"], [1.0, 0.5])
        with pytest.raises(PreconditionError):
            D.d_abs(specs["disc_punctured_disc"], [0.5, 0.0])


class TestSupportingHalfspace:
    def test_affine(self, specs):
        alpha, logc = D.supporting_halfspace(specs["product_lt_one"], [0.7, -0.7])
        np.testing.assert_allclose(alpha, [1, 1])
        assert logc == pytest.approx(0, abs=1e-15)

    def test_d_beta_symmetric(self, specs):
        x0 = -math.log(2) / 0.5 * np.ones(2)
        alpha, logc = D.supporting_halfspace(specs["d_beta_half"], x0)
        assert alpha[0] == pytest.approx(alpha[1], rel=1e-15)
        assert logc == pytest.approx(alpha @ x0, abs=1e-12)

    def test_corner_is_ambiguous(self, specs):
        with pytest.raises(AmbiguousSupportError):
            D.supporting_halfspace(specs["bidisc"], [0.0, 0.0])

    def test_corner_with_index(self, specs):
        alpha, _ = D.supporting_halfspace(specs["bidisc"], [0.0, 0.0], index=1)
        np.testing.assert_allclose(alpha, [0, 1])

    def test_interior_rejected(self, specs):
        with pytest.raises(AmbiguousSupportError):
            D.supporting_halfspace(specs["product_lt_one"], [-1.0, -1.0])

    def test_halfspace_contains_log_image(self, specs):
        spec = specs["d_beta_half"]
        rng = np.random.default_rng(14)
        X = rng.uniform(-20, 0, (20000, 2))
        X = X[D.log_membership(spec, X) < 0]
        for x1 in np.linspace(-10, -0.01, 7):
            x0 = np.array([x1, 2 * math.log1p(-math.exp(x1 / 2))])
            alpha, logc = D.supporting_halfspace(spec, x0)
            assert np.all(X @ alpha < logc)


class TestRationalize:
    def test_affine_exact(self, specs):
        h = D.rationalize_halfspace([1, 1], 0, 10, spec=specs["product_lt_one"])
        assert h.A == (1, 1) and h.logC == 0 and h.certified

    def test_sqrt2(self, specs):
        h = D.rationalize_halfspace([1, math.sqrt(2)], 0, 5, samples=[[0.5, 0.0]], spec=specs["d_beta_half"])
        assert h.A == (5, 7)
        assert h.logC == pytest.approx(2.5)
        assert not h.certified

    def test_gcd(self):
        assert D.rationalize_halfspace([2, 4], 0, 10).A == (1, 2)

    def test_scale_applied_to_logc(self):
        h = D.rationalize_halfspace([0.5, 0.5], -1.0, 10)
        assert h.A == (1, 1) and h.logC == pytest.approx(-2.0)

    def test_negative_entries(self):
        assert D.rationalize_halfspace([1, -1.5], 0, 10).A == (2, -3)

    def test_qmax(self):
        with pytest.raises(PreconditionError):
            D.rationalize_halfspace([1, 1], 0, 0)

    def test_zero_alpha(self):
        with pytest.raises(PreconditionError):
            D.rationalize_halfspace([0, 0], 0, 5)

    def test_certified_offset(self, specs):
        h = D.rationalize_halfspace([1, math.sqrt(2)], 0, 20, spec=specs["remark_polyhedral"])
        assert not h.certified  # sqrt(2) is irrational
        h = D.rationalize_halfspace([1, 0], math.log(2), 5, spec=specs["remark_polyhedral"])
        assert h.certified and h.logC == pytest.approx(math.log(2))


class TestNormal:
    def test_disc(self):
        np.testing.assert_allclose(D.normal_vector_moduli(disc_spec(), [1.0]), [1.0])

    def test_hyperbola(self, specs):
        np.testing.assert_allclose(D.normal_vector_moduli(specs["product_lt_one"], [1, 1]), [2**-0.5] * 2)

    def test_face(self, specs):
        np.testing.assert_allclose(D.normal_vector_moduli(specs["bidisc"], [1, 0.5]), [1, 0])

    def test_zero_modulus(self, specs):
        with pytest.raises(PreconditionError):
            D.normal_vector_moduli(specs["disc_punctured_disc"], [0.5, 0])


class TestRescale:
    def test_identity(self, specs):
        for spec in specs.values():
            assert D.rescale(spec, np.ones(spec.n)) == spec

    def test_disc_by_e(self):
        spec = D.rescale(disc_spec(), [math.e])
        assert spec.constraints[0].terms[0].b == pytest.approx(-1.0)
        assert spec.witness[0] == pytest.approx(0.0)
        assert D.membership(spec, [2.5]) is D.Membership.INTERIOR
        assert D.membership(spec, [math.e]) is D.Membership.BOUNDARY

    def test_round_trip(self, specs):
        a = np.array([0.3, 7.0])
        for spec in specs.values():
            back = D.rescale(D.rescale(spec, a), 1 / a)
            for c, c2 in zip(spec.constraints, back.constraints):
                np.testing.assert_allclose(c2.b, c.b, atol=1e-12)
                np.testing.assert_array_equal(c2.A, c.A)

    def test_membership_transported(self, specs):
        rng = np.random.default_rng(15)
        a = np.array([2.0, 0.25])
        for name, spec in specs.items():
            moved = D.rescale(spec, a)
            for z in rng.uniform(0, BOXES[name], (50, 2)):
                assert D.membership(spec, z) is D.membership(moved, a * z)

    def test_bad_scale(self, specs):
        with pytest.raises(PreconditionError):
            D.rescale(specs["bidisc"], [1.0, 0.0])


class TestRestrict:
    def test_bidisc_slice_is_disc(self, specs):
        sliced = D.restrict_to_axes(specs["bidisc"], [0])
        assert sliced.n == 1
        assert D.membership(sliced, [0.99]) is D.Membership.INTERIOR
        assert D.membership(sliced, [1.0]) is D.Membership.BOUNDARY

    def test_punctured_axis_cannot_be_dropped(self, specs):
        # D ∩ {z_2 = 0} is empty when axis 2 is excluded
        with pytest.raises(PreconditionError):
            D.restrict_to_axes(specs["disc_punctured_disc"], [0])
        sliced = D.restrict_to_axes(specs["disc_punctured_disc"], [1])
        assert sliced.axis_included == (False,)

    def test_l1_ball(self):
        spec = D.ReinhardtDomainSpec("l1", (D.LogConstraint((D.LogTerm((1, 0), 0), D.LogTerm((0, 1), 0))),), (True, True), (-1, -1))
        sliced = D.restrict_to_axes(spec, [0])
        assert sliced.constraints == (D.LogConstraint((D.LogTerm((1,), 0),)),)

    def test_keep_all(self, specs):
        for spec in specs.values():
            assert D.restrict_to_axes(spec, range(spec.n)) == spec

    def test_bad_indices(self, specs):
        with pytest.raises(PreconditionError):
            D.restrict_to_axes(specs["bidisc"], [2])
        with pytest.raises(PreconditionError):
            D.restrict_to_axes(specs["bidisc"], [])

    def test_zero_padding(self, specs):
        rng = np.random.default_rng(16)
        for name, spec in specs.items():
            for j, inc in enumerate(spec.axis_included):
                if not inc:
                    continue
                keep = [k for k in range(spec.n) if k != j]
                sliced = D.restrict_to_axes(spec, keep)
                for r in rng.uniform(0, BOXES[name], 200):
                    padded = np.zeros(spec.n)
                    padded[keep] = r
                    assert D.membership(sliced, [r]) is D.membership(spec, padded)


class TestJson:
    def test_round_trip(self, specs):
        for spec in specs.values():
            assert D.spec_from_dict(json.loads(json.dumps(D.spec_to_dict(spec)))) == spec

    def test_shipped_files_exist(self):
        for name in D.SHIPPED:
            assert D.shipped_spec_path(name).is_file()

    def test_remark_domain(self, specs):
        spec = specs["remark_polyhedral"]
        assert D.membership(spec, [1.9, 0.1]) is D.Membership.INTERIOR
        assert D.membership(spec, [1.0, 1.0]) is D.Membership.BOUNDARY

    @pytest.mark.parametrize(
        "patch",
        [
            {"dim": "two"},
            {"extra": 1},
            {"constraints": [{"terms": []}]},
            {"witness_log": [-1.0]},
            {"constraints": [{"terms": [{"alpha": [1.0], "b": 0.0}]}]},
        ],
    )
    def test_schema_errors(self, specs, patch):
        data = {**D.spec_to_dict(specs["bidisc"]), **patch}
        with pytest.raises(SpecSchemaError):
            D.spec_from_dict(data)

    def test_semantic_error(self, specs):
        data = D.spec_to_dict(specs["bidisc"])
        data["witness_log"] = [0.5, -1.0]
        with pytest.raises(SpecValidationError):
            D.spec_from_dict(data)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{not json")
        with pytest.raises(SpecSchemaError):
            D.load_spec(p)
