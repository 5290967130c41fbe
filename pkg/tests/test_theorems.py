from fractions import Fraction

import pytest

from genconvex.errors import OrientationError
from genconvex.funcdsl import catalog, func_from_expr
from genconvex.classes import certify_sampled, class_spec
from genconvex.theorems import (
    REDUCTION_PAIRS,
    check_reduction,
    verify_background,
    verify_t2_1,
    verify_t2_2,
    verify_t2_2dot,
    verify_t2_3,
)


def unit(name, *params):
    return catalog(name, params, (0.0, 1.0))


SQUARE = unit("power", 2)
IDENT = unit("identity")
ROOT = unit("sqrt")
ZERO = unit("constant", 0)
H_LINEAR = unit("identity")
H_ONE = unit("constant", 1)
H_SQUARE = unit("power", 2)


def linear_mean_oracle(lo, hi):
    """Exact average of f(u) = u over [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    return float((lo + hi) / 2)


class TestT2_1:
    def test_tight_at_unit_modulus(self):
        v = verify_t2_1(IDENT, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(1 / 6, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 6, abs=1e-9)
        assert abs(v.margin) <= 1e-9
        assert v.status == "pass"

    def test_tight_at_half_modulus(self):
        v = verify_t2_1(IDENT, H_LINEAR, 0.5, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(1 / 24, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 24, abs=1e-9)
        assert v.status == "pass"

    def test_zero_function(self):
        v = verify_t2_1(ZERO, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == 0.0
        assert v.rhs == 0.0
        assert v.status == "pass"

    def test_orientation(self):
        with pytest.raises(OrientationError):
            verify_t2_1(IDENT, H_LINEAR, 1.0, None, 1.0, 0.0)
        with pytest.raises(OrientationError):
            verify_t2_1(IDENT, H_LINEAR, 0.5, None, 0.6, 1.0)  # phi(x) > m*phi(y)

    def test_reflection_symmetry_of_lhs(self):
        # substituting u -> (lo + hi) - u must not move the integral
        from genconvex.quad import integrate

        v = verify_t2_1(SQUARE, H_LINEAR, 1.0, None, 0.0, 1.0)
        reflected = integrate(lambda u: SQUARE(1.0 - u) * SQUARE(u), 0.0, 1.0)
        assert abs(v.lhs - reflected.value) <= 2.0 * v.quad_err + 1e-13

    def test_squared_homogeneity(self):
        lam = 3.5
        scaled = catalog("poly", (0.0, 0.0, lam), (0.0, 1.0))
        v1 = verify_t2_1(SQUARE, H_LINEAR, 1.0, None, 0.0, 1.0)
        v2 = verify_t2_1(scaled, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v2.lhs == pytest.approx(lam * lam * v1.lhs, rel=1e-12)
        assert v2.rhs == pytest.approx(lam * lam * v1.rhs, rel=1e-12)
        assert v2.status == v1.status


class TestT2_2dot:
    def test_square(self):
        v = verify_t2_2dot(SQUARE, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(1 / 3, abs=1e-9)
        assert v.rhs == pytest.approx(0.5, abs=1e-12)
        assert v.margin == pytest.approx(1 / 6, abs=1e-9)
        assert v.status == "pass"

    def test_linear_tightness(self):
        v = verify_t2_2dot(IDENT, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(linear_mean_oracle(0, 1), abs=1e-10)
        assert abs(v.margin) <= v.quad_err + 1e-9

    def test_constant_tightness(self):
        const = unit("constant", 0.7)
        v = verify_t2_2dot(const, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(0.7, abs=1e-10)
        assert v.rhs == pytest.approx(0.7, abs=1e-10)

    def test_non_member_fails(self):
        v = verify_t2_2dot(ROOT, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(2 / 3, abs=1e-8)
        assert v.rhs == pytest.approx(0.5, abs=1e-12)
        assert v.status == "fail"

    def test_scaling_homogeneity(self):
        lam = 2.25
        scaled = catalog("poly", (0.0, 0.0, lam), (0.0, 1.0))
        v1 = verify_t2_2dot(SQUARE, H_LINEAR, 1.0, None, 0.0, 1.0)
        v2 = verify_t2_2dot(scaled, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v2.lhs == pytest.approx(lam * v1.lhs, rel=1e-13)
        assert v2.rhs == pytest.approx(lam * v1.rhs, rel=1e-13)
        assert v2.status == v1.status

    def test_non_integrable_weight_is_indeterminate(self):
        h_bad = catalog("recip_power", (1,), (0.0, 1.0))
        v = verify_t2_2dot(SQUARE, h_bad, 1.0, None, 0.0, 1.0, budget=50_000)
        assert v.status == "indeterminate"
        assert v.notes


class TestT2_2:
    def test_half_modulus_tightness(self):
        v = verify_t2_2(IDENT, H_LINEAR, 0.5, None, 0.4, 1.0)
        assert v.lhs == pytest.approx(0.7, abs=1e-9)
        assert v.rhs == pytest.approx(0.7, abs=1e-12)
        assert abs(v.margin) <= 1e-9
        assert v.status == "pass"

    def test_unit_modulus_square(self):
        v = verify_t2_2(SQUARE, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(1 / 3, abs=1e-9)
        assert v.rhs == pytest.approx(0.5, abs=1e-12)

    def test_zero_function(self):
        v = verify_t2_2(ZERO, H_LINEAR, 0.5, None, 0.2, 1.0)
        assert v.lhs == 0.0 and v.rhs == 0.0
        assert v.status == "pass"

    def test_linear_is_tight_for_every_modulus(self):
        for m in (0.25, 0.5, 0.75, 1.0):
            v = verify_t2_2(IDENT, H_LINEAR, m, None, 0.0, 1.0)
            assert abs(v.margin) <= v.quad_err + 1e-9

    def test_chain_violations(self):
        with pytest.raises(OrientationError):
            verify_t2_2(IDENT, H_LINEAR, 0.5, None, 0.6, 1.0)  # x >= m*y
        shifted = catalog("affine", (-0.5, 1.0), (0.0, 1.0))  # phi(u) = u - 1/2 < 0
        with pytest.raises(OrientationError):
            verify_t2_2(IDENT, H_LINEAR, 0.5, shifted, 0.2, 1.0)


class TestT2_3:
    def test_identity_pair_is_tight(self):
        v = verify_t2_3(IDENT, IDENT, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(1 / 3, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 3, abs=1e-12)
        assert abs(v.margin) <= v.quad_err + 1e-9
        assert v.inputs["M"] == 1.0
        assert v.inputs["N"] == 0.0

    def test_square_times_identity(self):
        v = verify_t2_3(SQUARE, IDENT, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == pytest.approx(0.25, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 3, abs=1e-12)
        assert v.status == "pass"

    def test_zero_pair(self):
        v = verify_t2_3(ZERO, ZERO, H_LINEAR, 1.0, None, 0.0, 1.0)
        assert v.lhs == 0.0 and v.rhs == 0.0
        assert v.status == "pass"

    def test_orientation(self):
        with pytest.raises(OrientationError):
            verify_t2_3(IDENT, IDENT, H_LINEAR, 1.0, None, 1.0, 0.5)


class TestBackground:
    def test_classic_two_sided(self):
        v = verify_background("HC", SQUARE, a=0.0, b=1.0)
        assert v.lhs == 0.25
        assert v.mean == pytest.approx(1 / 3, abs=1e-10)
        assert v.rhs == 0.5
        assert v.margin_lower == pytest.approx(1 / 12, abs=1e-10)
        assert v.margin_upper == pytest.approx(1 / 6, abs=1e-10)
        assert v.margin == min(v.margin_lower, v.margin_upper)
        assert v.quad_err <= 1e-10
        assert v.status == "pass"

    def test_weighted_two_sided_reduces_to_classic(self):
        v = verify_background("T1_9", SQUARE, h=H_LINEAR, a=0.0, b=1.0)
        assert v.lhs == pytest.approx(0.25, abs=1e-12)  # f(1/2) / (2 h(1/2))
        assert v.rhs == pytest.approx(0.5, abs=1e-10)
        assert v.mean == pytest.approx(1 / 3, abs=1e-10)
        assert v.status == "pass"

    def test_vanishing_half_weight_is_an_error(self):
        h = func_from_expr("(2*t-1)^2", "t", (0.0, 1.0))
        with pytest.raises(ValueError):
            verify_background("T1_9", SQUARE, h=h, a=0.0, b=1.0)

    def test_two_average_bound(self):
        # f = id, h = t, m = 1/2 on [0, 1]:
        # lhs = (2/3) [ 2*int_0^.5 u du + int_0^1 u du ] = 0.5, rhs = 0.5
        v = verify_background("T1_11", IDENT, h=H_LINEAR, m=0.5, a=0.0, b=1.0)
        assert v.lhs == pytest.approx(0.5, abs=1e-9)
        assert v.rhs == pytest.approx(0.5, abs=1e-12)
        assert v.status == "pass"

    def test_two_average_preconditions(self):
        with pytest.raises(OrientationError):
            verify_background("T1_11", IDENT, h=H_LINEAR, m=0.5, a=0.6, b=1.0)
        with pytest.raises(OrientationError):
            verify_background("T1_11", IDENT, h=H_LINEAR, m=0.5, a=-0.1, b=1.0)

    def test_deformed_product_bound(self):
        v = verify_background("T1_13", IDENT, h=H_LINEAR, a=0.0, b=1.0)
        assert v.lhs == pytest.approx(1 / 6, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 6, abs=1e-9)
        assert v.status == "pass"
        assert any("bound to the interval ends" in note for note in v.notes)

    def test_deformed_product_pair_bound(self):
        v = verify_background("T1_14", IDENT, g=IDENT, h=H_LINEAR, a=0.0, b=1.0)
        assert v.lhs == pytest.approx(1 / 3, abs=1e-9)
        assert v.rhs == pytest.approx(1 / 3, abs=1e-12)
        assert v.inputs["M"] == 1.0
        assert v.inputs["N"] == 0.0

    def test_missing_functions_are_rejected(self):
        with pytest.raises(ValueError):
            verify_background("T1_9", SQUARE, a=0.0, b=1.0)
        with pytest.raises(ValueError):
            verify_background("T1_14", SQUARE, h=H_LINEAR, a=0.0, b=1.0)
        with pytest.raises(ValueError):
            verify_background("T9_99", SQUARE, a=0.0, b=1.0)

    def test_orientation(self):
        with pytest.raises(OrientationError):
            verify_background("HC", SQUARE, a=1.0, b=1.0)


class TestAffineTightness:
    """With h(t) = t and unit modulus, every verifier is tight on
    nonnegative affine functions."""

    AFFINE = catalog("affine", (0.3, 0.7), (0.0, 1.0))

    def test_all_four_main_bounds(self):
        f = self.AFFINE
        g = catalog("affine", (0.1, 0.9), (0.0, 1.0))
        checks = [
            verify_t2_1(f, H_LINEAR, 1.0, None, 0.0, 1.0),
            verify_t2_2dot(f, H_LINEAR, 1.0, None, 0.0, 1.0),
            verify_t2_2(f, H_LINEAR, 1.0, None, 0.0, 1.0),
            verify_t2_3(f, g, H_LINEAR, 1.0, None, 0.0, 1.0),
        ]
        for v in checks:
            assert abs(v.margin) <= v.quad_err + 1e-9, v.theorem_id
            assert v.status == "pass"


class TestCertifiedImpliesPass:
    """Sampled class membership must never contradict a verifier."""

    @pytest.mark.parametrize(
        "f,h,m",
        [
            (SQUARE, H_LINEAR, 1.0),
            (SQUARE, H_ONE, 1.0),
            (SQUARE, H_LINEAR, 0.5),
            (IDENT, H_LINEAR, 0.7),
            (catalog("poly", (0.0, 1.0, 1.0), (0.0, 2.0)), H_LINEAR, 1.0),
        ],
    )
    def test_members_pass_every_applicable_bound(self, f, h, m):
        bound = f.domain[1]
        spec = class_spec(
            "phi_hm_convex", h=h, m=m,
            phi=catalog("identity", (), f.domain), bound=bound,
        )
        report = certify_sampled(f, spec, n=3_000, seed=0)
        assert report.certified
        x, y = 0.0, bound
        verdicts = [
            verify_t2_1(f, h, m, None, x, y),
            verify_t2_2dot(f, h, m, None, x, y),
            verify_t2_2(f, h, m, None, x, y),
            verify_t2_3(f, f, h, m, None, x, y),
        ]
        for v in verdicts:
            assert v.status == "pass", (v.theorem_id, v.margin)


class TestReductions:
    def _probes(self, pair):
        base = [
            dict(f=IDENT, h=H_LINEAR, x=0.0, y=1.0),
            dict(f=SQUARE, h=H_LINEAR, x=0.1, y=0.9),
            dict(f=SQUARE, h=H_SQUARE, x=0.0, y=1.0),
            dict(f=ROOT, h=H_ONE, x=0.25, y=1.0),
        ]
        if pair == "T2_3_vs_T1_14":
            return [dict(p, g=IDENT) for p in base]
        if pair == "T2_2_vs_T1_11":
            return [dict(p, m=m) for p, m in zip(base, (0.5, 0.8, 1.0, 0.6))]
        return base

    @pytest.mark.parametrize("pair", REDUCTION_PAIRS)
    def test_pairs_agree(self, pair):
        report = check_reduction(pair, self._probes(pair))
        assert report.passed
        assert report.max_dev_lhs <= report.max_allowance
        assert report.max_dev_rhs <= report.max_allowance

    def test_empty_probe_set_rejected(self):
        with pytest.raises(ValueError):
            check_reduction("T2_1_vs_T1_13", [])

    def test_unknown_pair_rejected(self):
        with pytest.raises(ValueError):
            check_reduction("T2_1_vs_T2_2", self._probes("T2_1_vs_T1_13"))

    def test_missing_g_rejected(self):
        with pytest.raises(ValueError):
            check_reduction("T2_3_vs_T1_14", [dict(f=IDENT, h=H_LINEAR, x=0.0, y=1.0)])

    def test_indeterminate_probe_fails_the_report(self):
        h_bad = catalog("recip_power", (1,), (0.0, 1.0))
        report = check_reduction(
            "T2_2dot_vs_T1_9", [dict(f=SQUARE, h=h_bad, x=0.0, y=1.0)]
        )
        assert report.indeterminate
        assert not report.passed

    def test_deformed_probe_agrees(self):
        phi = catalog("affine", (0.0, 0.5), (0.0, 1.0))
        probes = [dict(f=SQUARE, h=H_LINEAR, phi=phi, x=0.2, y=1.0)]
        report = check_reduction("T2_1_vs_T1_13", probes)
        assert report.passed
