import math

import pytest

from bellbound import BellQuery, DomainError, bell_dobinski, mgf_bound_at_lambda
from bellbound.bounds import (
    K_MINUS_FORMULA,
    K_MINUS_PAPER,
    K_PLUS,
    bound_report,
    fitted_rough_constant,
    golden_section_min,
    k0_selector,
    lower_closed_form_largep,
    lower_h0_search,
    lower_h_continuous,
    regime_lower_largebeta,
    regime_upper_largebeta,
    rough_upper_triangle,
    upper_closed_form_largep,
    upper_g_optimized,
)
from bellbound.series import Regime, log_term


def series_root(p, beta):
    return bell_dobinski(BellQuery(p, beta)).root(p)


class TestGoldenSection:
    def test_quadratic(self):
        # x-accuracy is limited to ~sqrt(eps) once f differences drown in
        # rounding noise; the minimum value itself is found to full precision
        x, fx = golden_section_min(lambda x: (x - 1.7) ** 2 + 3, 0, 5)
        assert x == pytest.approx(1.7, abs=1e-6)
        assert fx == pytest.approx(3.0, abs=1e-12)


class TestUpperGOptimized:
    def test_dominated_by_lambda0(self):
        for p, beta in [(10, 1), (50, 3), (4, 2)]:
            q = BellQuery(p, beta)
            lam0 = math.log(p / beta) - math.log(math.log(p / beta))
            g, _ = upper_g_optimized(q)
            assert g <= mgf_bound_at_lambda(q, lam0) * (1 + 1e-9)

    def test_sandwich_10_1(self):
        g, _ = upper_g_optimized(BellQuery(10, 1))
        assert 3.2094 <= g <= 3.4995
        assert g >= series_root(10, 1)

    def test_above_series_2_1(self):
        # B(2, 1) = 2, so the bound must clear sqrt(2)
        g, _ = upper_g_optimized(BellQuery(2, 1))
        assert g >= math.sqrt(2)
        assert g >= series_root(2, 1)

    def test_witness_stationarity(self):
        # interior optimum solves lambda * e^lambda = p / beta
        for p, beta in [(10, 1), (2, 10), (100, 0.3)]:
            _, lam = upper_g_optimized(BellQuery(p, beta))
            resid = abs(lam * math.exp(lam) * beta / p - 1.0)
            assert resid <= 1e-6


class TestUpperClosedForm:
    def test_point_10_1(self):
        val = upper_closed_form_largep(BellQuery(10, 1))
        assert val == pytest.approx(3.4994375392405255, rel=1e-12)
        assert val >= series_root(10, 1)

    def test_equals_mgf_at_lambda0(self):
        for p, beta in [(10, 1), (30, 5), (2, 1)]:
            q = BellQuery(p, beta)
            lam0 = math.log(p / beta) - math.log(math.log(p / beta))
            assert upper_closed_form_largep(q) == pytest.approx(
                mgf_bound_at_lambda(q, lam0), rel=1e-12)

    def test_ratio_at_100(self):
        val = upper_closed_form_largep(BellQuery(100, 1))
        root = series_root(100, 1)
        assert val >= root
        assert val / root < 1.25

    def test_regime_error(self):
        with pytest.raises(DomainError):
            upper_closed_form_largep(BellQuery(3, 2))


class TestLowerH0:
    def test_point_10_1(self):
        res = lower_h0_search(BellQuery(10, 1))
        assert res.k_star == 6
        assert res.bound_on_b == pytest.approx(
            math.exp(-1) * 6**10 / math.factorial(6), rel=1e-12)

    def test_point_1_1(self):
        res = lower_h0_search(BellQuery(1, 1))
        assert res.k_star == 1
        assert res.bound_on_b == pytest.approx(math.exp(-1), rel=1e-12)

    def test_below_series(self):
        for p, beta in [(10, 1), (2, 10), (33, 0.4)]:
            res = lower_h0_search(BellQuery(p, beta))
            log_b = bell_dobinski(BellQuery(p, beta)).log_value
            assert res.log_bound_on_b <= log_b + 1e-12

    def test_witness_is_argmax(self):
        for p, beta in [(10, 1), (2, 10), (77, 13)]:
            res = lower_h0_search(BellQuery(p, beta))
            k = res.k_star
            here = log_term(k, p, beta)
            assert here >= log_term(k + 1, p, beta)
            if k > 1:
                assert here >= log_term(k - 1, p, beta)


class TestLowerHContinuous:
    def test_below_series_root(self):
        for p, beta in [(10, 1), (2, 1), (2, 10), (60, 7)]:
            val, _ = lower_h_continuous(BellQuery(p, beta))
            assert val <= series_root(p, beta) * (1 + 1e-9)

    def test_near_h0(self):
        val, _ = lower_h_continuous(BellQuery(10, 1))
        h0 = lower_h0_search(BellQuery(10, 1)).bound_on_b
        assert 0.9 * h0 <= val**10 <= 1.2 * h0
        assert val**10 <= 115975.0

    def test_smoothed_term_below_exact_term(self):
        # zeta(k) >= k! makes the smoothed term at the rounded argmax no
        # larger than the exact Dobinski term there.
        for p, beta in [(10, 1), (25, 2)]:
            val, x_star = lower_h_continuous(BellQuery(p, beta))
            k = max(1, round(x_star))
            assert p * math.log(val) <= log_term(k, p, beta) + 0.5


class TestK0AndClosedFormLower:
    def test_k0_values(self):
        assert k0_selector(BellQuery(10, 1)) == 4
        assert k0_selector(BellQuery(100, 1)) == 18

    def test_closed_form_point(self):
        val = lower_closed_form_largep(BellQuery(10, 1))
        assert val == pytest.approx(
            (math.exp(-1) * 4**10 / 24) ** 0.1, rel=1e-12)

    def test_dominated_by_h0(self):
        for p, beta in [(10, 1), (100, 1), (40, 6)]:
            q = BellQuery(p, beta)
            assert lower_closed_form_largep(q) <= (
                lower_h0_search(q).root_bound * (1 + 1e-12))

    def test_regime_error(self):
        with pytest.raises(DomainError):
            lower_closed_form_largep(BellQuery(3, 2))


class TestRegimeLargeBeta:
    def test_constants(self):
        assert 8.975 <= K_PLUS <= 8.976
        assert K_PLUS == pytest.approx(math.exp((math.e**2 - 3) / 2), rel=1e-15)
        assert K_MINUS_FORMULA == pytest.approx(0.46322382403840295, rel=1e-12)
        assert K_MINUS_PAPER == 0.6538

    def test_upper_point(self):
        assert regime_upper_largebeta(BellQuery(2, 10)) == pytest.approx(
            89.7576394045, rel=1e-9)
        assert series_root(2, 10) == pytest.approx(math.sqrt(110), rel=1e-10)

    def test_kplus_identity_at_boundary(self):
        # At p/beta = 2 the MGF bound at lambda = 2 collapses to K+ * beta.
        for p, beta in [(2, 1), (4, 2), (20, 10)]:
            q = BellQuery(p, beta)
            assert mgf_bound_at_lambda(q, 2.0) == pytest.approx(
                regime_upper_largebeta(q), rel=1e-12)

    def test_upper_regime_error(self):
        with pytest.raises(DomainError):
            regime_upper_largebeta(BellQuery(10, 1))

    def test_kminus_default_and_flag(self):
        km = regime_lower_largebeta(BellQuery(2, 10))
        assert km.constant_label == "formula"
        assert km.value == pytest.approx(K_MINUS_FORMULA * 10, rel=1e-12)
        assert km.holds is True
        km_paper = regime_lower_largebeta(BellQuery(2, 10),
                                          use_paper_constant=True)
        assert km_paper.constant_label == "paper"
        assert km_paper.value == pytest.approx(6.538, rel=1e-12)
        assert km_paper.holds is True


class TestRoughTriangle:
    def test_fitted_constant_covers_examples(self):
        c3 = fitted_rough_constant()
        assert c3 > 0
        assert rough_upper_triangle(BellQuery(10, 1), c3) >= series_root(10, 1)
        assert rough_upper_triangle(BellQuery(10, 3), c3) >= series_root(10, 3)

    def test_integer_beta_scaling(self):
        one = rough_upper_triangle(BellQuery(10, 1))
        assert rough_upper_triangle(BellQuery(10, 3)) == pytest.approx(
            3 * one, rel=1e-14)

    def test_preconditions(self):
        with pytest.raises(DomainError):
            rough_upper_triangle(BellQuery(1.5, 1))
        with pytest.raises(DomainError):
            rough_upper_triangle(BellQuery(5, 0.5))


class TestBoundReport:
    def test_largep_report(self):
        rep = bound_report(BellQuery(10, 1))
        assert rep.regime is Regime.LARGE_P
        assert rep.upper_method == "GOptimized"
        assert rep.lower <= 3.2095 <= rep.upper
        assert rep.lower <= rep.upper
        assert rep.series_root == pytest.approx(3.2094930392192045, rel=1e-10)

    def test_largebeta_report(self):
        rep = bound_report(BellQuery(2, 10))
        assert rep.regime is Regime.LARGE_BETA
        assert rep.upper == pytest.approx(89.7576394045, rel=1e-9)
        assert rep.upper_method == "KPlusLargeBeta"
        assert rep.lower <= math.sqrt(110) <= rep.upper
        assert rep.kminus is not None and rep.kminus.holds is True

    def test_boundary_tie(self):
        assert bound_report(BellQuery(2, 1)).regime is Regime.LARGE_P

    def test_requires_p_ge_1(self):
        with pytest.raises(DomainError):
            bound_report(BellQuery(0.5, 1))


class TestRatioConvergence:
    def test_doubling_grid_trend(self):
        # normalized deviation from p/(e ln(p/beta)) on p = 2^j, beta = 1:
        # bounded, and non-increasing over the last decade of the grid
        devs = []
        for j in range(2, 9):
            p = float(2**j)
            root = series_root(p, 1)
            ref = p / (math.e * math.log(p))
            devs.append(abs(root - ref) / ref * math.log(p)
                        / math.log(math.log(p)))
        assert all(math.isfinite(d) for d in devs)
        tail = devs[-4:]
        assert all(a >= b for a, b in zip(tail, tail[1:]))
