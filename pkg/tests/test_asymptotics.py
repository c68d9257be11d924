import math

import numpy as np
import pytest
from scipy.special import lambertw as scipy_lambertw

from bellbound import BellQuery, DomainError, bell_dobinski
from bellbound.asymptotics import (
    bell_lambert_approx,
    bell_lambert_approx_corrected,
    debruijn_expansion,
    lambert_w,
)


class TestDebruijn:
    def test_at_e_to_e(self):
        p = math.e**math.e
        exp = debruijn_expansion(p)
        want = math.e - 2 + 2 / math.e + 1 / (2 * math.e**2)
        assert exp.total == pytest.approx(want, rel=1e-13)
        assert len(exp.partial_terms) == 6
        assert exp.total == pytest.approx(math.fsum(exp.partial_terms), abs=1e-15)

    def test_at_100(self):
        assert debruijn_expansion(100.0).total == pytest.approx(
            2.6817474980418807, rel=1e-12)

    def test_leading_term_dominates(self):
        for p in (20.0, 100.0, 300.0):
            exp = debruijn_expansion(p)
            assert all(abs(t) < exp.partial_terms[0]
                       for t in exp.partial_terms[1:])

    def test_domain_edge(self):
        with pytest.raises(DomainError):
            debruijn_expansion(math.e)

    def test_residual_decay(self):
        norm = []
        for p in (25.0, 50.0, 100.0, 200.0, 300.0):
            r = bell_dobinski(BellQuery(p, 1))
            resid = abs(r.log_value / p - debruijn_expansion(p).total)
            norm.append(resid * math.log(p) ** 2 / math.log(math.log(p)))
        assert norm == sorted(norm, reverse=True)


class TestLambertW:
    def test_fixed_points(self):
        assert lambert_w(0.0) == 0.0
        assert lambert_w(math.e) == pytest.approx(1.0, rel=1e-13)
        assert lambert_w(1.0) == pytest.approx(0.5671432904097838, rel=1e-12)

    def test_residual_on_log_grid(self):
        xs = [0.0] + np.logspace(-6, 6, 49).tolist()
        for x in xs:
            w = lambert_w(x)
            assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, x)

    def test_against_scipy(self):
        for x in np.logspace(-3, 5, 30):
            assert lambert_w(float(x)) == pytest.approx(
                float(scipy_lambertw(x).real), rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            lambert_w(-0.5)


class TestBellLambertApprox:
    def test_literal_value_p2(self):
        w = lambert_w(2.0)
        assert w == pytest.approx(0.8526055020137254, rel=1e-12)
        res = bell_lambert_approx(2.0)
        want = (1 / math.sqrt(2)) * (2 / w) * math.exp(2 / w - 3)
        assert res.value == pytest.approx(want, rel=1e-12)

    def test_ratio_measured_not_asserted(self):
        res = bell_lambert_approx(10.0)
        assert res.ratio_to_series is not None
        assert math.isfinite(res.ratio_to_series)

    def test_literal_ratio_trend_recorded(self):
        ratios = [bell_lambert_approx(float(p)).ratio_to_series
                  for p in (10, 20, 40, 80)]
        # diagnostic: the printed formula underestimates, increasingly so
        assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_corrected_variant_is_closer(self):
        for p in (10.0, 40.0, 80.0):
            lit = bell_lambert_approx(p).ratio_to_series
            cor = bell_lambert_approx_corrected(p).ratio_to_series
            assert abs(math.log(cor)) < abs(math.log(lit))
            assert 0.5 < cor < 2.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bell_lambert_approx(1.5)
