"""Asymptotic approximations of the one-parameter Bell function B(p).

The six-term logarithmic expansion of ln B(p)/p (de Bruijn) and a
Lambert-W closed-form approximation of B(p).  Both are measured against
the series, never assumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetError, DomainError
from .series import BellQuery, bell_dobinski, p_max_limit


@dataclass(frozen=True)
class ExpansionValue:
    """The six expansion terms of ln B(p)/p, in order, and their sum."""

    p: float
    partial_terms: tuple[float, ...]
    total: float


def debruijn_expansion(p: float) -> ExpansionValue:
    """ln p - lnln p - 1 + lnln p/ln p + 1/ln p + (lnln p/ln p)^2 / 2,
    term by term.  Requires p > e so lnln p is defined."""
    if not (p > math.e):
        raise DomainError(f"debruijn_expansion requires p > e, got {p!r}")
    lp = math.log(p)
    llp = math.log(lp)
    terms = (lp, -llp, -1.0, llp / lp, 1.0 / lp, 0.5 * (llp / lp) ** 2)
    return ExpansionValue(p=p, partial_terms=terms, total=math.fsum(terms))


def lambert_w(x: float, tol: float = 1e-13, max_iter: int = 60) -> float:
    """Principal-branch W(x) for x >= 0: the solution of w * e^w = x.

    Halley iteration with a residual-based stop; seeds: log1p(x) for x >= 1
    and the series start x*(1 - x) near 0.
    """
    if not (x >= 0 and math.isfinite(x)):
        raise DomainError(f"lambert_w requires finite x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    w = math.log1p(x) if x >= 1.0 else x * (1.0 - x)
    for _ in range(max_iter):
        ew = math.exp(w)
        resid = w * ew - x
        if abs(resid) <= tol * max(1.0, x):
            return w
        wp1 = w + 1.0
        w -= resid / (ew * wp1 - (w + 2.0) * resid / (2.0 * wp1))
    raise BudgetError(f"lambert_w failed to converge for x={x}")


@dataclass(frozen=True)
class LambertApprox:
    """A Lambert-W approximation of B(p) with its measured series ratio."""

    p: float
    log_value: float
    log_series: float | None
    ratio_to_series: float | None

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def _with_series_ratio(p: float, log_value: float,
                       compare: bool) -> LambertApprox:
    log_series = ratio = None
    if compare and p <= p_max_limit():
        log_series = bell_dobinski(BellQuery(p, 1.0)).log_value
        ratio = math.exp(log_value - log_series)
    return LambertApprox(p=p, log_value=log_value, log_series=log_series,
                         ratio_to_series=ratio)


def bell_lambert_approx(p: float, compare: bool = True) -> LambertApprox:
    """The literal approximation (1/sqrt(p)) * (p/W(p)) * exp(p/W(p) - p - 1).

    Kept as printed so its quality can be measured; see
    bell_lambert_approx_corrected for the classical exponent.
    """
    if not (p >= 2):
        raise DomainError(f"requires p >= 2, got {p!r}")
    w = lambert_w(p)
    pw = p / w
    log_value = -0.5 * math.log(p) + math.log(pw) + (pw - p - 1.0)
    return _with_series_ratio(p, log_value, compare)


def bell_lambert_approx_corrected(p: float, compare: bool = True) -> LambertApprox:
    """Variant with the classical exponent: (1/sqrt(p)) * (p/W(p))^{p + 1/2}
    * exp(p/W(p) - p - 1)."""
    if not (p >= 2):
        raise DomainError(f"requires p >= 2, got {p!r}")
    w = lambert_w(p)
    pw = p / w
    log_value = -0.5 * math.log(p) + (p + 0.5) * math.log(pw) + (pw - p - 1.0)
    return _with_series_ratio(p, log_value, compare)
