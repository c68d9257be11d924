"""Dobinski-series evaluation of the two-parameter Bell function.

B(p, beta) = e^{-beta} * sum_{k>=0} k^p beta^k / k!  is the p-th moment of
a Poisson(beta) variable.  The series is the ground-truth evaluator here;
an exact Stirling-number (Touchard) path serves as the independent oracle
for integer p.  Every value travels as a natural log and is exponentiated
only at the presentation layer: B(p, 1) already overflows double precision
near p ~ 170.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetError, DomainError

DEFAULT_P_MAX = 500.0
DEFAULT_TERM_BUDGET = 200_000
P_MAX_ENV = "BELLBOUND_PMAX"


def p_max_limit() -> float:
    """Largest exponent the series evaluator accepts (env-overridable)."""
    raw = os.environ.get(P_MAX_ENV)
    return float(raw) if raw else DEFAULT_P_MAX


class Regime(Enum):
    LARGE_P = "LargeP"
    LARGE_BETA = "LargeBeta"
    GAP = "Gap"


@dataclass(frozen=True)
class BellQuery:
    """A (p, beta) evaluation point.  p >= 0, beta > 0."""

    p: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 0):
            raise DomainError(f"p must be finite and >= 0, got {self.p!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta!r}")

    @property
    def ratio(self) -> float:
        return self.p / self.beta

    @property
    def regime(self) -> Regime:
        # Tie at p/beta == 2 resolves to LARGE_P.
        if self.p < 1:
            return Regime.GAP
        return Regime.LARGE_P if self.ratio >= 2.0 else Regime.LARGE_BETA


@dataclass(frozen=True)
class EvalResult:
    """A positive value in log-space with a truncation certificate.

    tail_bound_log is the log of a certified upper bound on the omitted
    tail *relative* to the returned value.
    """

    log_value: float
    terms_used: int
    tail_bound_log: float
    peak_index: int

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def root(self, p: float) -> float:
        """value**(1/p), the B^{1/p} scale."""
        return math.exp(self.log_value / p)


@lru_cache(maxsize=None)
def _log_factorial(k: int) -> float:
    # exactly rounded for small k (lgamma(3) is off log(2) by one ulp,
    # enough to break exact term ties); lgamma beyond the cached range
    if k <= 300:
        return math.log(math.factorial(k))
    return math.lgamma(k + 1)


def log_term(k: int, p: float, beta: float) -> float:
    """Natural log of the k-th Dobinski term e^{-beta} k^p beta^k / k!."""
    if k == 0:
        return -beta if p == 0 else -math.inf
    return p * math.log(k) + k * math.log(beta) - _log_factorial(k) - beta


def _log_term_ratio(k: int, p: float, beta: float) -> float:
    """log(t_{k+1}/t_k) = p*log(1 + 1/k) + log(beta) - log(k + 1).

    Strictly decreasing in k, which makes the terms unimodal and the
    post-peak geometric tail bound rigorous.
    """
    return p * math.log1p(1.0 / k) + math.log(beta) - math.log(k + 1)


def bell_dobinski(
    q: BellQuery,
    tol: float = 1e-12,
    *,
    term_budget: int = DEFAULT_TERM_BUDGET,
    p_max: float | None = None,
) -> EvalResult:
    """Evaluate log B(p, beta) with certified relative truncation error <= tol.

    Terms are summed from k = 1 upward in log-space behind a running-maximum
    exponent shift, with Kahan compensation of the shifted partial sums.
    Summation never stops before the series peak; past the peak the strictly
    decreasing term ratio r yields the tail majorant t_k * r / (1 - r).
    """
    if not (0.0 < tol <= 1e-3):
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol!r}")
    limit = p_max_limit() if p_max is None else p_max
    if q.p > limit:
        raise DomainError(f"p={q.p} exceeds p_max={limit}")

    p, beta = q.p, q.beta
    log_tol = math.log(tol)

    # Running-maximum shift m; s accumulates exp(log_t - m) with Kahan
    # compensation c.
    if p == 0:
        m = log_term(0, p, beta)
        s, c = 1.0, 0.0
    else:
        m = -math.inf
        s, c = 0.0, 0.0

    peak_index = 0
    k = 0
    while k < term_budget:
        k += 1
        lt = log_term(k, p, beta)
        if lt > m:
            if math.isfinite(m):
                scale = math.exp(m - lt)
                s *= scale
                c *= scale
            m = lt
        # Kahan step on the shifted term.
        y = math.exp(lt - m) - c
        t = s + y
        c = (t - s) - y
        s = t

        lr = _log_term_ratio(k, p, beta)
        if peak_index == 0 and lr < 0.0:
            peak_index = k
        if peak_index:
            r = math.exp(lr)
            log_sum = m + math.log(s)
            log_tail_rel = lt + lr - math.log1p(-r) - log_sum
            if log_tail_rel <= log_tol:
                return EvalResult(
                    log_value=log_sum,
                    terms_used=k,
                    tail_bound_log=log_tail_rel,
                    peak_index=peak_index,
                )
    raise BudgetError(
        f"series for (p={p}, beta={beta}) did not certify tol={tol} "
        f"within {term_budget} terms"
    )


@lru_cache(maxsize=None)
def stirling_second_row(p: int) -> tuple[int, ...]:
    """Row p of the Stirling-numbers-of-the-second-kind triangle, exact ints."""
    if p == 0:
        return (1,)
    prev = stirling_second_row(p - 1)
    row = [0] * (p + 1)
    for j in range(1, p + 1):
        row[j] = (prev[j - 1] if j - 1 <= p - 1 else 0) + (
            j * prev[j] if j <= p - 1 else 0
        )
    return tuple(row)


TOUCHARD_P_CAP = 30


def bell_touchard_exact(p: int, beta):
    """Independent oracle: B(p, beta) = sum_j S(p, j) beta^j for integer p.

    Exact (int or Fraction) when beta is exact; compensated float sum
    otherwise.  beta = 1 reproduces the classical Bell numbers.
    """
    if not isinstance(p, int) or p < 0:
        raise DomainError(f"p must be a non-negative integer, got {p!r}")
    if p > TOUCHARD_P_CAP:
        raise BudgetError(f"exact Touchard path capped at p={TOUCHARD_P_CAP}")
    row = stirling_second_row(p)
    if isinstance(beta, (int, Fraction)):
        acc = 0
        power = beta ** 0
        for j, s in enumerate(row):
            if j:
                power = power * beta
            acc += s * power
        return acc
    b = float(beta)
    if not (math.isfinite(b) and b > 0):
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    return math.fsum(s * b**j for j, s in enumerate(row))


def log_mgf_bound(q: BellQuery, lam: float) -> float:
    """log of the Chernoff-type upper bound on B^{1/p}:
    (p / (e * lam)) * exp(beta * (e^lam - 1) / p)."""
    if not (lam > 0):
        raise DomainError(f"lambda must be > 0, got {lam!r}")
    if q.p < 1:
        raise DomainError(f"MGF bound requires p >= 1, got p={q.p}")
    return math.log(q.p) - 1.0 - math.log(lam) + q.beta * math.expm1(lam) / q.p


def mgf_bound_at_lambda(q: BellQuery, lam: float) -> float:
    """Chernoff-type upper bound on B^{1/p}(p, beta), valid for every lam > 0."""
    try:
        return math.exp(log_mgf_bound(q, lam))
    except OverflowError:
        return math.inf


def log_stirling_zeta(x: float) -> float:
    """log of sqrt(2 pi x) (x/e)^x e^{1/(12x)}, a majorant of x! for x >= 1."""
    if not (x >= 1):
        raise DomainError(f"stirling_zeta requires x >= 1, got {x!r}")
    return 0.5 * math.log(2.0 * math.pi * x) + x * (math.log(x) - 1.0) + 1.0 / (12.0 * x)


def stirling_zeta(x: float) -> float:
    """Stirling factorial majorant: k! <= zeta(k) for every integer k >= 1."""
    return math.exp(log_stirling_zeta(x))
