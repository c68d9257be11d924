"""Bilateral non-asymptotic estimates of B^{1/p}(p, beta).

Upper side: the optimized Chernoff/MGF bound g_beta(p), its closed form in
the regime p >= 2*beta, the K+ * beta bound for p/beta <= 2, and a rough
triangle-inequality bound.  Lower side: the largest single Dobinski term
(integer search), its Stirling-smoothed continuous relaxation, the
closed-form term at k0, and the K- * beta candidate (flagged, never
asserted).  All objectives are evaluated in log-space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DomainError, OptimizerFailure
from .series import (
    BellQuery,
    Regime,
    bell_dobinski,
    log_mgf_bound,
    log_stirling_zeta,
    log_term,
    p_max_limit,
)

K_PLUS = math.exp((math.e**2 - 3.0) / 2.0)
K_MINUS_FORMULA = (2.0 * math.pi) ** -0.5 * math.exp(-1.0 / (2.0 * math.e) + 1.0 / 3.0)
K_MINUS_PAPER = 0.6538


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-12,
                       max_iter: int = 400) -> tuple[float, float]:
    """Derivative-free minimum of a unimodal f on [lo, hi].

    Returns (x_star, f(x_star)).  The interval shrinks by the inverse golden
    ratio each step; tol is an absolute width on x.
    """
    if not (hi > lo):
        raise OptimizerFailure(f"degenerate bracket [{lo}, {hi}]")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def _lambda_cap(q: BellQuery) -> float:
    # Keep beta * e^lambda within overflow-safe territory; the optimum
    # lambda* solves lambda * e^lambda = p/beta, so beta*e^{lambda*} = p/lambda*
    # and the cap is never binding at the minimum.
    return min(max(2.0, math.log1p(q.ratio) + 1.0),
               math.log(700.0 * (q.p + 1.0) / q.beta))


def upper_g_optimized(q: BellQuery, opt_tol: float = 1e-12) -> tuple[float, float]:
    """Optimized MGF upper bound on B^{1/p}: g_beta(p) = inf over lambda of
    the Chernoff bound.  Returns (bound, lambda_star).

    The log-objective is strictly convex in lambda, so golden-section on a
    bracket growing from near 0 to the cap locates the infimum.
    """
    if q.p < 1:
        raise DomainError(f"upper_g_optimized requires p >= 1, got p={q.p}")
    lam_hi = _lambda_cap(q)
    lam, phi = golden_section_min(lambda l: log_mgf_bound(q, l), 1e-9, lam_hi,
                                  tol=opt_tol)
    return math.exp(phi), lam


def _lambda0(q: BellQuery) -> float:
    r = q.ratio
    if r <= 1.0:
        raise DomainError(f"ln ln(p/beta) undefined for p/beta = {r} <= 1")
    return math.log(r) - math.log(math.log(r))


def upper_closed_form_largep(q: BellQuery) -> float:
    """Closed-form upper bound on B^{1/p} for p >= 2*beta:
    [p/e / (ln(p/b) - lnln(p/b))] * exp{1/ln(p/b) - 1/(p/b)}.

    Equals the MGF bound at lambda0 = ln(p/b) - lnln(p/b) exactly.
    """
    if q.p < 1:
        raise DomainError(f"requires p >= 1, got p={q.p}")
    if q.ratio < 2.0:
        raise DomainError(f"regime p >= 2*beta violated: p/beta = {q.ratio}")
    lam0 = _lambda0(q)
    if lam0 <= 0:
        raise DomainError(f"lambda0 = {lam0} <= 0")
    r = q.ratio
    return (q.p / math.e) / lam0 * math.exp(1.0 / math.log(r) - 1.0 / r)


@dataclass(frozen=True)
class H0Result:
    """Largest single Dobinski term: a rigorous lower bound on B(p, beta)."""

    log_bound_on_b: float
    k_star: int
    p: float

    @property
    def bound_on_b(self) -> float:
        return math.exp(self.log_bound_on_b)

    @property
    def root_bound(self) -> float:
        """h0^{1/p}, the lower estimate on the B^{1/p} scale."""
        return math.exp(self.log_bound_on_b / self.p)


def lower_h0_search(q: BellQuery, k_budget: int = 10_000_000) -> H0Result:
    """Max over integer k >= 1 of the Dobinski term e^{-b} k^p b^k / k!.

    Terms are unimodal in k (strictly decreasing ratio), so the scan stops
    at the first descent.
    """
    if q.p <= 0:
        raise DomainError(f"lower_h0_search requires p > 0, got p={q.p}")
    k = 1
    cur = log_term(1, q.p, q.beta)
    while k < k_budget:
        nxt = log_term(k + 1, q.p, q.beta)
        if nxt <= cur:
            # at most one tie can occur (strictly decreasing ratio); the
            # earlier index of a tied pair is reported
            break
        k, cur = k + 1, nxt
    return H0Result(log_bound_on_b=cur, k_star=k, p=q.p)


def lower_h_continuous(q: BellQuery, opt_tol: float = 1e-12) -> tuple[float, float]:
    """Stirling-smoothed single-term lower bound on B^{1/p}:
    sup over real x >= 1 of [e^{-b} x^p b^x / zeta(x)]^{1/p}.

    zeta(x) >= x! makes each smoothed term at integer x no larger than the
    true term, so the sup stays below B^{1/p}.  Returns (bound, x_star).
    """
    if q.p <= 0:
        raise DomainError(f"lower_h_continuous requires p > 0, got p={q.p}")
    p, beta = q.p, q.beta

    def neg_log_term(x: float) -> float:
        return -(p * math.log(x) + x * math.log(beta) - log_stirling_zeta(x) - beta)

    # Objective is strictly concave on [1, inf); grow the bracket until the
    # right end is past the peak.
    hi = 4.0
    while -neg_log_term(hi) > -neg_log_term(hi / 2.0):
        hi *= 2.0
        if hi > 1e9:
            raise OptimizerFailure("could not bracket the smoothed-term peak")
    x_star, neg = golden_section_min(neg_log_term, 1.0, hi, tol=opt_tol)
    return math.exp(-neg / p), x_star


def k0_selector(q: BellQuery) -> int:
    """Integer seed floor(p / ln(p*e/beta)) + 1 for the single-term lower bound."""
    if q.p < 1:
        raise DomainError(f"k0_selector requires p >= 1, got p={q.p}")
    arg = math.log(q.p * math.e / q.beta)
    if arg <= 0:
        raise DomainError(f"ln(p*e/beta) = {arg} <= 0")
    return int(math.floor(q.p / arg)) + 1


def lower_closed_form_largep(q: BellQuery) -> float:
    """Single Dobinski term at k0, on the B^{1/p} scale; rigorous lower
    bound for p/beta >= 2."""
    if q.ratio < 2.0:
        raise DomainError(f"regime p/beta >= 2 violated: p/beta = {q.ratio}")
    k0 = k0_selector(q)
    return math.exp(log_term(k0, q.p, q.beta) / q.p)


def regime_upper_largebeta(q: BellQuery) -> float:
    """K+ * beta with K+ = exp((e^2 - 3)/2), valid for p >= 1, p/beta <= 2."""
    if q.p < 1:
        raise DomainError(f"requires p >= 1, got p={q.p}")
    if q.ratio > 2.0:
        raise DomainError(f"regime p/beta <= 2 violated: p/beta = {q.ratio}")
    return K_PLUS * q.beta


@dataclass(frozen=True)
class KMinusBound:
    """The K- * beta lower-bound candidate.  Never asserted: `holds` records
    the per-query series check (None when the series is out of reach)."""

    value: float
    constant: float
    constant_label: str  # "formula" or "paper"
    holds: bool | None


def regime_lower_largebeta(q: BellQuery, use_paper_constant: bool = False,
                           series_root: float | None = None) -> KMinusBound:
    """K- * beta candidate lower bound for p >= 1, p/beta <= 2.

    The default constant is the auditable formula value
    (2 pi)^{-1/2} exp(-1/(2e) + 1/3) ~ 0.4632; the printed 0.6538 is kept
    behind the flag.  The result is checked against the series per query.
    """
    if q.p < 1:
        raise DomainError(f"requires p >= 1, got p={q.p}")
    if q.ratio > 2.0:
        raise DomainError(f"regime p/beta <= 2 violated: p/beta = {q.ratio}")
    if use_paper_constant:
        const, label = K_MINUS_PAPER, "paper"
    else:
        const, label = K_MINUS_FORMULA, "formula"
    value = const * q.beta
    holds: bool | None = None
    if series_root is None and q.p <= p_max_limit():
        series_root = bell_dobinski(q).root(q.p)
    if series_root is not None:
        holds = value <= series_root * (1.0 + 1e-9)
    return KMinusBound(value=value, constant=const, constant_label=label,
                       holds=holds)


@lru_cache(maxsize=8)
def fitted_rough_constant(p_lo: float = 2.0, p_hi: float = 200.0,
                          n: int = 40) -> float:
    """Empirical constant for the rough triangle bound, fitted at beta = 1.

    Maximizes (B^{1/p} e ln p / p - 1) * ln p / lnln p over a log grid of p,
    restricted to lnln p > 0 (the normalization flips sign below p = e and
    diverges at p = e).
    """
    best = 0.0
    for i in range(n):
        p = p_lo * (p_hi / p_lo) ** (i / (n - 1))
        lnp = math.log(p)
        lnlnp = math.log(lnp) if lnp > 1e-300 else -math.inf
        if lnlnp <= 0:
            continue
        root = bell_dobinski(BellQuery(p, 1.0)).root(p)
        need = (root * math.e * lnp / p - 1.0) * lnp / lnlnp
        best = max(best, need)
    return best


def rough_upper_triangle(q: BellQuery, c3: float | None = None) -> float:
    """Triangle-inequality upper bound on B^{1/p}:
    ceil(beta) * (p / (e ln p)) * (1 + c3 * lnln p / ln p).

    Valid whenever c3 >= the beta = 1 fitted constant and lnln p > 0; for
    fractional beta the ceiling keeps the sum-of-norms argument applicable.
    """
    if q.p < 2:
        raise DomainError(f"requires p >= 2, got p={q.p}")
    if q.beta < 1:
        raise DomainError(f"requires beta >= 1, got beta={q.beta}")
    if c3 is None:
        c3 = fitted_rough_constant()
    if not (c3 > 0):
        raise DomainError(f"c3 must be > 0, got {c3!r}")
    lnp = math.log(q.p)
    return math.ceil(q.beta) * (q.p / (math.e * lnp)) * (
        1.0 + c3 * math.log(lnp) / lnp
    )


@dataclass(frozen=True)
class BoundReport:
    """Matched lower/upper estimates of B^{1/p}(p, beta)."""

    query: BellQuery
    regime: Regime
    lower: float
    lower_method: str
    upper: float
    upper_method: str
    witness: dict = field(default_factory=dict)
    series_root: float | None = None
    kminus: KMinusBound | None = None
    errors: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "p": self.query.p,
            "beta": self.query.beta,
            "regime": self.regime.value,
            "lower": self.lower,
            "lower_method": self.lower_method,
            "upper": self.upper,
            "upper_method": self.upper_method,
            "witness": self.witness,
            "series_check": self.series_root,
            "kminus": None if self.kminus is None else {
                "value": self.kminus.value,
                "constant": self.kminus.constant,
                "constant_label": self.kminus.constant_label,
                "holds": self.kminus.holds,
            },
            "errors": list(self.errors),
        }


def bound_report(q: BellQuery, opt_tol: float = 1e-12,
                 series_tol: float = 1e-12) -> BoundReport:
    """Evaluate the regime's bound pair for q and cross-check against the
    series when p <= p_max.

    LargeP: upper is the tighter of the optimized MGF bound and the closed
    form; lower is the best of the integer-term search, the continuous
    relaxation, and the k0 term.  LargeBeta: upper is K+ * beta, lower the
    best single-term estimate; the K- candidate rides along with its flag.
    """
    if q.p < 1:
        raise DomainError(f"bound_report requires p >= 1, got p={q.p}")
    regime = q.regime
    errors: list[str] = []
    witness: dict = {}

    series_root = None
    if q.p <= p_max_limit():
        try:
            series_root = bell_dobinski(q, tol=series_tol).root(q.p)
        except Exception as exc:  # pragma: no cover - budget edge
            errors.append(f"series: {exc}")

    # Lower candidates.
    lower_cands: list[tuple[float, str]] = []
    try:
        h0 = lower_h0_search(q)
        lower_cands.append((h0.root_bound, "H0Search"))
        witness["k_star"] = h0.k_star
    except Exception as exc:
        errors.append(f"H0Search: {exc}")
    try:
        hval, x_star = lower_h_continuous(q, opt_tol)
        lower_cands.append((hval, "HContinuous"))
        witness["x_star"] = x_star
    except Exception as exc:
        errors.append(f"HContinuous: {exc}")
    if regime is Regime.LARGE_P:
        try:
            lower_cands.append((lower_closed_form_largep(q), "ClosedFormLargeP"))
        except Exception as exc:
            errors.append(f"ClosedFormLargeP: {exc}")

    # Upper candidates.
    upper_cands: list[tuple[float, str]] = []
    kminus = None
    if regime is Regime.LARGE_P:
        try:
            g, lam = upper_g_optimized(q, opt_tol)
            upper_cands.append((g, "GOptimized"))
            witness["lambda_star"] = lam
        except Exception as exc:
            errors.append(f"GOptimized: {exc}")
        try:
            upper_cands.append((upper_closed_form_largep(q), "ClosedFormLargeP"))
        except Exception as exc:
            errors.append(f"ClosedFormLargeP(upper): {exc}")
    else:
        try:
            upper_cands.append((regime_upper_largebeta(q), "KPlusLargeBeta"))
        except Exception as exc:
            errors.append(f"KPlusLargeBeta: {exc}")
        try:
            kminus = regime_lower_largebeta(q, series_root=series_root)
        except Exception as exc:
            errors.append(f"KMinusLargeBeta: {exc}")

    lower, lower_method = max(lower_cands, default=(math.nan, "none"))
    upper, upper_method = min(upper_cands, default=(math.nan, "none"))
    return BoundReport(
        query=q,
        regime=regime,
        lower=lower,
        lower_method=lower_method,
        upper=upper,
        upper_method=upper_method,
        witness=witness,
        series_root=series_root,
        kminus=kminus,
        errors=tuple(errors),
    )
