"""Moment inequalities for sums of non-negative independent variables.

The Rosenthal-type bound E(sum eta_j)^p <= B(p) * max{sum E eta_j^p,
(sum E eta_j)^p}, Schechtman's exact extremal value over the class of
sequences with prescribed moment sums, and the brute-force oracles
(exact enumeration, Monte Carlo) that validate both on small instances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, DomainError
from .series import BellQuery, bell_dobinski

ENUM_BUDGET = 1_000_000
MAX_ATOMS_FOR_ENUM = 8


@dataclass(frozen=True)
class DiscreteDist:
    """Finite-support non-negative distribution: ((value, prob), ...)."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise DomainError("distribution needs at least one atom")
        total = math.fsum(pr for _, pr in self.atoms)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {total}, not 1")
        for v, pr in self.atoms:
            if v < 0:
                raise DomainError(f"negative atom value {v}")
            if not (0.0 < pr <= 1.0):
                raise DomainError(f"atom probability {pr} outside (0, 1]")

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms])

    @property
    def probs(self) -> np.ndarray:
        return np.array([pr for _, pr in self.atoms])

    def mean(self) -> float:
        return math.fsum(v * pr for v, pr in self.atoms)

    def moment(self, p: float) -> float:
        return math.fsum(v**p * pr for v, pr in self.atoms)

    def scaled(self, c: float) -> "DiscreteDist":
        return DiscreteDist(tuple((c * v, pr) for v, pr in self.atoms))


@dataclass(frozen=True)
class ExtremalProblem:
    """Prescribed sum of means a, sum of p-th moments b, exponent p > 1."""

    a: float
    b: float
    p: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"a, b must be > 0, got a={self.a}, b={self.b}")
        if not (self.p > 1):
            raise DomainError(f"p must be > 1, got {self.p}")

    @property
    def mu(self) -> float:
        """a^{p/(p-1)} * b^{1/(1-p)}, the Poisson intensity of the extremal
        configuration."""
        e = 1.0 / (self.p - 1.0)
        return math.exp(self.p * e * math.log(self.a) - e * math.log(self.b))


@dataclass(frozen=True)
class SumMomentResult:
    """E(sum eta_j)^p computed by an oracle."""

    value: float
    method: str  # "Enumeration" or "MonteCarlo"
    n: int
    stderr: float | None = None


def rosenthal_bound(p: float, sum_p_moments: float, sum_means: float,
                    beta_override: float | None = None) -> float:
    """B(p) * max{sum_j E eta_j^p, (sum_j E eta_j)^p}: an upper bound on
    E(sum eta_j)^p for any non-negative independent sequence, p >= 2."""
    if p < 2:
        raise DomainError(f"rosenthal_bound requires p >= 2, got {p}")
    if not (sum_p_moments > 0 and math.isfinite(sum_p_moments)):
        raise DomainError(f"sum_p_moments must be positive finite, got {sum_p_moments}")
    if not (sum_means > 0 and math.isfinite(sum_means)):
        raise DomainError(f"sum_means must be positive finite, got {sum_means}")
    beta = 1.0 if beta_override is None else beta_override
    log_b = bell_dobinski(BellQuery(p, beta)).log_value
    return math.exp(log_b + max(math.log(sum_p_moments), p * math.log(sum_means)))


def schechtman_extremal(prob: ExtremalProblem) -> float:
    """(b/a)^{p/(p-1)} * B(p, mu): the exact supremum of E(sum eta_j)^p over
    sequences with sum of means a and sum of p-th moments b (sup over n too)."""
    mu = prob.mu
    log_b = bell_dobinski(BellQuery(prob.p, mu)).log_value
    log_prefactor = prob.p / (prob.p - 1.0) * (math.log(prob.b) - math.log(prob.a))
    return math.exp(log_prefactor + log_b)


def exact_sum_moment(dists: list[DiscreteDist], p: float) -> SumMomentResult:
    """Enumerate all outcome tuples of the independent summands and
    accumulate prob * (sum of values)^p exactly (to float precision)."""
    if p <= 0:
        raise DomainError(f"p must be > 0, got {p}")
    states = 1
    for d in dists:
        if len(d.atoms) > MAX_ATOMS_FOR_ENUM:
            raise BudgetError(f"distribution has {len(d.atoms)} atoms, "
                              f"cap is {MAX_ATOMS_FOR_ENUM}")
        states *= len(d.atoms)
        if states > ENUM_BUDGET:
            raise BudgetError(f"enumeration exceeds {ENUM_BUDGET} states")
    sums = np.zeros(1)
    probs = np.ones(1)
    for d in dists:
        sums = (sums[:, None] + d.values[None, :]).ravel()
        probs = (probs[:, None] * d.probs[None, :]).ravel()
    value = float(np.dot(probs, sums**p))
    return SumMomentResult(value=value, method="Enumeration", n=len(dists))


def mc_sum_moment(dists: list[DiscreteDist], p: float, samples: int,
                  seed: int) -> SumMomentResult:
    """Seeded Monte Carlo estimate of E(sum eta_j)^p with a standard error.

    Uses the counter-based Philox generator so results are reproducible
    and safely parallelizable by seed."""
    if samples < 10_000:
        raise DomainError(f"samples must be >= 10^4, got {samples}")
    if p <= 0:
        raise DomainError(f"p must be > 0, got {p}")
    rng = np.random.Generator(np.random.Philox(seed))
    totals = np.zeros(samples)
    for d in dists:
        totals += rng.choice(d.values, size=samples, p=d.probs)
    powered = totals**p
    value = float(powered.mean())
    stderr = float(powered.std(ddof=1) / math.sqrt(samples))
    return SumMomentResult(value=value, method="MonteCarlo", n=len(dists),
                           stderr=stderr)


def random_family(rng: np.random.Generator, n_max: int,
                  state_budget: int = 100_000) -> list[DiscreteDist]:
    """Random small family for the verifier: 2-4 atoms each, values
    log-uniform in [1e-2, 1e2], Dirichlet probabilities.  The number of
    summands is truncated to keep the enumeration within budget."""
    n = int(rng.integers(1, n_max + 1))
    dists: list[DiscreteDist] = []
    states = 1
    for _ in range(n):
        k = int(rng.integers(2, 5))
        if states * k > state_budget:
            break
        states *= k
        values = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), size=k))
        probs = rng.dirichlet(np.ones(k))
        probs = probs / probs.sum()
        dists.append(DiscreteDist(tuple(zip(values.tolist(), probs.tolist()))))
    if not dists:
        raise AssertionError("state budget too small for a single summand")
    return dists


@dataclass(frozen=True)
class Violation:
    trial: int
    inequality: str  # "rosenthal" or "schechtman"
    exact: float
    bound: float


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    violations: tuple[Violation, ...]
    max_rosenthal_ratio: float
    max_schechtman_ratio: float

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_inequalities(trials: int, seed: int, p_set=(2.0, 3.0, 4.0),
                        n_max: int = 12,
                        rel_slack: float = 1e-9) -> VerificationReport:
    """Check the Rosenthal-type bound and the Schechtman extremal value on
    random enumerable instances; reports violations beyond rel_slack."""
    if n_max > 12:
        raise DomainError(f"n_max capped at 12, got {n_max}")
    rng = np.random.Generator(np.random.Philox(seed))
    violations: list[Violation] = []
    max_r = 0.0
    max_s = 0.0
    for trial in range(trials):
        dists = random_family(rng, n_max)
        p = float(p_set[int(rng.integers(0, len(p_set)))])
        exact = exact_sum_moment(dists, p).value
        a = math.fsum(d.mean() for d in dists)
        b = math.fsum(d.moment(p) for d in dists)
        r_bound = rosenthal_bound(p, b, a)
        s_bound = schechtman_extremal(ExtremalProblem(a=a, b=b, p=p))
        if exact > r_bound * (1.0 + rel_slack):
            violations.append(Violation(trial, "rosenthal", exact, r_bound))
        if exact > s_bound * (1.0 + rel_slack):
            violations.append(Violation(trial, "schechtman", exact, s_bound))
        max_r = max(max_r, exact / r_bound)
        max_s = max(max_s, exact / s_bound)
    return VerificationReport(trials=trials, violations=tuple(violations),
                              max_rosenthal_ratio=max_r,
                              max_schechtman_ratio=max_s)


def parse_instance_line(line: str) -> DiscreteDist:
    """Parse one `v1:p1,v2:p2,...` distribution line."""
    atoms = []
    for chunk in line.strip().split(","):
        if not chunk:
            continue
        v_str, _, p_str = chunk.partition(":")
        atoms.append((float(v_str), float(p_str)))
    return DiscreteDist(tuple(atoms))


def load_instances(path: str) -> list[DiscreteDist]:
    """Read a line-oriented instance file, one distribution per line;
    blank lines and #-comments are skipped."""
    dists = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            dists.append(parse_instance_line(line))
    return dists
