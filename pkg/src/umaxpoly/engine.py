"""Monte Carlo engines for the extremal-statistic experiments.

Three estimators: replicated normalized extremal statistics (to compare
against the limit laws), rare-event tail probabilities of a single random
m-gon (the tail lemmas), and overlap/exceedance quantities feeding the
Poisson-approximation bound.

Reproducibility contract: every replication (or fixed-size trial chunk)
owns a counter-based Philox stream keyed by (seed, index), so output is
bit-identical for a given seed regardless of thread count or scheduling.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from . import _jit
from .constants import inverse_transform, limit_law
from .analysis import wilson_ci
from .kernels import KernelKind, deficit_coefficient, extremal_value
from .search import SearchMethod
from ._jit import TWO_PI

#: Default ceiling on estimated kernel evaluations per call.
DEFAULT_BUDGET = 1e10

#: Auto method picks brute force below this many subsets per replication.
AUTO_BRUTE_LIMIT = 2_000_000

#: Trials are drawn and consumed in fixed-size chunks (seed, chunk) so the
#: stream partition never depends on threading.
TRIAL_CHUNK = 1 << 21

_U64 = np.uint64


class BudgetExceededError(RuntimeError):
    """Raised when an experiment would exceed the kernel-evaluation budget."""


def _stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index], dtype=_U64)
    return np.random.Generator(np.random.Philox(key=key))


@contextlib.contextmanager
def _thread_limit(threads: int | None):
    if threads is None:
        yield
        return
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    previous = numba.get_num_threads()
    numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    try:
        yield
    finally:
        numba.set_num_threads(previous)


@dataclass(frozen=True)
class ExperimentConfig:
    """One replicated U-max experiment."""

    kind: KernelKind
    m: int
    n: int
    replications: int
    seed: int = 0
    method: SearchMethod = SearchMethod.AUTO
    threads: int | None = None

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"m must be >= 3, got {self.m}")
        if self.n < self.m:
            raise ValueError(f"n must be >= m = {self.m}, got {self.n}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


def resolve_method(config: ExperimentConfig) -> SearchMethod:
    if config.method is not SearchMethod.AUTO:
        return config.method
    if math.comb(config.n, config.m) <= AUTO_BRUTE_LIMIT:
        return SearchMethod.BRUTE_FORCE
    return SearchMethod.CYCLIC_DP


def estimated_evaluations(config: ExperimentConfig) -> float:
    """Predicted kernel-evaluation count, the unit of the resource budget."""
    if resolve_method(config) is SearchMethod.BRUTE_FORCE:
        per = float(math.comb(config.n, config.m))
    else:
        per = float(config.n) ** 3 * config.m
    return config.replications * per


def run_experiment(config: ExperimentConfig, budget: float = DEFAULT_BUDGET) -> np.ndarray:
    """Normalized extremal statistics for each replication.

    Each replication draws n uniform angles, finds the extremal m-subset,
    and maps its deficit through t = n**gamma * deficit (the
    cancellation-free path).  Output has one entry per replication.
    """
    cost = estimated_evaluations(config)
    if cost > budget:
        raise BudgetExceededError(
            f"estimated {cost:.3e} kernel evaluations exceed the budget of "
            f"{budget:.3e}; reduce replications/n or raise the budget"
        )
    law = limit_law(config.kind, config.m)
    use_dp = resolve_method(config) is SearchMethod.CYCLIC_DP
    code = 0 if config.kind is KernelKind.INSCRIBED_PERIMETER else (
        1 if config.kind is KernelKind.INSCRIBED_AREA else 2)
    if code == 0:
        g0 = math.sin(math.pi / config.m)
    elif code == 1:
        g0 = math.sin(TWO_PI / config.m)
    else:
        g0 = math.tan(math.pi / config.m)
    factor = deficit_coefficient(config.kind) * float(config.n) ** law.scaling_exponent

    out = np.empty(config.replications)
    slab = max(1, (1 << 22) // config.n)
    with _thread_limit(config.threads):
        for lo in range(0, config.replications, slab):
            hi = min(lo + slab, config.replications)
            thetas = np.empty((hi - lo, config.n))
            for rep in range(lo, hi):
                thetas[rep - lo] = _stream(config.seed, rep).uniform(0.0, TWO_PI, config.n)
            thetas.sort(axis=1)
            raw = np.empty(hi - lo)
            _jit.block_deficits(thetas, code, g0, config.m, use_dp, raw)
            out[lo:hi] = np.maximum(raw, 0.0) * factor
    return out


@dataclass(frozen=True)
class TailEstimate:
    """Monte Carlo estimate of a small-deficit tail probability.

    ``lemma_ratio`` is p_hat * s**(-(m-1)/2), the finite-s version of the
    tail-lemma limit ``lemma_target`` = m!/K.
    """

    kind: KernelKind
    m: int
    s: float
    trials: int
    hits: int
    p_hat: float
    ci_low: float
    ci_high: float
    lemma_ratio: float
    lemma_target: float
    level: float = 0.99
    seed: int = 0
    warning: str | None = None


def _kind_code_g0(kind: KernelKind, m: int) -> tuple[int, float]:
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return 0, math.sin(math.pi / m)
    if kind is KernelKind.INSCRIBED_AREA:
        return 1, math.sin(TWO_PI / m)
    return 2, math.tan(math.pi / m)


def estimate_tail(
    kind: KernelKind,
    m: int,
    s: float,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
    level: float = 0.99,
) -> TailEstimate:
    """Probability that a single random m-gon lands within s of extremal.

    A trial draws m uniform angles and scores a hit when the kernel deficit
    is at most s (for circumscribed kinds the kernel must also be finite,
    which the deficit encodes as +inf).
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if not 0.0 < s < 0.5 * extremal_value(kind, m):
        raise ValueError(f"s must lie in (0, M/2) = (0, {0.5 * extremal_value(kind, m):g}), got {s}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    code, g0 = _kind_code_g0(kind, m)
    thr = s / deficit_coefficient(kind)
    hits = 0
    with _thread_limit(threads):
        for chunk, lo in enumerate(range(0, trials, TRIAL_CHUNK)):
            count = min(TRIAL_CHUNK, trials - lo)
            pts = _stream(seed, chunk).uniform(0.0, TWO_PI, (count, m))
            hits += int(_jit.tail_count(pts, code, g0, m, thr, False))
    p_hat = hits / trials
    low, high = wilson_ci(hits, trials, level)
    beta = 0.5 * (m - 1)
    ratio = p_hat * s ** (-beta)
    target = math.factorial(m) / limit_law(kind, m).constant
    warning = None
    if hits < 10:
        warning = (
            f"only {hits} hits at s={s:g}, trials={trials}; "
            "the ratio estimate is unstable, increase trials or s"
        )
    return TailEstimate(
        kind=kind, m=m, s=s, trials=trials, hits=hits, p_hat=p_hat,
        ci_low=low, ci_high=high, lemma_ratio=ratio, lemma_target=target,
        level=level, seed=seed, warning=warning,
    )


@dataclass(frozen=True)
class OverlapEstimate:
    """Exceedance estimates for two kernels sharing r of their m points.

    Estimated on a common stream: each trial draws 2m - r fresh uniform
    points, the first kernel reads points 1..m and the second points
    m-r+1..2m-r, so tau_hat * p_hat = joint_hat holds by construction and
    joint_hat never exceeds either marginal.
    """

    n: int
    m: int
    z: float
    r: int
    p_hat: float
    tau_hat: float
    lambda_hat: float
    joint_hat: float
    kind: KernelKind
    t: float
    s: float
    trials: int
    p_hits: int
    joint_hits: int
    second_hat: float
    p_degenerate: bool
    seed: int = 0


def _log_comb(n: int, m: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(m + 1) - math.lgamma(n - m + 1)


def _lambda_from(n: int, m: int, p_hat: float) -> float:
    if p_hat <= 0.0:
        return 0.0
    return math.exp(_log_comb(n, m) + math.log(p_hat))


def estimate_overlap(
    kind: KernelKind,
    m: int,
    n: int,
    t: float,
    r: int,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
) -> OverlapEstimate:
    """Estimate p_{n,z}, tau_{n,z}(r) and lambda_{n,z} at z = z_n(t)."""
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if not 1 <= r <= m - 1:
        raise ValueError(f"r must lie in [1, {m - 1}], got {r}")
    if n < 2 * m - r:
        raise ValueError(f"n must be >= 2m - r = {2 * m - r}, got {n}")
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    law = limit_law(kind, m)
    z = inverse_transform(law, n, t)
    s = t * float(n) ** (-law.scaling_exponent)
    code, g0 = _kind_code_g0(kind, m)
    thr = s / deficit_coefficient(kind)
    width = 2 * m - r
    h1 = h2 = hj = 0
    with _thread_limit(threads):
        for chunk, lo in enumerate(range(0, trials, TRIAL_CHUNK)):
            count = min(TRIAL_CHUNK, trials - lo)
            pts = _stream(seed, chunk).uniform(0.0, TWO_PI, (count, width))
            c1, c2, cj = _jit.overlap_count(pts, code, g0, m, r, thr)
            h1 += int(c1)
            h2 += int(c2)
            hj += int(cj)
    p_hat = h1 / trials
    joint_hat = hj / trials
    degenerate = h1 == 0
    tau_hat = 0.0 if degenerate else joint_hat / p_hat
    return OverlapEstimate(
        n=n, m=m, z=z, r=r, p_hat=p_hat, tau_hat=tau_hat,
        lambda_hat=_lambda_from(n, m, p_hat), joint_hat=joint_hat,
        kind=kind, t=t, s=s, trials=trials, p_hits=h1, joint_hits=hj,
        second_hat=h2 / trials, p_degenerate=degenerate, seed=seed,
    )


@dataclass(frozen=True)
class BoundReport:
    """All terms of the Poisson-approximation error bound.

    ``bound`` is (1 - exp(-lambda)) * (p * [C(n,m) - C(n-m,m)] +
    sum_r C(m,r) * C(n-m,m-r) * tau(r)), which dominates
    |P{H_n <= z} - exp(-lambda)|.
    """

    n: int
    m: int
    z: float
    lambda_hat: float
    term_count: int
    per_r_terms: tuple[float, ...]
    bound: float
    poisson_approx: float
    p_hat: float = field(default=0.0)


def lao_mayer_bound(n: int, m: int, z: float, p_hat: float, tau_hats) -> BoundReport:
    """Assemble the error bound from estimated exceedance quantities.

    ``tau_hats`` lists tau(r) for r = 1..m-1.  Binomial coefficients are
    taken exactly (arbitrary-precision integers) before conversion.
    """
    taus = [float(x) for x in tau_hats]
    if len(taus) != m - 1:
        raise ValueError(f"need m - 1 = {m - 1} tau values, got {len(taus)}")
    if m < 3 or n < m:
        raise ValueError(f"need n >= m >= 3, got n={n}, m={m}")
    if not 0.0 <= p_hat <= 1.0 or any(x < 0.0 for x in taus):
        raise ValueError("estimates out of range")
    lam = _lambda_from(n, m, p_hat)
    term_count = math.comb(n, m) - math.comb(n - m, m)
    per_r = tuple(
        float(math.comb(m, r) * math.comb(n - m, m - r)) * taus[r - 1]
        for r in range(1, m)
    )
    bound = -math.expm1(-lam) * (p_hat * float(term_count) + math.fsum(per_r))
    return BoundReport(
        n=n, m=m, z=z, lambda_hat=lam, term_count=term_count,
        per_r_terms=per_r, bound=bound, poisson_approx=math.exp(-lam),
        p_hat=p_hat,
    )
