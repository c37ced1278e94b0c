"""Empirical-distribution analytics for the simulation output.

Kolmogorov-Smirnov distances against the limit laws, Wilson score
intervals for binomial hit counts, and log-log rate-of-convergence fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .constants import LimitLaw, limit_cdf


@dataclass(frozen=True)
class EmpiricalDistribution:
    sorted_values: np.ndarray
    count: int

    def __post_init__(self):
        v = np.asarray(self.sorted_values, dtype=float)
        object.__setattr__(self, "sorted_values", v)
        if v.ndim != 1 or v.shape[0] < 1 or v.shape[0] != self.count:
            raise ValueError("need a non-empty 1-d value array with matching count")
        if np.any(np.diff(v) < 0.0):
            raise ValueError("values must be sorted ascending")
        v.flags.writeable = False

    @classmethod
    def from_samples(cls, values) -> "EmpiricalDistribution":
        v = np.sort(np.asarray(values, dtype=float))
        return cls(sorted_values=v, count=v.shape[0])


def ks_statistic(emp: EmpiricalDistribution, law: LimitLaw) -> float:
    """Sup-norm distance between the empirical step CDF and the limit CDF.

    Evaluated exactly at the jump points: the empirical CDF passes through
    i/N and (i+1)/N at the i-th sorted value.
    """
    xs = emp.sorted_values
    n = emp.count
    cdf = np.asarray(limit_cdf(law, xs), dtype=float)
    grid = np.arange(n, dtype=float)
    below = np.max(cdf - grid / n)
    above = np.max((grid + 1.0) / n - cdf)
    return float(max(below, above))


def wilson_ci(hits: int, trials: int, level: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Stable at extreme counts: hits = 0 gives a lower bound of exactly 0,
    hits = trials an upper bound of exactly 1.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= hits <= trials:
        raise ValueError(f"hits must lie in [0, {trials}], got {hits}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    z = NormalDist().inv_cdf(0.5 + 0.5 * level)
    p = hits / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    center = (p + 0.5 * z2n) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + 0.25 * z2n / trials) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class RateFit:
    """Least-squares line through (log n, log D_n)."""

    pairs: tuple[tuple[float, float], ...]
    exponent: float
    intercept: float
    r_squared: float


def rate_fit(pairs) -> RateFit:
    """Fit D_n ~ C * n**exponent from (n, D_n) observations."""
    pts = [(float(n), float(d)) for n, d in pairs]
    if len(pts) < 3:
        raise ValueError("need at least 3 (n, D_n) pairs")
    ns = np.array([p[0] for p in pts])
    ds = np.array([p[1] for p in pts])
    if len(set(ns.tolist())) != len(pts):
        raise ValueError("sample sizes n must be distinct")
    if np.any(ds <= 0.0):
        raise ValueError("all D_n must be positive")
    x = np.log(ns)
    y = np.log(ds)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return RateFit(pairs=tuple(pts), exponent=float(slope), intercept=float(intercept), r_squared=r2)
