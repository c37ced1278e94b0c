"""Closed-form limit constants and transformations for the extremal laws.

Each kernel kind has a Weibull-type limit law for its normalized extremal
statistic: the limit CDF is ``1 - exp(-t**beta / K)`` with shape
``beta = (m - 1)/2`` and a kind-specific constant ``K``.  This module
evaluates those constants exactly, their large-m asymptotic forms, the
spectrum of the associated quadratic form, and the normalizing
transformation between raw statistics and the limit variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import TWO_PI, KernelKind, Orientation, extremal_value

#: Above this order the Gamma factor is folded in through log-space to
#: avoid overflow; below it, direct evaluation is a hair more accurate.
_LOG_DOMAIN_M = 30


def _require_m(m: int, minimum: int = 3) -> None:
    if m < minimum:
        raise ValueError(f"m must be >= {minimum}, got {m}")


def _constant_base(kind: KernelKind, m: int) -> float:
    """The kind-specific base raised to the power (m-1)/2 inside K."""
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return math.pi * math.sin(math.pi / m)
    if kind is KernelKind.INSCRIBED_AREA:
        return math.pi * math.sin(TWO_PI / m)
    t = math.tan(math.pi / m)
    if kind is KernelKind.CIRCUMSCRIBED_PERIMETER:
        return TWO_PI * (1.0 + t * t) * t
    return math.pi * (1.0 + t * t) * t


def limit_constant(kind: KernelKind, m: int) -> float:
    """Weibull scale constant K of the limit law for (kind, m)."""
    _require_m(m)
    beta = 0.5 * (m - 1)
    base = _constant_base(kind, m)
    if m <= _LOG_DOMAIN_M:
        return m ** 1.5 * base ** beta * math.gamma(0.5 * (m + 1))
    return math.exp(1.5 * math.log(m) + beta * math.log(base) + math.lgamma(0.5 * (m + 1)))


def asymptotic_constant(kind: KernelKind, m: int) -> float:
    """Stirling-regime approximation of the limit constant as m grows.

    The perimeter-inscribed and area-circumscribed constants share one
    asymptotic form; the other two share it with the 2**((m-1)/2) factor
    removed from the denominator.
    """
    _require_m(m)
    halved = kind in (KernelKind.INSCRIBED_PERIMETER, KernelKind.CIRCUMSCRIBED_AREA)
    log_k = (m - 0.5) * math.log(math.pi) + 2.0 * math.log(m) - 0.5 * m
    if halved:
        log_k -= 0.5 * (m - 1) * math.log(2.0)
    return math.exp(log_k)


def form_eigenvalues(m: int) -> np.ndarray:
    """Spectrum 1 - cos(pi*k/m), k = 1..m-1, of the gap quadratic form."""
    _require_m(m)
    k = np.arange(1, m)
    return 1.0 - np.cos(np.pi * k / m)


def quadratic_form_matrix(m: int) -> np.ndarray:
    """The (m-1)x(m-1) tridiagonal matrix with diagonal 1, off-diagonal -1/2."""
    _require_m(m)
    b = np.eye(m - 1)
    off = -0.5 * np.ones(m - 2)
    b += np.diag(off, 1) + np.diag(off, -1)
    return b


def sine_product(m: int) -> float:
    """Product of sin(pi*k/(2m)) over k = 1..m-1, which equals sqrt(m)/2**(m-1)."""
    _require_m(m, minimum=2)
    value = math.sqrt(m) / 2.0 ** (m - 1)
    if __debug__ and m <= 50:
        direct = float(np.prod(np.sin(np.pi * np.arange(1, m) / (2.0 * m))))
        assert abs(direct - value) <= 1e-12 * value
    return value


def ball_volume(d: int) -> float:
    """Volume of the d-dimensional unit ball."""
    if d < 0:
        raise ValueError(f"dimension must be >= 0, got {d}")
    return math.pi ** (0.5 * d) / math.gamma(0.5 * d + 1.0)


@dataclass(frozen=True)
class LimitLaw:
    """Parameters of the Weibull limit law for one (kind, m)."""

    kind: KernelKind
    m: int
    extremal_value: float
    weibull_exponent: float
    constant: float
    scaling_exponent: float
    orientation: Orientation

    def __post_init__(self):
        if self.constant <= 0.0:
            raise ValueError("limit constant must be positive")
        if self.weibull_exponent != 0.5 * (self.m - 1):
            raise ValueError("weibull exponent must equal (m-1)/2")
        if self.scaling_exponent != 2.0 * self.m / (self.m - 1):
            raise ValueError("scaling exponent must equal 2m/(m-1)")


def limit_law(kind: KernelKind, m: int) -> LimitLaw:
    _require_m(m)
    return LimitLaw(
        kind=kind,
        m=m,
        extremal_value=extremal_value(kind, m),
        weibull_exponent=0.5 * (m - 1),
        constant=limit_constant(kind, m),
        scaling_exponent=2.0 * m / (m - 1),
        orientation=kind.orientation,
    )


def limit_cdf(law: LimitLaw, t):
    """Limit CDF 1 - exp(-t**beta / K); zero for t <= 0.

    Accepts a scalar or an array of evaluation points.
    """
    t = np.asarray(t, dtype=float)
    out = np.where(t > 0.0, -np.expm1(-np.power(np.maximum(t, 0.0), law.weibull_exponent) / law.constant), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def limit_quantile(law: LimitLaw, u: float) -> float:
    """Inverse of :func:`limit_cdf` on (0, 1)."""
    if not 0.0 < u < 1.0:
        raise ValueError("u must lie strictly between 0 and 1")
    return (-law.constant * math.log1p(-u)) ** (1.0 / law.weibull_exponent)


def normalize_stat(law: LimitLaw, n: int, raw: float) -> float:
    """Map a raw extremal statistic to the limit variable t = n**gamma * |M - raw|."""
    if n < law.m:
        raise ValueError(f"n must be >= m = {law.m}, got {n}")
    scale = float(n) ** law.scaling_exponent
    if law.orientation is Orientation.MAX:
        return scale * (law.extremal_value - raw)
    return scale * (raw - law.extremal_value)


def inverse_transform(law: LimitLaw, n: int, t: float) -> float:
    """Threshold z_n(t) = M -+ t * n**(-gamma) whose crossing matches {stat <= t}."""
    if n < law.m:
        raise ValueError(f"n must be >= m = {law.m}, got {n}")
    offset = t * float(n) ** (-law.scaling_exponent)
    if law.orientation is Orientation.MAX:
        return law.extremal_value - offset
    return law.extremal_value + offset
