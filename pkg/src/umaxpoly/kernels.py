"""Polygon functionals evaluated on point configurations of the unit circle.

Four kernels are supported: perimeter and area of the inscribed polygon
(maximized by the regular configuration) and perimeter and area of the
circumscribed tangent polygon (minimized by it).  Configurations are given
as central angles and reduced to the vector of consecutive gaps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

#: Gap-vector sum must match the full circle this tightly.
GAP_SUM_TOL = 1e-12


class Orientation(enum.Enum):
    """Whether the extremal statistic of a kernel is a maximum or a minimum."""

    MAX = "max"
    MIN = "min"


class KernelKind(enum.Enum):
    """The four polygon functionals, with their CLI spellings as values."""

    INSCRIBED_PERIMETER = "ins-peri"
    INSCRIBED_AREA = "ins-area"
    CIRCUMSCRIBED_PERIMETER = "circ-peri"
    CIRCUMSCRIBED_AREA = "circ-area"

    @property
    def inscribed(self) -> bool:
        return self in (KernelKind.INSCRIBED_PERIMETER, KernelKind.INSCRIBED_AREA)

    @property
    def orientation(self) -> Orientation:
        # Inscribed polygons are maximized, circumscribed ones minimized.
        return Orientation.MAX if self.inscribed else Orientation.MIN

    @classmethod
    def from_cli(cls, name: str) -> "KernelKind":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown kernel kind {name!r}; expected one of {valid}")


@dataclass(frozen=True)
class GapVector:
    """Consecutive central-angle gaps of an m-point configuration.

    Gaps follow the circular order of the sorted angles; they are
    non-negative and sum to the full circle.
    """

    gaps: np.ndarray
    m: int

    def __post_init__(self):
        gaps = np.asarray(self.gaps, dtype=float)
        object.__setattr__(self, "gaps", gaps)
        if self.m < 3 or gaps.shape != (self.m,):
            raise ValueError(f"need m >= 3 gaps, got shape {gaps.shape} with m={self.m}")
        if np.any(gaps < 0.0):
            raise ValueError("gaps must be non-negative")
        total = float(np.sum(gaps))
        if abs(total - TWO_PI) > GAP_SUM_TOL:
            raise ValueError(f"gaps sum to {total!r}, expected 2*pi within {GAP_SUM_TOL}")
        gaps.flags.writeable = False


def _as_angles(angles) -> np.ndarray:
    a = np.asarray(angles, dtype=float)
    if a.ndim != 1 or a.shape[0] < 3:
        raise ValueError(f"need at least 3 angles, got shape {a.shape}")
    # Out-of-range angles are folded back rather than rejected.
    if np.any(a < 0.0) or np.any(a >= TWO_PI):
        a = np.mod(a, TWO_PI)
    return a


def canonicalize(angles) -> GapVector:
    """Reduce a list of angles to its gap vector.

    Angles are reduced modulo 2*pi, sorted, and differenced; the last gap
    wraps through the full circle back to the first point.
    """
    a = np.sort(_as_angles(angles))
    m = a.shape[0]
    gaps = np.empty(m)
    gaps[:-1] = np.diff(a)
    gaps[-1] = TWO_PI - a[-1] + a[0]
    return GapVector(gaps=gaps, m=m)


def _gaps_of(gaps) -> np.ndarray:
    if isinstance(gaps, GapVector):
        return gaps.gaps
    return GapVector(gaps=np.asarray(gaps, dtype=float), m=len(gaps)).gaps


def kernel_eval(kind: KernelKind, gaps) -> float:
    """Evaluate a polygon functional on a gap vector.

    Returns ``math.inf`` for circumscribed kinds whenever some gap reaches
    pi (adjacent tangent lines parallel or meeting on the far side).
    """
    g = _gaps_of(gaps)
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return float(np.sum(2.0 * np.sin(0.5 * g)))
    if kind is KernelKind.INSCRIBED_AREA:
        return float(np.sum(0.5 * np.sin(g)))
    if np.any(g >= np.pi):
        return math.inf
    # Circumscribed area is exactly half the perimeter: same float ops,
    # then an exact scaling by a power of two.
    tan_sum = float(np.sum(np.tan(0.5 * g)))
    if kind is KernelKind.CIRCUMSCRIBED_PERIMETER:
        return 2.0 * tan_sum
    return tan_sum


def extremal_value(kind: KernelKind, m: int) -> float:
    """Extremal kernel value, attained by the regular m-gon."""
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return 2.0 * m * math.sin(math.pi / m)
    if kind is KernelKind.INSCRIBED_AREA:
        return 0.5 * m * math.sin(TWO_PI / m)
    if kind is KernelKind.CIRCUMSCRIBED_PERIMETER:
        return 2.0 * m * math.tan(math.pi / m)
    return m * math.tan(math.pi / m)


def gap_deficit_terms(kind: KernelKind, gaps: np.ndarray, m: int) -> np.ndarray:
    """Per-gap contributions to the deficit, before the kernel coefficient.

    Summing these and scaling by :func:`deficit_coefficient` gives the
    deficit without ever forming the two nearly-equal totals.
    """
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return math.sin(math.pi / m) - np.sin(0.5 * gaps)
    if kind is KernelKind.INSCRIBED_AREA:
        return math.sin(TWO_PI / m) - np.sin(gaps)
    terms = np.where(gaps < np.pi, np.tan(0.5 * gaps) - math.tan(math.pi / m), np.inf)
    return terms


def deficit_coefficient(kind: KernelKind) -> float:
    if kind is KernelKind.INSCRIBED_AREA:
        return 0.5
    if kind is KernelKind.CIRCUMSCRIBED_AREA:
        return 1.0
    return 2.0


def deficit(kind: KernelKind, gaps) -> float:
    """Distance of a configuration's kernel value from the extremal value.

    Computed as a sum of per-gap differences against the regular gap
    2*pi/m, which keeps full precision when the configuration is close to
    regular (direct subtraction of the totals would cancel ~6 digits at the
    scales the normalized statistic lives at).  Clamped to be >= 0.
    """
    g = _gaps_of(gaps)
    m = g.shape[0]
    if not kind.inscribed and np.any(g >= np.pi):
        return math.inf
    d = deficit_coefficient(kind) * float(np.sum(gap_deficit_terms(kind, g, m)))
    return d if d > 0.0 else 0.0
