"""Extremal kernel value over all m-subsets of a sample.

Two interchangeable methods: exhaustive enumeration (the trusted oracle,
capped by default to keep C(n, m) tractable) and an anchored cyclic
dynamic program that exploits the per-gap decomposition of all four
kernels.  Both return the same value on any instance; the DP is the one
to use at scale.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _jit
from .kernels import (
    TWO_PI,
    KernelKind,
    Orientation,
    _as_angles,
    deficit_coefficient,
    extremal_value,
)

#: Default ceiling on the sample size accepted by the brute-force search.
BRUTE_FORCE_CAP = 40


class SearchMethod(enum.Enum):
    BRUTE_FORCE = "brute"
    CYCLIC_DP = "dp"
    AUTO = "auto"

    @classmethod
    def from_cli(cls, name: str) -> "SearchMethod":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown method {name!r}; expected one of {valid}")


@dataclass(frozen=True)
class SearchResult:
    """Extremal kernel value and the subset attaining it.

    ``subset`` indexes into the sorted sample and is empty when every
    circumscribed subset is degenerate (value inf).  ``deficit`` is the
    cancellation-free distance from the extremal value.
    """

    value: float
    subset: tuple[int, ...]
    method: SearchMethod
    deficit: float


def _kind_code(kind: KernelKind) -> int:
    if kind is KernelKind.INSCRIBED_PERIMETER:
        return 0
    if kind is KernelKind.INSCRIBED_AREA:
        return 1
    return 2


def _regular_term(kind: KernelKind, m: int) -> float:
    code = _kind_code(kind)
    if code == 0:
        return math.sin(math.pi / m)
    if code == 1:
        return math.sin(TWO_PI / m)
    return math.tan(math.pi / m)


def _prepare(kind: KernelKind, angles, m: int):
    a = _as_angles(angles)
    n = a.shape[0]
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if m > n:
        raise ValueError(f"m = {m} exceeds sample size n = {n}")
    theta = np.sort(a)
    fwd, cls = _jit.gap_matrices(theta, _kind_code(kind), _regular_term(kind, m))
    return theta, fwd, cls


def _finish(kind: KernelKind, m: int, raw: float, idx: np.ndarray, method: SearchMethod) -> SearchResult:
    if not math.isfinite(raw):
        return SearchResult(value=math.inf, subset=(), method=method, deficit=math.inf)
    d = deficit_coefficient(kind) * raw
    if d < 0.0:
        d = 0.0
    base = extremal_value(kind, m)
    value = base - d if kind.orientation is Orientation.MAX else base + d
    return SearchResult(value=value, subset=tuple(int(i) for i in idx), method=method, deficit=d)


def umax_bruteforce(kind: KernelKind, angles, m: int, cap: int | None = BRUTE_FORCE_CAP) -> SearchResult:
    """Extremal kernel value by enumerating all C(n, m) subsets.

    Refuses samples larger than ``cap`` (pass None to lift the limit, at
    your own cost); the cyclic DP handles large n in polynomial time.
    """
    a = _as_angles(angles)
    if cap is not None and a.shape[0] > cap:
        raise ValueError(
            f"n = {a.shape[0]} exceeds the brute-force cap of {cap}; "
            "use umax_cyclic_dp (or raise the cap) for larger samples"
        )
    theta, fwd, cls = _prepare(kind, a, m)
    n = theta.shape[0]
    idx = np.empty(m, np.int64)
    if m == 3:
        raw = _jit.brute_m3(fwd, cls, n, idx)
    else:
        raw = _jit.brute_general(fwd, cls, n, m, idx)
    return _finish(kind, m, raw, idx, SearchMethod.BRUTE_FORCE)


def umax_cyclic_dp(kind: KernelKind, angles, m: int) -> SearchResult:
    """Extremal kernel value via the anchored cyclic dynamic program."""
    theta, fwd, cls = _prepare(kind, angles, m)
    idx = np.empty(m, np.int64)
    raw = _jit.cyclic_dp(fwd, cls, theta, m, _kind_code(kind), _regular_term(kind, m), idx)
    return _finish(kind, m, raw, idx, SearchMethod.CYCLIC_DP)
