"""Built-in invariant suites, packaged for the CLI ``verify`` subcommand.

Each check is self-contained and deterministic for a given seed; the CLI
exits nonzero when any of them fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import form_eigenvalues, limit_constant, quadratic_form_matrix, sine_product
from .kernels import TWO_PI, KernelKind, deficit, extremal_value, kernel_eval
from .search import umax_bruteforce, umax_cyclic_dp


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def constants_identities(m_max: int = 100) -> list[CheckResult]:
    checks = []
    worst_area = 0.0
    worst_circ = 0.0
    for m in range(3, m_max + 1):
        k1 = limit_constant(KernelKind.INSCRIBED_PERIMETER, m)
        k2 = limit_constant(KernelKind.INSCRIBED_AREA, m)
        k3 = limit_constant(KernelKind.CIRCUMSCRIBED_PERIMETER, m)
        k4 = limit_constant(KernelKind.CIRCUMSCRIBED_AREA, m)
        factor = (2.0 * math.cos(math.pi / m)) ** (0.5 * (m - 1))
        worst_area = max(worst_area, _rel_err(k2, factor * k1))
        worst_circ = max(worst_circ, _rel_err(k3, 2.0 ** (0.5 * (m - 1)) * k4))
    checks.append(CheckResult(
        "K2 = (2 cos(pi/m))^((m-1)/2) K1, m 3..100", worst_area <= 1e-12,
        f"max rel err {worst_area:.3e}"))
    checks.append(CheckResult(
        "K3 = 2^((m-1)/2) K4, m 3..100", worst_circ <= 1e-12,
        f"max rel err {worst_circ:.3e}"))

    worst = 0.0
    for m in range(2, 51):
        direct = float(np.prod(np.sin(np.pi * np.arange(1, m) / (2.0 * m))))
        worst = max(worst, _rel_err(direct, sine_product(m)))
    checks.append(CheckResult(
        "sine product = sqrt(m)/2^(m-1), m 2..50", worst <= 1e-12,
        f"max rel err {worst:.3e}"))

    worst = 0.0
    for m in range(3, 21):
        numeric = np.linalg.eigvalsh(quadratic_form_matrix(m))
        worst = max(worst, float(np.max(np.abs(numeric - form_eigenvalues(m)))))
    checks.append(CheckResult(
        "eigenvalues 1 - cos(pi k/m) vs dense solver, m 3..20", worst <= 1e-10,
        f"max abs err {worst:.3e}"))

    anchor = _rel_err(math.factorial(3) / limit_constant(KernelKind.INSCRIBED_PERIMETER, 3),
                      4.0 / (3.0 * math.pi))
    checks.append(CheckResult(
        "Gamma(4)/K_13 = 4/(3 pi)", anchor <= 1e-12, f"rel err {anchor:.3e}"))
    return checks


def _random_gap_block(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    pts = np.sort(rng.uniform(0.0, TWO_PI, (count, m)), axis=1)
    gaps = np.empty((count, m))
    gaps[:, :-1] = np.diff(pts, axis=1)
    gaps[:, -1] = TWO_PI - pts[:, -1] + pts[:, 0]
    return gaps


def kernel_extremality(samples: int = 100_000, seed: int = 0) -> list[CheckResult]:
    """Random configurations never beat the regular polygon."""
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    tol = 1e-12
    ok = True
    worst = -np.inf
    for m in range(3, 9):
        gaps = _random_gap_block(rng, samples, m)
        peri = np.sum(2.0 * np.sin(0.5 * gaps), axis=1)
        area = np.sum(0.5 * np.sin(gaps), axis=1)
        finite = ~np.any(gaps >= np.pi, axis=1)
        tan_sum = np.sum(np.where(gaps < np.pi, np.tan(0.5 * gaps), 0.0), axis=1)
        exc = max(
            float(np.max(peri - extremal_value(KernelKind.INSCRIBED_PERIMETER, m))),
            float(np.max(area - extremal_value(KernelKind.INSCRIBED_AREA, m))),
        )
        if np.any(finite):
            exc = max(exc, float(np.max(
                extremal_value(KernelKind.CIRCUMSCRIBED_PERIMETER, m) - 2.0 * tan_sum[finite])))
            exc = max(exc, float(np.max(
                extremal_value(KernelKind.CIRCUMSCRIBED_AREA, m) - tan_sum[finite])))
        worst = max(worst, exc)
        ok = ok and exc <= tol
    return [CheckResult(
        f"kernel extremality, {samples} random configurations per (kind, m), m 3..8",
        ok, f"max excess over the regular bound {worst:.3e}")]


def search_equivalence(instances_per_kind: int = 100, seed: int = 0) -> list[CheckResult]:
    """The cyclic DP reproduces brute-force enumeration exactly."""
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 1], dtype=np.uint64)))
    worst = 0.0
    ok = True
    for kind in KernelKind:
        for _ in range(instances_per_kind):
            n = int(rng.integers(6, 13))
            m = int(rng.integers(3, 6))
            angles = rng.uniform(0.0, TWO_PI, n)
            bf = umax_bruteforce(kind, angles, m)
            dp = umax_cyclic_dp(kind, angles, m)
            if math.isinf(bf.value) or math.isinf(dp.value):
                ok = ok and math.isinf(bf.value) and math.isinf(dp.value)
            else:
                dev = abs(bf.value - dp.value)
                worst = max(worst, dev)
                ok = ok and dev <= 1e-12
    return [CheckResult(
        f"cyclic DP vs brute force, {instances_per_kind} instances per kind",
        ok, f"max value deviation {worst:.3e}")]


def deficit_consistency(samples: int = 2_000, seed: int = 0) -> list[CheckResult]:
    """Per-gap deficit agrees with the direct difference away from degeneracy."""
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 2], dtype=np.uint64)))
    worst = 0.0
    ok = True
    for _ in range(samples):
        m = int(rng.integers(3, 9))
        gaps = _random_gap_block(rng, 1, m)[0]
        for kind in KernelKind:
            k = kernel_eval(kind, gaps)
            if math.isinf(k):
                continue
            direct = abs(extremal_value(kind, m) - k)
            d = deficit(kind, gaps)
            if direct > 1e-6:
                err = abs(d - direct) / direct
                worst = max(worst, err)
                ok = ok and err <= 1e-10
    return [CheckResult(
        "deficit vs direct subtraction on non-degenerate inputs",
        ok, f"max rel deviation {worst:.3e}")]


def run_all(seed: int = 0) -> list[CheckResult]:
    checks = []
    checks.extend(constants_identities())
    checks.extend(kernel_extremality(seed=seed))
    checks.extend(search_equivalence(seed=seed))
    checks.extend(deficit_consistency(seed=seed))
    return checks
