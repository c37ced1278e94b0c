"""Command-line entry point.

Wires parsed invocations to the simulation engines and emits
machine-readable reports (JSON by default, CSV on request).  Exit codes:
0 success, 2 usage or constraint violation, 3 I/O failure, 4 refusal by
the kernel-evaluation budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analysis import EmpiricalDistribution, ks_statistic, rate_fit
from .constants import asymptotic_constant, limit_law
from .engine import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    ExperimentConfig,
    estimate_overlap,
    estimate_tail,
    lao_mayer_bound,
    resolve_method,
    run_experiment,
)
from .kernels import KernelKind, extremal_value
from .search import BRUTE_FORCE_CAP, SearchMethod, umax_bruteforce, umax_cyclic_dp
from . import verify as verify_suites

#: Statistic vectors longer than this go to a sidecar file, not the report.
SAMPLES_INLINE_LIMIT = 1000

_KIND_CHOICES = [k.value for k in KernelKind]
_METHOD_CHOICES = [m.value for m in SearchMethod]


@dataclass(frozen=True)
class Invocation:
    """A parsed command with its typed parameter map (the config echo)."""

    command: str
    params: dict


def _threads_arg(value: str):
    if value == "auto":
        return None
    try:
        t = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}")
    if t < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return t


def _angles_arg(value: str):
    try:
        return tuple(float(x) for x in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated angles, got {value!r}")


def _n_list_arg(value: str):
    try:
        ns = tuple(int(x) for x in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sample sizes, got {value!r}")
    if not ns:
        raise argparse.ArgumentTypeError("need at least one sample size")
    return ns


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_threads_arg, default=None, metavar="N|auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umaxpoly",
        description="Extremal perimeters/areas of random polygons: simulation and verification.",
    )
    parser.add_argument("--version", action="version", version=f"umaxpoly {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="closed-form limit constants per kernel kind")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", choices=_KIND_CHOICES, default=None)
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="replicate the normalized extremal statistic")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--method", choices=_METHOD_CHOICES, default="auto")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("tail", help="rare-event tail probability of a single random m-gon")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("bound", help="overlap estimates and the Poisson-approximation bound")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--r", type=int, default=None,
                   help="estimate the overlap for this r only (skips the bound)")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("rate", help="log-log convergence-rate fit across sample sizes")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=_n_list_arg, required=True, metavar="N1,N2,...")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--method", choices=_METHOD_CHOICES, default="auto")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("search", help="extremal m-subset of an explicit angle list")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--angles", type=_angles_arg, required=True, metavar="A1,A2,...")
    p.add_argument("--method", choices=_METHOD_CHOICES, default="auto")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the built-in invariant suites")
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)

    return parser


def parse_invocation(argv) -> Invocation:
    """Parse argv into a command plus its typed parameter map."""
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    params = {k: v for k, v in vars(ns).items() if k != "command"}
    _validate(parser, ns.command, params)
    return Invocation(command=ns.command, params=params)


def _validate(parser: argparse.ArgumentParser, command: str, params: dict) -> None:
    m = params.get("m")
    if m is not None and m < 3:
        parser.error(f"constraint violated: m >= 3 (got m={m})")
    if command in ("simulate", "bound"):
        n = params["n"]
        if n < m:
            parser.error(f"constraint violated: n >= m (got n={n}, m={m})")
    if command == "rate":
        bad = [n for n in params["n"] if n < m]
        if bad:
            parser.error(f"constraint violated: n >= m (got n={bad[0]}, m={m})")
        if len(params["n"]) < 3:
            parser.error("constraint violated: rate fits need at least 3 sample sizes")
    if command in ("simulate", "rate") and params["reps"] < 1:
        parser.error(f"constraint violated: reps >= 1 (got {params['reps']})")
    if command in ("tail", "bound") and params["trials"] < 1:
        parser.error(f"constraint violated: trials >= 1 (got {params['trials']})")
    if command == "tail":
        kind = KernelKind(params["kind"])
        cap = 0.5 * extremal_value(kind, m)
        if not 0.0 < params["s"] < cap:
            parser.error(f"constraint violated: 0 < s < M/2 = {cap:g} (got s={params['s']})")
    if command == "bound":
        if params["t"] <= 0.0:
            parser.error(f"constraint violated: t > 0 (got t={params['t']})")
        r = params.get("r")
        if r is not None and not 1 <= r <= m - 1:
            parser.error(f"constraint violated: 1 <= r <= m-1 = {m - 1} (got r={r})")
    if command == "search":
        angles = params["angles"]
        if len(angles) < 3:
            parser.error(f"constraint violated: need >= 3 angles (got {len(angles)})")
        if m > len(angles):
            parser.error(f"constraint violated: m <= n (got m={m}, n={len(angles)})")


def argv_from_config(command: str, params: dict) -> list[str]:
    """Rebuild an argv that reparses to the identical invocation."""
    argv = [command]
    for key, value in params.items():
        flag = f"--{key}"
        if value is None:
            if key == "threads":
                argv.extend([flag, "auto"])
            continue
        if isinstance(value, (tuple, list)):
            argv.extend([flag, ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)])
        else:
            argv.extend([flag, str(value)])
    return argv


def experiment_from_params(params: dict, override: int | None = None) -> ExperimentConfig:
    return ExperimentConfig(
        kind=KernelKind(params["kind"]),
        m=params["m"],
        n=override if override is not None else params["n"],
        replications=params["reps"],
        seed=params["seed"],
        method=SearchMethod(params["method"]),
        threads=params["threads"],
    )


def _budget() -> float:
    raw = os.environ.get("UMAX_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return float(raw)
    except ValueError:
        print(f"error: UMAX_BUDGET must be a number, got {raw!r}", file=sys.stderr)
        raise SystemExit(2)


def _kind_constant_row(kind: KernelKind, m: int) -> dict:
    law = limit_law(kind, m)
    return {
        "kind": kind.value,
        "M": law.extremal_value,
        "K": law.constant,
        "K_asymptotic": asymptotic_constant(kind, m),
        "beta": law.weibull_exponent,
        "gamma": law.scaling_exponent,
        "orientation": law.orientation.value,
    }


def _run_constants(params: dict) -> dict:
    kinds = [KernelKind(params["kind"])] if params["kind"] else list(KernelKind)
    return {"constants": [_kind_constant_row(k, params["m"]) for k in kinds]}


def _run_simulate(params: dict) -> dict:
    config = experiment_from_params(params)
    stats = run_experiment(config, budget=_budget())
    law = limit_law(config.kind, config.m)
    emp = EmpiricalDistribution.from_samples(stats)
    results = {
        "count": int(stats.shape[0]),
        "ks_distance": ks_statistic(emp, law),
        "mean": float(np.mean(stats)),
        "min": float(np.min(stats)),
        "max": float(np.max(stats)),
        "method": resolve_method(config).value,
    }
    if stats.shape[0] <= SAMPLES_INLINE_LIMIT:
        results["samples"] = [float(x) for x in stats]
    else:
        results["samples"] = None
        results["_samples_vector"] = stats
    return results


def _run_tail(params: dict) -> dict:
    est = estimate_tail(
        KernelKind(params["kind"]), params["m"], params["s"], params["trials"],
        seed=params["seed"], threads=params["threads"],
    )
    return {
        "kind": est.kind.value, "m": est.m, "s": est.s, "trials": est.trials,
        "hits": est.hits, "p_hat": est.p_hat, "ci_low": est.ci_low,
        "ci_high": est.ci_high, "lemma_ratio": est.lemma_ratio,
        "lemma_target": est.lemma_target, "level": est.level,
        "warning": est.warning,
    }


def _overlap_row(est) -> dict:
    return {
        "n": est.n, "m": est.m, "z": est.z, "r": est.r, "p_hat": est.p_hat,
        "tau_hat": est.tau_hat, "lambda_hat": est.lambda_hat,
        "joint_hat": est.joint_hat, "p_hits": est.p_hits,
        "joint_hits": est.joint_hits, "second_hat": est.second_hat,
        "trials": est.trials, "p_degenerate": est.p_degenerate,
    }


def _run_bound(params: dict) -> dict:
    kind = KernelKind(params["kind"])
    m, n, t = params["m"], params["n"], params["t"]
    if params["r"] is not None:
        est = estimate_overlap(kind, m, n, t, params["r"], params["trials"],
                               seed=params["seed"], threads=params["threads"])
        return {"overlap": _overlap_row(est)}
    overlaps = [
        estimate_overlap(kind, m, n, t, r, params["trials"],
                         seed=params["seed"] + r, threads=params["threads"])
        for r in range(1, m)
    ]
    report = lao_mayer_bound(n, m, overlaps[0].z, overlaps[0].p_hat,
                             [o.tau_hat for o in overlaps])
    return {
        "overlaps": [_overlap_row(o) for o in overlaps],
        "bound": {
            "n": report.n, "m": report.m, "z": report.z,
            "lambda_hat": report.lambda_hat, "term_count": report.term_count,
            "per_r_terms": list(report.per_r_terms), "bound": report.bound,
            "poisson_approx": report.poisson_approx,
        },
    }


def _run_rate(params: dict) -> dict:
    kind = KernelKind(params["kind"])
    law = limit_law(kind, params["m"])
    budget = _budget()
    points = []
    for n in params["n"]:
        config = experiment_from_params(params, override=n)
        stats = run_experiment(config, budget=budget)
        d = ks_statistic(EmpiricalDistribution.from_samples(stats), law)
        points.append((n, d))
    fit = rate_fit(points)
    return {
        "points": [{"n": n, "ks_distance": d} for n, d in points],
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
    }


def _run_search(params: dict) -> dict:
    kind = KernelKind(params["kind"])
    method = SearchMethod(params["method"])
    angles = list(params["angles"])
    if method is SearchMethod.CYCLIC_DP:
        res = umax_cyclic_dp(kind, angles, params["m"])
    elif method is SearchMethod.BRUTE_FORCE:
        res = umax_bruteforce(kind, angles, params["m"])
    else:
        res = (umax_bruteforce(kind, angles, params["m"])
               if len(angles) <= BRUTE_FORCE_CAP
               else umax_cyclic_dp(kind, angles, params["m"]))
    return {
        "value": res.value,
        "subset": list(res.subset),
        "method": res.method.value,
        "deficit": res.deficit,
    }


def _run_verify(params: dict) -> dict:
    checks = verify_suites.run_all(seed=params["seed"])
    return {
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "all_passed": all(c.passed for c in checks),
    }


_RUNNERS = {
    "constants": _run_constants,
    "simulate": _run_simulate,
    "tail": _run_tail,
    "bound": _run_bound,
    "rate": _run_rate,
    "search": _run_search,
    "verify": _run_verify,
}


def _csv_rows(command: str, results: dict) -> list[dict]:
    if command == "constants":
        return results["constants"]
    if command == "tail":
        cols = ("kind", "m", "s", "trials", "hits", "p_hat", "ci_low",
                "ci_high", "lemma_ratio", "lemma_target")
        return [{k: results[k] for k in cols}]
    if command == "simulate":
        return [{k: v for k, v in results.items() if k not in ("samples", "_samples_vector")}]
    if command == "bound":
        if "overlap" in results:
            return [results["overlap"]]
        bound = results["bound"]
        shared = {"bound": bound["bound"], "lambda_hat": bound["lambda_hat"],
                  "poisson_approx": bound["poisson_approx"], "term_count": bound["term_count"]}
        return [dict(row, **shared) for row in results["overlaps"]]
    if command == "rate":
        shared = {k: results[k] for k in ("exponent", "intercept", "r_squared")}
        return [dict(p, **shared) for p in results["points"]]
    if command == "search":
        row = dict(results)
        row["subset"] = " ".join(str(i) for i in row["subset"])
        return [row]
    if command == "verify":
        return results["checks"]
    raise ValueError(f"no CSV schema for command {command!r}")


def _format_csv(command: str, results: dict) -> str:
    rows = _csv_rows(command, results)
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[k]) for k in header))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(report: dict, fmt: str, destination: str | None,
                samples: np.ndarray | None = None) -> None:
    """Serialize a run report; long statistic vectors go to a sidecar file."""
    if fmt == "json":
        text = json.dumps(report, indent=2, default=_json_default) + "\n"
    else:
        text = _format_csv(report["command"], report["results"])
    if destination is None:
        sys.stdout.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)
        if samples is not None:
            with open(destination + ".samples.csv", "w") as fh:
                fh.write("\n".join(repr(float(x)) for x in samples) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    inv = parse_invocation(argv)
    started = time.perf_counter()
    try:
        results = _RUNNERS[inv.command](inv.params)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started

    samples = results.pop("_samples_vector", None)
    if samples is not None and inv.params.get("out") is None:
        # No sidecar location without --out; keep the summary, drop the vector.
        results["samples"] = None
    report = {
        "command": inv.command,
        "config": _echo_value(inv.params),
        "results": _echo_value(results),
        "tool_version": __version__,
        "elapsed_seconds": elapsed,
    }
    if samples is not None and inv.params.get("out") is not None:
        report["results"]["samples_file"] = inv.params["out"] + ".samples.csv"
    try:
        emit_report(report, inv.params.get("format", "json"), inv.params.get("out"), samples)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    if inv.command == "verify" and not results["all_passed"]:
        return 1
    return 0


def _echo_value(value):
    if isinstance(value, dict):
        return {k: _echo_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_echo_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_echo_value(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


if __name__ == "__main__":
    sys.exit(main())
