"""Command-line interface: file ingestion, dispatch, report emission.

State files are JSON objects

    {"d": 2,
     "matrix": [[re, im], ...],        # d*d entries, row-major over (i, j)
     "normalization": "unit"}          # or "scaled"; default "unit"

Complex numbers serialize as [re, im] pairs everywhere; indices are
zero-based. Reports go to standard output, diagnostics to standard
error. Exit codes: 0 success, 1 input or parse error, 2 infeasible
input or violated precondition, 3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .coding import (
    PreparationPlan,
    construct_plan,
    decide_perfect,
    maximal_baseline,
    plan_for_shared,
    single_violation_bound,
)
from .errors import (
    BadLength,
    ConvergenceFailure,
    NotNormalized,
    ParseError,
    SdcError,
)
from .linalg import DEFAULT_TOL
from .optimize import optimize_shared
from .simulate import SimulationConfig, run_protocol
from .states import (
    SharedState,
    TargetState,
    entanglement_entropy,
    schmidt_decompose,
    target_from_amplitudes,
)

_COMMANDS = ("analyze", "plan", "baseline", "bound", "schmidt", "simulate", "optimize")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _cvector(v) -> list[list[float]]:
    return [_pair(complex(z)) for z in np.asarray(v).ravel()]


def _cmatrix(m) -> list[list[list[float]]]:
    return [[_pair(complex(z)) for z in row] for row in np.asarray(m)]


def _rvector(v) -> list[float]:
    return [float(x) for x in np.asarray(v).ravel()]


def _load_json(path: str):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc


def _complex_entries(entries, what: str) -> np.ndarray:
    out = np.empty(len(entries), dtype=np.complex128)
    for idx, entry in enumerate(entries):
        if (not isinstance(entry, (list, tuple)) or len(entry) != 2
                or not all(isinstance(part, (int, float)) for part in entry)):
            raise ParseError(f"{what}[{idx}]: expected a [re, im] pair, got {entry!r}")
        out[idx] = complex(float(entry[0]), float(entry[1]))
    return out


def parse_state_file(path: str, tol: float = DEFAULT_TOL) -> TargetState:
    """Read and validate a target-state file."""
    data, _ = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    if "d" not in data:
        raise ParseError(f"{path}: missing field 'd'")
    d = data["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"{path}: field 'd' must be a positive integer, got {d!r}")
    if "matrix" not in data:
        raise ParseError(f"{path}: missing field 'matrix'")
    matrix = data["matrix"]
    if not isinstance(matrix, list):
        raise ParseError(f"{path}: field 'matrix' must be a list of [re, im] pairs")
    normalization = data.get("normalization", "unit")
    if normalization not in ("unit", "scaled"):
        raise ParseError(
            f"{path}: field 'normalization' must be 'unit' or 'scaled', got {normalization!r}"
        )
    amps = _complex_entries(matrix, "matrix")
    return target_from_amplitudes(d, amps, normalization, tol)


def _parse_shared_file(path: str, d: int) -> SharedState:
    data, _ = _load_json(path)
    if not isinstance(data, dict) or "c" not in data:
        raise ParseError(f"{path}: shared-state file must be an object with field 'c'")
    c = _complex_entries(data["c"], "c")
    if c.size != d:
        raise ParseError(f"{path}: field 'c' must have {d} entries, got {c.size}")
    perm_a = data.get("perm_a", [])
    perm_b = data.get("perm_b", [])
    for name, perm in (("perm_a", perm_a), ("perm_b", perm_b)):
        if not isinstance(perm, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in perm
        ):
            raise ParseError(f"{path}: field '{name}' must be a list of integers")
    try:
        return SharedState(c, tuple(perm_a), tuple(perm_b))
    except (ValueError, NotNormalized) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _plan_payload(plan: PreparationPlan) -> dict:
    return {
        "c": _cvector(plan.shared.c),
        "perm_a": list(plan.shared.perm_a),
        "perm_b": list(plan.shared.perm_b),
        "y": _cmatrix(plan.y),
        "e0": _cmatrix(plan.kraus.e0),
        "e1": _cmatrix(plan.kraus.e1),
        "success_prob": plan.success_prob,
        "is_perfect": plan.is_perfect,
        "free_columns": list(plan.free_columns),
    }


def _cmd_analyze(t: TargetState, args) -> dict:
    report = decide_perfect(t, args.tol)
    return {
        "d": t.d,
        "gram": _cmatrix(report.gram),
        "column_norms": _rvector(report.column_norms),
        "violations": [
            {"j1": v.j1, "j2": v.j2, "gamma": _pair(v.gamma)} for v in report.violations
        ],
        "perfectly_preparable": report.perfectly_preparable,
    }


def _cmd_plan(t: TargetState, args) -> dict:
    return _plan_payload(construct_plan(t, args.tol))


def _cmd_baseline(t: TargetState, args) -> dict:
    return {"success_prob": maximal_baseline(t, args.tol)}


def _cmd_bound(t: TargetState, args) -> dict:
    pair = None
    if args.pair is not None:
        parts = args.pair.split(",")
        if len(parts) != 2:
            raise ParseError(f"--pair expects 'j1,j2', got {args.pair!r}")
        try:
            pair = (int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise ParseError(f"--pair expects integers, got {args.pair!r}") from exc
    report = single_violation_bound(t, args.tol, pair)
    return {
        "pair": list(report.pair),
        "gamma": _pair(report.gamma),
        "bound": report.bound,
        "spectrum": _rvector(report.spectrum),
        "achieved": report.achieved,
    }


def _cmd_schmidt(t: TargetState, args) -> dict:
    form = schmidt_decompose(t, args.tol)
    return {
        "lambdas": _rvector(form.lambdas),
        "basis_a": _cmatrix(form.basis_a),
        "basis_b": _cmatrix(form.basis_b),
        "entropy_bits": entanglement_entropy(form),
    }


def _cmd_simulate(t: TargetState, args) -> dict:
    if args.shared is not None:
        shared = _parse_shared_file(args.shared, t.d)
        plan = plan_for_shared(t, shared, args.tol)
    else:
        plan = construct_plan(t, args.tol)
    cfg = SimulationConfig(trials=args.trials, seed=args.seed, tol=args.tol)
    result = run_protocol(plan, t, cfg)
    return {
        "trials": result.trials,
        "seed": cfg.seed,
        "successes": result.successes,
        "empirical_prob": result.empirical_prob,
        "analytic_prob": result.analytic_prob,
        "mean_success_fidelity": result.mean_success_fidelity,
        "ci_halfwidth": result.ci_halfwidth,
    }


def _cmd_optimize(t: TargetState, args) -> dict:
    result = optimize_shared(t, args.method, args.budget, args.tol)
    return {
        "best_c": _rvector(result.best_c),
        "best_prob": result.best_prob,
        "method": result.method,
        "evaluations": result.evaluations,
        "seeds_used": [
            {"name": s.name, "weights": _rvector(s.weights), "value": s.value}
            for s in result.seeds_used
        ],
        "history": [[int(i), float(v)] for i, v in result.history],
    }


_HANDLERS = {
    "analyze": _cmd_analyze,
    "plan": _cmd_plan,
    "baseline": _cmd_baseline,
    "bound": _cmd_bound,
    "schmidt": _cmd_schmidt,
    "simulate": _cmd_simulate,
    "optimize": _cmd_optimize,
}


def _render_text(report: dict, out) -> None:
    print(f"command: {report['command']}", file=out)
    print(f"input_digest: {report['input_digest']}", file=out)
    print(f"tool_version: {report['tool_version']}", file=out)
    for key, value in report["payload"].items():
        print(f"{key}: {json.dumps(value)}", file=out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdcprep",
        description="Analyze exact state preparation over ground-pair entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(_COMMANDS))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("state_file", help="JSON target-state file")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="numerical tolerance (default 1e-9)")
    common.add_argument("--output", choices=("json", "text"), default="json",
                        help="report format (default json)")

    sub.add_parser("analyze", parents=[common],
                   help="column Gram matrix and the exact-preparability verdict")
    sub.add_parser("plan", parents=[common],
                   help="shared state, sender operation, and Kraus pair")
    sub.add_parser("baseline", parents=[common],
                   help="success probability with the maximally entangled resource")
    p_bound = sub.add_parser("bound", parents=[common],
                             help="probability floor for a single overlapping column pair")
    p_bound.add_argument("--pair", default=None, metavar="J1,J2",
                         help="column pair override (default: auto-detect)")
    sub.add_parser("schmidt", parents=[common],
                   help="Schmidt coefficients, local bases, entanglement entropy")
    p_sim = sub.add_parser("simulate", parents=[common],
                           help="Monte-Carlo run of the measurement protocol")
    p_sim.add_argument("--trials", type=int, default=100000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--shared", default=None, metavar="FILE",
                       help="shared-state override file with fields c, perm_a, perm_b")
    p_opt = sub.add_parser("optimize", parents=[common],
                           help="maximize success probability over shared-state weights")
    p_opt.add_argument("--method", choices=("grid", "nelder-mead"), default="nelder-mead")
    p_opt.add_argument("--budget", type=int, default=20000,
                       help="objective evaluation budget (default 20000)")
    return parser


def dispatch(args, out=None) -> int:
    """Run one parsed command and emit its report. Returns the exit code."""
    out = sys.stdout if out is None else out
    _, digest = _load_json(args.state_file)
    target = parse_state_file(args.state_file, args.tol)
    payload = _HANDLERS[args.command](target, args)
    report = {
        "command": args.command,
        "input_digest": digest,
        "tool_version": __version__,
        "payload": payload,
    }
    if args.output == "text":
        _render_text(report, out)
    else:
        print(json.dumps(report, indent=2), file=out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except (ParseError, BadLength, NotNormalized) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SdcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
