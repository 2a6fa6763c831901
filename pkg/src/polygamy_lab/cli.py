"""Command-line front end.

Exit codes: 0 success, 1 internal numerical error, 2 usage error,
3 input-validation error.  Errors print one line ``error: <Kind>: <reason>``
on stderr.  Every subcommand accepts ``--seed``, ``--out`` and ``--quiet``;
without ``--out`` the primary output goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .audit import (
    AuditConfig,
    audit_csv,
    beta_sweep,
    fmt,
    lemma_grid_audit,
    random_audit,
    sweep_csv,
    tangle_audit,
    tangle_csv,
    wstate_case,
)
from .bounds import BoundReport, as_profile, evaluate_bounds
from .errors import (
    ConvergenceError,
    DomainError,
    LayoutError,
    PolygamyLabError,
    PositivityError,
    RangeError,
    ShapeError,
    SizeError,
    StateFileError,
)
from .measures import EoaEstimate, OptimizerOptions, assisted_measure
from .states import DensityMatrix, PureState, SystemLayout, regroup_bipartite

_VALIDATION_ERRORS = (
    StateFileError,
    LayoutError,
    DomainError,
    RangeError,
    ShapeError,
    SizeError,
)
_NUMERICAL_ERRORS = (ConvergenceError, PositivityError, FloatingPointError)

_INGEST_TOL = 1e-8


def load_state_file(path: str) -> PureState | DensityMatrix:
    """Read a JSON state file and validate it.

    Format: ``{"dims": [2, 2], "kind": "pure" | "density", "data": [[re, im], ...]}``
    with row-major data for densities.  Norm, trace and Hermiticity are
    checked to 1e-8; inputs inside that tolerance are repaired (normalized,
    symmetrized, tiny negative eigenvalues clipped) before use.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise StateFileError(f"cannot read state file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"state file {path!r} is not valid JSON: {exc}") from exc

    if not isinstance(payload, dict):
        raise StateFileError("state file must contain a JSON object")
    missing = {"dims", "kind", "data"} - payload.keys()
    if missing:
        raise StateFileError(f"state file is missing keys: {sorted(missing)}")
    kind = payload["kind"]
    if kind not in ("pure", "density"):
        raise StateFileError(f'kind must be "pure" or "density", got {kind!r}')
    try:
        layout = SystemLayout(tuple(int(d) for d in payload["dims"]))
    except (TypeError, ValueError, LayoutError) as exc:
        raise StateFileError(f"bad dims field: {exc}") from exc
    try:
        pairs = np.asarray(payload["data"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"bad data field: {exc}") from exc
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise StateFileError("data must be a list of [re, im] pairs")
    values = pairs[:, 0] + 1j * pairs[:, 1]
    if not np.all(np.isfinite(pairs)):
        raise StateFileError("data entries must be finite")

    dim = layout.dim
    if kind == "pure":
        if values.size != dim:
            raise StateFileError(f"expected {dim} amplitudes, got {values.size}")
        norm = float(np.linalg.norm(values))
        if abs(norm - 1.0) > _INGEST_TOL:
            raise StateFileError(f"state norm {norm!r} is not 1 within {_INGEST_TOL:.0e}")
        return PureState(values / norm, layout)

    if values.size != dim * dim:
        raise StateFileError(f"expected {dim * dim} matrix entries, got {values.size}")
    mat = values.reshape(dim, dim)
    defect = float(np.linalg.norm(mat - mat.conj().T))
    if defect > _INGEST_TOL:
        raise StateFileError(f"matrix is not Hermitian within {_INGEST_TOL:.0e} ({defect:.3e})")
    mat = (mat + mat.conj().T) / 2.0
    trace = float(np.trace(mat).real)
    if abs(trace - 1.0) > _INGEST_TOL:
        raise StateFileError(f"matrix trace {trace!r} is not 1 within {_INGEST_TOL:.0e}")
    mat = mat / trace
    eigvals, eigvecs = np.linalg.eigh(mat)
    if float(eigvals.min()) < -_INGEST_TOL:
        raise StateFileError(
            f"matrix has eigenvalue {eigvals.min():.3e} below -{_INGEST_TOL:.0e}"
        )
    if float(eigvals.min()) < 0.0:
        eigvals = np.clip(eigvals, 0.0, None)
        mat = (eigvecs * eigvals) @ eigvecs.conj().T
        mat = (mat + mat.conj().T) / 2.0
        mat = mat / float(np.trace(mat).real)
    try:
        return DensityMatrix(mat, layout)
    except PositivityError as exc:
        raise StateFileError(f"matrix failed positivity validation: {exc}") from exc


def _parse_layout(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.lower().split("x"))
    except ValueError as exc:
        raise LayoutError(f"cannot parse layout {text!r}; use e.g. 2x2x2") from exc
    if not dims:
        raise LayoutError("layout must name at least one subsystem")
    return dims


def _parse_betas(text: str) -> tuple[float, ...]:
    try:
        betas = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise DomainError(f"cannot parse beta list {text!r}") from exc
    if not betas:
        raise DomainError("at least one beta value is required")
    return betas


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _report_lines(report: BoundReport) -> list[str]:
    lines = [
        f"beta={fmt(report.beta)}",
        f"k_used={fmt(report.k_used)}",
        f"lhs_pow={fmt(report.lhs_pow)}",
        f"sum_pow={fmt(report.sum_pow)}",
        f"bound_thm1={fmt(report.bound_thm1)}",
        f"bound_kim={fmt(report.bound_kim)}",
        f"bound_thm2={fmt(report.bound_thm2)}",
        f"cond_thm1={str(report.cond_thm1).lower()}",
        f"cond_thm2={str(report.cond_thm2).lower()}",
        f"gap_thm1={fmt(report.gap_thm1)}",
        f"gap_kim={fmt(report.gap_kim)}",
        f"verdict={report.verdict}",
    ]
    return lines


def _estimate_lines(estimate: EoaEstimate) -> list[str]:
    diag = estimate.diagnostics
    return [
        f"value={fmt(estimate.value)}",
        f"members={len(estimate.witness)}",
        f"restarts_used={diag.restarts_used}",
        f"iterations={diag.iterations}",
        f"converged={str(diag.converged).lower()}",
        f"best_restart={diag.best_restart}",
    ]


def _optimizer_from_args(args: argparse.Namespace) -> OptimizerOptions:
    return OptimizerOptions(
        restarts=args.restarts,
        iterations=args.iterations,
        ensemble_size=args.ensemble_size,
        ensemble_cap=args.ensemble_cap,
        seed=args.seed,
    )


def _progress(message: str, quiet: bool) -> None:
    if not quiet:
        print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify_wstate(args: argparse.Namespace) -> int:
    report = wstate_case(args.beta)
    _emit("\n".join(_report_lines(report)) + "\n", args.out)
    return 0


def cmd_sweep_beta(args: argparse.Namespace) -> int:
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    if not 0.0 <= args.beta_start <= args.beta_stop <= 1.0:
        raise DomainError("beta grid must satisfy 0 <= start <= stop <= 1")
    if args.source == "wstate":
        profile, lhs = None, None
    else:
        if args.profile is None or args.lhs is None:
            raise DomainError("--source profile needs --profile and --lhs")
        profile, lhs = args.profile, args.lhs
    betas = np.linspace(args.beta_start, args.beta_stop, args.steps)
    rows = beta_sweep(betas, profile=profile, lhs=lhs)
    _emit(sweep_csv(rows), args.out)
    return 0


def cmd_lemma_check(args: argparse.Namespace) -> int:
    worst = lemma_grid_audit(args.resolution)
    _emit(
        f"resolution={args.resolution}\nmin_residual={fmt(worst)}\n",
        args.out,
    )
    return 0


def cmd_random_audit(args: argparse.Namespace) -> int:
    config = AuditConfig(
        dims=_parse_layout(args.layout),
        trials=args.trials,
        betas=_parse_betas(args.betas),
        master_seed=args.seed,
        optimizer=_optimizer_from_args(args),
        threads=args.threads,
        global_ancilla=args.global_ancilla,
        verdict_tol=args.tol,
    )
    _progress(f"auditing {config.trials} states on {args.layout}", args.quiet)
    records, summary = random_audit(config)
    _emit(audit_csv(records, len(config.dims) - 1), args.out)
    summary_stream = sys.stdout if args.out else sys.stderr
    for line in summary.as_lines():
        print(line, file=summary_stream)
    return 0


def cmd_tangle_audit(args: argparse.Namespace) -> int:
    _progress(f"tangle audit over {args.trials} three-qubit states", args.quiet)
    tol = args.tol if args.tol is not None else 1e-3
    records, summary = tangle_audit(
        args.trials,
        args.seed,
        optimizer=_optimizer_from_args(args),
        threads=args.threads,
        tol=tol,
    )
    _emit(tangle_csv(records), args.out)
    summary_stream = sys.stdout if args.out else sys.stderr
    for line in summary.as_lines():
        print(line, file=summary_stream)
    return 0


def cmd_compute_eoa(args: argparse.Namespace) -> int:
    state = load_state_file(args.input)
    rho = state.density() if isinstance(state, PureState) else state
    if rho.layout.n_subsystems < 2:
        raise LayoutError("the state needs at least 2 subsystems")
    rho = regroup_bipartite(rho, args.cut)
    estimate = assisted_measure(rho, args.measure, _optimizer_from_args(args))
    _emit("\n".join(_estimate_lines(estimate)) + "\n", args.out)
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    profile = as_profile(args.profile, "analytic")
    report = evaluate_bounds(
        args.lhs,
        profile,
        args.beta,
        k_override=args.k,
        sort=not args.no_sort,
        tol=args.tol,
    )
    _emit("\n".join(_report_lines(report)) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polygamy-lab",
        description="Weighted polygamy bounds on multipartite entanglement: "
        "fixtures, sweeps and randomized audits.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    common.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")

    optimizer = argparse.ArgumentParser(add_help=False)
    optimizer.add_argument("--restarts", type=int, default=30, help="optimizer restarts")
    optimizer.add_argument("--iterations", type=int, default=500, help="iterations per restart")
    optimizer.add_argument(
        "--ensemble-size", type=int, default=None, help="decomposition members (default rank^2)"
    )
    optimizer.add_argument(
        "--ensemble-cap", type=int, default=16, help="cap on the default ensemble size"
    )
    optimizer.add_argument(
        "--threads", type=int, default=None, help="worker threads (default $POLYGAMY_LAB_THREADS or 1)"
    )
    optimizer.add_argument(
        "--tol", type=float, default=None, help="verdict tolerance override"
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-wstate", parents=[common], help="bound report for the W fixture")
    p.add_argument("--beta", type=float, default=0.5, help="exponent in [0, 1]")
    p.set_defaults(func=cmd_verify_wstate)

    p = sub.add_parser("sweep-beta", parents=[common], help="bounds on a beta grid (CSV)")
    p.add_argument("--source", choices=("wstate", "profile"), default="wstate")
    p.add_argument("--profile", type=float, nargs="+", default=None, help="pairwise values")
    p.add_argument("--lhs", type=float, default=None, help="one-vs-rest value")
    p.add_argument("--beta-start", type=float, default=0.0)
    p.add_argument("--beta-stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_sweep_beta)

    p = sub.add_parser("lemma-check", parents=[common], help="scalar inequality grid audit")
    p.add_argument("--resolution", type=int, default=50, help="grid points per axis")
    p.set_defaults(func=cmd_lemma_check)

    p = sub.add_parser(
        "random-audit", parents=[common, optimizer], help="audit Haar-random pure states"
    )
    p.add_argument("--layout", type=str, default="2x2x2", help="subsystem dims, e.g. 2x2x3")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--betas", type=str, default="0.3,0.5,0.8", help="comma-separated betas")
    p.add_argument(
        "--global-ancilla",
        type=int,
        default=0,
        help="audit mixed global states purified with this ancilla dimension (0 = pure)",
    )
    p.set_defaults(func=cmd_random_audit)

    p = sub.add_parser(
        "tangle-audit", parents=[common, optimizer], help="tangle polygamy audit (3 qubits)"
    )
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_tangle_audit)

    p = sub.add_parser(
        "compute-eoa", parents=[common, optimizer], help="assisted measure of a state file"
    )
    p.add_argument("--input", type=str, required=True, help="JSON state file")
    p.add_argument("--measure", choices=("entropy", "tangle"), default="entropy")
    p.add_argument("--cut", type=int, default=1, help="subsystems on side A (first-vs-rest)")
    p.set_defaults(func=cmd_compute_eoa)

    p = sub.add_parser("bounds", parents=[common], help="bound report for an explicit profile")
    p.add_argument("--profile", type=float, nargs="+", required=True, help="pairwise values")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lhs", type=float, default=0.0)
    p.add_argument("--k", type=float, default=None, help="override the decay parameter")
    p.add_argument("--no-sort", action="store_true", help="keep the profile order as given")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance override")
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except PolygamyLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
