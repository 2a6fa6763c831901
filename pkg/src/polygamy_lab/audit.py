"""End-to-end experiments: fixtures, sweeps, grid audits, randomized audits.

Verdict semantics ("audit contract"): pairwise assisted-entanglement terms
are optimizer estimates and therefore lower bounds on the true values, while
the left-hand side of every checked inequality is analytic.  A passing check
("verified") hence certifies the true inequality; a failing check on
estimated data proves nothing and is recorded as "inconclusive" after one
escalation retry.  No audit can emit a "violated" verdict.

Randomized audits are deterministic for a given configuration: every trial
draws from its own counter-based stream, so results do not depend on worker
count or scheduling.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .bounds import (
    INCONCLUSIVE,
    NOT_APPLICABLE,
    VERIFIED,
    BoundReport,
    EntanglementProfile,
    as_profile,
    evaluate_bounds,
)
from .errors import DomainError
from .measures import OptimizerOptions, assisted_measure, pure_entanglement, tangle_pure
from .rng import child_seed
from .states import (
    DensityMatrix,
    PureState,
    SystemLayout,
    haar_random_pure,
    random_mixed,
    regroup_bipartite,
    w_state,
)

THREADS_ENV_VAR = "POLYGAMY_LAB_THREADS"

#: Analytic one-vs-rest entanglement of the three-qubit W state, in bits.
WSTATE_LHS = math.log2(3.0) - 2.0 / 3.0
#: Analytic pairwise assisted entanglement of both W-state reduced pairs.
WSTATE_PAIR = 2.0 / 3.0
WSTATE_PROFILE = (WSTATE_PAIR, WSTATE_PAIR)

_TANGLE_TOL = 1e-3


def wstate_case(beta: float) -> BoundReport:
    """Bound report for the three-qubit W fixture at a given beta.

    Uses the analytic values lhs = log2(3) - 2/3 and profile (2/3, 2/3); the
    optimal k is 1.
    """
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta}")
    return evaluate_bounds(WSTATE_LHS, as_profile(WSTATE_PROFILE, "analytic"), beta)


@dataclass(frozen=True)
class SweepRow:
    """One beta grid point of a bound sweep."""

    beta: float
    lhs_pow: float
    bound_thm1: float
    bound_kim: float
    bound_thm2: float
    k_used: float

    @classmethod
    def from_report(cls, report: BoundReport) -> "SweepRow":
        return cls(
            beta=report.beta,
            lhs_pow=report.lhs_pow,
            bound_thm1=report.bound_thm1,
            bound_kim=report.bound_kim,
            bound_thm2=report.bound_thm2,
            k_used=report.k_used,
        )


def beta_sweep(
    betas: Sequence[float],
    profile: Optional[Sequence[float]] = None,
    lhs: Optional[float] = None,
) -> list[SweepRow]:
    """Evaluate the bounds on a strictly increasing beta grid in [0, 1].

    Defaults to the W-state fixture; pass ``profile`` and ``lhs`` together
    for a custom source.
    """
    grid = [float(b) for b in betas]
    if not grid:
        raise DomainError("beta grid must not be empty")
    if any(not 0.0 <= b <= 1.0 for b in grid):
        raise DomainError("beta grid values must lie in [0, 1]")
    if any(b2 <= b1 for b1, b2 in zip(grid[:-1], grid[1:])):
        raise DomainError("beta grid must be strictly increasing")
    if (profile is None) != (lhs is None):
        raise DomainError("custom sweeps need both profile and lhs")
    if profile is None:
        profile, lhs = WSTATE_PROFILE, WSTATE_LHS
    prof = as_profile(profile)
    return [SweepRow.from_report(evaluate_bounds(float(lhs), prof, b)) for b in grid]


def lemma_grid_audit(resolution: int) -> float:
    """Minimum of the scalar-inequality residual over an (x, k, beta) grid.

    The grid covers k in (0, 1], x in [0, k] and beta in [0, 1] with
    ``resolution`` points per axis (the x axis is rescaled per k, so the
    x = k equality locus is always sampled).  A correct implementation
    returns a value >= -1e-12.
    """
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    betas = np.linspace(0.0, 1.0, resolution)
    ks = np.linspace(0.0, 1.0, resolution + 1)[1:]
    worst = np.inf
    for k in ks:
        xs = np.linspace(0.0, k, resolution)[:, None]
        factor = ((1.0 + k) ** betas - 1.0) / k**betas
        x_pow = np.where(xs == 0.0, 0.0, xs**betas[None, :])
        residual = 1.0 + factor[None, :] * x_pow - (1.0 + xs) ** betas[None, :]
        worst = min(worst, float(residual.min()))
    return worst


# ---------------------------------------------------------------------------
# randomized polygamy audit
# ---------------------------------------------------------------------------

# purpose tags for per-trial stream derivation
_TAG_STATE = 0
_TAG_ESTIMATE = 10
_TAG_ESCALATE = 20
_TAG_LHS = 30


@dataclass(frozen=True)
class AuditConfig:
    """Configuration of a randomized polygamy audit.

    With ``global_ancilla = 0`` (the default) every trial audits a globally
    pure state, so the left-hand side is analytic and only the right-hand
    side carries optimizer error.  A positive value switches to mixed
    global states obtained by tracing an ancilla of that dimension out of
    a Haar purification; both sides are then estimates and verdicts are
    strictly weaker.
    """

    dims: tuple[int, ...] = (2, 2, 2)
    trials: int = 200
    betas: tuple[float, ...] = (0.3, 0.5, 0.8)
    master_seed: int = 42
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    escalation_factor: int = 4
    threads: Optional[int] = None
    global_ancilla: int = 0
    verdict_tol: Optional[float] = None

    def __post_init__(self):
        if self.trials < 0:
            raise DomainError("trials must be >= 0")
        if not self.betas:
            raise DomainError("at least one beta value is required")
        if any(not 0.0 <= b <= 1.0 for b in self.betas):
            raise DomainError("beta values must lie in [0, 1]")
        if self.escalation_factor < 1:
            raise DomainError("escalation_factor must be >= 1")
        if self.global_ancilla < 0:
            raise DomainError("global_ancilla must be >= 0")


@dataclass(frozen=True)
class AuditRecord:
    """Outcome of one audited state: per-beta reports plus provenance."""

    trial: int
    seed: int
    layout: str
    lhs: float
    profile: EntanglementProfile
    reports: tuple[BoundReport, ...]
    escalated: bool
    runtime_ms: float

    @property
    def verdict(self) -> str:
        """Worst verdict over the betas (inconclusive > not_applicable > verified)."""
        verdicts = {r.verdict for r in self.reports}
        if INCONCLUSIVE in verdicts:
            return INCONCLUSIVE
        if NOT_APPLICABLE in verdicts:
            return NOT_APPLICABLE
        return VERIFIED


@dataclass(frozen=True)
class AuditSummary:
    """Aggregate verdict counts; ``counts`` always sum to ``trials``.

    ``max_chain_residual`` is the largest ``sum_pow - bound_thm1`` observed
    where the decay condition held (a pure-arithmetic identity on the
    profile, expected <= 1e-12 regardless of estimation error).
    """

    trials: int
    verified: int
    inconclusive: int
    not_applicable: int
    max_chain_residual: float
    escalations: int

    def as_lines(self) -> list[str]:
        return [
            f"trials={self.trials}",
            f"verified={self.verified}",
            f"inconclusive={self.inconclusive}",
            f"not_applicable={self.not_applicable}",
            f"max_chain_residual={fmt(self.max_chain_residual)}",
            f"escalations={self.escalations}",
        ]


def _estimate_profile(
    rho: DensityMatrix, opts: OptimizerOptions, master_seed: int, trial: int, tag: int
) -> list[float]:
    n_pairs = rho.layout.n_subsystems - 1
    values = []
    for j in range(n_pairs):
        pair_opts = replace(opts, seed=child_seed(master_seed, trial, tag + j))
        reduced = rho.partial_trace((0, 1 + j))
        values.append(assisted_measure(reduced, "entropy", pair_opts).value)
    return values


def _audit_global_state(
    rho: DensityMatrix,
    lhs: float,
    betas: Sequence[float],
    optimizer: OptimizerOptions,
    master_seed: int,
    trial: int,
    escalation_factor: int,
    tol: Optional[float],
) -> AuditRecord:
    start = time.perf_counter()
    estimates = _estimate_profile(rho, optimizer, master_seed, trial, _TAG_ESTIMATE)
    profile = as_profile(estimates, "estimated")
    reports = tuple(evaluate_bounds(lhs, profile, b, tol=tol) for b in betas)

    escalated = False
    if any(r.verdict != VERIFIED for r in reports) and escalation_factor > 1:
        escalated = True
        boosted = _estimate_profile(
            rho, optimizer.escalate(escalation_factor), master_seed, trial, _TAG_ESCALATE
        )
        estimates = [max(a, b) for a, b in zip(estimates, boosted)]
        profile = as_profile(estimates, "estimated")
        reports = tuple(evaluate_bounds(lhs, profile, b, tol=tol) for b in betas)

    runtime_ms = (time.perf_counter() - start) * 1e3
    return AuditRecord(
        trial=trial,
        seed=child_seed(master_seed, trial, _TAG_STATE),
        layout="x".join(str(d) for d in rho.layout.dims),
        lhs=lhs,
        profile=profile,
        reports=reports,
        escalated=escalated,
        runtime_ms=runtime_ms,
    )


def audit_pure_state(
    psi: PureState,
    betas: Sequence[float],
    optimizer: OptimizerOptions,
    master_seed: int,
    trial: int = 0,
    escalation_factor: int = 4,
    tol: Optional[float] = None,
) -> AuditRecord:
    """Audit one global pure state against the weighted polygamy bounds.

    The left-hand side is the analytic one-vs-rest entropy; the pairwise
    terms are roof-optimizer estimates.  If any beta fails to verify, the
    estimates are recomputed once at ``escalation_factor`` times the
    restarts (keeping the elementwise maximum, which is still a valid lower
    bound) before the verdicts are final.
    """
    lhs = pure_entanglement(psi, (0,))
    return _audit_global_state(
        psi.density(), lhs, betas, optimizer, master_seed, trial, escalation_factor, tol
    )


def audit_mixed_state(
    rho: DensityMatrix,
    betas: Sequence[float],
    optimizer: OptimizerOptions,
    master_seed: int,
    trial: int = 0,
    escalation_factor: int = 4,
    tol: Optional[float] = None,
) -> AuditRecord:
    """Audit one global mixed state; the left-hand side is estimated too.

    The one-vs-rest term is itself a roof-optimizer lower bound here, so a
    passing check no longer certifies the true inequality; this mode exists
    for exploration and is off by default in :func:`random_audit`.
    """
    lhs_opts = replace(optimizer, seed=child_seed(master_seed, trial, _TAG_LHS))
    lhs = assisted_measure(regroup_bipartite(rho, 1), "entropy", lhs_opts).value
    return _audit_global_state(
        rho, lhs, betas, optimizer, master_seed, trial, escalation_factor, tol
    )


def resolve_threads(requested: Optional[int], trials: int) -> int:
    """Worker count: explicit request, else the environment cap, else 1."""
    if requested is None:
        env = os.environ.get(THREADS_ENV_VAR, "").strip()
        if env:
            try:
                requested = int(env)
            except ValueError as exc:
                raise DomainError(f"{THREADS_ENV_VAR}={env!r} is not an integer") from exc
        else:
            requested = 1
    return max(1, min(int(requested), max(trials, 1)))


def _run_trials(worker: Callable[[int], object], trials: int, threads: int) -> list:
    if threads <= 1:
        return [worker(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(trials)))


def summarize(records: Iterable, trials: int) -> AuditSummary:
    """Fold audit records into an :class:`AuditSummary`."""
    records = list(records)
    verified = sum(1 for r in records if r.verdict == VERIFIED)
    inconclusive = sum(1 for r in records if r.verdict == INCONCLUSIVE)
    not_applicable = sum(1 for r in records if r.verdict == NOT_APPLICABLE)
    chain = 0.0
    seen = False
    for record in records:
        for report in getattr(record, "reports", ()):
            if report.cond_thm1:
                value = report.sum_pow - report.bound_thm1
                chain = value if not seen else max(chain, value)
                seen = True
    escalations = sum(1 for r in records if r.escalated)
    return AuditSummary(
        trials=trials,
        verified=verified,
        inconclusive=inconclusive,
        not_applicable=not_applicable,
        max_chain_residual=chain if seen else 0.0,
        escalations=escalations,
    )


def random_audit(config: AuditConfig) -> tuple[list[AuditRecord], AuditSummary]:
    """Audit Haar-random global pure states on the configured layout.

    Trial i samples its state from the stream keyed by
    ``(master_seed, i, 0)`` and is wholly independent of the other trials;
    records come back in trial order whatever the worker count.
    """
    layout = SystemLayout(config.dims)

    def worker(trial: int) -> AuditRecord:
        state_seed = child_seed(config.master_seed, trial, _TAG_STATE)
        if config.global_ancilla > 0:
            rho = random_mixed(layout, config.global_ancilla, state_seed)
            return audit_mixed_state(
                rho,
                config.betas,
                config.optimizer,
                config.master_seed,
                trial=trial,
                escalation_factor=config.escalation_factor,
                tol=config.verdict_tol,
            )
        psi = haar_random_pure(layout, state_seed)
        return audit_pure_state(
            psi,
            config.betas,
            config.optimizer,
            config.master_seed,
            trial=trial,
            escalation_factor=config.escalation_factor,
            tol=config.verdict_tol,
        )

    threads = resolve_threads(config.threads, config.trials)
    records = _run_trials(worker, config.trials, threads)
    return records, summarize(records, config.trials)


# ---------------------------------------------------------------------------
# tangle polygamy audit (three qubits)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangleRecord:
    """One tangle-polygamy check: tau(A|BC) <= tau_a(AB) + tau_a(AC) + tol."""

    trial: int
    seed: int
    lhs: float
    estimates: tuple[float, float]
    escalated: bool
    verdict: str
    runtime_ms: float

    @property
    def residual(self) -> float:
        return self.estimates[0] + self.estimates[1] - self.lhs


def tangle_check(
    psi: PureState,
    optimizer: OptimizerOptions,
    master_seed: int,
    trial: int = 0,
    escalation_factor: int = 4,
    tol: float = _TANGLE_TOL,
) -> TangleRecord:
    """Tangle polygamy audit of a single three-qubit pure state."""
    if psi.layout.dims != (2, 2, 2):
        raise DomainError("tangle audit is defined for three-qubit states only")
    start = time.perf_counter()
    lhs = tangle_pure(psi, (0,))
    rho = psi.density()

    def estimate(tag: int) -> list[float]:
        base = optimizer if tag == _TAG_ESTIMATE else optimizer.escalate(escalation_factor)
        values = []
        for j in range(2):
            opts = replace(base, seed=child_seed(master_seed, trial, tag + j))
            values.append(assisted_measure(rho.partial_trace((0, 1 + j)), "tangle", opts).value)
        return values

    estimates = estimate(_TAG_ESTIMATE)
    escalated = False
    if sum(estimates) + tol < lhs and escalation_factor > 1:
        escalated = True
        boosted = estimate(_TAG_ESCALATE)
        estimates = [max(a, b) for a, b in zip(estimates, boosted)]
    verdict = VERIFIED if lhs <= sum(estimates) + tol else INCONCLUSIVE
    runtime_ms = (time.perf_counter() - start) * 1e3
    return TangleRecord(
        trial=trial,
        seed=child_seed(master_seed, trial, _TAG_STATE),
        lhs=lhs,
        estimates=(estimates[0], estimates[1]),
        escalated=escalated,
        verdict=verdict,
        runtime_ms=runtime_ms,
    )


def tangle_audit(
    trials: int,
    master_seed: int,
    optimizer: Optional[OptimizerOptions] = None,
    threads: Optional[int] = None,
    tol: float = _TANGLE_TOL,
) -> tuple[list[TangleRecord], AuditSummary]:
    """Tangle polygamy audit over Haar-random three-qubit pure states."""
    if trials < 0:
        raise DomainError("trials must be >= 0")
    if optimizer is None:
        optimizer = OptimizerOptions()
    layout = SystemLayout((2, 2, 2))

    def worker(trial: int) -> TangleRecord:
        psi = haar_random_pure(layout, child_seed(master_seed, trial, _TAG_STATE))
        return tangle_check(psi, optimizer, master_seed, trial=trial, tol=tol)

    records = _run_trials(worker, trials, resolve_threads(threads, trials))
    return records, summarize(records, trials)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------


def fmt(x: float) -> str:
    """Locale-independent numeric formatting with 12 significant digits."""
    return format(float(x), ".12g")


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    lines = ["beta,lhs_pow,bound_thm1,bound_kim,bound_thm2,k_used"]
    for r in rows:
        lines.append(
            ",".join(
                fmt(v)
                for v in (r.beta, r.lhs_pow, r.bound_thm1, r.bound_kim, r.bound_thm2, r.k_used)
            )
        )
    return "\n".join(lines) + "\n"


def audit_csv(records: Iterable[AuditRecord], n_terms: int) -> str:
    header = ["trial", "seed", "lhs"] + [f"E{j}" for j in range(n_terms)] + [
        "beta",
        "verdict",
        "residual",
    ]
    lines = [",".join(header)]
    for record in records:
        for report in record.reports:
            row = [str(record.trial), str(record.seed), fmt(record.lhs)]
            row += [fmt(v) for v in record.profile.values]
            row += [fmt(report.beta), report.verdict, fmt(report.residual)]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def tangle_csv(records: Iterable[TangleRecord]) -> str:
    header = "trial,seed,lhs,E0,E1,beta,verdict,residual"
    lines = [header]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.trial),
                    str(r.seed),
                    fmt(r.lhs),
                    fmt(r.estimates[0]),
                    fmt(r.estimates[1]),
                    fmt(1.0),
                    r.verdict,
                    fmt(r.residual),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def wstate_audit_record(
    betas: Sequence[float] = (0.5,),
    optimizer: Optional[OptimizerOptions] = None,
    master_seed: int = 42,
) -> AuditRecord:
    """Audit record for an injected W-state trial (fixture, not sampled)."""
    if optimizer is None:
        optimizer = OptimizerOptions()
    return audit_pure_state(w_state(3), betas, optimizer, master_seed, trial=0)
