"""Entanglement quantifiers and the assisted (concave-roof) optimizer.

Entropies are reported in bits.  The roof optimizer maximizes the average
pure-state measure over decompositions of a mixed state; every value it
returns is certified by an explicit witness decomposition and is therefore
a sound lower bound on the true assisted measure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Literal

import numpy as np

from . import kernels
from .errors import DomainError, LayoutError, PositivityError
from .linalg import frobenius, hermitian_eig
from .rng import stream
from .states import DensityMatrix, PureState, haar_isometry

_EIG_CLAMP = -1e-10
_EIG_HARD = -1e-8
_BASIS_CUTOFF = 1e-12
_MEMBER_CUTOFF = 1e-12

Measure = Literal["entropy", "tangle"]
_MEASURE_FLAGS = {"entropy": kernels.MEASURE_ENTROPY, "tangle": kernels.MEASURE_TANGLE}


def entropy_of_eigenvalues(eigvals: np.ndarray) -> float:
    """Shannon entropy (bits) of a spectrum, clamping roundoff negatives.

    Eigenvalues in ``[-1e-10, 0]`` count as zero; anything below ``-1e-8``
    raises :class:`PositivityError`.
    """
    w = np.asarray(eigvals, dtype=float)
    low = float(w.min()) if w.size else 0.0
    if low < _EIG_HARD:
        raise PositivityError(f"spectrum has eigenvalue {low:.3e} < {_EIG_HARD:.0e}")
    w = np.clip(w, 0.0, None)
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy of a density matrix, in bits."""
    return entropy_of_eigenvalues(rho.eigen.eigenvalues)


def _split_sides(psi: PureState, side_a: Iterable[int]) -> tuple[np.ndarray, int, int]:
    """Amplitude matrix of ``psi`` with the ``side_a`` subsystems as rows."""
    dims = psi.layout.dims
    n = len(dims)
    side = sorted(set(int(i) for i in side_a))
    if not side:
        raise LayoutError("side_a must name at least one subsystem")
    if side[0] < 0 or side[-1] >= n:
        raise LayoutError(f"subsystem index out of range for {n} subsystems: {side}")
    if len(side) == n:
        raise LayoutError("side_a must be a strict subset of the subsystems")
    rest = [i for i in range(n) if i not in side]
    d_a = int(np.prod([dims[i] for i in side]))
    d_b = int(np.prod([dims[i] for i in rest]))
    tensor = psi.amplitudes.reshape(dims)
    mat = tensor.transpose(side + rest).reshape(d_a, d_b)
    return np.ascontiguousarray(mat), d_a, d_b


def pure_entanglement(psi: PureState, side_a: Iterable[int]) -> float:
    """Entanglement entropy of a pure state across the cut ``side_a | rest``.

    Equal to the von Neumann entropy of the reduced state on either side of
    the cut, so it is symmetric under complementing ``side_a``.
    """
    mat, d_a, d_b = _split_sides(psi, side_a)
    gram = mat @ mat.conj().T if d_a <= d_b else mat.conj().T @ mat
    return entropy_of_eigenvalues(hermitian_eig(gram).eigenvalues)


def tangle_pure(psi: PureState, side_a: Iterable[int]) -> float:
    """Tangle 2 (1 - Tr rho_A^2) of a pure state; the cut must isolate a qubit."""
    mat, d_a, _d_b = _split_sides(psi, side_a)
    if d_a != 2:
        raise DomainError(f"tangle needs a dimension-2 reduced system, got {d_a}")
    gram = mat @ mat.conj().T
    return float(2.0 * (1.0 - np.sum(np.abs(gram) ** 2)))


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Weighted pure-state ensemble {p_i, |psi_i>} realizing a mixed state."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        if not self.members:
            raise DomainError("a decomposition needs at least one member")
        weights = np.array([p for p, _ in self.members], dtype=float)
        if np.any(weights <= 0.0):
            raise DomainError("decomposition weights must be strictly positive")
        if abs(float(weights.sum()) - 1.0) > 1e-10:
            raise DomainError(f"decomposition weights sum to {weights.sum()!r}, expected 1")
        first = self.members[0][1].layout
        if any(s.layout.dims != first.dims for _, s in self.members):
            raise LayoutError("all decomposition members must share one layout")
        object.__setattr__(self, "members", tuple((float(p), s) for p, s in self.members))

    def __len__(self) -> int:
        return len(self.members)

    def reconstruct(self) -> np.ndarray:
        """Sum p_i |psi_i><psi_i| as a dense matrix."""
        dim = self.members[0][1].layout.dim
        out = np.zeros((dim, dim), dtype=np.complex128)
        for p, s in self.members:
            out += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return out

    def residual_against(self, rho: DensityMatrix) -> float:
        """Frobenius distance between the reconstruction and ``rho``."""
        return frobenius(self.reconstruct() - rho.matrix)

    def average(self, func) -> float:
        """Weighted average of ``func`` over the member states."""
        return float(sum(p * func(s) for p, s in self.members))


@dataclass(frozen=True)
class OptimizerOptions:
    """Settings for the multi-start roof ascent.

    ``ensemble_size`` defaults to ``min(rank**2, ensemble_cap)`` members.
    Restart ``i`` draws from an independent stream keyed by ``(seed, i)``,
    so adding restarts never changes the earlier ones.
    """

    restarts: int = 30
    iterations: int = 1000
    ensemble_size: int | None = None
    ensemble_cap: int = 16
    seed: int = 42
    step0: float = 0.5
    window: int = 50
    min_improvement: float = 1e-9
    step_floor: float = 1e-7
    step_grow: float = 1.25
    step_shrink: float = 0.5

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.iterations < 0:
            raise DomainError("iterations must be >= 0")
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise DomainError("ensemble_size must be >= 1")

    def escalate(self, factor: int) -> "OptimizerOptions":
        """Same settings with ``factor`` times the restarts."""
        return replace(self, restarts=self.restarts * factor)


@dataclass(frozen=True)
class OptimizerDiagnostics:
    restarts_used: int
    iterations: int
    converged: bool
    best_restart: int


@dataclass(frozen=True, eq=False)
class EoaEstimate:
    """Certified lower bound on an assisted measure, with its witness."""

    value: float
    witness: Decomposition
    diagnostics: OptimizerDiagnostics


def _roof_basis(rho: DensityMatrix) -> np.ndarray:
    """Columns sqrt(lambda_i) v_i over the numerically nonzero spectrum."""
    eigen = rho.eigen
    mask = eigen.eigenvalues > _BASIS_CUTOFF
    lam = eigen.eigenvalues[mask]
    return np.ascontiguousarray(eigen.eigenvectors[:, mask] * np.sqrt(lam))


def rank_of(rho: DensityMatrix, cutoff: float = _BASIS_CUTOFF) -> int:
    """Numerical rank: eigenvalues above ``cutoff``."""
    return int(np.sum(rho.eigen.eigenvalues > cutoff))


def _members_from_isometry(
    basis: np.ndarray, u: np.ndarray, layout
) -> tuple[tuple[float, PureState], ...]:
    members = []
    for j in range(u.shape[0]):
        w = basis @ u[j]
        p = float(np.vdot(w, w).real)
        if p <= _MEMBER_CUTOFF:
            continue
        members.append((p, PureState(w / np.sqrt(p), layout)))
    return tuple(members)


def random_decomposition(rho: DensityMatrix, size: int, seed: int) -> Decomposition:
    """Haar-random decomposition of ``rho`` with at most ``size`` members.

    Members are |psi_j> ∝ sum_i U_{ji} sqrt(lambda_i) |v_i> for a Haar
    isometry ``U`` with orthonormal columns; ``size`` must be at least the
    rank of ``rho``.
    """
    basis = _roof_basis(rho)
    r = basis.shape[1]
    if size < r:
        raise DomainError(f"need at least rank={r} members, got {size}")
    if r == 1:
        # every member would be the same state up to phase; collapse to p = 1
        u = np.eye(1, dtype=np.complex128)
    else:
        u = haar_isometry(size, r, stream(seed))
    return Decomposition(_members_from_isometry(basis, u, rho.layout))


def _identity_start(m: int, r: int) -> np.ndarray:
    u = np.zeros((m, r), dtype=np.complex128)
    for i in range(r):
        u[i, i] = 1.0
    return u


def _member_measure(measure: Measure):
    if measure == "entropy":
        return lambda s: pure_entanglement(s, (0,))
    return lambda s: tangle_pure(s, (0,))


def assisted_measure(
    rho: DensityMatrix,
    measure: Measure = "entropy",
    opts: OptimizerOptions | None = None,
) -> EoaEstimate:
    """Maximize the average pure-state ``measure`` over decompositions of ``rho``.

    The cut is first-vs-rest on the layout of ``rho``.  Multi-start
    stochastic ascent over decomposition isometries; the returned value is
    recomputed from the witness ensemble, hence always feasible.  Failure to
    converge is reported through the diagnostics, never raised: whatever the
    budget, the result is a valid lower bound.
    """
    if opts is None:
        opts = OptimizerOptions()
    if measure not in _MEASURE_FLAGS:
        raise DomainError(f"unknown measure {measure!r}")
    dims = rho.layout.dims
    if len(dims) < 2:
        raise LayoutError("assisted_measure needs a layout with at least 2 subsystems")
    d_a = dims[0]
    d_b = int(np.prod(dims[1:]))
    if measure == "tangle" and d_a != 2:
        raise DomainError("tangle of assistance needs a qubit on side A")
    flag = _MEASURE_FLAGS[measure]

    basis = _roof_basis(rho)
    r = basis.shape[1]
    if opts.ensemble_size is not None and opts.ensemble_size < r:
        raise DomainError(f"ensemble_size must be >= rank={r}")
    m = opts.ensemble_size if opts.ensemble_size is not None else min(r * r, opts.ensemble_cap)
    m = max(m, r)

    member_fn = _member_measure(measure)
    layout = rho.layout

    if m == 1:
        witness = Decomposition(_members_from_isometry(basis, _identity_start(1, 1), layout))
        value = witness.average(member_fn)
        return EoaEstimate(value, witness, OptimizerDiagnostics(1, 0, True, 0))

    best_val = -np.inf
    best_u = None
    best_restart = 0
    best_converged = False
    total_evals = 0
    for i in range(opts.restarts):
        rng = stream(opts.seed, i)
        u0 = _identity_start(m, r) if i == 0 else haar_isometry(m, r, rng)
        raw = rng.standard_normal((opts.iterations, m, m)) + 1j * rng.standard_normal(
            (opts.iterations, m, m)
        )
        val, u, evals, converged = kernels.hill_climb(
            basis,
            u0,
            raw,
            d_a,
            d_b,
            flag,
            opts.step0,
            opts.window,
            opts.min_improvement,
            opts.step_floor,
            opts.step_grow,
            opts.step_shrink,
        )
        total_evals += int(evals)
        if val > best_val:
            best_val = float(val)
            best_u = u
            best_restart = i
            best_converged = bool(converged)

    witness = Decomposition(_members_from_isometry(basis, best_u, layout))
    value = witness.average(member_fn)
    diagnostics = OptimizerDiagnostics(opts.restarts, total_evals, best_converged, best_restart)
    return EoaEstimate(value, witness, diagnostics)
