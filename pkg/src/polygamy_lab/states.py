"""Multipartite state construction: layouts, fixtures, random sampling.

All state objects are immutable after construction and validate their own
invariants (normalization, Hermiticity, unit trace, positivity), so any
``PureState`` or ``DensityMatrix`` in circulation is well formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError, LayoutError, PositivityError, RangeError, SizeError
from .linalg import (
    MAX_TOTAL_DIM,
    HermitianEigen,
    as_complex_matrix,
    frobenius,
    hermitian_eig,
    normalize_keep,
    partial_trace_matrix,
)
from .rng import stream

_NORM_TOL = 1e-10
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-10
_EIG_FLOOR = -1e-10


def _default_labels(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("A",)
    return ("A",) + tuple(f"B{i}" for i in range(n - 1))


@dataclass(frozen=True)
class SystemLayout:
    """Ordered subsystem dimensions, each >= 2, with optional text labels."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise LayoutError("a layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise LayoutError(f"subsystem dimensions must be >= 2, got {dims}")
        labels = tuple(self.labels) if self.labels else _default_labels(len(dims))
        if len(labels) != len(dims):
            raise LayoutError(
                f"{len(labels)} labels for {len(dims)} subsystems"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def sublayout(self, keep: Iterable[int]) -> "SystemLayout":
        kept = normalize_keep(self.dims, keep)
        return SystemLayout(
            tuple(self.dims[i] for i in kept), tuple(self.labels[i] for i in kept)
        )

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on a :class:`SystemLayout`."""

    amplitudes: np.ndarray
    layout: SystemLayout

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.layout.dim:
            raise LayoutError(
                f"{amps.size} amplitudes for layout {self.layout} of dimension {self.layout.dim}"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise DomainError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _NORM_TOL:
            raise DomainError(f"state is not normalized: ||psi|| = {norm!r}")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    def density(self) -> "DensityMatrix":
        """Rank-one density matrix |psi><psi| on the same layout."""
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(mat, self.layout)

    def reduced(self, keep: Iterable[int]) -> "DensityMatrix":
        """Reduced state on the kept subsystems (via the density matrix)."""
        return self.density().partial_trace(keep)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator on a layout.

    The spectral decomposition computed during validation is cached and
    reused by entropy and roof-optimization routines.
    """

    matrix: np.ndarray
    layout: SystemLayout
    _eigen: HermitianEigen = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mat = as_complex_matrix(self.matrix)
        d = self.layout.dim
        if mat.shape != (d, d):
            raise LayoutError(f"matrix shape {mat.shape} does not match layout {self.layout}")
        defect = frobenius(mat - mat.conj().T)
        if defect > _HERM_TOL:
            raise DomainError(f"density matrix is not Hermitian: defect {defect:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise DomainError(f"density matrix trace is {tr!r}, expected 1")
        eigen = hermitian_eig(mat)
        if float(eigen.eigenvalues[0]) < _EIG_FLOOR:
            raise PositivityError(
                f"density matrix has eigenvalue {eigen.eigenvalues[0]:.3e} < {_EIG_FLOOR:.0e}"
            )
        object.__setattr__(self, "matrix", _freeze(mat))
        object.__setattr__(self, "_eigen", eigen)

    @property
    def eigen(self) -> HermitianEigen:
        return self._eigen

    @property
    def dim(self) -> int:
        return self.layout.dim

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def partial_trace(self, keep: Iterable[int]) -> "DensityMatrix":
        """Reduced state on ``keep``; trace preserving and positivity preserving."""
        reduced, _dims = partial_trace_matrix(self.matrix, self.layout.dims, keep)
        return DensityMatrix(reduced, self.layout.sublayout(keep))


def qubits(n: int) -> SystemLayout:
    """Layout of ``n`` qubits."""
    return SystemLayout((2,) * n)


def w_state(n: int) -> PureState:
    """Equal superposition of the ``n`` computational basis states of Hamming weight 1.

    For ``n = 3`` this is the usual three-qubit W state with amplitude
    ``1/sqrt(3)`` at basis indices 4, 2 and 1 (big-endian convention).
    """
    if n < 2:
        raise DomainError(f"w_state needs at least 2 qubits, got {n}")
    amps = np.zeros(2**n, dtype=np.complex128)
    for i in range(n):
        amps[2 ** (n - 1 - i)] = 1.0 / math.sqrt(n)
    return PureState(amps, qubits(n))


def bell_state() -> PureState:
    """The maximally entangled two-qubit state (|00> + |11>) / sqrt(2)."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = amps[3] = 1.0 / math.sqrt(2.0)
    return PureState(amps, qubits(2))


def _haar_amplitudes(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_random_pure(layout: SystemLayout, seed: int) -> PureState:
    """Haar-distributed pure state; identical seeds give bit-identical amplitudes."""
    return PureState(_haar_amplitudes(layout.dim, stream(seed)), layout)


def random_mixed(layout: SystemLayout, ancilla_dim: int, seed: int) -> DensityMatrix:
    """Partial trace over an ancilla of a Haar-random purification.

    The result has rank at most ``ancilla_dim``; ``ancilla_dim = 1`` yields a
    pure-state density matrix.
    """
    if ancilla_dim < 1:
        raise RangeError(f"ancilla dimension must be >= 1, got {ancilla_dim}")
    total = layout.dim * ancilla_dim
    if total > MAX_TOTAL_DIM:
        raise SizeError(f"purification dimension {total} exceeds the cap {MAX_TOTAL_DIM}")
    if ancilla_dim == 1:
        return haar_random_pure(layout, seed).density()
    extended = SystemLayout(layout.dims + (ancilla_dim,), layout.labels + ("ANC",))
    psi = haar_random_pure(extended, seed)
    return psi.reduced(range(layout.n_subsystems))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``rows x cols`` matrix with orthonormal columns."""
    if cols > rows:
        raise DomainError(f"isometry needs rows >= cols, got {rows} < {cols}")
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    diag = r.diagonal().copy()
    diag[diag == 0] = 1.0
    return np.ascontiguousarray(q * (diag / np.abs(diag)))


def regroup_bipartite(rho: DensityMatrix, cut: int) -> DensityMatrix:
    """Merge the first ``cut`` subsystems into one side and the rest into the other.

    The matrix is unchanged; only the layout interpretation (and therefore
    the first-vs-rest bipartition used downstream) moves.
    """
    n = rho.layout.n_subsystems
    if not 1 <= cut < n:
        raise LayoutError(f"cut must be in [1, {n - 1}], got {cut}")
    if cut == 1 and n == 2:
        return rho
    d_a = int(np.prod(rho.layout.dims[:cut]))
    d_b = int(np.prod(rho.layout.dims[cut:]))
    merged = SystemLayout((d_a, d_b), ("A", "B"))
    return DensityMatrix(rho.matrix, merged)
