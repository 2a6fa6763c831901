"""Dense complex linear algebra for small multipartite systems.

Matrices are plain ``numpy.ndarray`` objects with ``complex128`` entries.
The eigensolver is a cyclic Jacobi iteration (deterministic, dependency-free
and accurate at the dimensions this package targets, roughly <= 64); tensor
products and partial traces are index bookkeeping on top of NumPy.

Subsystem convention is big-endian throughout: subsystem 0 is the most
significant tensor factor, so the basis index of |b0 b1 ... b_{n-1}> is the
mixed-radix number with digit b0 leading.  This matches NumPy's C-order
``reshape``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, LayoutError, ShapeError, SizeError

#: Hard cap on the total Hilbert-space dimension of constructed operators.
MAX_TOTAL_DIM = 4096

_HERMITICITY_TOL = 1e-8
_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


def as_complex_matrix(values: object) -> np.ndarray:
    """Coerce ``values`` to a 2-D ``complex128`` array and validate finiteness."""
    arr = np.array(values, dtype=np.complex128, order="C")
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise DomainError("matrix entries must be finite")
    return arr


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def tensor_product(a: np.ndarray, b: np.ndarray, max_dim: int = MAX_TOTAL_DIM) -> np.ndarray:
    """Kronecker product with ``a`` as the most significant factor.

    Raises
    ------
    SizeError
        If either output dimension would exceed ``max_dim``.
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise SizeError(
            f"tensor product of shape ({rows}, {cols}) exceeds the dimension cap {max_dim}"
        )
    return np.kron(a, b)


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral decomposition ``m = V diag(w) V†`` with ``w`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(m: object, max_sweeps: int = _JACOBI_MAX_SWEEPS) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Inputs within ``1e-8`` of Hermitian (Frobenius) are symmetrized silently;
    anything further is rejected.  The iteration drives the off-diagonal
    Frobenius norm below ``1e-12`` (relative to ``max(1, ||m||_F)``) within
    at most ``max_sweeps`` sweeps and is deterministic for identical input.

    Raises
    ------
    ShapeError
        Non-square input.
    DomainError
        Input is too far from Hermitian.
    ConvergenceError
        The sweep cap was exhausted; carries the residual off-diagonal norm.
    """
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"eigendecomposition needs a square matrix, got {a.shape}")
    defect = frobenius(a - a.conj().T)
    if defect > _HERMITICITY_TOL:
        raise DomainError(
            f"matrix is not Hermitian: ||m - m†||_F = {defect:.3e} > {_HERMITICITY_TOL:.0e}"
        )
    n = a.shape[0]
    work = np.ascontiguousarray((a + a.conj().T) * 0.5)
    vectors = np.eye(n, dtype=np.complex128)
    off, _sweeps, tol = kernels.jacobi_core(work, vectors, _JACOBI_TOL, max_sweeps, True)
    if off > tol:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge within {max_sweeps} sweeps", off
        )
    w = work.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    w = np.ascontiguousarray(w[order])
    v = np.ascontiguousarray(vectors[:, order])
    w.setflags(write=False)
    v.setflags(write=False)
    return HermitianEigen(w, v)


def normalize_keep(dims: Sequence[int], keep: Iterable[int]) -> tuple[int, ...]:
    """Validate ``keep`` as a nonempty subset of subsystem indices, in layout order."""
    n = len(dims)
    kept = sorted(set(int(i) for i in keep))
    if not kept:
        raise LayoutError("keep must name at least one subsystem")
    if kept[0] < 0 or kept[-1] >= n:
        raise LayoutError(f"subsystem index out of range for {n} subsystems: {kept}")
    return tuple(kept)


def partial_trace_matrix(
    mat: np.ndarray, dims: Sequence[int], keep: Iterable[int]
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Trace out every subsystem not in ``keep``.

    ``mat`` must be square with dimension ``prod(dims)``.  Returns the
    reduced matrix together with the kept dimensions, in their original
    relative order.
    """
    dims = tuple(int(d) for d in dims)
    kept = normalize_keep(dims, keep)
    total = int(np.prod(dims))
    mat = as_complex_matrix(mat)
    if mat.shape != (total, total):
        raise LayoutError(f"matrix shape {mat.shape} does not match dims {dims}")
    n = len(dims)
    if len(kept) == n:
        return mat.copy(), dims

    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = list(letters[:n])
    col = []
    next_letter = n
    for i in range(n):
        if i in kept:
            col.append(letters[next_letter])
            next_letter += 1
        else:
            col.append(row[i])  # repeated index: traced out
    out = "".join(row[i] for i in kept) + "".join(col[i] for i in kept)
    subscript = f"{''.join(row)}{''.join(col)}->{out}"
    tensor = mat.reshape(dims + dims)
    reduced = np.einsum(subscript, tensor)
    kept_dims = tuple(dims[i] for i in kept)
    d_keep = int(np.prod(kept_dims))
    return np.ascontiguousarray(reduced.reshape(d_keep, d_keep)), kept_dims
