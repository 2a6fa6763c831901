"""Hot numeric kernels.

Everything here is written in numba-compatible NumPy and compiled when the
``numba`` backend is active (see :mod:`polygamy_lab._accel`).  Under the
``numpy`` backend the exact same functions run uncompiled.

The kernels operate on raw ``complex128`` arrays; validation and object
wrapping happen in the calling modules.
"""

from __future__ import annotations

import numpy as np

from ._accel import jit

_INV_LN2 = 1.4426950408889634  # 1 / ln 2

MEASURE_ENTROPY = 0
MEASURE_TANGLE = 1


@jit
def _h_bits(x):
    """-x log2 x for x in (0, 1); 0 at the endpoints (and for roundoff spill)."""
    if x <= 1e-300 or x >= 1.0:
        return 0.0
    return -x * np.log(x) * _INV_LN2


@jit
def _off_norm_sq(a):
    n = a.shape[0]
    s = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            s += apq.real * apq.real + apq.imag * apq.imag
    return 2.0 * s


@jit
def _rotate(a, v, p, q, track_vectors):
    # One two-sided Jacobi rotation zeroing a[p, q] of a Hermitian matrix.
    apq = a[p, q]
    aab = np.abs(apq)
    alpha = a[p, p].real
    gamma = a[q, q].real
    tau = (gamma - alpha) / (2.0 * aab)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = apq / aab
    phc = np.conj(ph)

    colp = a[:, p].copy()
    colq = a[:, q].copy()
    a[:, p] = c * colp - s * phc * colq
    a[:, q] = s * ph * colp + c * colq
    rowp = a[p, :].copy()
    rowq = a[q, :].copy()
    a[p, :] = c * rowp - s * ph * rowq
    a[q, :] = s * phc * rowp + c * rowq
    # the rotated pivot is zero and the diagonal real by construction
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    if track_vectors:
        vcolp = v[:, p].copy()
        vcolq = v[:, q].copy()
        v[:, p] = c * vcolp - s * phc * vcolq
        v[:, q] = s * ph * vcolp + c * vcolq


@jit
def jacobi_core(a, v, rel_tol, max_sweeps, track_vectors):
    """Cyclic Jacobi sweeps on a Hermitian matrix, in place.

    ``a`` converges to a real diagonal; when ``track_vectors`` is true the
    accumulated unitary lands in ``v`` (must come in as the identity), so
    that ``a_in = v @ diag(a_out) @ v†``.  Returns ``(off, sweeps, tol)``
    with ``off`` the final off-diagonal Frobenius norm and ``tol`` the
    absolute threshold used (``rel_tol`` scaled by ``max(1, ||a||_F)``).
    """
    n = a.shape[0]
    fro = 0.0
    for i in range(n):
        for j in range(n):
            x = a[i, j]
            fro += x.real * x.real + x.imag * x.imag
    fro = np.sqrt(fro)
    scale = fro if fro > 1.0 else 1.0
    tol = rel_tol * scale
    skip = tol / (2.0 * n)

    sweeps = 0
    off = np.sqrt(_off_norm_sq(a))
    while off > tol and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                if np.abs(a[p, q]) > skip:
                    _rotate(a, v, p, q, track_vectors)
        sweeps += 1
        off = np.sqrt(_off_norm_sq(a))
    return off, sweeps, tol


@jit
def _hermitian_eigenvalues(g, rel_tol, max_sweeps):
    """Eigenvalues (unsorted) of a small Hermitian matrix; ``g`` is clobbered."""
    dummy = np.zeros((1, 1), dtype=np.complex128)
    jacobi_core(g, dummy, rel_tol, max_sweeps, False)
    n = g.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = g[i, i].real
    return out


@jit
def ensemble_objective(b, u, d_a, d_b, measure):
    """Average pure-state measure of the ensemble induced by the isometry ``u``.

    ``b`` is the (d, r) matrix of sqrt-weighted eigenvectors of the target
    state and ``u`` an (m, r) matrix with orthonormal columns; member j is
    the unnormalized vector ``b @ u[j]`` with weight p_j its squared norm.
    ``measure`` selects entropy (bits) or tangle of the first-vs-rest cut
    ``d_a | d_b``; tangle requires ``d_a == 2``.
    """
    m = u.shape[0]
    total = 0.0
    for j in range(m):
        w = b @ u[j]
        if d_a == 2:
            g00 = 0.0
            g11 = 0.0
            g01 = 0.0 + 0.0j
            for t in range(d_b):
                w0 = w[t]
                w1 = w[d_b + t]
                g00 += w0.real * w0.real + w0.imag * w0.imag
                g11 += w1.real * w1.real + w1.imag * w1.imag
                g01 += w0 * np.conj(w1)
            p = g00 + g11
            if p < 1e-15:
                continue
            det = g00 * g11 - (g01.real * g01.real + g01.imag * g01.imag)
            if measure == MEASURE_TANGLE:
                prod = det / (p * p)
                if prod < 0.0:
                    prod = 0.0
                total += p * 4.0 * prod
            else:
                disc = p * p - 4.0 * det
                if disc < 0.0:
                    disc = 0.0
                root = np.sqrt(disc)
                mu0 = (p + root) / (2.0 * p)
                mu1 = (p - root) / (2.0 * p)
                total += p * (_h_bits(mu0) + _h_bits(mu1))
        else:
            p = 0.0
            for t in range(w.shape[0]):
                wt = w[t]
                p += wt.real * wt.real + wt.imag * wt.imag
            if p < 1e-15:
                continue
            g = np.empty((d_a, d_a), dtype=np.complex128)
            for r_ in range(d_a):
                for c_ in range(d_a):
                    acc = 0.0 + 0.0j
                    for t in range(d_b):
                        acc += w[r_ * d_b + t] * np.conj(w[c_ * d_b + t])
                    g[r_, c_] = acc / p
            mus = _hermitian_eigenvalues(g, 1e-13, 60)
            val = 0.0
            for i in range(d_a):
                val += _h_bits(mus[i])
            total += p * val
    return total


@jit
def hill_climb(
    b, u0, raw_dirs, d_a, d_b, measure, step0, window, min_improvement, step_floor, grow, shrink
):
    """Stochastic ascent over isometries: random anti-Hermitian rotations.

    Each iteration consumes one pre-drawn Gaussian matrix from ``raw_dirs``
    (shape (iterations, m, m)), turns it into a unit-norm anti-Hermitian
    direction A and proposes ``u' = cayley(step * A) @ u``, which stays
    exactly on the orthonormal-column manifold.  A rejected proposal is
    retried with the mirrored rotation (-A) before the step is halved, so
    every random direction is useful whichever way the gradient points.
    The climb stops early once the value has improved by less than
    ``min_improvement`` over ``window`` consecutive iterations.

    Returns ``(value, u, evaluations, converged)``.
    """
    m = u0.shape[0]
    max_iter = raw_dirs.shape[0]
    u = u0.copy()
    val = ensemble_objective(b, u, d_a, d_b, measure)

    eye = np.zeros((m, m), dtype=np.complex128)
    for i in range(m):
        eye[i, i] = 1.0

    step = step0
    anchor = val
    last_gain = 0
    evals = 0
    converged = False
    for it in range(max_iter):
        if it - last_gain >= window:
            converged = True
            break
        g = raw_dirs[it]
        a = g - g.conj().T
        na = np.sqrt(np.sum(np.abs(a) ** 2))
        if na < 1e-300:
            continue
        a = a * (0.5 * step / na)
        rot = np.linalg.solve(eye - a, eye + a)
        u_new = rot @ u
        v_new = ensemble_objective(b, u_new, d_a, d_b, measure)
        evals += 1
        if v_new <= val:
            # mirrored proposal: cayley(-sA) is the inverse rotation
            rot = np.linalg.solve(eye + a, eye - a)
            u_new = rot @ u
            v_new = ensemble_objective(b, u_new, d_a, d_b, measure)
            evals += 1
        if v_new > val:
            u = u_new
            val = v_new
            # ray extension: ride the winning rotation while it keeps paying
            for _ext in range(8):
                u_try = rot @ u
                v_try = ensemble_objective(b, u_try, d_a, d_b, measure)
                evals += 1
                if v_try > val:
                    u = u_try
                    val = v_try
                else:
                    break
            if val > anchor + min_improvement:
                anchor = val
                last_gain = it
            step = step * grow
            if step > 1.5:
                step = 1.5
        else:
            step = step * shrink
            if step < step_floor:
                step = step_floor
    return val, u, evals, converged
