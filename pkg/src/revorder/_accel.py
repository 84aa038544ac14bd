"""Hot inner loops: Jacobi column rotations and completely pivoted Gauss-Jordan elimination.

Each kernel exists twice. The ``*_loops`` variants are plain scalar loops that
numba compiles in nopython mode; the ``*_numpy`` variants do the same work with
vectorized column/row updates. The dispatch names ``jacobi_sweeps`` and
``pivoted_rref`` point at the compiled loops unless numba is missing or the
environment variable ``REVORDER_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.
"""
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("REVORDER_DISABLE_NUMBA", "")
USING_NUMBA = numba is not None and _flag in ("", "0")

_TINY = 2.0 ** -400
_UP = 2.0 ** 600
_BIG = 1e150


def _jacobi_sweeps_loops(G, V, tol, max_sweeps):
    m, n = G.shape
    sweeps = 0
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = G[0, p] * 0.0
                for i in range(m):
                    gp = G[i, p]
                    gq = G[i, q]
                    alpha += gp.real * gp.real + gp.imag * gp.imag
                    beta += gq.real * gq.real + gq.imag * gq.imag
                    gamma += gp.conjugate() * gq
                g = abs(gamma)
                if g == 0.0 or g <= tol * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                rotated = True
                if g < _TINY:
                    # rescale before the complex division, whose internals underflow here
                    w = gamma * _UP
                    ph = (w / abs(w)).conjugate()
                else:
                    ph = (gamma / g).conjugate()
                d = beta - alpha
                if abs(d) > _BIG * g:
                    # t -> 1 / (2 zeta) when the columns are far apart in norm
                    t = g / d
                else:
                    zeta = d / (2.0 * g)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + math.hypot(1.0, zeta))
                    else:
                        t = -1.0 / (-zeta + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    gp = G[i, p]
                    gq = G[i, q] * ph
                    G[i, p] = c * gp - s * gq
                    G[i, q] = s * gp + c * gq
                for i in range(V.shape[0]):
                    vp = V[i, p]
                    vq = V[i, q] * ph
                    V[i, p] = c * vp - s * vq
                    V[i, q] = s * vp + c * vq
        sweeps = sweep + 1
        if not rotated:
            break
    return sweeps


def _jacobi_sweeps_numpy(G, V, tol, max_sweeps):
    n = G.shape[1]
    sweeps = 0
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp = G[:, p]
                gq = G[:, q]
                alpha = np.vdot(gp, gp).real
                beta = np.vdot(gq, gq).real
                gamma = np.vdot(gp, gq)
                g = abs(gamma)
                if g == 0.0 or g <= tol * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                rotated = True
                w = gamma * _UP if g < _TINY else gamma
                ph = np.conj(w / abs(w))
                d = beta - alpha
                if abs(d) > _BIG * g:
                    t = g / d
                else:
                    zeta = d / (2.0 * g)
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                gq = gq * ph
                G[:, p], G[:, q] = c * gp - s * gq, s * gp + c * gq
                vp = V[:, p].copy()
                vq = V[:, q] * ph
                V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
        sweeps = sweep + 1
        if not rotated:
            break
    return sweeps


def _pivoted_rref_loops(R, tol, piv):
    m, n = R.shape
    used = np.zeros(n, dtype=np.bool_)
    row = 0
    while row < m and row < n:
        bi = -1
        bj = -1
        best_abs = -1.0
        for j in range(n):
            if used[j]:
                continue
            for i in range(row, m):
                a = abs(R[i, j])
                if a > best_abs:
                    best_abs = a
                    bi = i
                    bj = j
        if best_abs <= tol:
            break
        if bi != row:
            for jj in range(n):
                tmp = R[row, jj]
                R[row, jj] = R[bi, jj]
                R[bi, jj] = tmp
        pv = R[row, bj]
        for jj in range(n):
            R[row, jj] = R[row, jj] / pv
        for i in range(m):
            if i == row:
                continue
            f = R[i, bj]
            if f == 0.0:
                continue
            for jj in range(n):
                R[i, jj] -= f * R[row, jj]
        used[bj] = True
        piv[row] = bj
        row += 1
    return row


def _pivoted_rref_numpy(R, tol, piv):
    m, n = R.shape
    used = np.zeros(n, dtype=bool)
    row = 0
    while row < m and row < n:
        sub = np.abs(R[row:, :])
        sub[:, used] = -1.0
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        i += row
        if sub[i - row, j] <= tol:
            break
        if i != row:
            R[[row, i]] = R[[i, row]]
        R[row, :] /= R[row, j]
        f = R[:, j].copy()
        f[row] = 0.0
        R -= np.outer(f, R[row, :])
        used[j] = True
        piv[row] = j
        row += 1
    return row


if USING_NUMBA:
    _jacobi_sweeps_jit = numba.njit(cache=True)(_jacobi_sweeps_loops)
    _pivoted_rref_jit = numba.njit(cache=True)(_pivoted_rref_loops)
    jacobi_sweeps = _jacobi_sweeps_jit
    pivoted_rref = _pivoted_rref_jit
else:
    _jacobi_sweeps_jit = None
    _pivoted_rref_jit = None
    jacobi_sweeps = _jacobi_sweeps_numpy
    pivoted_rref = _pivoted_rref_numpy


def backend():
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if USING_NUMBA else "numpy"
