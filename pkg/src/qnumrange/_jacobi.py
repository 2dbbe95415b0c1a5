"""Cyclic Jacobi kernels for dense real matrices.

Both routines are compiled with numba; they are the only eigen/singular-value
backends used by the package.
"""

import numpy as np
from numba import njit

MAX_SWEEPS = 100


@njit(cache=True)
def _off2(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return s


@njit(cache=True)
def jacobi_eigh(m, tol):
    """Cyclic Jacobi on a symmetric matrix.

    Returns ``(values, vectors, sweeps)`` with ``m = V diag(values) V^T``; values are
    unsorted.  Iterates until the off-diagonal Frobenius norm is below ``tol * ||m||_F``.
    """
    n = m.shape[0]
    a = m.copy()
    v = np.eye(n)
    fro2 = 0.0
    for i in range(n):
        for j in range(n):
            fro2 += a[i, j] * a[i, j]
    thresh2 = (tol * tol) * fro2
    sweeps = 0
    while sweeps < MAX_SWEEPS:
        if _off2(a) <= thresh2:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, v, sweeps


@njit(cache=True)
def jacobi_svd(m, tol):
    """One-sided (Hestenes) Jacobi SVD of a real ``r x c`` matrix.

    Returns ``(sigma, U, V)`` with ``m = U diag(sigma) V^T`` on the first
    ``min(r, c)`` components; unsorted.
    """
    r, c = m.shape
    transposed = c > r
    if transposed:
        g = m.T.copy()
    else:
        g = m.copy()
    rows, cols = g.shape
    v = np.eye(cols)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(rows):
                    alpha += g[k, p] * g[k, p]
                    beta += g[k, q] * g[k, q]
                    gamma += g[k, p] * g[k, q]
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                for k in range(rows):
                    gkp = g[k, p]
                    gkq = g[k, q]
                    g[k, p] = cs * gkp - sn * gkq
                    g[k, q] = sn * gkp + cs * gkq
                for k in range(cols):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = cs * vkp - sn * vkq
                    v[k, q] = sn * vkp + cs * vkq
        if not rotated:
            break
    sigma = np.empty(cols)
    u = np.zeros((rows, cols))
    for j in range(cols):
        s = 0.0
        for k in range(rows):
            s += g[k, j] * g[k, j]
        s = np.sqrt(s)
        sigma[j] = s
        if s > 0.0:
            for k in range(rows):
                u[k, j] = g[k, j] / s
    if transposed:
        return sigma, v, u
    return sigma, u, v


@njit(cache=True)
def extreme_eigs_batch(mats, tol):
    """``(lambda_min, lambda_max)`` for each symmetric matrix in a batch."""
    b = mats.shape[0]
    lo = np.empty(b)
    hi = np.empty(b)
    for i in range(b):
        w, _, _ = jacobi_eigh(mats[i], tol)
        lo[i] = w.min()
        hi[i] = w.max()
    return lo, hi


@njit(cache=True)
def top_eig_batch(mats, tol):
    """Largest eigenvalue, its eigenvector and the gap to the next one, per matrix."""
    b, n, _ = mats.shape
    vals = np.empty(b)
    vecs = np.empty((b, n))
    gaps = np.empty(b)
    for i in range(b):
        w, v, _ = jacobi_eigh(mats[i], tol)
        order = np.argsort(w)
        top = order[n - 1]
        vals[i] = w[top]
        vecs[i] = v[:, top]
        if n > 1:
            gaps[i] = w[top] - w[order[n - 2]]
        else:
            gaps[i] = np.inf
    return vals, vecs, gaps
