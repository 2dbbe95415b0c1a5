"""Eigenvalues, singular values and Schatten norms of quaternion matrices.

Every decomposition goes through the complex representation ``C(A)`` and then the
real embedding of that complex matrix, so a single cyclic Jacobi kernel does all
the numerical work.  The exact pairing of the eigenvalues (and singular values)
of ``C(A)`` doubles as a self-test: each quaternion eigenvalue shows up four times
in the real embedding, and a spread inside a group signals solver trouble.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _jacobi
from .quaternion import (
    QuatMatrix,
    ShapeError,
    complex_repr,
    complex_to_real,
    qconj_arr,
    qmul_arr,
    vec_inner,
)

JACOBI_TOL = 1e-14
PAIR_TOL = 1e-8


class NotSymmetricError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class PairingError(ArithmeticError):
    """Eigen/singular values of the representation failed to pair up."""


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray  # descending
    vectors: QuatMatrix  # orthonormal columns
    spread: float  # worst within-group spread of the embedded spectrum


@dataclass(frozen=True)
class SvdResult:
    singulars: np.ndarray  # positive, descending
    left: QuatMatrix
    right: QuatMatrix
    rank: int
    spread: float

    def reconstruct(self) -> QuatMatrix:
        w = self.left.array
        z = self.right.array
        m, n = w.shape[0], z.shape[0]
        out = np.zeros((m, n, 4))
        for ell, s in enumerate(self.singulars):
            wl = w[:, ell, :]
            zl_conj = qconj_arr(z[:, ell, :])
            out += s * qmul_arr(wl[:, None, :], zl_conj[None, :, :])
        return QuatMatrix(out)


# ----------------------------------------------------------------------------
# real symmetric kernel
# ----------------------------------------------------------------------------


def sym_eigen(m: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix, values descending."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    fro = float(np.linalg.norm(m))
    if check and np.max(np.abs(m - m.T), initial=0.0) > 1e-12 * max(fro, 1e-300):
        raise NotSymmetricError("matrix is not symmetric")
    sym = 0.5 * (m + m.T)
    w, v, _ = _jacobi.jacobi_eigh(np.ascontiguousarray(sym), JACOBI_TOL)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def extreme_eigs(m: np.ndarray) -> tuple[float, float]:
    """``(lambda_min, lambda_max)`` of a real symmetric matrix."""
    lo, hi = _jacobi.extreme_eigs_batch(np.ascontiguousarray(m, dtype=float)[None], JACOBI_TOL)
    return float(lo[0]), float(hi[0])


def extreme_eigs_batch(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return _jacobi.extreme_eigs_batch(np.ascontiguousarray(mats, dtype=float), JACOBI_TOL)


def top_eig_batch(mats: np.ndarray):
    return _jacobi.top_eig_batch(np.ascontiguousarray(mats, dtype=float), JACOBI_TOL)


# ----------------------------------------------------------------------------
# back-mapping helpers
# ----------------------------------------------------------------------------


def _real_cols_to_quat(cols: np.ndarray, n: int) -> np.ndarray:
    """Map real eigenvectors of ``realify(C(A))`` to quaternion vectors, shape ``(k, n, 4)``.

    A real vector ``[a; b]`` is the complex vector ``c = a + i b = [c1; c2]``; the
    quaternion vector ``c1 - conj(c2) j`` intertwines ``C(A)`` with ``A``.
    """
    c = cols[: 2 * n] + 1j * cols[2 * n :]
    c1, c2 = c[:n], c[n:]
    x2 = -np.conj(c2)
    q = np.stack([c1.real, c1.imag, x2.real, x2.imag], axis=-1)  # (n, k, 4)
    return q.transpose(1, 0, 2)


def _groups(values: np.ndarray, size: int, scale: float) -> float:
    """Largest spread inside consecutive groups of ``size`` sorted values."""
    g = values.reshape(-1, size)
    return float(np.max(g[:, 0] - g[:, -1], initial=0.0)) if g.size else 0.0


def _clusters(group_means: np.ndarray, tol: float) -> list[list[int]]:
    out: list[list[int]] = []
    for i, v in enumerate(group_means):
        if out and abs(group_means[out[-1][-1]] - v) <= tol:
            out[-1].append(i)
        else:
            out.append([i])
    return out


def _pivoted_gs(cands: np.ndarray, basis: list[np.ndarray], count: int) -> list[np.ndarray]:
    """Pick ``count`` orthonormal vectors from the right-span of ``cands`` (pivoting on residual)."""
    cands = [c.copy() for c in cands]
    picked = []
    for b in basis:
        for c in cands:
            c -= qmul_arr(b, vec_inner(b, c))
    for _ in range(count):
        norms = [np.linalg.norm(c) for c in cands]
        best = int(np.argmax(norms))
        v = cands.pop(best) / norms[best]
        # second pass keeps orthogonality at round-off level
        for b in basis + picked:
            v = v - qmul_arr(b, vec_inner(b, v))
        v /= np.linalg.norm(v)
        picked.append(v)
        for c in cands:
            c -= qmul_arr(v, vec_inner(v, c))
    return picked


# ----------------------------------------------------------------------------
# Hermitian eigenproblem
# ----------------------------------------------------------------------------


def hermitian_eigen(a: QuatMatrix, pair_tol: float = PAIR_TOL) -> EigenResult:
    """Real eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix."""
    if not a.is_square():
        raise ShapeError("hermitian_eigen needs a square matrix")
    if not a.is_hermitian(1e-10):
        raise NotHermitianError("matrix is not Hermitian")
    n = a.rows
    scale = 1.0 + a.frobenius()
    emb = complex_to_real(complex_repr(a))
    emb = 0.5 * (emb + emb.T)
    w, v = sym_eigen(emb, check=False)
    spread = _groups(w, 4, scale)
    if spread > pair_tol * scale:
        raise PairingError(f"eigenvalue groups spread {spread:.3e} exceeds {pair_tol * scale:.3e}")
    means = w.reshape(n, 4).mean(axis=1)
    qvecs = _real_cols_to_quat(v, n)  # (4n, n, 4)
    basis: list[np.ndarray] = []
    for cl in _clusters(means, pair_tol * scale):
        idx = [4 * g + r for g in cl for r in range(4)]
        basis.extend(_pivoted_gs(qvecs[idx], basis, len(cl)))
    vec = np.stack(basis, axis=1)  # (n, n, 4): column s is eigenvector s
    return EigenResult(values=means, vectors=QuatMatrix(vec), spread=spread)


def eigvalsh(a: QuatMatrix) -> np.ndarray:
    return hermitian_eigen(a).values


def is_psd(a: QuatMatrix, rel_tol: float = 1e-9) -> bool:
    """True when ``lambda_min(A) >= -rel_tol * (1 + ||A||_F)``."""
    lam = hermitian_eigen(a).values
    return bool(lam[-1] >= -rel_tol * (1.0 + a.frobenius()))


# ----------------------------------------------------------------------------
# SVD and norms
# ----------------------------------------------------------------------------


def svd(a: QuatMatrix, pair_tol: float = PAIR_TOL, rank_tol: float = 1e-10) -> SvdResult:
    """Compact SVD ``A = sum sigma_l w_l z_l*`` via one-sided Jacobi on ``realify(C(A))``."""
    m, n = a.shape
    scale = 1.0 + a.frobenius()
    emb = complex_to_real(complex_repr(a))  # (4m, 4n)
    sig, _, vv = _jacobi.jacobi_svd(np.ascontiguousarray(emb), JACOBI_TOL)
    order = np.argsort(sig)[::-1]
    sig = sig[order]
    vv = vv[:, order]
    p = min(m, n)
    sig = sig[: 4 * p]
    vv = vv[:, : 4 * p]
    spread = _groups(sig, 4, scale)
    if spread > pair_tol * scale:
        raise PairingError(f"singular value groups spread {spread:.3e} exceeds {pair_tol * scale:.3e}")
    means = sig.reshape(p, 4).mean(axis=1)
    rank = int(np.sum(means > rank_tol * scale))
    qvecs = _real_cols_to_quat(vv, n)
    right: list[np.ndarray] = []
    for cl in _clusters(means[:rank], pair_tol * scale):
        idx = [4 * g + r for g in cl for r in range(4)]
        right.extend(_pivoted_gs(qvecs[idx], right, len(cl)))
    singulars = means[:rank]
    if rank:
        z = np.stack(right, axis=1)
        az = QuatMatrix(np.asarray(a.array)) @ QuatMatrix(z)
        w = az.array / singulars[None, :, None]
    else:
        z = np.zeros((n, 0, 4))
        w = np.zeros((m, 0, 4))
    return SvdResult(singulars=singulars, left=QuatMatrix(w), right=QuatMatrix(z), rank=rank, spread=spread)


def singular_values(a: QuatMatrix) -> np.ndarray:
    return svd(a).singulars


def spectral_norm(a: QuatMatrix) -> float:
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def schatten(a: QuatMatrix, p: float) -> float:
    """Schatten p-norm; ``p = inf`` is the spectral norm, 1 nuclear, 2 Frobenius."""
    if not p >= 1:
        raise ValueError(f"Schatten norm needs p >= 1, got {p}")
    s = singular_values(a)
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    return float(np.sum(s**p) ** (1.0 / p))


def h_block(a: QuatMatrix) -> QuatMatrix:
    """``H(A) = [[0, A], [A*, 0]]``."""
    m, n = a.shape
    out = np.zeros((m + n, m + n, 4))
    out[:m, m:] = a.array
    out[m:, :m] = a.adjoint().array
    return QuatMatrix(out)


def gram_schmidt(v: QuatMatrix, drop_tol: float = 1e-10) -> QuatMatrix:
    """Orthonormalize the columns of ``v`` (right-module Gram-Schmidt).

    Columns whose residual falls below ``drop_tol`` times their original norm are
    treated as dependent and dropped.
    """
    cols = [v.array[:, j, :].copy() for j in range(v.cols)]
    out: list[np.ndarray] = []
    for c in cols:
        norm0 = np.linalg.norm(c)
        if norm0 == 0.0:
            continue
        x = c
        for _ in range(2):
            for b in out:
                x = x - qmul_arr(b, vec_inner(b, x))
        nx = np.linalg.norm(x)
        if nx <= drop_tol * norm0:
            continue
        out.append(x / nx)
    if not out:
        return QuatMatrix(np.zeros((v.rows, 0, 4)))
    return QuatMatrix(np.stack(out, axis=1))
