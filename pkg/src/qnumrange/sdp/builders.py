"""SDP instances for the numerical radius and its dual norm.

Quaternion Hermitian data are embedded with the real representation ``R(.)``
(order ``4 x``), complex Hermitian data with ``[[Re, -Im], [Im, Re]]`` (order
``2 x``).  Both embeddings scale the trace inner product by a constant and keep
positive semidefiniteness, so the real SDP has the same optimal value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..quaternion import QuatMatrix, ShapeError, complex_to_real, real_repr
from ..spectral import NotHermitianError, h_block, spectral_norm
from .problem import SdpProblem, SdpSolution
from .solver import DEFAULT_EPS, solve


def embed(a: QuatMatrix) -> np.ndarray:
    """Real symmetric ``4n x 4n`` image ``R(A)`` of a quaternion Hermitian matrix."""
    if not a.is_hermitian(1e-10):
        raise NotHermitianError("embed needs a Hermitian matrix")
    r = real_repr(a)
    return 0.5 * (r + r.T)


def embed_complex(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-10 * (1.0 + np.linalg.norm(m)):
        raise NotHermitianError("embed_complex needs a Hermitian matrix")
    r = complex_to_real(m)
    return 0.5 * (r + r.T)


# ----------------------------------------------------------------------------
# bases of Hermitian matrices
# ----------------------------------------------------------------------------


def hermitian_basis(n: int, field: str = "H") -> list[QuatMatrix]:
    """Orthonormal basis of ``H_n(F)`` under ``Re tr AB``.

    Diagonal units first, then for each ``s < t`` the matrices with entries
    ``(s,t)/(t,s)`` equal to ``(1, 1)``, ``(i, -i)``, ``(j, -j)``, ``(k, -k)`` scaled by
    ``1/sqrt 2`` (only the first two for ``field = "C"``).
    """
    units = {"R": 1, "C": 2, "H": 4}[field]
    out = []
    for s in range(n):
        a = np.zeros((n, n, 4))
        a[s, s, 0] = 1.0
        out.append(QuatMatrix(a))
    r2 = 1.0 / math.sqrt(2.0)
    for s in range(n):
        for t in range(s + 1, n):
            for u in range(units):
                a = np.zeros((n, n, 4))
                a[s, t, u] = r2
                a[t, s, u] = r2 if u == 0 else -r2
                out.append(QuatMatrix(a))
    return out


def trace_split_basis(n: int, field: str = "H") -> list[QuatMatrix]:
    """Basis with ``W_1 = I/n`` and ``tr W_i = 0`` for ``i > 1``."""
    out = [QuatMatrix.identity(n).scale(1.0 / n)]
    # orthonormal basis of trace-zero diagonals: Helmert contrasts
    for m in range(1, n):
        d = np.zeros(n)
        d[:m] = 1.0
        d[m] = -m
        d /= np.linalg.norm(d)
        out.append(QuatMatrix.from_real(np.diag(d)))
    out.extend(hermitian_basis(n, field)[n:])
    return out


def _blockdiag_q(*blocks: QuatMatrix) -> QuatMatrix:
    n = sum(b.rows for b in blocks)
    out = np.zeros((n, n, 4))
    i = 0
    for b in blocks:
        out[i : i + b.rows, i : i + b.cols] = b.array
        i += b.rows
    return QuatMatrix(out)


def _embed_all(mats: list[QuatMatrix], field: str) -> np.ndarray:
    if field == "H":
        return np.stack([embed(m) for m in mats])
    return np.stack([embed_complex(m.array[..., 0] + 1j * m.array[..., 1]) for m in mats])


def _pad(m: np.ndarray, corner: float, scale: int) -> np.ndarray:
    """Append a ``1 x 1`` block (embedded as ``corner * I_scale``)."""
    n = m.shape[0]
    out = np.zeros((n + scale, n + scale))
    out[:n, :n] = m
    out[n:, n:] = corner * np.eye(scale)
    return out


# ----------------------------------------------------------------------------
# numerical radius
# ----------------------------------------------------------------------------


def _radius_data(a: QuatMatrix, field: str):
    if not a.is_square():
        raise ShapeError("numerical radius needs a square matrix")
    n = a.rows
    basis = hermitian_basis(n, field)
    x0 = h_block(a)
    xs = [QuatMatrix.identity(2 * n)]
    xs += [_blockdiag_q(w, w.scale(-1.0)) for w in basis]
    c = np.zeros(len(xs))
    c[0] = 1.0
    return x0, xs, c


def build_radius_sdp(a: QuatMatrix) -> tuple[SdpProblem, np.ndarray]:
    """``min a`` over ``[[aI + Z, A], [A*, aI - Z]] >= 0`` with ``Z`` quaternion Hermitian."""
    x0, xs, c = _radius_data(a, "H")
    n = a.rows
    prob = SdpProblem(
        embed(x0),
        _embed_all(xs, "H"),
        c,
        metadata={"kind": "radius", "field": "H", "n": n, "embedding": "real_repr", "embedding_scale": 4},
    )
    start = np.zeros(len(xs))
    start[0] = spectral_norm(a) + 1.0
    return prob, start


def complex_radius_problem(cm: np.ndarray) -> tuple[SdpProblem, np.ndarray]:
    cm = np.atleast_2d(np.asarray(cm, dtype=complex))
    if cm.shape[0] != cm.shape[1]:
        raise ShapeError("numerical radius needs a square matrix")
    a = QuatMatrix.from_complex(cm)
    x0, xs, c = _radius_data(a, "C")
    n = a.rows
    x0c = x0.array[..., 0] + 1j * x0.array[..., 1]
    prob = SdpProblem(
        embed_complex(x0c),
        _embed_all(xs, "C"),
        c,
        metadata={"kind": "radius", "field": "C", "n": n, "embedding": "complex_to_real", "embedding_scale": 2},
    )
    start = np.zeros(len(xs))
    start[0] = float(np.linalg.norm(cm, 2)) + 1.0
    return prob, start


def complex_radius_sdp(cm: np.ndarray, eps: float = DEFAULT_EPS) -> float:
    """Numerical radius of a complex matrix by the Hermitian block SDP."""
    return complex_radius_solve(cm, eps).value


def complex_radius_solve(cm: np.ndarray, eps: float = DEFAULT_EPS) -> SdpSolution:
    prob, start = complex_radius_problem(cm)
    return solve(prob, start, eps)


# ----------------------------------------------------------------------------
# dual norm
# ----------------------------------------------------------------------------


def build_dual_norm_sdp(y: QuatMatrix) -> tuple[SdpProblem, np.ndarray]:
    """``min tr W`` over ``[[W, Y], [Y*, W]] >= 0``; ``W = sum s_i W_i`` with ``W_1 = I/n``."""
    if not y.is_square():
        raise ShapeError("dual norm needs a square matrix")
    n = y.rows
    basis = trace_split_basis(n, "H")
    xs = [_blockdiag_q(w, w) for w in basis]
    c = np.zeros(len(xs))
    c[0] = 1.0
    prob = SdpProblem(
        embed(h_block(y)),
        _embed_all(xs, "H"),
        c,
        metadata={"kind": "dual_norm", "field": "H", "n": n, "embedding": "real_repr", "embedding_scale": 4},
    )
    start = np.zeros(len(xs))
    start[0] = n * (spectral_norm(y) + 1.0)  # W = (sigma_1 + 1) I
    return prob, start


# ----------------------------------------------------------------------------
# well-conditioned variants
# ----------------------------------------------------------------------------


def omega(a: QuatMatrix) -> int:
    """Integer with ``||A||_F + 1 <= omega <= ||A||_F + 2``."""
    return int(math.ceil(a.frobenius())) + 1


@dataclass(frozen=True)
class ConditionedInstance:
    problem: SdpProblem
    start: np.ndarray
    r_ball: float
    R_ball: float
    omega: int
    center: QuatMatrix  # the interior point E0 / Z0


def build_conditioned_radius_sdp(a: QuatMatrix) -> ConditionedInstance:
    """Radius SDP augmented by a slack ``t`` with ``2n a + t = 3(2n+1) omega``."""
    if not a.is_square():
        raise ShapeError("numerical radius needs a square matrix")
    if a.frobenius() == 0.0:
        raise ValueError("conditioned instance needs A != 0; use build_radius_sdp")
    n = a.rows
    w = omega(a)
    x0, xs, c = _radius_data(a, "H")
    total = 3 * (2 * n + 1) * w
    y0 = _pad(embed(x0), float(total), 4)
    ys = [_pad(embed(xs[0]), float(-2 * n), 4)] + [_pad(embed(x), 0.0, 4) for x in xs[1:]]
    prob = SdpProblem(
        y0,
        np.stack(ys),
        c,
        metadata={
            "kind": "radius_conditioned",
            "field": "H",
            "n": n,
            "omega": w,
            "embedding": "real_repr",
            "embedding_scale": 4,
        },
    )
    start = np.zeros(len(xs))
    start[0] = 3.0 * w
    e0 = _blockdiag_q(h_block(a) + QuatMatrix.identity(2 * n).scale(3.0 * w), QuatMatrix.identity(1).scale(3.0 * w))
    return ConditionedInstance(prob, start, float(w), float(8 * n * w), w, e0)


def build_conditioned_dual_sdp(a: QuatMatrix) -> ConditionedInstance:
    """Dual-norm SDP augmented by a slack ``t`` with ``tr Z = (4n+2) omega``."""
    if not a.is_square():
        raise ShapeError("dual norm needs a square matrix")
    if a.frobenius() == 0.0:
        raise ValueError("conditioned instance needs A != 0; use build_dual_norm_sdp")
    n = a.rows
    w = omega(a)
    basis = trace_split_basis(n, "H")
    xs = [_blockdiag_q(b, b) for b in basis]
    c = np.zeros(len(xs))
    c[0] = 1.0
    y0 = _pad(embed(h_block(a)), float((4 * n + 2) * w), 4)
    ys = [_pad(embed(xs[0]), -2.0, 4)] + [_pad(embed(x), 0.0, 4) for x in xs[1:]]
    prob = SdpProblem(
        y0,
        np.stack(ys),
        c,
        metadata={
            "kind": "dual_norm_conditioned",
            "field": "H",
            "n": n,
            "omega": w,
            "embedding": "real_repr",
            "embedding_scale": 4,
        },
    )
    start = np.zeros(len(xs))
    start[0] = 2.0 * n * w  # X = 2 omega I
    z0 = _blockdiag_q(h_block(a) + QuatMatrix.identity(2 * n).scale(2.0 * w), QuatMatrix.identity(1).scale(2.0 * w))
    return ConditionedInstance(prob, start, float(w), float(5 * n * w), w, z0)


# ----------------------------------------------------------------------------
# convenience
# ----------------------------------------------------------------------------


def radius_sdp(a: QuatMatrix, eps: float = DEFAULT_EPS) -> SdpSolution:
    prob, start = build_radius_sdp(a)
    return solve(prob, start, eps)


def dual_norm_sdp(y: QuatMatrix, eps: float = DEFAULT_EPS) -> SdpSolution:
    prob, start = build_dual_norm_sdp(y)
    return solve(prob, start, eps)


def dual_norm(y: QuatMatrix, eps: float = DEFAULT_EPS) -> float:
    return dual_norm_sdp(y, eps).value
