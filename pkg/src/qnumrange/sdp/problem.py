"""SDP data in span form, solutions, and the equivalent constraint form.

A problem is ``min c.s  subject to  X(s) = X0 + sum_i s_i X_i  PSD`` over real
symmetric matrices of a common order.  Quaternion or complex Hermitian problems
are embedded into this real form by the builders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class SdpError(RuntimeError):
    pass


class InfeasibleStartError(SdpError):
    pass


class IterationLimitError(SdpError):
    pass


class SingularSystemError(SdpError):
    pass


class DependentMatricesError(ValueError):
    pass


def _sym_check(m: np.ndarray, name: str) -> None:
    scale = max(float(np.linalg.norm(m)), 1.0)
    if np.max(np.abs(m - m.T), initial=0.0) > 1e-12 * scale:
        raise ValueError(f"{name} is not symmetric")


def svec(m: np.ndarray) -> np.ndarray:
    """Isometric vectorization of symmetric matrices (off-diagonals scaled by sqrt 2)."""
    m = np.asarray(m)
    n = m.shape[-1]
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return m[..., iu[0], iu[1]] * w


def smat(v: np.ndarray, n: int) -> np.ndarray:
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, 1.0 / np.sqrt(2.0))
    v = np.asarray(v)
    out = np.zeros(v.shape[:-1] + (n, n))
    out[..., iu[0], iu[1]] = v * w
    out[..., iu[1], iu[0]] = v * w
    return out


@dataclass
class SdpProblem:
    X0: np.ndarray
    Xs: np.ndarray  # (k, N, N)
    c: np.ndarray  # (k,)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X0 = np.asarray(self.X0, dtype=float)
        self.Xs = np.asarray(self.Xs, dtype=float)
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        if self.Xs.ndim != 3 or self.Xs.shape[1:] != self.X0.shape or self.X0.shape[0] != self.X0.shape[1]:
            raise ValueError("X0 and X1..Xk must be square matrices of a common order")
        if self.Xs.shape[0] != self.c.shape[0]:
            raise ValueError(f"{self.Xs.shape[0]} matrices but {self.c.shape[0]} costs")
        _sym_check(self.X0, "X0")
        for i, x in enumerate(self.Xs):
            _sym_check(x, f"X{i + 1}")

    @property
    def order(self) -> int:
        return self.X0.shape[0]

    @property
    def k(self) -> int:
        return self.Xs.shape[0]

    def matrix(self, s) -> np.ndarray:
        return self.X0 + np.tensordot(np.asarray(s, dtype=float), self.Xs, axes=1)

    def objective(self, s) -> float:
        return float(self.c @ np.asarray(s, dtype=float))

    def gram(self) -> np.ndarray:
        v = self.Xs.reshape(self.k, -1)
        return v @ v.T

    def independent(self, tol: float = 1e-10) -> bool:
        if self.k == 0:
            return True
        s = np.linalg.svd(svec(self.Xs), compute_uv=False)
        return bool(s[-1] > tol * max(s[0], 1.0))

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "X0": self.X0.tolist(),
            "Xs": self.Xs.tolist(),
            "c": self.c.tolist(),
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SdpProblem":
        return cls(np.array(d["X0"]), np.array(d["Xs"]), np.array(d["c"]), dict(d.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "SdpProblem":
        return cls.from_dict(json.loads(text))


@dataclass
class SdpSolution:
    s_star: np.ndarray
    value: float
    dual_matrix: np.ndarray
    dual_value: float
    gap: float
    iterations: int
    primal_lambda_min: float = float("nan")
    dual_lambda_min: float = float("nan")
    dual_residual: float = float("nan")
    mu: float = float("nan")

    def certified(self, eps: float) -> bool:
        """Weak duality certificate: PSD dual, feasible equalities, gap within ``eps``."""
        return bool(
            self.gap <= eps
            and self.gap >= -1e-9
            and self.dual_lambda_min >= -1e-9 * (1.0 + np.linalg.norm(self.dual_matrix))
            and self.dual_residual <= 1e-8
        )

    def to_dict(self) -> dict:
        return {
            "s_star": np.asarray(self.s_star).tolist(),
            "value": self.value,
            "dual_matrix": np.asarray(self.dual_matrix).tolist(),
            "dual_value": self.dual_value,
            "gap": self.gap,
            "iterations": self.iterations,
            "primal_lambda_min": self.primal_lambda_min,
            "dual_lambda_min": self.dual_lambda_min,
            "dual_residual": self.dual_residual,
            "mu": self.mu,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SdpSolution":
        d = dict(d)
        d["s_star"] = np.array(d["s_star"])
        d["dual_matrix"] = np.array(d["dual_matrix"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "SdpSolution":
        return cls.from_dict(json.loads(text))


# ----------------------------------------------------------------------------
# span form <-> constraint form
# ----------------------------------------------------------------------------


@dataclass
class AffineSpace:
    """``{X symmetric : <A_j, X> = b_j}``."""

    A: np.ndarray  # (m, N, N)
    b: np.ndarray  # (m,)

    @property
    def order(self) -> int:
        return self.A.shape[1]

    def residual(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("jab,ab->j", self.A, x) - self.b

    def contains(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        scale = 1.0 + float(np.linalg.norm(x))
        return bool(np.max(np.abs(self.residual(x)), initial=0.0) <= tol * scale)

    @property
    def dimension(self) -> int:
        """Dimension of the affine set (-1 if empty)."""
        n = self.order
        d = n * (n + 1) // 2
        if self.A.shape[0] == 0:
            return d
        m = svec(self.A)
        r = np.linalg.matrix_rank(m)
        aug = np.linalg.matrix_rank(np.column_stack([m, self.b]))
        return -1 if aug > r else d - r

    def point(self) -> np.ndarray:
        """Least-norm member."""
        m = svec(self.A)
        v, *_ = np.linalg.lstsq(m, self.b, rcond=None)
        return smat(v, self.order)

    def direction_basis(self) -> np.ndarray:
        """Orthonormal basis of the linear part, shape ``(d, N, N)``."""
        m = svec(self.A)
        _, s, vt = np.linalg.svd(m)
        r = int(np.sum(s > 1e-12 * max(s[0], 1.0))) if s.size else 0
        return smat(vt[r:], self.order)


def _complement(vecs: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the row span of ``vecs``."""
    if vecs.shape[0] == 0:
        return np.eye(dim)
    q, _ = np.linalg.qr(vecs.T, mode="complete")
    return q[:, vecs.shape[0] :].T


def affine_to_constraints(x0: np.ndarray, xs: np.ndarray, tol: float = 1e-10) -> AffineSpace:
    """Describe ``{X0 + sum s_i X_i}`` by linear equations ``<A_j, X> = b_j``.

    With ``X0 = 0`` the constraints are a basis of the orthogonal complement of
    ``span{X_i}`` with zero right-hand sides.  With ``X0, X1..Xk`` independent the
    first ``m - 1`` constraints span the complement of ``span{X0..Xk}`` (zero
    right-hand sides) and the last one, ``A_m``, satisfies ``<X0, A_m> = 1`` and
    ``<X_i, A_m> = 0``.  An ``X0`` that lies in ``span{X_i}`` is first reduced to 0.
    """
    x0 = np.asarray(x0, dtype=float)
    xs = np.asarray(xs, dtype=float)
    n = x0.shape[0]
    dim = n * (n + 1) // 2
    k = xs.shape[0]
    if not 1 <= k < dim:
        raise ValueError(f"need 1 <= k < {dim}, got k = {k}")
    v = svec(xs)
    sv = np.linalg.svd(v, compute_uv=False)
    if sv[-1] <= tol * max(sv[0], 1.0):
        raise DependentMatricesError("X1..Xk are linearly dependent")
    v0 = svec(x0)
    # component of X0 outside span{X_i}
    coef, *_ = np.linalg.lstsq(v.T, v0, rcond=None)
    r0 = v0 - v.T @ coef
    if np.linalg.norm(r0) <= tol * max(np.linalg.norm(v0), 1.0):
        comp = _complement(v, dim)
        return AffineSpace(A=smat(comp, n), b=np.zeros(comp.shape[0]))
    comp = _complement(np.vstack([v, v0]), dim)
    a_m = r0 / (r0 @ r0)  # orthogonal to every X_i, <X0, A_m> = 1
    a = np.vstack([comp, a_m])
    b = np.zeros(a.shape[0])
    b[-1] = 1.0
    return AffineSpace(A=smat(a, n), b=b)
