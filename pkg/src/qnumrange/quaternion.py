"""Quaternion scalars and dense quaternion matrices.

A quaternion matrix is stored as a float64 array of shape ``(m, n, 4)`` whose last
axis holds the components ``(w, x, y, z)`` of ``w + x i + y j + z k``.  Matrices are
treated as right modules over H, so ``A.rmul(q)`` (``A q``) and ``A.lmul(q)``
(``q A``) are different operations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class ShapeError(ValueError):
    """Raised when matrix dimensions are incompatible."""


class MatrixFormatError(ValueError):
    """Raised when a serialized matrix cannot be parsed."""


# ----------------------------------------------------------------------------
# array-level kernels (broadcasting over leading axes)
# ----------------------------------------------------------------------------


def qmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays with trailing axis 4 (broadcasts)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def qconj_arr(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qmatmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion matrix product of ``(..., m, n, 4)`` and ``(..., n, p, 4)`` arrays."""
    # (m,n,4) x (n,p,4): go through the 4x4 left-multiplication matrices of a's entries
    la = _left_mult_blocks(a)  # (..., m, n, 4, 4)
    return np.einsum("...mnij,...npj->...mpi", la, b)


def _left_mult_blocks(a: np.ndarray) -> np.ndarray:
    w, x, y, z = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    rows = [
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


# ----------------------------------------------------------------------------
# scalar type
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    """A quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "Quaternion":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    @classmethod
    def from_complex(cls, c: complex) -> "Quaternion":
        return cls(float(c.real), float(c.imag), 0.0, 0.0)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    @property
    def real(self) -> float:
        return self.w

    def split(self) -> tuple[complex, complex]:
        """Return ``(q1, q2)`` with ``q = q1 + q2 j``."""
        return complex(self.w, self.x), complex(self.y, self.z)

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse of zero")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __add__(self, other: "Quaternion | float") -> "Quaternion":
        o = _as_quat(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other: "Quaternion | float") -> "Quaternion":
        o = _as_quat(other)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other: "Quaternion | float") -> "Quaternion":
        return _as_quat(other) - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        return qmul(self, _as_quat(other))

    def __rmul__(self, other: float) -> "Quaternion":
        return qmul(_as_quat(other), self)

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _as_quat(v: "Quaternion | float | complex") -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, complex):
        return Quaternion.from_complex(v)
    return Quaternion(float(v), 0.0, 0.0, 0.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return Quaternion.from_array(qmul_arr(a.to_array(), b.to_array()))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


# ----------------------------------------------------------------------------
# matrix type
# ----------------------------------------------------------------------------


class QuatMatrix:
    """Dense ``m x n`` quaternion matrix (immutable)."""

    __slots__ = ("_a",)

    def __init__(self, data: np.ndarray | Iterable):
        a = np.array(data, dtype=float)
        if a.ndim != 3 or a.shape[2] != 4:
            raise ShapeError(f"expected an (m, n, 4) array, got shape {a.shape}")
        a.setflags(write=False)
        self._a = a

    # -- construction ------------------------------------------------------

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "QuatMatrix":
        return cls(np.zeros((m, m if n is None else n, 4)))

    @classmethod
    def identity(cls, n: int) -> "QuatMatrix":
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def from_quaternions(cls, rows: Sequence[Sequence[Quaternion | float]]) -> "QuatMatrix":
        return cls([[_as_quat(q).to_array() for q in row] for row in rows])

    @classmethod
    def from_complex(cls, a1, a2=None) -> "QuatMatrix":
        """Build ``A1 + A2 j`` from complex matrices (``join``)."""
        a1 = np.atleast_2d(np.asarray(a1, dtype=complex))
        a2 = np.zeros_like(a1) if a2 is None else np.atleast_2d(np.asarray(a2, dtype=complex))
        if a1.shape != a2.shape:
            raise ShapeError(f"component shapes differ: {a1.shape} vs {a2.shape}")
        return cls(np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1))

    @classmethod
    def from_real(cls, a) -> "QuatMatrix":
        a = np.atleast_2d(np.asarray(a, dtype=float))
        out = np.zeros(a.shape + (4,))
        out[..., 0] = a
        return cls(out)

    @classmethod
    def random(cls, m: int, n: int | None = None, rng=None) -> "QuatMatrix":
        """Entries with i.i.d. standard normal components."""
        rng = np.random.default_rng(rng)
        return cls(rng.standard_normal((m, m if n is None else n, 4)))

    # -- basic accessors ---------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape[0], self._a.shape[1]

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Quaternion:
        return Quaternion.from_array(self._a[idx])

    def entries(self) -> list[Quaternion]:
        """Row-major list of entries."""
        return [Quaternion.from_array(v) for v in self._a.reshape(-1, 4)]

    def __repr__(self) -> str:
        return f"QuatMatrix(shape={self.shape})"

    # -- algebra -----------------------------------------------------------

    def conj(self) -> "QuatMatrix":
        """Entrywise conjugate (``A bar``)."""
        return QuatMatrix(qconj_arr(self._a))

    def transpose(self) -> "QuatMatrix":
        return QuatMatrix(self._a.transpose(1, 0, 2))

    @property
    def T(self) -> "QuatMatrix":
        return self.transpose()

    def adjoint(self) -> "QuatMatrix":
        return QuatMatrix(qconj_arr(self._a.transpose(1, 0, 2)))

    @property
    def H(self) -> "QuatMatrix":
        return self.adjoint()

    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        _same_shape(self, other)
        return QuatMatrix(self._a + other._a)

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        _same_shape(self, other)
        return QuatMatrix(self._a - other._a)

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix(-self._a)

    def scale(self, a: float) -> "QuatMatrix":
        """Multiplication by a real scalar."""
        return QuatMatrix(float(a) * self._a)

    def rmul(self, q: Quaternion | float) -> "QuatMatrix":
        """``A q`` (scalar on the right)."""
        return QuatMatrix(qmul_arr(self._a, _as_quat(q).to_array()))

    def lmul(self, q: Quaternion | float) -> "QuatMatrix":
        """``q A`` (scalar on the left)."""
        return QuatMatrix(qmul_arr(_as_quat(q).to_array(), self._a))

    def __matmul__(self, other: "QuatMatrix") -> "QuatMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return QuatMatrix(qmatmul_arr(self._a, other._a))

    def trace(self) -> Quaternion:
        if not self.is_square():
            raise ShapeError("trace of a non-square matrix")
        return Quaternion.from_array(np.einsum("iic->c", self._a))

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(self._a * self._a)))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        if not self.is_square():
            return False
        scale = 1.0 + self.frobenius()
        return float(np.max(np.abs(self._a - self.adjoint()._a), initial=0.0)) <= tol * scale

    def allclose(self, other: "QuatMatrix", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(np.allclose(self._a, other._a, rtol=0.0, atol=atol))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": self._a.reshape(-1, 4).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "QuatMatrix":
        try:
            m = obj["rows"]
            n = obj["cols"]
            entries = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise MatrixFormatError(f"missing field: {exc}") from None
        if not (isinstance(m, int) and isinstance(n, int)) or isinstance(m, bool) or isinstance(n, bool):
            raise MatrixFormatError("rows and cols must be integers")
        if m < 1 or n < 1:
            raise MatrixFormatError("rows and cols must be positive")
        if not isinstance(entries, list) or len(entries) != m * n:
            raise MatrixFormatError(f"expected {m * n} entries, got {len(entries) if isinstance(entries, list) else 'none'}")
        vals = []
        for e in entries:
            if not isinstance(e, list) or len(e) != 4:
                raise MatrixFormatError("each entry must be a 4-array [w, x, y, z]")
            for v in e:
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise MatrixFormatError(f"non-numeric component {v!r}")
            vals.append(e)
        a = np.array(vals, dtype=float)
        if not np.all(np.isfinite(a)):
            raise MatrixFormatError("entries must be finite")
        return cls(a.reshape(m, n, 4))

    @classmethod
    def from_json(cls, text: str) -> "QuatMatrix":
        try:
            obj = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc}") from None
        return cls.from_dict(obj)

    @classmethod
    def load(cls, path) -> "QuatMatrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)


def _reject_constant(name: str):
    raise MatrixFormatError(f"non-finite value {name} not allowed")


def _same_shape(a: QuatMatrix, b: QuatMatrix) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


# ----------------------------------------------------------------------------
# representations
# ----------------------------------------------------------------------------


def split(a: QuatMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Complex matrices ``(A1, A2)`` with ``A = A1 + A2 j``."""
    x = a.array
    return x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3]


def join(a1, a2) -> QuatMatrix:
    return QuatMatrix.from_complex(a1, a2)


def complex_repr(a: QuatMatrix) -> np.ndarray:
    """``C(A) = [[A1, A2], [-conj(A2), conj(A1)]]`` of size ``2m x 2n``."""
    a1, a2 = split(a)
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def from_complex_repr(c: np.ndarray) -> QuatMatrix:
    """Inverse of :func:`complex_repr` (reads the top block row)."""
    c = np.asarray(c, dtype=complex)
    if c.shape[0] % 2 or c.shape[1] % 2:
        raise ShapeError("complex representation must have even dimensions")
    m, n = c.shape[0] // 2, c.shape[1] // 2
    return join(c[:m, :n], c[:m, n:])


def real_repr(a: QuatMatrix) -> np.ndarray:
    """The ``4m x 4n`` real representation built from ``A1 = A11 + A21 i``, ``A2 = A12 + A22 i``."""
    x = a.array
    a11, a21, a12, a22 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    return np.block(
        [
            [a11, a21, a12, a22],
            [-a21, a11, -a22, a12],
            [-a12, a22, a11, -a21],
            [-a22, -a12, a21, a11],
        ]
    )


def complex_to_real(c: np.ndarray) -> np.ndarray:
    """Real embedding ``[[Re, -Im], [Im, Re]]`` of a complex matrix."""
    c = np.asarray(c, dtype=complex)
    return np.block([[c.real, -c.imag], [c.imag, c.real]])


def inner_re(a: QuatMatrix, b: QuatMatrix) -> float:
    """``<A, B>_R = Re tr A* B``."""
    _same_shape(a, b)
    return float(np.sum(a.array * b.array))


def inner(a: QuatMatrix, b: QuatMatrix) -> Quaternion:
    """Full quaternion inner product ``tr A* B``."""
    _same_shape(a, b)
    return Quaternion.from_array(qmul_arr(qconj_arr(a.array), b.array).sum(axis=(0, 1)))


def frobenius(a: QuatMatrix) -> float:
    return a.frobenius()


# ----------------------------------------------------------------------------
# vectors (n, 4) helpers used by the spectral and range modules
# ----------------------------------------------------------------------------


def vec_inner(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``<x, y> = sum conj(x_p) y_p`` for ``(..., n, 4)`` vectors."""
    return qmul_arr(qconj_arr(x), y).sum(axis=-2)


def quadratic_form(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``x* A x`` for a batch of vectors ``x`` of shape ``(..., n, 4)``."""
    la = _left_mult_blocks(a)  # (n, n, 4, 4)
    ax = np.einsum("pqij,...qj->...pi", la, x)
    return vec_inner(x, ax)


def random_unitary(n: int, rng=None) -> QuatMatrix:
    """Random unitary via Gram-Schmidt of a Gaussian matrix."""
    from .spectral import gram_schmidt

    rng = np.random.default_rng(rng)
    while True:
        u = gram_schmidt(QuatMatrix.random(n, n, rng))
        if u.cols == n:
            return u


def random_unit_quaternion(rng=None) -> Quaternion:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(4)
    return Quaternion.from_array(v / np.linalg.norm(v))
