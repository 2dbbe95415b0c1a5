"""Numerical range W(A) and numerical radius r(A) of a square quaternion matrix.

Points of the range are written ``w = x* A x`` with ``x = conj(z)`` and
``z = s1 - t1 i + s2 j - t2 k``, where ``xi = [s1, s2, t1, t2]`` runs over the unit
sphere of ``R^{4n}``.  Each quaternion component of ``w`` is then a real quadratic
form in ``xi``; ``C1..C4`` are the Gram matrices of these four forms, so for a unit
quaternion ``t``

    Re(conj(t) w) = xi^T (t1 C1 + t2 C2 + t3 C3 + t4 C4) xi,

which gives the supporting slabs of co(W(A)) and ``r(A) = max_{|t|=1} lambda_max``.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .quaternion import QuatMatrix, ShapeError, qconj_arr, quadratic_form, split
from .spectral import extreme_eigs, extreme_eigs_batch, sym_eigen, top_eig_batch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CMatrices:
    C1: np.ndarray
    C2: np.ndarray
    C3: np.ndarray
    C4: np.ndarray
    # Frobenius distance between each polarized C_l and the closed-form block layout
    closed_form_mismatch: dict = field(default_factory=dict)

    @property
    def stack(self) -> np.ndarray:
        return np.stack([self.C1, self.C2, self.C3, self.C4])

    def combine(self, t) -> np.ndarray:
        return np.tensordot(np.asarray(t, dtype=float), self.stack, axes=1)


@dataclass(frozen=True)
class SupportSlab:
    t: np.ndarray
    lo: float
    hi: float

    def contains(self, w: np.ndarray, tol: float = 1e-8) -> np.ndarray:
        proj = np.asarray(w) @ self.t
        return (proj >= self.lo - tol) & (proj <= self.hi + tol)


@dataclass(frozen=True)
class RadiusSearch:
    radius: float  # claimed global maximum of lambda_max over the sphere
    t_star: np.ndarray
    lower_bound: float  # |x* A x| at an explicit unit witness x
    witness: np.ndarray  # (n, 4)
    iterations: int
    seeds: int


# ----------------------------------------------------------------------------
# coordinates
# ----------------------------------------------------------------------------


def xi_to_vector(xi: np.ndarray) -> np.ndarray:
    """Map real coordinates ``(..., 4n)`` to quaternion vectors ``x = conj(z)``, shape ``(..., n, 4)``."""
    xi = np.asarray(xi, dtype=float)
    s1, s2, t1, t2 = np.split(xi, 4, axis=-1)
    z = np.stack([s1, -t1, s2, -t2], axis=-1)
    return qconj_arr(z)


def vector_to_xi(x: np.ndarray) -> np.ndarray:
    z = qconj_arr(np.asarray(x, dtype=float))
    return np.concatenate([z[..., 0], z[..., 2], -z[..., 1], -z[..., 3]], axis=-1)


def range_points(a: QuatMatrix, xi: np.ndarray) -> np.ndarray:
    """``x* A x`` for coordinate vectors ``xi`` (not normalized)."""
    return quadratic_form(a.array, xi_to_vector(xi))


# ----------------------------------------------------------------------------
# C matrices
# ----------------------------------------------------------------------------


def build_c_matrices(a: QuatMatrix, compare_closed_form: bool = True) -> CMatrices:
    """Polarize the four component forms of ``x* A x`` into symmetric ``4n x 4n`` matrices."""
    if not a.is_square():
        raise ShapeError("numerical range needs a square matrix")
    n = a.rows
    N = 4 * n
    eye = np.eye(N)
    q_single = range_points(a, eye)  # (N, 4)
    pairs = (eye[:, None, :] + eye[None, :, :]).reshape(N * N, N)
    q_pair = range_points(a, pairs).reshape(N, N, 4)
    c = 0.5 * (q_pair - q_single[:, None, :] - q_single[None, :, :])
    c = 0.5 * (c + c.transpose(1, 0, 2))
    cl = [np.ascontiguousarray(c[..., l]) for l in range(4)]
    mismatch = {}
    if compare_closed_form:
        closed = closed_form_c_blocks(a)
        for l in range(4):
            mismatch[l + 1] = float(np.linalg.norm(closed[l] - cl[l]))
        bad = {k: v for k, v in mismatch.items() if v > 1e-10 * (1.0 + a.frobenius())}
        if bad:
            log.info("closed-form C blocks differ from polarization: %s", bad)
    return CMatrices(*cl, closed_form_mismatch=mismatch)


def closed_form_c_blocks(a: QuatMatrix) -> list[np.ndarray]:
    """The closed-form block layout of C1..C4 in terms of E_l, F_l, S_l, T_l.

    Kept only as a cross-check against :func:`build_c_matrices`.
    """
    a1, a2 = split(a)
    a11 = 0.5 * (a1 + a1.conj().T)
    a21 = (a1 - a1.conj().T) / 2j
    e1, f1 = a11.real, a11.imag
    e2, f2 = a21.real, a21.imag
    s = 0.5 * (a2 + a2.T)
    t = 0.5 * (a2 - a2.T)
    s1, s2 = s.real, s.imag
    t1, t2 = t.real, t.imag
    c1 = np.block([[e1, t1, -f1, -t2], [-t1, e1, -t2, f1], [f1, t2, e1, t1], [t2, -f1, -t1, e1]])
    c2 = np.block([[e2, s2, -f2, s1], [s2, e2, -s1, f2], [f2, -s1, e2, s2], [s1, -f2, s2, e2]])
    c3 = np.block([[s1, f2, s2, -e2], [-f2, s1, -e2, -s2], [s2, -e2, -s1, -f2], [-e2, -s2, f2, -s1]])
    c4 = np.block([[s2, -e2, -s1, -f2], [-e2, -s2, f2, -s1], [-s1, -f2, -s2, e2], [f2, -s1, e2, s2]])
    return [c1, c2, c3, c4]


# ----------------------------------------------------------------------------
# slabs
# ----------------------------------------------------------------------------


def _unit(t, tol: float = 1e-12) -> np.ndarray:
    t = np.asarray(t, dtype=float).reshape(4)
    if abs(np.linalg.norm(t) - 1.0) > tol:
        raise ValueError(f"direction must be a unit vector in R^4, |t| = {np.linalg.norm(t)!r}")
    return t


def support_interval(a: QuatMatrix, t, cmats: CMatrices | None = None) -> SupportSlab:
    """Supporting slab ``lo <= Re(conj(t) w) <= hi`` of co(W(A)) in direction ``t``."""
    t = _unit(t)
    cm = cmats if cmats is not None else build_c_matrices(a, compare_closed_form=False)
    lo, hi = extreme_eigs(cm.combine(t))
    return SupportSlab(t=t, lo=lo, hi=hi)


def slab_fan(a: QuatMatrix, directions: np.ndarray, cmats: CMatrices | None = None) -> list[SupportSlab]:
    cm = cmats if cmats is not None else build_c_matrices(a, compare_closed_form=False)
    dirs = np.asarray(directions, dtype=float)
    mats = np.einsum("bl,lij->bij", dirs, cm.stack)
    lo, hi = extreme_eigs_batch(mats)
    return [SupportSlab(t=d, lo=float(l), hi=float(h)) for d, l, h in zip(dirs, lo, hi)]


def sphere_directions(count: int, rng=None) -> np.ndarray:
    """``count`` uniform random unit vectors in ``R^4``."""
    rng = np.random.default_rng(rng)
    g = rng.standard_normal((count, 4))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# ----------------------------------------------------------------------------
# radius by maximizing lambda_max over S^3
# ----------------------------------------------------------------------------


def _subgradient(cm_stack: np.ndarray, t: np.ndarray):
    """lambda_max, the subgradient from one top eigenvector, and whether it is unique."""
    w, v = sym_eigen(np.tensordot(t, cm_stack, axes=1), check=False)
    top = w[0]
    scale = 1.0 + abs(top)
    k = int(np.sum(w >= top - 1e-10 * scale))
    vt = v[:, :k]
    # subdifferential = {(u^T C_l u)_l : u unit in the top eigenspace}
    proj = np.einsum("ia,lij,jb->lab", vt, cm_stack, vt)
    g = proj[:, 0, 0].copy()
    unique = True
    if k > 1:
        dev = proj - g[:, None, None] * np.eye(k)[None]
        unique = bool(np.max(np.abs(dev)) <= 1e-8 * scale)
    return top, g, v[:, 0], unique


def _ascend(cm_stack: np.ndarray, t: np.ndarray, tol: float, max_iter: int):
    f, g, v, unique = _subgradient(cm_stack, t)
    it = 0
    while it < max_iter:
        ng = np.linalg.norm(g)
        if ng == 0.0:
            break
        t_new = g / ng
        f_new, g_new, v_new, u_new = _subgradient(cm_stack, t_new)
        it += 1
        if f_new <= f + tol:
            if f_new > f:
                t, f, g, v, unique = t_new, f_new, g_new, v_new, u_new
            break
        t, f, g, v, unique = t_new, f_new, g_new, v_new, u_new
    return f, t, v, unique, it


def radius_eig_search(
    a: QuatMatrix,
    tol: float = 1e-10,
    seeds: int = 4096,
    ascents: int = 8,
    max_iter: int = 500,
    rng=0,
    cmats: CMatrices | None = None,
) -> RadiusSearch:
    """Numerical radius as ``max_{|t|=1} lambda_max(sum t_l C_l)``.

    Uniform seeds on S^3 are ranked by ``lambda_max``; the best ``ascents`` of them are
    refined by projected subgradient ascent (full step ``t <- g / |g|``, which never
    decreases the objective).  At a genuine eigenvalue crossing the ascent restarts from
    a perturbed direction.  The returned witness gives a certified lower bound.
    """
    if not a.is_square():
        raise ShapeError("numerical radius needs a square matrix")
    rng = np.random.default_rng(rng)
    cm = cmats if cmats is not None else build_c_matrices(a, compare_closed_form=False)
    stack = cm.stack
    dirs = np.vstack([np.eye(4), sphere_directions(seeds, rng)])
    mats = np.einsum("bl,lij->bij", dirs, stack)
    vals, _, _ = top_eig_batch(mats)
    order = np.argsort(vals)[::-1][:ascents]
    best = (-np.inf, None, None)
    iters = 0
    for idx in order:
        f, t, v, unique, it = _ascend(stack, dirs[idx], tol, max_iter)
        iters += it
        restarts = 0
        while not unique and restarts < 3:
            restarts += 1
            tp = t + 1e-4 * rng.standard_normal(4)
            tp /= np.linalg.norm(tp)
            f2, t2, v2, unique, it = _ascend(stack, tp, tol, max_iter)
            iters += it
            if f2 > f:
                f, t, v = f2, t2, v2
        if f > best[0]:
            best = (f, t, v)
    f, t, v = best
    x = xi_to_vector(v)
    w = quadratic_form(a.array, x)
    return RadiusSearch(
        radius=float(max(f, 0.0)),
        t_star=np.asarray(t),
        lower_bound=float(np.linalg.norm(w)),
        witness=x,
        iterations=iters,
        seeds=len(dirs),
    )


def numerical_radius(a: QuatMatrix, **kw) -> float:
    return radius_eig_search(a, **kw).radius


# ----------------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------------


def random_unit_vectors(n: int, count: int, rng=None) -> np.ndarray:
    """Uniform unit vectors of ``H^n`` as ``(count, n, 4)`` arrays."""
    rng = np.random.default_rng(rng)
    g = rng.standard_normal((count, 4 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g.reshape(count, n, 4)


def sample_range(a: QuatMatrix, count: int, seed=0, chunk: int = 20000) -> np.ndarray:
    """``count`` points ``x* A x`` with ``x`` uniform on the unit sphere; shape ``(count, 4)``."""
    if count < 1:
        raise ValueError("need at least one sample")
    if not a.is_square():
        raise ShapeError("numerical range needs a square matrix")
    rng = np.random.default_rng(seed)
    n = a.rows
    out = np.empty((count, 4))
    for start in range(0, count, chunk):
        m = min(chunk, count - start)
        x = random_unit_vectors(n, m, rng)
        out[start : start + m] = quadratic_form(a.array, x)
    return out


def sample_radius(a: QuatMatrix, count: int, seed=0) -> float:
    """Largest ``|x* A x|`` over sampled unit vectors (a lower bound on r(A))."""
    return float(np.max(np.linalg.norm(sample_range(a, count, seed), axis=1)))


# ----------------------------------------------------------------------------
# normal matrices
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalHull:
    """co(W(A)) of a normal matrix: convex hull of 2-spheres ``{Re l} x S^2(|Im l|)``."""

    centers: np.ndarray  # real parts
    radii: np.ndarray  # |Im lambda_i|
    radius: float  # numerical radius = max |lambda_i|

    def support(self, t) -> tuple[float, float]:
        t = np.asarray(t, dtype=float)
        tv = float(np.linalg.norm(t[1:]))
        vals = t[0] * self.centers
        return float(np.min(vals - tv * self.radii)), float(np.max(vals + tv * self.radii))

    def is_interval(self) -> bool:
        return bool(np.all(self.radii == 0.0))


def normal_range_hull(eigenvalues) -> NormalHull:
    lam = np.atleast_1d(np.asarray(eigenvalues, dtype=complex))
    if np.any(lam.imag < 0):
        raise ValueError("eigenvalue representatives must have Im >= 0")
    return NormalHull(centers=lam.real.copy(), radii=lam.imag.copy(), radius=float(np.max(np.abs(lam))))


def normal_matrix(eigenvalues, unitary: QuatMatrix) -> QuatMatrix:
    """``U diag(lambda) U*`` for complex eigenvalue representatives."""
    lam = np.atleast_1d(np.asarray(eigenvalues, dtype=complex))
    d = QuatMatrix.from_complex(np.diag(lam))
    return unitary @ d @ unitary.adjoint()


# ----------------------------------------------------------------------------
# CSV output
# ----------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_samples_csv(path, points: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["w", "x", "y", "z"])
        for p in points:
            wr.writerow([_fmt(v) for v in p])


def write_slabs_csv(path, slabs: list[SupportSlab]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t1", "t2", "t3", "t4", "lo", "hi"])
        for s in slabs:
            wr.writerow([_fmt(v) for v in s.t] + [_fmt(s.lo), _fmt(s.hi)])
