"""Pseudo-numerical range ``W_pi(A) = {x^T A x : x complex unit}`` and its radius.

Only the symmetric part ``S = (A + A^T)/2`` matters.  Writing ``S = S1 + i S2`` and
``x = u + i v``,

    x^T S x = [u; v]^T Sh1 [u; v] + i [u; v]^T Sh2 [u; v]

with real symmetric ``Sh1 = [[S1, -S2], [-S2, -S1]]`` and ``Sh2 = [[S2, S1], [S1, -S2]]``.
The convex hull of ``W_pi`` is cut out by the slabs
``lambda_min(cos t Sh1 + sin t Sh2) <= cos t Re w + sin t Im w <= lambda_max(...)``.

The quaternion range projects onto two complex pictures: ``w0 + w1 i`` fills the
complex range of ``C(A)`` and ``w2 + w3 i`` fills ``W_pi(C(-A j))``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .numrange import build_c_matrices, sample_range, xi_to_vector
from .quaternion import J, QuatMatrix, ShapeError, complex_repr, complex_to_real, quadratic_form
from .sdp.builders import complex_radius_solve
from .sdp.problem import SdpSolution
from .sdp.solver import DEFAULT_EPS
from .spectral import extreme_eigs_batch, top_eig_batch

GRID = 720
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NotSymmetricInputError(ValueError):
    pass


# ----------------------------------------------------------------------------
# input handling
# ----------------------------------------------------------------------------


def as_complex(a) -> np.ndarray:
    """Square complex array from an array-like or a quaternion matrix with zero j/k parts."""
    if isinstance(a, QuatMatrix):
        x = a.array
        if np.any(x[..., 2:] != 0.0):
            raise ValueError("pseudo-range needs a complex matrix (nonzero j/k parts)")
        m = x[..., 0] + 1j * x[..., 1]
    else:
        m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    return m


def symmetrize(a) -> np.ndarray:
    """``(A + A^T) / 2``; ``x^T A x`` only sees this part."""
    m = as_complex(a)
    return 0.5 * (m + m.T)


# ----------------------------------------------------------------------------
# the real pair Sh1, Sh2
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SHatPair:
    S1hat: np.ndarray
    S2hat: np.ndarray
    S: np.ndarray

    @property
    def n(self) -> int:
        return self.S.shape[0]

    def combine(self, theta) -> np.ndarray:
        """``cos t Sh1 + sin t Sh2`` for a scalar or an array of angles."""
        th = np.asarray(theta, dtype=float)
        return np.cos(th)[..., None, None] * self.S1hat + np.sin(th)[..., None, None] * self.S2hat

    def form(self, x: np.ndarray) -> np.ndarray:
        """``x^T S x`` evaluated through the real pair, for ``x`` of shape ``(..., n)``."""
        uv = np.concatenate([x.real, x.imag], axis=-1)
        re = np.einsum("...i,ij,...j->...", uv, self.S1hat, uv)
        im = np.einsum("...i,ij,...j->...", uv, self.S2hat, uv)
        return re + 1j * im

    def complex_matrix(self) -> np.ndarray:
        """``Sh1 + i Sh2``, whose numerical radius is the pseudo-radius."""
        return self.S1hat + 1j * self.S2hat


def build_shat(s, probes: int = 100, rng=0) -> SHatPair:
    """Real pair of a complex symmetric matrix, checked against direct evaluation."""
    s = as_complex(s)
    scale = 1.0 + float(np.linalg.norm(s))
    if np.max(np.abs(s - s.T), initial=0.0) > 1e-10 * scale:
        raise NotSymmetricInputError("build_shat needs a complex symmetric matrix")
    s1, s2 = s.real, s.imag
    sh1 = np.block([[s1, -s2], [-s2, -s1]])
    sh2 = np.block([[s2, s1], [s1, -s2]])
    pair = SHatPair(0.5 * (sh1 + sh1.T), 0.5 * (sh2 + sh2.T), s)
    if probes:
        x = random_unit_complex(s.shape[0], probes, rng)
        direct = np.einsum("ki,ij,kj->k", x, s, x)
        err = float(np.max(np.abs(direct - pair.form(x))))
        if err > 1e-10 * scale:
            raise ArithmeticError(f"real pair disagrees with x^T S x by {err:.3e}")
    return pair


def shat_of(a) -> SHatPair:
    return build_shat(symmetrize(a))


# ----------------------------------------------------------------------------
# slabs and the pseudo-radius
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleSlab:
    theta: float
    lo: float
    hi: float


def _extremes(pair: SHatPair, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return extreme_eigs_batch(pair.combine(np.asarray(thetas, dtype=float)))


def prange_support(a, theta: float) -> tuple[float, float]:
    """Slab ``lo <= cos t Re w + sin t Im w <= hi`` of co(W_pi(A))."""
    lo, hi = _extremes(shat_of(a), np.array([theta]))
    return float(lo[0]), float(hi[0])


def prange_slabs(a, angles: int) -> list[AngleSlab]:
    if angles < 1:
        raise ValueError("need at least one angle")
    th = 2.0 * np.pi * np.arange(angles) / angles
    lo, hi = _extremes(shat_of(a), th)
    return [AngleSlab(float(t), float(l), float(h)) for t, l, h in zip(th, lo, hi)]


@dataclass(frozen=True)
class PRadiusSweep:
    value: float
    theta: float
    grid: int


def pradius_sweep(a, tol: float = 1e-12, grid: int = GRID) -> PRadiusSweep:
    """``max_t lambda_max(cos t Sh1 + sin t Sh2)`` by a grid scan and golden-section refinement."""
    pair = shat_of(a)
    th = 2.0 * np.pi * np.arange(grid) / grid
    _, hi = _extremes(pair, th)
    k = int(np.argmax(hi))
    best_val, best_th = float(hi[k]), float(th[k])

    def f(t: float) -> float:
        return float(_extremes(pair, np.array([t]))[1][0])

    h = 2.0 * np.pi / grid
    lo_t, hi_t = best_th - h, best_th + h
    c = hi_t - GOLDEN * (hi_t - lo_t)
    d = lo_t + GOLDEN * (hi_t - lo_t)
    fc, fd = f(c), f(d)
    while hi_t - lo_t > tol:
        if fc >= fd:
            hi_t, d, fd = d, c, fc
            c = hi_t - GOLDEN * (hi_t - lo_t)
            fc = f(c)
        else:
            lo_t, c, fc = c, d, fd
            d = lo_t + GOLDEN * (hi_t - lo_t)
            fd = f(d)
    for t, v in ((c, fc), (d, fd)):
        if v > best_val:
            best_val, best_th = v, t
    return PRadiusSweep(value=max(best_val, 0.0), theta=best_th % (2.0 * np.pi), grid=grid)


def pradius(a, tol: float = 1e-12, grid: int = GRID) -> float:
    return pradius_sweep(a, tol, grid).value


def pradius_sdp(a, eps: float = DEFAULT_EPS) -> SdpSolution:
    """Complex numerical radius of ``Sh1 + i Sh2`` by the Hermitian block SDP."""
    return complex_radius_solve(shat_of(a).complex_matrix(), eps)


def pradius_via_complex_radius(a, eps: float = DEFAULT_EPS) -> float:
    return pradius_sdp(a, eps).value


# ----------------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------------


def random_unit_complex(n: int, count: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_prange(a, count: int, seed=0, chunk: int = 50000) -> np.ndarray:
    """``count`` complex points ``x^T A x`` with ``x`` uniform on the unit sphere of ``C^n``."""
    if count < 1:
        raise ValueError("need at least one sample")
    m = as_complex(a)
    rng = np.random.default_rng(seed)
    out = np.empty(count, dtype=complex)
    for start in range(0, count, chunk):
        k = min(chunk, count - start)
        x = random_unit_complex(m.shape[0], k, rng)
        out[start : start + k] = np.einsum("ki,ij,kj->k", x, m, x)
    return out


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_prange_samples_csv(path, points: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["re", "im"])
        for p in points:
            wr.writerow([_fmt(p.real), _fmt(p.imag)])


def write_prange_slabs_csv(path, slabs: list[AngleSlab]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["theta", "lo", "hi"])
        for s in slabs:
            wr.writerow([_fmt(s.theta), _fmt(s.lo), _fmt(s.hi)])


# ----------------------------------------------------------------------------
# support-function comparisons
# ----------------------------------------------------------------------------


def complex_range_support(c: np.ndarray, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extremes of ``Re(e^{-i t} w)`` over the complex numerical range of ``c``."""
    c = np.asarray(c, dtype=complex)
    th = np.asarray(thetas, dtype=float)
    rot = np.exp(-1j * th)[:, None, None] * c[None]
    herm = 0.5 * (rot + np.conj(np.swapaxes(rot, 1, 2)))
    emb = np.stack([complex_to_real(h) for h in herm])
    return extreme_eigs_batch(emb)


@dataclass(frozen=True)
class SupportComparison:
    """How a planar point cloud sits inside a family of slabs."""

    violation: float  # largest distance of a point outside its slab (<= 0 means inside)
    gap_max: float  # largest distance from a slab face back to the cloud
    gap_mean: float

    def contained(self, tol: float) -> bool:
        return self.violation <= tol


def compare_support(points: np.ndarray, thetas: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> SupportComparison:
    """Compare complex ``points`` with slabs ``lo <= Re(e^{-i t} p) <= hi``."""
    proj = np.cos(thetas)[:, None] * points.real[None] + np.sin(thetas)[:, None] * points.imag[None]
    pmax = proj.max(axis=1)
    pmin = proj.min(axis=1)
    violation = float(max(np.max(pmax - hi), np.max(lo - pmin)))
    gaps = np.concatenate([hi - pmax, pmin - lo])
    return SupportComparison(violation=violation, gap_max=float(gaps.max()), gap_mean=float(gaps.mean()))


# ----------------------------------------------------------------------------
# projections of the quaternion range
# ----------------------------------------------------------------------------


def minus_aj_complex(a: QuatMatrix) -> np.ndarray:
    """``C(-A j)``, the complex matrix whose pseudo-range is the (j, k) shadow of W(A)."""
    return complex_repr(-(a.rmul(J)))


@dataclass(frozen=True)
class ProjectionReport:
    samples: int
    witnesses: int
    angles: int
    p1: SupportComparison  # (w0, w1) against the complex range of C(A)
    p2: SupportComparison  # (w2, w3) against co(W_pi(C(-A j)))
    p1_sampled_gap: float  # reverse gap from the uniform samples alone
    p2_sampled_gap: float

    def contained(self, tol: float = 1e-8) -> bool:
        return self.p1.contained(tol) and self.p2.contained(tol)

    def gap(self) -> float:
        return max(self.p1.gap_max, self.p2.gap_max)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "witnesses": self.witnesses,
            "angles": self.angles,
            "p1": vars(self.p1),
            "p2": vars(self.p2),
            "p1_sampled_gap": self.p1_sampled_gap,
            "p2_sampled_gap": self.p2_sampled_gap,
        }


def _witness_points(a: QuatMatrix, dirs: np.ndarray) -> np.ndarray:
    """Points of W(A) maximizing ``Re(conj(t) w)`` for each direction ``t``."""
    cm = build_c_matrices(a, compare_closed_form=False)
    mats = np.einsum("bl,lij->bij", dirs, cm.stack)
    _, vecs, _ = top_eig_batch(mats)
    return quadratic_form(a.array, xi_to_vector(vecs))


def projection_check(
    a: QuatMatrix,
    samples: int = 100_000,
    angles: int = 72,
    seed=0,
    witness_factor: int = 4,
) -> ProjectionReport:
    """Check both planar shadows of W(A) against their predicted hulls.

    Uniform samples of W(A) cluster away from its boundary in dimension ``4n``, so the
    cloud is enriched with exact support points (top eigenvectors of the slab matrices
    on a grid ``witness_factor`` times finer than the test angles, offset from them).
    Containment is tested for every point; the reverse gap measures how closely the
    enriched cloud reaches each slab face.
    """
    if not a.is_square():
        raise ShapeError("projection check needs a square matrix")
    pts = sample_range(a, samples, seed)
    th = 2.0 * np.pi * (np.arange(angles) + 0.5) / angles
    # witness angles sit half a witness step away from every test angle
    shift = 0.5 if witness_factor % 2 == 0 else 0.0
    wgrid = 2.0 * np.pi * (np.arange(angles * witness_factor) + shift) / (angles * witness_factor)
    c, s, z = np.cos(wgrid), np.sin(wgrid), np.zeros_like(wgrid)
    wit1 = _witness_points(a, np.stack([c, s, z, z], axis=1))
    wit2 = _witness_points(a, np.stack([z, z, c, s], axis=1))
    cloud = np.vstack([pts, wit1, wit2])
    p1 = cloud[:, 0] + 1j * cloud[:, 1]
    p2 = cloud[:, 2] + 1j * cloud[:, 3]

    lo1, hi1 = complex_range_support(complex_repr(a), th)
    lo2, hi2 = _extremes(shat_of(minus_aj_complex(a)), th)
    cmp1 = compare_support(p1, th, lo1, hi1)
    cmp2 = compare_support(p2, th, lo2, hi2)
    raw1 = compare_support(p1[:samples], th, lo1, hi1)
    raw2 = compare_support(p2[:samples], th, lo2, hi2)
    return ProjectionReport(
        samples=samples,
        witnesses=len(wit1) + len(wit2),
        angles=angles,
        p1=cmp1,
        p2=cmp2,
        p1_sampled_gap=raw1.gap_max,
        p2_sampled_gap=raw2.gap_max,
    )


# ----------------------------------------------------------------------------
# hull-equality experiment
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class HullExperiment:
    """Statistics comparing co(W_pi(S)) with the complex range of ``Sh1 + i Sh2``.

    Reported only; no relation between the two sets is assumed.
    """

    angles: int
    samples: int
    support_difference_max: float  # |h_{co W_pi}(t) - h_{W(C)}(t)| over the angles
    samples_in_wc: SupportComparison  # W_pi samples against the slabs of W(C)
    samples_in_hull: SupportComparison  # W_pi samples against their own slabs

    def to_dict(self) -> dict:
        return {
            "angles": self.angles,
            "samples": self.samples,
            "support_difference_max": self.support_difference_max,
            "samples_in_wc": vars(self.samples_in_wc),
            "samples_in_hull": vars(self.samples_in_hull),
        }


def hull_experiment(a, samples: int = 100_000, angles: int = 360, seed=0) -> HullExperiment:
    pair = shat_of(a)
    th = 2.0 * np.pi * np.arange(angles) / angles
    lo_p, hi_p = _extremes(pair, th)
    lo_c, hi_c = complex_range_support(pair.complex_matrix(), th)
    pts = sample_prange(pair.S, samples, seed)
    diff = float(max(np.max(np.abs(hi_p - hi_c)), np.max(np.abs(lo_p - lo_c))))
    return HullExperiment(
        angles=angles,
        samples=samples,
        support_difference_max=diff,
        samples_in_wc=compare_support(pts, th, lo_c, hi_c),
        samples_in_hull=compare_support(pts, th, lo_p, hi_p),
    )
