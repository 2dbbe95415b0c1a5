import itertools

import numpy as np
import pytest

from conftest import random_hermitian
from qnumrange.numrange import radius_eig_search
from qnumrange.quaternion import Quaternion, QuatMatrix, inner_re, random_unit_quaternion, random_unitary, real_repr
from qnumrange.sdp import (
    AffineSpace,
    DependentMatricesError,
    InfeasibleStartError,
    SdpProblem,
    SdpSolution,
    affine_to_constraints,
    build_conditioned_dual_sdp,
    build_conditioned_radius_sdp,
    build_dual_norm_sdp,
    build_radius_sdp,
    complex_radius_sdp,
    dual_norm,
    embed,
    hermitian_basis,
    omega,
    radius_sdp,
    solve,
    trace_split_basis,
)
from qnumrange.sdp.problem import smat, svec
from qnumrange.spectral import NotHermitianError, hermitian_eigen, schatten


def rank_one(rng, n):
    z = QuatMatrix.random(n, 1, rng)
    z = z.scale(1.0 / z.frobenius())
    t = random_unit_quaternion(rng)
    return z @ QuatMatrix.from_quaternions([[t]]) @ z.adjoint()


# ----------------------------------------------------------------------------
# problem data
# ----------------------------------------------------------------------------


def test_svec_isometry(rng):
    a = rng.standard_normal((4, 4))
    a = a + a.T
    b = rng.standard_normal((4, 4))
    b = b + b.T
    assert np.isclose(svec(a) @ svec(b), np.sum(a * b))
    assert np.allclose(smat(svec(a), 4), a)


def test_problem_validation():
    with pytest.raises(ValueError):
        SdpProblem(np.zeros((2, 2)), np.array([[[0, 1], [0, 0]]]), [1])
    with pytest.raises(ValueError):
        SdpProblem(np.zeros((2, 2)), np.array([np.eye(2)]), [1, 2])
    p = SdpProblem(np.zeros((2, 2)), np.array([np.eye(2), np.eye(2)]), [1, 0])
    assert not p.independent()


def test_problem_json_roundtrip():
    p = SdpProblem(np.array([[0.0, 1], [1, 0]]), np.array([np.eye(2)]), [1.0], metadata={"kind": "toy"})
    q = SdpProblem.from_json(p.to_json())
    assert np.array_equal(q.X0, p.X0) and q.metadata == {"kind": "toy"}
    sol = solve(p, [3.0])
    back = SdpSolution.from_json(sol.to_json())
    assert back.value == sol.value and np.array_equal(back.dual_matrix, sol.dual_matrix)


# ----------------------------------------------------------------------------
# embedding and bases
# ----------------------------------------------------------------------------


def test_embed_examples(rng):
    assert np.array_equal(embed(QuatMatrix.identity(3)), np.eye(12))
    assert np.isclose(np.trace(embed(QuatMatrix.identity(3))), 4 * 3)
    a = QuatMatrix.from_quaternions([[0, Quaternion(0, 1)], [Quaternion(0, -1), 0]])
    w = np.sort(np.linalg.eigvalsh(embed(a)))
    assert np.allclose(w, [-1] * 4 + [1] * 4)
    for _ in range(20):
        x, y = random_hermitian(3, rng), random_hermitian(3, rng)
        assert abs(np.sum(embed(x) * embed(y)) - 4 * inner_re(x, y)) <= 1e-12 * (1 + x.frobenius() * y.frobenius())
    with pytest.raises(NotHermitianError):
        embed(QuatMatrix.from_real([[0, 1], [0, 0]]))


@pytest.mark.parametrize("field,units", [("R", 1), ("C", 2), ("H", 4)])
def test_hermitian_basis_orthonormal(field, units):
    n = 3
    basis = hermitian_basis(n, field)
    assert len(basis) == n + units * n * (n - 1) // 2
    g = np.array([[inner_re(a, b) for b in basis] for a in basis])
    assert np.allclose(g, np.eye(len(basis)))
    assert all(b.is_hermitian(0.0) for b in basis)


def test_trace_split_basis():
    basis = trace_split_basis(3)
    assert len(basis) == 3 * 5
    assert np.isclose(basis[0].trace().w, 1.0)
    assert all(abs(b.trace().w) < 1e-14 for b in basis[1:])


# ----------------------------------------------------------------------------
# constraint form
# ----------------------------------------------------------------------------


def _random_sym(rng, k, n):
    m = rng.standard_normal((k, n, n))
    return m + np.swapaxes(m, 1, 2)


def _membership_probes(rng, x0, xs, space: AffineSpace, probes=20):
    for _ in range(probes):
        s = rng.standard_normal(len(xs))
        assert space.contains(x0 + np.tensordot(s, xs, axes=1))
    basis = space.direction_basis()
    p = space.point()
    for _ in range(probes):
        x = p + np.tensordot(rng.standard_normal(len(basis)), basis, axes=1)
        coef, *_ = np.linalg.lstsq(svec(xs).T, svec(x - x0), rcond=None)
        assert np.allclose(x0 + np.tensordot(coef, xs, axes=1), x, atol=1e-10)


def test_affine_single_homogeneous_constraint(rng):
    n = 3
    dim = n * (n + 1) // 2
    xs = _random_sym(rng, dim - 1, n)
    space = affine_to_constraints(np.zeros((n, n)), xs)
    assert space.A.shape[0] == 1 and np.all(space.b == 0)
    assert space.dimension == dim - 1
    _membership_probes(rng, np.zeros((n, n)), xs, space)


def test_affine_case_b(rng):
    n = 4
    xs = _random_sym(rng, 4, n)
    x0 = _random_sym(rng, 1, n)[0]
    space = affine_to_constraints(x0, xs)
    assert np.isclose(np.sum(space.A[-1] * x0), 1.0) and space.b[-1] == 1.0
    assert np.allclose(np.einsum("kab,ab->k", xs, space.A[-1]), 0)
    assert space.dimension == 4
    _membership_probes(rng, x0, xs, space)


def test_affine_x0_in_span(rng):
    xs = _random_sym(rng, 3, 3)
    x0 = 2 * xs[0] - xs[2]
    space = affine_to_constraints(x0, xs)
    assert np.all(space.b == 0)
    _membership_probes(rng, x0, xs, space)


def test_affine_errors(rng):
    xs = _random_sym(rng, 2, 3)
    with pytest.raises(DependentMatricesError):
        affine_to_constraints(np.zeros((3, 3)), np.stack([xs[0], xs[0]]))
    with pytest.raises(ValueError):
        affine_to_constraints(np.zeros((3, 3)), _random_sym(rng, 6, 3))


# ----------------------------------------------------------------------------
# solver
# ----------------------------------------------------------------------------


def test_scalar_problems():
    sol = solve(SdpProblem(np.array([[1.0]]), np.array([[[1.0]]]), [1.0]), [0.0])
    assert np.isclose(sol.value, -1, atol=1e-6) and np.isclose(sol.s_star[0], -1, atol=1e-6)
    assert sol.certified(1e-7)
    sol = solve(SdpProblem(np.array([[0.0, 1], [1, 0]]), np.array([np.eye(2)]), [1.0]), [3.0])
    assert np.isclose(sol.value, 1, atol=1e-6) and sol.certified(1e-7)


def test_infeasible_start():
    with pytest.raises(InfeasibleStartError):
        solve(SdpProblem(np.array([[1.0]]), np.array([[[1.0]]]), [1.0]), [-2.0])
    with pytest.raises(ValueError):
        solve(SdpProblem(np.array([[1.0]]), np.array([[[1.0]]]), [1.0]), [0.0, 1.0])


def _lp_enumerate(d0, ds, c):
    """min c.s subject to d0 + D s >= 0 by vertex enumeration (bounded instances)."""
    k = len(c)
    best = np.inf
    for rows in itertools.combinations(range(len(d0)), k):
        m = ds[list(rows)]
        if abs(np.linalg.det(m)) < 1e-12:
            continue
        s = np.linalg.solve(m, -d0[list(rows)])
        if np.all(d0 + ds @ s >= -1e-9):
            best = min(best, c @ s)
    return best


def test_diagonal_problems_match_lp(rng):
    for _ in range(10):
        k, n = 2, 6
        ds = rng.standard_normal((n, k))
        # add a box so the LP is bounded: -5 <= s_i <= 5
        ds = np.vstack([ds, np.eye(k), -np.eye(k)])
        d0 = np.concatenate([rng.uniform(0.5, 2.0, n), 5 * np.ones(2 * k)])
        c = rng.standard_normal(k)
        prob = SdpProblem(np.diag(d0), np.stack([np.diag(ds[:, i]) for i in range(k)]), c)
        sol = solve(prob, np.zeros(k))
        assert abs(sol.value - _lp_enumerate(d0, ds, c)) <= 1e-6
        assert sol.certified(1e-7)


# ----------------------------------------------------------------------------
# radius and dual-norm instances
# ----------------------------------------------------------------------------


def test_radius_sdp_shape():
    prob, start = build_radius_sdp(QuatMatrix.random(3, 3, 0))
    assert prob.k == 3 * 5 + 1 and prob.order == 8 * 3
    assert prob.independent()
    assert np.linalg.eigvalsh(prob.matrix(start))[0] > 0


def test_radius_sdp_examples(rng):
    assert abs(radius_sdp(QuatMatrix.zeros(2)).value) <= 1e-6
    sol = radius_sdp(QuatMatrix.from_real([[0, 1], [0, 0]]))
    assert np.isclose(sol.value, 0.5, atol=1e-6) and sol.certified(1e-7)
    h = random_hermitian(3, rng)
    lam = hermitian_eigen(h).values
    assert np.isclose(radius_sdp(h).value, max(abs(lam[0]), abs(lam[-1])), atol=1e-5)


def test_radius_sdp_matches_search(rng):
    for n in (2, 3):
        a = QuatMatrix.random(n, n, rng)
        sol = radius_sdp(a)
        assert sol.gap <= 1e-7 and sol.certified(1e-7)
        assert abs(sol.value - radius_eig_search(a).radius) <= 1e-5


def test_dual_norm_examples(rng):
    prob, _ = build_dual_norm_sdp(QuatMatrix.zeros(3))
    assert prob.k == 3 * 5
    assert abs(dual_norm(QuatMatrix.zeros(2))) <= 1e-6
    assert np.isclose(dual_norm(QuatMatrix.from_quaternions([[Quaternion(0, 0, 0, 1), 0], [0, 0]])), 1, atol=1e-5)
    assert np.isclose(dual_norm(rank_one(rng, 3)), 1, atol=1e-5)
    for n in (1, 2, 3):
        assert np.isclose(dual_norm(QuatMatrix.identity(n)), n, atol=1e-5)


def test_dual_norm_properties(rng):
    for _ in range(3):
        a, b = QuatMatrix.random(2, 2, rng), QuatMatrix.random(2, 2, rng)
        rb = dual_norm(b)
        assert inner_re(b, a) <= rb * radius_eig_search(a).radius + 1e-6
        u = random_unitary(2, rng)
        assert np.isclose(dual_norm(u.adjoint() @ b @ u), rb, atol=1e-5)
        nuc = schatten(b, 1)
        assert nuc - 1e-6 <= rb <= 2 * nuc + 1e-6


def test_conditioned_instances(rng):
    a = QuatMatrix.random(2, 2, rng)
    w = omega(a)
    assert a.frobenius() + 1 <= w <= a.frobenius() + 2
    cr = build_conditioned_radius_sdp(a)
    cd = build_conditioned_dual_sdp(a)
    assert hermitian_eigen(cr.center).values[-1] > 2 * w
    assert hermitian_eigen(cd.center).values[-1] >= w
    assert cr.R_ball / cr.r_ball == 8 * 2 and cd.R_ball / cd.r_ball == 5 * 2
    # the start point is the advertised interior point (up to a permutation of the embedding)
    for inst in (cr, cd):
        got = np.linalg.eigvalsh(inst.problem.matrix(inst.start))
        assert np.allclose(got, np.linalg.eigvalsh(real_repr(inst.center)))
    assert abs(solve(cr.problem, cr.start).value - radius_sdp(a).value) <= 1e-5
    assert abs(solve(cd.problem, cd.start).value - dual_norm(a)) <= 1e-5
    with pytest.raises(ValueError):
        build_conditioned_radius_sdp(QuatMatrix.zeros(2))
    with pytest.raises(ValueError):
        build_conditioned_dual_sdp(QuatMatrix.zeros(2))


def test_complex_radius_sdp(rng):
    assert np.isclose(complex_radius_sdp(np.array([[0, 1], [0, 0]])), 0.5, atol=1e-6)
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = h + h.conj().T
    lam = np.linalg.eigvalsh(h)
    assert np.isclose(complex_radius_sdp(h), max(abs(lam[0]), abs(lam[-1])), atol=1e-5)
