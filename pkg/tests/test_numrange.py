import csv
import logging

import numpy as np
import pytest

from conftest import random_hermitian
from qnumrange.numrange import (
    build_c_matrices,
    normal_matrix,
    normal_range_hull,
    closed_form_c_blocks,
    radius_eig_search,
    range_points,
    sample_radius,
    sample_range,
    slab_fan,
    sphere_directions,
    support_interval,
    vector_to_xi,
    xi_to_vector,
    write_samples_csv,
    write_slabs_csv,
)
from qnumrange.quaternion import Quaternion, QuatMatrix, ShapeError, random_unitary
from qnumrange.spectral import hermitian_eigen, spectral_norm


def form_identity_error(a: QuatMatrix, count: int, rng) -> float:
    """Largest gap between Re(conj(t) x*Ax) and xi^T (sum t_l C_l) xi."""
    cm = build_c_matrices(a, compare_closed_form=False)
    xi = rng.standard_normal((count, 4 * a.rows))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    t = sphere_directions(count, rng)
    w = range_points(a, xi)
    lhs = np.sum(t * w, axis=1)
    rhs = np.einsum("bi,bij,bj->b", xi, np.einsum("bl,lij->bij", t, cm.stack), xi)
    return float(np.max(np.abs(lhs - rhs)))


def test_coordinates_roundtrip(rng):
    xi = rng.standard_normal((5, 12))
    assert np.allclose(vector_to_xi(xi_to_vector(xi)), xi)


def test_c_matrices_identity():
    cm = build_c_matrices(QuatMatrix.identity(2))
    assert np.allclose(cm.C1, np.eye(8))
    for c in (cm.C2, cm.C3, cm.C4):
        assert np.allclose(c, 0)


def test_c_matrices_unit_i(rng):
    a = QuatMatrix.from_quaternions([[Quaternion(0, 1)]])
    cm = build_c_matrices(a)
    assert np.allclose(cm.C1, 0)
    assert form_identity_error(a, 1000, rng) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_c_matrices_form_identity(rng, n):
    a = QuatMatrix.random(n, n, rng)
    cm = build_c_matrices(a)
    for c in cm.stack:
        assert np.max(np.abs(c - c.T)) <= 1e-12 * max(np.linalg.norm(c), 1)
    assert form_identity_error(a, 1000, rng) <= 1e-10


def test_closed_form_blocks_reported_not_asserted(rng, caplog):
    a = QuatMatrix.random(2, 2, rng)
    with caplog.at_level(logging.INFO, logger="qnumrange.numrange"):
        cm = build_c_matrices(a)
    assert set(cm.closed_form_mismatch) == {1, 2, 3, 4}
    assert len(closed_form_c_blocks(a)) == 4
    # C1, C3 and C4 agree with the closed-form layout; C2 has sign slips in four blocks
    assert cm.closed_form_mismatch[1] < 1e-12
    assert cm.closed_form_mismatch[3] < 1e-12
    assert cm.closed_form_mismatch[4] < 1e-12
    assert cm.closed_form_mismatch[2] > 1e-6
    assert "differ" in caplog.text


def test_c_matrices_need_square():
    with pytest.raises(ShapeError):
        build_c_matrices(QuatMatrix.random(2, 3, 0))


def test_support_interval_examples(rng):
    t = sphere_directions(1, rng)[0]
    s = support_interval(QuatMatrix.identity(3), t)
    assert np.isclose(s.lo, t[0]) and np.isclose(s.hi, t[0])
    h = random_hermitian(3, rng)
    lam = hermitian_eigen(h).values
    s = support_interval(h, [1, 0, 0, 0])
    assert np.isclose(s.lo, lam[-1]) and np.isclose(s.hi, lam[0])
    with pytest.raises(ValueError):
        support_interval(h, [1, 1, 0, 0])


def test_samples_inside_slab_fan(rng):
    a = QuatMatrix.random(3, 3, rng)
    pts = sample_range(a, 10_000, seed=1)
    for s in slab_fan(a, sphere_directions(50, rng)):
        assert s.lo <= s.hi
        assert s.contains(pts).all()


def test_radius_examples():
    r = radius_eig_search(QuatMatrix.identity(3))
    assert np.isclose(r.radius, 1.0)
    assert np.allclose(np.abs(r.t_star), [1, 0, 0, 0], atol=1e-6)
    assert np.isclose(radius_eig_search(QuatMatrix.from_real([[0, 1], [0, 0]])).radius, 0.5, atol=1e-9)
    assert np.isclose(radius_eig_search(QuatMatrix.from_quaternions([[Quaternion(1, 2, 2)]])).radius, 3.0)


def test_radius_witness_is_lower_bound(rng):
    a = QuatMatrix.random(3, 3, rng)
    r = radius_eig_search(a)
    assert r.lower_bound <= r.radius + 1e-9
    assert abs(r.lower_bound - r.radius) <= 1e-7
    assert np.isclose(np.linalg.norm(r.witness), 1.0)


def test_sampling_examples(rng):
    assert np.allclose(sample_range(QuatMatrix.identity(2), 50), [1, 0, 0, 0])
    d = QuatMatrix.from_quaternions([[Quaternion(0, 1), 0], [0, Quaternion(0, 1)]])
    pts = sample_range(d, 500)
    assert np.allclose(pts[:, 0], 0, atol=1e-14)
    # each term conj(x_p) i x_p is a pure unit vector scaled by |x_p|^2; their sum fills the ball
    norms = np.linalg.norm(pts[:, 1:], axis=1)
    assert np.all(norms <= 1 + 1e-12) and norms.max() > 0.95
    # a single unit imaginary entry keeps every point on the unit 2-sphere
    one = sample_range(QuatMatrix.from_quaternions([[Quaternion(0, 1)]]), 50)
    assert np.allclose(np.linalg.norm(one[:, 1:], axis=1), 1)
    a = QuatMatrix.random(3, 3, rng)
    assert sample_radius(a, 100_000) <= radius_eig_search(a).radius + 1e-6


def test_sampling_deterministic():
    a = QuatMatrix.random(2, 2, 3)
    assert np.array_equal(sample_range(a, 100, seed=7), sample_range(a, 100, seed=7))
    with pytest.raises(ValueError):
        sample_range(a, 0)


def test_norm_properties(rng):
    for _ in range(5):
        a = QuatMatrix.random(3, 3, rng)
        b = QuatMatrix.random(3, 3, rng)
        ra, rb = radius_eig_search(a).radius, radius_eig_search(b).radius
        assert radius_eig_search(a + b).radius <= ra + rb + 1e-6
        assert np.isclose(radius_eig_search(a.scale(-2.5)).radius, 2.5 * ra, atol=1e-6)
        s1 = spectral_norm(a)
        assert 0.5 * s1 - 1e-8 <= ra <= s1 + 1e-8
    assert radius_eig_search(QuatMatrix.zeros(2)).radius == 0.0


def test_invariances(rng):
    a = QuatMatrix.random(3, 3, rng)
    u = random_unitary(3, rng)
    r = radius_eig_search(a).radius
    assert np.isclose(radius_eig_search(u.adjoint() @ a @ u).radius, r, atol=1e-6)
    assert np.isclose(radius_eig_search(a.adjoint()).radius, r, atol=1e-6)


def test_hermitian_radius(rng):
    h = random_hermitian(4, rng)
    lam = hermitian_eigen(h).values
    assert np.isclose(radius_eig_search(h).radius, max(abs(lam[0]), abs(lam[-1])), atol=1e-8)


def test_normal_hull(rng):
    hull = normal_range_hull([1.0])
    assert hull.radius == 1.0 and hull.support([1, 0, 0, 0]) == (1.0, 1.0)
    hull = normal_range_hull([1j, 2])
    assert hull.radius == 2.0
    d = QuatMatrix.from_quaternions([[Quaternion(0, 1), 0], [0, 2]])
    assert np.isclose(radius_eig_search(d).radius, 2.0)
    hull = normal_range_hull([3.0, -1.0, 0.5])
    assert hull.is_interval() and hull.support([1, 0, 0, 0]) == (-1.0, 3.0)
    with pytest.raises(ValueError):
        normal_range_hull([1 - 1j])


def test_normal_matrix_slabs_match_hull(rng):
    lam = np.array([1 + 2j, -0.5 + 0.3j, 2.0])
    a = normal_matrix(lam, random_unitary(3, rng))
    hull = normal_range_hull(lam)
    for t in sphere_directions(20, rng):
        s = support_interval(a, t)
        lo, hi = hull.support(t)
        assert np.isclose(s.lo, lo, atol=1e-9) and np.isclose(s.hi, hi, atol=1e-9)
    assert np.isclose(radius_eig_search(a).radius, hull.radius, atol=1e-6)


def test_csv_output(tmp_path, rng):
    a = QuatMatrix.random(2, 2, rng)
    pts = sample_range(a, 5)
    write_samples_csv(tmp_path / "s.csv", pts)
    write_slabs_csv(tmp_path / "f.csv", slab_fan(a, sphere_directions(3, rng)))
    rows = list(csv.reader(open(tmp_path / "s.csv")))
    assert rows[0] == ["w", "x", "y", "z"] and len(rows) == 6
    assert np.allclose(np.array(rows[1:], dtype=float), pts, rtol=0, atol=0)
    rows = list(csv.reader(open(tmp_path / "f.csv")))
    assert rows[0] == ["t1", "t2", "t3", "t4", "lo", "hi"] and len(rows) == 4
