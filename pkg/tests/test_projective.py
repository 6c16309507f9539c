"""Projective phase-space model: representatives, charts, form, actions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsdual.coupling import Coupling
from rsdual.errors import ChartViolation, DomainViolation, ZeroVector
from rsdual.projective import (
    ProjectivePoint,
    canonicalize,
    chart_gauge,
    chart_index,
    chart_transition,
    e_param,
    e_param_inv,
    from_chart,
    fs_omega_eval,
    index_reversal,
    involution,
    moment_J,
    moment_J_full,
    point_from_json,
    point_to_json,
    projective_distance,
    random_point,
    rot_action,
    to_chart,
    vertex_points,
)

RNG = np.random.default_rng(777)


def rand_u(c, bias=0.0):
    return random_point(c, RNG, interior_bias=bias)


def test_canonicalize_axis_point():
    c = Coupling.default(3)
    u = canonicalize(np.array([0, 0, 1j - 2j]), c)
    assert np.allclose(u, [0, 0, math.sqrt(c.chi0)], atol=1e-14)


def test_canonicalize_phase_invariance_and_idempotence():
    c = Coupling.default(4)
    for _ in range(100):
        z = RNG.standard_normal(4) + 1j * RNG.standard_normal(4)
        u = canonicalize(z, c)
        gamma = RNG.uniform(0, 2 * math.pi)
        assert np.allclose(canonicalize(np.exp(1j * gamma) * z, c), u, atol=1e-12)
        assert np.allclose(canonicalize(u, c), u, atol=1e-14)
        assert abs(np.vdot(u, u).real - c.chi0) < 1e-12


def test_canonicalize_zero_vector():
    with pytest.raises(ZeroVector):
        canonicalize(np.zeros(3), Coupling.default(3))


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_canonicalize_property(seed):
    rng = np.random.default_rng(seed)
    c = Coupling.default(3)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    u = canonicalize(z, c)
    mags = np.abs(u)
    jstar = int(np.argmax(mags >= mags.max() - 1e-12))
    assert u[jstar].real >= 0 and abs(u[jstar].imag) < 1e-12 * (1 + mags[jstar])
    assert projective_distance(u, z * math.sqrt(c.chi0) / np.linalg.norm(z)) < 1e-10


def test_e_param_hand_value():
    c = Coupling(2, math.pi / 6)
    u = e_param([math.pi / 2, math.pi / 2], [0.0], c)
    assert np.allclose(u, np.sqrt([math.pi / 3, math.pi / 3]), atol=1e-13)
    assert abs(np.vdot(u, u).real - 2 * math.pi / 3) < 1e-13


def test_e_param_round_trip():
    for n in (2, 3, 4):
        c = Coupling.default(n)
        for _ in range(25):
            xi = c.y + RNG.dirichlet(np.ones(n)) * c.chi0 * 0.9 + 0.1 * c.chi0 / n
            theta = RNG.uniform(-math.pi, math.pi, n - 1)
            u = e_param(xi, theta, c)
            xi2, theta2 = e_param_inv(u, c)
            assert np.allclose(xi2, xi, atol=1e-12)
            assert np.allclose(np.exp(1j * theta2), np.exp(1j * theta), atol=1e-11)


def test_e_param_accepts_polytope_coordinates():
    c = Coupling.default(3)
    xi = np.array([1.0, 0.9])
    u1 = e_param(xi, [0.3, -0.4], c)
    u2 = e_param(np.append(xi, math.pi - xi.sum()), [0.3, -0.4], c)
    assert projective_distance(u1, u2) < 1e-14


def test_e_param_domain_and_inverse_chart_errors():
    c = Coupling.default(3)
    with pytest.raises(DomainViolation):
        e_param([c.y / 2, 1.0], [0.0, 0.0], c)
    u = np.zeros(3, dtype=complex)
    u[2] = math.sqrt(c.chi0)
    with pytest.raises(ChartViolation):
        e_param_inv(u, c)


def test_moment_map_values():
    c = Coupling.default(3)
    xi = np.array([1.0, 0.9, math.pi - 1.9])
    u = e_param(xi, [0.5, 1.1], c)
    assert np.allclose(moment_J(u, c), xi[:2], atol=1e-13)
    assert np.allclose(moment_J_full(u, c), xi, atol=1e-13)
    vert = vertex_points(c)[2]
    assert np.allclose(moment_J(vert, c), [c.y, c.y], atol=1e-14)


def test_moment_map_image_in_polytope():
    for n in (2, 3, 4):
        c = Coupling.default(n)
        for _ in range(167):
            jj = moment_J_full(rand_u(c), c)
            assert np.all(jj >= c.y - 1e-12)
            assert abs(jj.sum() - math.pi) < 1e-12


def test_chart_roundtrip_and_gauge():
    c = Coupling.default(4)
    for _ in range(30):
        u = rand_u(c, bias=0.05)
        j = chart_index(u)
        w = to_chart(u, j, c)
        u2 = from_chart(w, j, c)
        assert projective_distance(u, u2) < 1e-12
        g = chart_gauge(u, j, c)
        assert g[j - 1].imag == pytest.approx(0.0, abs=1e-14)
        assert g[j - 1].real > 0


def test_chart_errors():
    c = Coupling.default(3)
    u = np.zeros(3, dtype=complex)
    u[2] = math.sqrt(c.chi0)
    with pytest.raises(ChartViolation):
        to_chart(u, 1, c)
    with pytest.raises(ChartViolation):
        from_chart(np.array([2.0 + 0j, 2.0]), 1, c)


def test_fs_omega_antisymmetry_and_values():
    c = Coupling.default(3)
    u = rand_u(c, bias=0.05)
    a = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
    b = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
    assert fs_omega_eval(u, a, a, c) == pytest.approx(0.0, abs=1e-14)
    assert fs_omega_eval(u, a, b, c) == pytest.approx(-fs_omega_eval(u, b, a, c), abs=1e-14)


def test_fs_omega_darboux_through_e_param():
    # pullback through the (xi, theta) parametrization is sum dtheta_k ^ dxi_k
    from rsdual.coupling import random_shifted_alcove

    c = Coupling.default(3)
    h = c.fd_step
    for _ in range(10):
        xi = random_shifted_alcove(c, RNG, margin=0.05)
        theta = RNG.uniform(-2, 2, 2)
        j = chart_index(e_param(xi, theta, c))

        def chart_coords(dxi, dtheta, s):
            return to_chart(e_param(xi[:2] + s * dxi, theta + s * dtheta, c), j, c)

        rng_dirs = []
        for _ in range(2):
            dxi = RNG.standard_normal(2)
            dth = RNG.standard_normal(2)
            tang = (chart_coords(dxi, dth, h) - chart_coords(dxi, dth, -h)) / (2 * h)
            rng_dirs.append((dxi, dth, tang))
        (dxi1, dth1, t1), (dxi2, dth2, t2) = rng_dirs
        expected = float(np.dot(dth1, dxi2) - np.dot(dth2, dxi1))
        got = fs_omega_eval(e_param(xi, theta, c), t1, t2, c, j=j)
        assert abs(got - expected) < 1e-5


def test_fs_omega_chart_overlap_agreement():
    # exact transition differential: agreement at the strict 1e-9 level
    c = Coupling.default(3)
    for _ in range(20):
        u = rand_u(c, bias=0.1)
        j = chart_index(u)
        k = 1 if j != 1 else 2
        a = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
        b = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
        ta = chart_transition(u, j, k, a, c)
        tb = chart_transition(u, j, k, b, c)
        v1 = fs_omega_eval(u, a, b, c, j=j)
        v2 = fs_omega_eval(u, ta, tb, c, j=k)
        assert abs(v1 - v2) < 1e-9


def test_chart_transition_matches_finite_differences():
    c = Coupling.default(3)
    h = c.fd_step
    u = rand_u(c, bias=0.1)
    j = chart_index(u)
    k = 1 if j != 1 else 2
    wj = to_chart(u, j, c)
    a = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)

    def transit(w):
        return to_chart(from_chart(w, j, c), k, c)

    fd = (transit(wj + h * a) - transit(wj - h * a)) / (2 * h)
    assert np.linalg.norm(chart_transition(u, j, k, a, c) - fd) < 1e-7


def test_rot_action_preserves_moment_and_composes():
    c = Coupling.default(4)
    u = rand_u(c)
    th1 = RNG.uniform(0, 2 * math.pi, 3)
    th2 = RNG.uniform(0, 2 * math.pi, 3)
    assert projective_distance(rot_action(np.zeros(3), u), u) < 1e-14
    assert np.allclose(moment_J(rot_action(th1, u), c), moment_J(u, c), atol=1e-13)
    lhs = rot_action(th1, rot_action(th2, u))
    rhs = rot_action(th1 + th2, u)
    assert projective_distance(lhs, rhs) < 1e-12


def test_rot_action_free_on_interior():
    c = Coupling.default(3)
    u = rand_u(c, bias=0.1)
    for _ in range(20):
        th = RNG.uniform(0.1, 2 * math.pi - 0.1, 2)
        assert projective_distance(rot_action(th, u), u) > 1e-3


def test_rot_action_hamiltonian_generator():
    # the flow of J_k with respect to the chart Darboux form is rotation of
    # slot k at unit rate: check omega(X, v) = dJ_k(v) by finite differences
    c = Coupling.default(3)
    h = c.fd_step
    u = rand_u(c, bias=0.1)
    j = chart_index(u)
    w = to_chart(u, j, c)
    slots = [s for s in range(1, 4) if s != j]
    for k_slot, pos in zip(slots, range(2)):
        X = np.zeros(2, dtype=complex)
        X[pos] = 1j * w[pos]  # rotation tangent of that chart coordinate
        for _ in range(5):
            v = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)

            def Jk(wvec):
                return moment_J_full(from_chart(wvec, j, c), c)[k_slot - 1]

            dJ = (Jk(w + h * v) - Jk(w - h * v)) / (2 * h)
            assert abs(fs_omega_eval(u, X, v, c, j=j) - dJ) < 1e-6


def test_involutions_square_to_identity():
    c = Coupling.default(4)
    for which in ("C", "Gamma", "sigma"):
        u = rand_u(c)
        assert projective_distance(involution(which, involution(which, u)), u) < 1e-14


def test_involutions_n2_degeneration():
    c = Coupling.default(2)
    u = rand_u(c)
    assert projective_distance(involution("C", u), involution("Gamma", u)) < 1e-14
    assert projective_distance(involution("sigma", u), u) < 1e-14


def test_involutions_commute_to_sigma():
    c = Coupling.default(4)
    u = rand_u(c)
    cg = involution("C", involution("Gamma", u))
    gc = involution("Gamma", involution("C", u))
    assert projective_distance(cg, involution("sigma", u)) < 1e-14
    assert projective_distance(gc, involution("sigma", u)) < 1e-14


def test_moment_map_involution_identities():
    c = Coupling.default(4)
    u = rand_u(c)
    assert np.allclose(moment_J(involution("C", u), c), moment_J(u, c), atol=1e-13)
    assert np.allclose(
        moment_J(involution("Gamma", u), c), index_reversal(moment_J(u, c)), atol=1e-13
    )
    assert np.allclose(
        moment_J(involution("sigma", u), c), index_reversal(moment_J(u, c)), atol=1e-13
    )


def test_involutions_symplectic_signs():
    # C and Gamma flip the form, sigma preserves it (pushforward by FD)
    c = Coupling.default(3)
    h = c.fd_step
    for which, sign in (("C", -1.0), ("Gamma", -1.0), ("sigma", 1.0)):
        u = rand_u(c, bias=0.1)
        j = chart_index(u)
        w = to_chart(u, j, c)
        img = canonicalize(involution(which, from_chart(w, j, c)), c)
        k = chart_index(img)

        def mapped(wvec):
            return to_chart(involution(which, from_chart(wvec, j, c)), k, c)

        a = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
        b = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
        ta = (mapped(w + h * a) - mapped(w - h * a)) / (2 * h)
        tb = (mapped(w + h * b) - mapped(w - h * b)) / (2 * h)
        lhs = fs_omega_eval(img, ta, tb, c, j=k)
        rhs = sign * fs_omega_eval(u, a, b, c, j=j)
        assert abs(lhs - rhs) < 1e-5


def test_json_round_trip():
    c = Coupling.default(3)
    u = rand_u(c)
    data = point_to_json(u)
    v = point_from_json(data, c)
    assert projective_distance(u, v) < 1e-12
    p = ProjectivePoint.from_vector(u, c)
    q = ProjectivePoint.from_json(p.to_json(), c)
    assert projective_distance(p.u, q.u) < 1e-12


def test_full_moment_sums_to_pi():
    c = Coupling.default(5)
    for _ in range(50):
        assert abs(moment_J_full(rand_u(c), c).sum() - math.pi) < 1e-12


def test_chart_transition_round_trip():
    c = Coupling.default(4)
    u = rand_u(c, bias=0.1)
    for j in (1, 2):
        for k in (3, 4):
            w = to_chart(u, j, c)
            there = to_chart(from_chart(w, j, c), k, c)
            back = to_chart(from_chart(there, k, c), j, c)
            assert np.linalg.norm(back - w) < 1e-12
            a = RNG.standard_normal(3) + 1j * RNG.standard_normal(3)
            ta = chart_transition(u, j, k, a, c)
            taa = chart_transition(from_chart(there, k, c), k, j, ta, c)
            assert np.linalg.norm(taa - a) < 1e-10
