"""Sections of the reduced space, the toric identifications and the duality.

The constraint surface mu(A,B) = mu0 is covered by explicit chart sections
F_j of the projection to the reduced space P; labelling each gauge orbit by
the projective point recovered from the Lax-matrix entries makes the
identification beta-map a computable bijection.  The second identification
is alpha = nu o beta o Gamma, the self-duality map is their composition,
and mapping-class words and reduced Hamiltonian flows act through the same
lift / act / relabel pattern.
"""

from dataclasses import dataclass
import math

import numpy as np

from .coupling import check_shifted_alcove
from .double import DoublePoint, auto_apply, flow, moment
from .errors import ConstraintViolation, NumericallyAmbiguous
from .lax import (
    global_lax,
    lambda_matrix,
    local_lax,
    reflection_g,
    v_vector,
    w_factors,
)
from .projective import (
    canonicalize,
    chart_gauge,
    chart_index,
    involution,
    moment_J_full,
)
from .sun import alcove_delta, dagger, spectral_xi


def smooth_chart_gauge(u, j, c):
    """The unitary gauge G_y^j(u) that conjugates (K(u), delta(xi)) onto the
    constraint surface, written directly in chart-j coordinates.

    On the dense part it equals Delta(tau)^{-1} g_y^j(xi) Delta_j(tau), but
    the combination below is built from products conj(u_a) u_b and the
    strictly positive smooth factors v_k / r_k, so it extends to the whole
    chart |u_j| > 0.
    """
    n = c.n
    u = chart_gauge(u, j, c)
    xi = moment_J_full(u, c)
    # strictly positive smooth factors v_k / r_k, finite at the walls
    _, _, w_plus, _ = w_factors(xi, c)
    wh = math.sqrt(math.sin(c.y) / math.sin(c.n * c.y)) * w_plus
    jj = j - 1
    last = n - 1
    d = 1.0 + u[jj].real * wh[jj]
    G = np.zeros((n, n), dtype=complex)
    if jj == last:
        for a in range(n - 1):
            for b in range(n - 1):
                G[a, b] = (a == b) - np.conjugate(u[a]) * u[b] * wh[a] * wh[b] / d
            G[a, last] = np.conjugate(u[a]) * wh[a]
            G[last, a] = -u[a] * wh[a]
        G[last, last] = u[last].real * wh[last]
        return G
    others = [a for a in range(n) if a not in (jj, last)]
    for a in others:
        for b in others:
            G[a, b] = (a == b) - np.conjugate(u[a]) * u[b] * wh[a] * wh[b] / d
        G[a, jj] = -np.conjugate(u[a]) * u[last] * wh[a] * wh[last] / d
        G[a, last] = np.conjugate(u[a]) * wh[a]
        G[jj, a] = -u[a] * wh[a]
        G[last, a] = -np.conjugate(u[last]) * u[a] * wh[last] * wh[a] / d
    G[jj, jj] = -u[last] * wh[last]
    G[jj, last] = u[jj].real * wh[jj]
    G[last, jj] = 1.0 - (abs(u[last]) * wh[last]) ** 2 / d
    G[last, last] = np.conjugate(u[last]) * wh[last]
    return G


def section_F(u, j, c):
    """Chart section F_j(u) = (G^{-1} K(u) G, G^{-1} delta(xi) G) of the
    constraint surface, with G = G_y^j(u) and xi_i = |u_i|^2 + y."""
    uj = chart_gauge(u, j, c)
    G = smooth_chart_gauge(uj, j, c)
    Gi = dagger(G)
    K = global_lax(uj, c)
    delta = alcove_delta(moment_J_full(uj, c), c)
    return DoublePoint(Gi @ K @ G, Gi @ delta @ G)


def best_chart(u, c):
    return chart_index(u)


def section_best(u, c):
    return section_F(u, best_chart(u, c), c)


def section_local(xi, theta, c):
    """Interior section built from the local Lax matrix:
    (g_y^{-1} L(delta, rho(tau)^{-1}) g_y, g_y^{-1} delta g_y)."""
    from .double import rho_embedding

    xi = check_shifted_alcove(xi, c, strict=True)
    v, _ = v_vector(xi, c)
    g = reflection_g(v).astype(complex)
    rho_inv = np.conjugate(np.diagonal(rho_embedding(np.asarray(theta, float), c.n)))
    L = local_lax(xi, rho_inv, c)
    delta = alcove_delta(xi, c)
    gi = dagger(g)
    return DoublePoint(gi @ L @ g, gi @ delta @ g)


def constraint_residual(p, c):
    """Frobenius distance of mu(A,B) mu0^{-1} from the identity."""
    return float(np.linalg.norm(moment(p) @ dagger(c.mu0) - np.eye(c.n)))


def f_beta_inv(p, c, check=True, tol=1e-6):
    """Label of the gauge orbit of a constrained pair: the unique projective
    point u with F_j(u) gauge-equivalent to (A, B).

    Steps: read xi from the spectrum of B; diagonalize B; rotate the
    diagonalizer by the torus element that matches the cyclic superdiagonal
    of the conjugated A against the nowhere-zero Lambda factors; read the
    chart coordinates off the remaining entries.
    """
    if check:
        res = constraint_residual(p, c)
        if res > tol:
            raise ConstraintViolation(f"moment residual {res:.3e} exceeds {tol:.1e}")
    n = c.n
    s = spectral_xi(p.B, c)
    if not s.regular:
        raise NumericallyAmbiguous(
            f"second factor has eigenphase gap {s.gap:.3e} < gap_tol"
        )
    xi = s.xi
    check_shifted_alcove(xi, c, tol=1e-7)
    lam = lambda_matrix(np.maximum(xi, c.y), c)
    K0 = s.g @ p.A @ dagger(s.g)

    zeta = np.ones(n, dtype=complex)
    for k in range(1, n):
        ratio = K0[k - 1, k] / lam[k - 1, k]
        if abs(ratio) < 1e-13:
            raise ConstraintViolation("vanishing superdiagonal in conjugated factor")
        zeta[k] = zeta[k - 1] * ratio / abs(ratio)
    K = zeta[:, None] * K0 * np.conjugate(zeta)[None, :]

    closure = K[n - 1, 0] / lam[n - 1, 0]
    if check and abs(closure / abs(closure) - 1.0) > 1e-5:
        raise ConstraintViolation(
            f"cyclic superdiagonal phase fails to close (off by {closure:.6g})"
        )

    j = int(np.argmax(xi))  # 0-based chart; xi_j >= pi/n > y always
    col = (j + 1) % n
    rj = math.sqrt(xi[j] - c.y)
    u = np.empty(n, dtype=complex)
    u[j] = rj
    for k in range(n):
        if k == j:
            continue
        u[k] = np.conjugate(K[k, col] / (rj * lam[k, col]))
    return canonicalize(u, c)


@dataclass
class ReducedPoint:
    """A gauge orbit on the constraint surface with its canonical label."""

    rep: DoublePoint
    canonical_u: np.ndarray

    @classmethod
    def from_rep(cls, rep, c):
        return cls(rep=rep, canonical_u=f_beta_inv(rep, c))


def f_alpha(u, c):
    """Second toric identification alpha = nu o beta o Gamma.

    The representative is nu applied to a section of Gamma(u); its first
    factor has spectrum J-full(u) and its second the reversed spectrum of
    K(u).
    """
    w = canonicalize(involution("Gamma", u), c)
    rep = auto_apply("nu", section_best(w, c))
    return ReducedPoint(rep=rep, canonical_u=f_beta_inv(rep, c))


def f_alpha_inv(p, c):
    """Inverse of the alpha identification on the constraint surface."""
    return canonicalize(involution("Gamma", f_beta_inv(auto_apply("nu", p), c)), c)


def duality(which, u, c):
    """Self-duality maps of the compactified phase space.

    'S' is the symplectic duality map (alpha-inverse after beta), 'S_inv'
    its inverse, and 'R' = C o S the anti-symplectic involutive version
    that plainly exchanges positions and actions.
    """
    u = canonicalize(u, c)
    if which == "S":
        return f_alpha_inv(section_best(u, c), c)
    if which == "S_inv":
        return f_alpha(u, c).canonical_u
    if which == "R":
        return canonicalize(involution("C", duality("S", u, c)), c)
    raise ValueError(f"unknown duality map {which!r}")


def mapclass_on_P(word, u, c):
    """Mapping-class word acting on the projective model.

    Lifts u to the constraint surface, applies the generators in order
    ('S', 'T', 'Ttilde'; leftmost first) and relabels the resulting orbit.
    The central twist Q drops out on the quotient.
    """
    u = canonicalize(u, c)
    if not word:
        return u
    rep = section_best(u, c)
    for gen in word:
        if gen not in ("S", "T", "Ttilde"):
            raise ValueError(f"unknown mapping-class generator {gen!r}")
        rep = auto_apply(gen, rep)
    return f_beta_inv(rep, c)


def reduced_flow(u, h, t, c):
    """Reduced Hamiltonian flow: lift through a chart section, apply the
    exact unreduced flow, project back to the canonical label."""
    u = canonicalize(u, c)
    rep = section_best(u, c)
    return f_beta_inv(flow(rep, h, t, c), c)


def action_variables(u, c):
    """Action variables Xi_k(K(u)), k = 1..n-1."""
    return spectral_xi(global_lax(canonicalize(u, c), c), c).xi[: c.n - 1]


def reduced_trajectory(u, h, t_final, steps, c):
    """Sampled reduced flow; yields (step, t, u_t, J(u_t), Xi(K(u_t))).

    The unreduced flow is exact for every t, so each sample is produced
    from the single initial lift with no accumulated integration error.
    """
    u0 = canonicalize(u, c)
    rep = section_best(u0, c)
    for k in range(steps + 1):
        t = t_final * k / steps if steps else 0.0
        ut = f_beta_inv(flow(rep, h, t, c), c)
        yield k, t, ut, moment_J_full(ut, c)[: c.n - 1], action_variables(ut, c)
