"""The internally fused quasi-Hamiltonian double SU(n) x SU(n).

Carries the invariant 2-form, the group-valued moment map mu(A,B) =
A B A^{-1} B^{-1}, the explicit flows of invariant Hamiltonians (which move
only one factor and are exact for all times), the two commuting torus
actions, and the mapping-class automorphisms S, T, Ttilde together with the
central twist Q and the conjugating involution nu.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import NonRegular, TangencyViolation
from .sun import (
    alcove_exponents,
    dagger,
    scalar_product,
    spectral_xi,
    traceless_antihermitian,
)

UNITARY_TOL = 1e-10
TANGENT_TOL = 1e-9


@dataclass
class DoublePoint:
    """A pair of special-unitary matrices (A, B)."""

    A: np.ndarray
    B: np.ndarray

    def validate(self, tol=UNITARY_TOL):
        n = self.A.shape[0]
        for m in (self.A, self.B):
            if np.linalg.norm(dagger(m) @ m - np.eye(n)) > tol:
                raise ValueError("component is not unitary within tolerance")
            if abs(np.linalg.det(m) - 1.0) > tol:
                raise ValueError("component is not special-unitary within tolerance")
        return self


@dataclass
class DoubleTangent:
    """Ambient tangent (dA, dB) at a DoublePoint."""

    dA: np.ndarray
    dB: np.ndarray

    def check(self, p, tol=TANGENT_TOL):
        n = p.A.shape[0]
        for m, dm in ((p.A, self.dA), (p.B, self.dB)):
            x = dagger(m) @ dm
            if np.linalg.norm(x + dagger(x)) > tol or abs(np.trace(x)) > tol:
                raise TangencyViolation("tangent not in su(n) at the base point")
        return self

    def project(self, p):
        """Orthogonal projection onto the tangent space at p (kills the
        O(step^2) normal component of finite-difference tangents)."""
        dA = p.A @ traceless_antihermitian(dagger(p.A) @ self.dA)
        dB = p.B @ traceless_antihermitian(dagger(p.B) @ self.dB)
        return DoubleTangent(dA, dB)


@dataclass(frozen=True)
class TorusElement:
    """Element of the (n-1)-torus, stored as angles reduced mod 2 pi."""

    theta: tuple

    def __init__(self, theta):
        angles = tuple(float(t) % (2.0 * math.pi) for t in np.atleast_1d(theta))
        object.__setattr__(self, "theta", angles)

    def array(self):
        return np.asarray(self.theta)


def rho_embedding(theta, n):
    """Torus embedding rho(tau) = exp(i sum theta_j (E_jj - E_{j+1,j+1}))."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n - 1,):
        raise ValueError(f"need {n - 1} angles")
    lower = np.concatenate([theta, [0.0]])
    upper = np.concatenate([[0.0], theta])
    return np.diag(np.exp(1j * (lower - upper)))


def delta_embedding(theta, n, j=None):
    """Diagonal embeddings Delta(tau) = diag(tau_1, ..., tau_{n-1}, 1) and
    their chart variants Delta_j with slots j and n swapped."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n - 1,):
        raise ValueError(f"need {n - 1} angles")
    d = np.append(np.exp(1j * theta), 1.0)
    if j is not None and j != n:
        d[[j - 1, n - 1]] = d[[n - 1, j - 1]]
    return np.diag(d)


VALID_KINDS = ("spectral", "re_trace", "im_trace", "dehn")
VALID_SIDES = ("first", "second")


@dataclass(frozen=True)
class InvariantHamiltonian:
    """Class function of one factor of the double.

    kind 'spectral' is the alcove coordinate Xi_index; 're_trace'/'im_trace'
    are Re/Im tr(X^index); 'dehn' is the quadratic spectral combination
    whose time-one flow is a Dehn twist.  side 'first' reads A and flows B,
    side 'second' reads B and flows A.
    """

    kind: str
    index: int = 1
    side: str = "first"

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"kind must be one of {VALID_KINDS}")
        if self.side not in VALID_SIDES:
            raise ValueError(f"side must be one of {VALID_SIDES}")
        if self.kind in ("re_trace", "im_trace") and self.index < 1:
            raise ValueError("trace power must be >= 1")

    def value(self, p, c):
        X = p.A if self.side == "first" else p.B
        if self.kind == "spectral":
            return float(spectral_xi(X, c).xi[self.index - 1])
        if self.kind == "re_trace":
            return float(np.trace(np.linalg.matrix_power(X, self.index)).real)
        if self.kind == "im_trace":
            return float(np.trace(np.linalg.matrix_power(X, self.index)).imag)
        xi = spectral_xi(X, c).xi
        lam = np.sum(xi[: c.n - 1, None] * c.weights, axis=0)
        return float(np.sum(lam * lam))


def moment(p):
    """Group-valued moment map mu(A, B) = A B A^{-1} B^{-1}."""
    return p.A @ p.B @ dagger(p.A) @ dagger(p.B)


def conjugate(p, g):
    """Diagonal conjugation action Psi_g(A, B) = (g A g^{-1}, g B g^{-1})."""
    gi = dagger(g)
    return DoublePoint(g @ p.A @ gi, g @ p.B @ gi)


def vertical_tangent(p, zeta):
    """Infinitesimal conjugation action zeta_M at p."""
    return DoubleTangent(zeta @ p.A - p.A @ zeta, zeta @ p.B - p.B @ zeta)


def _wedge(c1, d1, c2, d2):
    # <phi ^ psi>(v1, v2) with phi(vi) = ci, psi(vi) = di
    return scalar_product(c1, d2) - scalar_product(c2, d1)


def omega_eval(p, v1, v2, check=True):
    """The invariant 2-form of the double evaluated on two tangents.

    2 omega = <A^{-1}dA ^ dB B^{-1}> + <dA A^{-1} ^ B^{-1}dB>
              - <(AB)^{-1} d(AB) ^ (BA)^{-1} d(BA)>.
    """
    if check:
        v1.check(p)
        v2.check(p)
    A, B = p.A, p.B
    Ai, Bi = dagger(A), dagger(B)
    ab_i = Bi @ Ai
    ba_i = Ai @ Bi

    def left_terms(v):
        dAB = v.dA @ B + A @ v.dB
        dBA = v.dB @ A + B @ v.dA
        return (Ai @ v.dA, v.dB @ Bi, v.dA @ Ai, Bi @ v.dB, ab_i @ dAB, ba_i @ dBA)

    t1 = left_terms(v1)
    t2 = left_terms(v2)
    total = (
        _wedge(t1[0], t1[1], t2[0], t2[1])
        + _wedge(t1[2], t1[3], t2[2], t2[3])
        - _wedge(t1[4], t1[5], t2[4], t2[5])
    )
    return 0.5 * total


def hamiltonian_gradient(h, X, c):
    """The derivative grad h defined by d/dt h(e^{t zeta} X)|_0 = <zeta, grad h>.

    For spectral kinds this is the explicit conjugated su(n) generator; for
    trace kinds the traceless anti-Hermitian part of -m X^m resp. i m X^m;
    for 'dehn' the alcove logarithm, so that exp(s grad h(X)) = X^s.
    """
    if h.kind == "spectral":
        s = spectral_xi(X, c)
        if not s.regular:
            raise NonRegular("spectral Hamiltonian undefined at degenerate spectrum")
        d = np.zeros(c.n, dtype=complex)
        d[h.index] = 1j
        d[h.index - 1] = -1j
        return dagger(s.g) @ (d[:, None] * s.g)
    if h.kind == "re_trace":
        Xm = np.linalg.matrix_power(X, h.index)
        return traceless_antihermitian(-2.0 * h.index * Xm)
    if h.kind == "im_trace":
        Xm = np.linalg.matrix_power(X, h.index)
        return traceless_antihermitian(2j * h.index * Xm)
    if h.kind == "dehn":
        s = spectral_xi(X, c)
        if not s.regular:
            raise NonRegular("Dehn Hamiltonian undefined at degenerate spectrum")
        e = alcove_exponents(s.xi, c)
        return dagger(s.g) @ ((1j * e)[:, None] * s.g)
    raise ValueError(h.kind)


def flow(p, h, t, c):
    """Exact flow of an invariant Hamiltonian.

    side 'first':  (A, B) -> (A, B exp(-t grad h(A))),
    side 'second': (A, B) -> (A exp(t grad h(B)), B);
    the moment map is conserved because grad h(X) commutes with X.
    """
    if h.side == "first":
        grad = hamiltonian_gradient(h, p.A, c)
        return DoublePoint(p.A.copy(), p.B @ scipy.linalg.expm(-t * grad))
    grad = hamiltonian_gradient(h, p.B, c)
    return DoublePoint(p.A @ scipy.linalg.expm(t * grad), p.B.copy())


def torus_action(p, side, theta, c):
    """The commuting torus actions generated by the spectral Hamiltonians.

    side 'a': (A, B) -> (A, B g(A)^{-1} rho(tau) g(A));
    side 'b': (A, B) -> (A g(B)^{-1} rho(tau)^{-1} g(B), B).
    """
    theta = theta.array() if isinstance(theta, TorusElement) else np.asarray(theta, float)
    rho = rho_embedding(theta, c.n)
    if side == "a":
        s = spectral_xi(p.A, c)
        if not s.regular:
            raise NonRegular("torus action undefined at degenerate first factor")
        return DoublePoint(p.A.copy(), p.B @ dagger(s.g) @ rho @ s.g)
    if side == "b":
        s = spectral_xi(p.B, c)
        if not s.regular:
            raise NonRegular("torus action undefined at degenerate second factor")
        return DoublePoint(p.A @ dagger(s.g) @ np.conjugate(rho) @ s.g, p.B.copy())
    raise ValueError(f"side must be 'a' or 'b', got {side!r}")


def auto_apply(gen, p):
    """Mapping-class generators and related maps on the double.

    S(A,B) = (B^{-1}, B A B^{-1});  T(A,B) = (A B, B);
    Ttilde(A,B) = (A, B A^{-1});    Q = Psi_{mu(A,B)^{-1}} (the central
    twist, equal to S^4);           nu(A,B) = (conj B, conj A).
    S, T, Ttilde, Q preserve the 2-form and the moment map; nu reverses the
    form and sends mu to conj(mu)^{-1}.
    """
    A, B = p.A, p.B
    if gen == "S":
        return DoublePoint(dagger(B), B @ A @ dagger(B))
    if gen == "T":
        return DoublePoint(A @ B, B.copy())
    if gen == "Ttilde":
        return DoublePoint(A.copy(), B @ dagger(A))
    if gen == "Q":
        m = moment(p)
        return conjugate(p, dagger(m))
    if gen == "nu":
        return DoublePoint(np.conjugate(B), np.conjugate(A))
    raise ValueError(f"unknown generator {gen!r}")


def apply_word(word, p):
    """Apply a sequence of generators in order (leftmost acts first)."""
    for gen in word:
        p = auto_apply(gen, p)
    return p


def random_double_point(n, rng):
    from .sun import random_special_unitary

    return DoublePoint(
        random_special_unitary(n, rng), random_special_unitary(n, rng)
    )


def geodesic_tangent(p, X, Y):
    """Tangent of the curve (A e^{sX}, B e^{sY}) at s = 0, for X, Y in su(n)."""
    return DoubleTangent(p.A @ X, p.B @ Y)


def pushforward(f, p, v, step):
    """Central finite-difference pushforward of tangent v through the map f.

    The curve is the geodesic chart (A e^{s X}, B e^{s Y}) with X = A^{-1}dA,
    Y = B^{-1}dB; the result is projected back onto the tangent space at
    f(p) to remove the O(step^2) normal component.
    """
    X = dagger(p.A) @ v.dA
    Y = dagger(p.B) @ v.dB

    def at(s):
        return DoublePoint(
            p.A @ scipy.linalg.expm(s * X), p.B @ scipy.linalg.expm(s * Y)
        )

    plus = f(at(step))
    minus = f(at(-step))
    raw = DoubleTangent(
        (plus.A - minus.A) / (2.0 * step), (plus.B - minus.B) / (2.0 * step)
    )
    return raw.project(f(p))
