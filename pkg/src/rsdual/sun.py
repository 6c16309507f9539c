"""SU(n) spectral machinery built on the Weyl alcove.

A special-unitary A decomposes as A = g^{-1} delta(xi) g with a unique
alcove point xi (the spectral functions Xi_j pick out its components) and a
diagonalizer g fixed here by an explicit phase convention.  Real matrix
powers, the spectral-function gradient and the invariant pairing of su(n)
all live on top of this decomposition.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .coupling import as_xi, check_alcove
from .errors import NonRegular

PHASE_TOL = 1e-12


def dagger(m):
    return np.conjugate(np.swapaxes(m, -1, -2))


def traceless_antihermitian(m):
    """Project a matrix onto su(n) (anti-Hermitian, traceless)."""
    a = 0.5 * (m - dagger(m))
    return a - (np.trace(a) / m.shape[-1]) * np.eye(m.shape[-1])


def scalar_product(eta, zeta):
    """Invariant pairing <eta, zeta> = -tr(eta zeta)/2 on su(n)."""
    return float(-0.5 * np.trace(eta @ zeta).real)


def random_special_unitary(n, rng):
    """Haar-ish random SU(n) element (QR of a complex Ginibre matrix)."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    det = np.linalg.det(q)
    return q * det ** (-1.0 / n)


def random_su_algebra(n, rng, scale=1.0):
    """Random element of su(n)."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * traceless_antihermitian(z)


def alcove_exponents(xi, c):
    """Diagonal of -2 sum_k xi_k lambda_k, the exponent vector of delta(xi).

    These are the specific real logarithms used for real matrix powers; they
    agree with the eigenphases of delta(xi) modulo 2 pi.
    """
    xi = as_xi(xi)
    n = c.n
    base = (2.0 / n) * np.dot(np.arange(1, n), xi[: n - 1])
    tails = 2.0 * (np.concatenate([np.cumsum(xi[: n - 1][::-1])[::-1], [0.0]]))
    return base - tails


def alcove_delta(xi, c):
    """Diagonal special-unitary delta(xi) = exp(-2i sum_k xi_k lambda_k).

    Injective on the alcove; raises AlcoveViolation off it.
    """
    xi = check_alcove(xi)
    return np.diag(np.exp(1j * alcove_exponents(xi, c)))


@dataclass
class SpectralData:
    """Result of the alcove spectral decomposition A = g^{-1} delta(xi) g.

    gap is the smallest cyclic eigenphase difference (2 * min xi); regular
    means gap > gap_tol, in which case g is unique up to left torus factors
    and fixed here by making the first sizeable entry of each eigenvector
    real positive.
    """

    xi: np.ndarray
    g: np.ndarray
    regular: bool
    gap: float

    def delta(self, c):
        return alcove_delta(self.xi, c)


def spectral_xi(A, c):
    """Decompose a special-unitary matrix into alcove data.

    Returns SpectralData(xi, g, regular, gap) with A = g^dagger delta(xi) g.
    The cyclic ordering of the eigenphases is rolled so that the lifted
    phase sum vanishes mod 2*pi*n, which singles out the unique alcove
    representative matching the delta parametrization.
    """
    A = np.asarray(A, dtype=complex)
    n = c.n
    T, Z = scipy.linalg.schur(A, output="complex")
    phases = np.angle(np.diagonal(T))
    order = np.argsort(phases, kind="stable")
    psi = phases[order]
    # det A = 1 forces sum(psi) = 2 pi M; the shift below makes M = 0 mod n.
    m0 = int(np.round(psi.sum() / (2.0 * math.pi)))
    shift = (-m0) % n
    perm = np.concatenate([order[shift:], order[:shift]])
    lifted = np.concatenate([psi[shift:], psi[:shift] + 2.0 * math.pi])

    xi = np.empty(n)
    xi[:-1] = 0.5 * np.diff(lifted)
    xi[-1] = math.pi - xi[:-1].sum()

    vecs = Z[:, perm].copy()
    for k in range(n):
        col = vecs[:, k]
        idx = np.argmax(np.abs(col) > PHASE_TOL)
        phase = col[idx] / abs(col[idx])
        vecs[:, k] = col * np.conjugate(phase)
    g = dagger(vecs)

    gap = 2.0 * float(xi.min())
    return SpectralData(xi=xi, g=g, regular=gap > c.gap_tol, gap=gap)


def grad_spectral(A, j, c, decomp=None):
    """Gradient of the spectral function Xi_j at a regular point.

    grad Xi_j(A) = g^{-1} (i (E_{j+1,j+1} - E_{j,j})) g for j = 1..n-1,
    independent of the torus ambiguity in g.
    """
    if not 1 <= j <= c.n - 1:
        raise ValueError(f"spectral index must be in 1..{c.n - 1}, got {j}")
    s = decomp if decomp is not None else spectral_xi(A, c)
    if not s.regular:
        raise NonRegular(f"eigenphase gap {s.gap:.3e} below gap_tol={c.gap_tol:.1e}")
    d = np.zeros(c.n, dtype=complex)
    d[j] = 1j
    d[j - 1] = -1j
    return dagger(s.g) @ (d[:, None] * s.g)


def matrix_power(C, s, c, decomp=None):
    """Real power C^s = g^{-1} exp(-2 i s sum_k Xi_k(C) lambda_k) g.

    One-parameter group in s on regular matrices: C^0 = 1, C^1 = C,
    C^{s+t} = C^s C^t.
    """
    sp = decomp if decomp is not None else spectral_xi(C, c)
    if not sp.regular:
        raise NonRegular(f"eigenphase gap {sp.gap:.3e} below gap_tol={c.gap_tol:.1e}")
    e = alcove_exponents(sp.xi, c)
    d = np.exp(1j * s * e)
    return dagger(sp.g) @ (d[:, None] * sp.g)
