"""Ruijsenaars-Schneider matrices on the thick-walled alcove and on CP(n-1).

The local Lax matrix L(delta(xi), Theta) is built from the positive factors
W_k(delta, +-y).  On the y-shifted alcove each W_k(+y) vanishes linearly in
r_k = sqrt(xi_k - y) and W_k(-y) in r_{k-1}; splitting those roots off
leaves strictly positive smooth factors w_k^{+-}.  The matrix Lambda of
smooth entry cofactors assembled from them never vanishes, which is what
lets the Lax matrix extend to the whole projective phase space as K(u).
"""

import math

import numpy as np

from .coupling import check_shifted_alcove
from .errors import (
    DomainViolation,
    NormViolation,
    PoleAtMinusOne,
    SingularDenominator,
)

_SERIES_CUT = 1e-4


def sinratio(x):
    """sin(x)/x, by series below |x| < 1e-4 so the ratio stays smooth at 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUT
    out = np.where(
        small,
        1.0 - x * x / 6.0 + x**4 / 120.0,
        np.sin(np.where(small, 1.0, x)) / np.where(small, 1.0, x),
    )
    return out if out.ndim else float(out)


def _partial_sums(xi):
    """S(i, j) = xi_i + ... + xi_j (0-based, inclusive) as a closure."""
    cum = np.cumsum(xi)

    def S(i, j):
        return cum[j] - (cum[i - 1] if i > 0 else 0.0)

    return S


def _pair_angle(S, k, l):
    """x_k - x_l as an alcove partial sum (well defined modulo pi)."""
    if k == l:
        return 0.0
    if k > l:
        return S(l, k - 1)
    return -S(k, l - 1)


def _w_factor_data(xi, y):
    """Smooth squared factors of W_k(+-y) with the zero r_v^2 split off.

    Returns (wp2, wm2) with W_k(+y)^2 = (xi_k - y) * wp2_k and
    W_k(-y)^2 = (xi_{k-1} - y) * wm2_k, cyclic index k-1.
    """
    n = len(xi)
    S = _partial_sums(xi)
    wp2 = np.ones(n)
    wm2 = np.ones(n)
    for k in range(n):
        for j in range(n):
            if j == k:
                continue
            a = S(j, k - 1) if j < k else S(k, j - 1)
            sa = math.sin(a)
            # + coupling: numerator shift +y for j < k, -y for j > k
            if (j == k + 1) or (k == n - 1 and j == 0):
                wp2[k] *= sinratio(xi[k] - y) / sa
            else:
                wp2[k] *= math.sin(a + (y if j < k else -y)) / sa
            # - coupling: shifts swapped
            if (j == k - 1) or (k == 0 and j == n - 1):
                wm2[k] *= sinratio(xi[(k - 1) % n] - y) / sa
            else:
                wm2[k] *= math.sin(a + (-y if j < k else y)) / sa
    if np.any(wp2 <= 0.0) or np.any(wm2 <= 0.0):
        raise DomainViolation("smooth Lax factors not positive; xi outside domain")
    return wp2, wm2


def w_factors(xi, c):
    """Coupling factors W_k(delta(xi), +-y) and their smooth parts.

    Returns (W_plus, W_minus, w_plus, w_minus) with
    W_plus[k] = r_k * w_plus[k] and W_minus[k] = r_{k-1} * w_minus[k],
    where r_k = sqrt(xi_k - y) and the index k-1 wraps cyclically.
    All square roots are taken non-negative.
    """
    xi = check_shifted_alcove(xi, c)
    wp2, wm2 = _w_factor_data(xi, c.y)
    r = np.sqrt(np.maximum(xi - c.y, 0.0))
    w_plus = np.sqrt(wp2)
    w_minus = np.sqrt(wm2)
    return r * w_plus, np.roll(r, 1) * w_minus, w_plus, w_minus


def lambda_matrix(xi, c):
    """Smooth cofactor matrix Lambda^y(xi), nowhere zero on the polytope.

    Off the cyclic superdiagonal, L(delta(xi), 1)_{kl} = r_k r_{l-1}
    Lambda_{kl}; on it the r factors cancel against the vanishing
    denominator and Lambda equals the Lax entry itself.
    """
    xi = check_shifted_alcove(xi, c)
    n, y = c.n, c.y
    _, _, wp, wm = w_factors(xi, c)
    S = _partial_sums(xi)
    siny = math.sin(y)
    lam = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            if l == (k + 1) % n:
                lam[k, l] = (
                    -siny
                    * np.exp(1j * xi[k])
                    * wp[k]
                    * wm[l]
                    / sinratio(xi[k] - y)
                )
            else:
                phi = _pair_angle(S, k, l)
                lam[k, l] = (
                    siny * np.exp(-1j * phi) * wp[k] * wm[l] / math.sin(phi + y)
                )
    return lam


def _theta_vector(theta, n):
    theta = np.asarray(theta)
    if theta.ndim == 2:
        theta = np.diagonal(theta)
    if theta.shape != (n,):
        raise ValueError(f"Theta must be a diagonal of length {n}")
    if np.any(np.abs(np.abs(theta) - 1.0) > 1e-9):
        raise ValueError("Theta entries must be unit modulus")
    return theta.astype(complex)


def _local_lax_signed(xi, theta, n, y):
    """L(delta(xi), Theta) for coupling argument y of either sign (interior only)."""
    S = _partial_sums(xi)
    w2_num = np.ones((2, n))  # row 0: W(+|y'|-pattern) squared values W_k(y), row 1: W_k(-y)
    for k in range(n):
        for j in range(n):
            if j == k:
                continue
            a = S(j, k - 1) if j < k else S(k, j - 1)
            sa = math.sin(a)
            w2_num[0, k] *= math.sin(a + (y if j < k else -y)) / sa
            w2_num[1, k] *= math.sin(a + (-y if j < k else y)) / sa
    if np.any(w2_num < -1e-13):
        raise DomainViolation("W^2 factors negative; xi outside the coupling domain")
    Wp = np.sqrt(np.maximum(w2_num[0], 0.0))
    Wm = np.sqrt(np.maximum(w2_num[1], 0.0))
    d = np.exp(1j * _delta_exponents(xi, n))
    num = np.exp(1j * y) - np.exp(-1j * y)
    L = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            den = np.exp(1j * y) * d[k] / d[l] - np.exp(-1j * y)
            if abs(den) < 1e-12:
                raise SingularDenominator(
                    f"Lax denominator vanishes at entry ({k + 1}, {l + 1})"
                )
            L[k, l] = num / den * Wp[k] * Wm[l] * theta[l]
    return L


def _delta_exponents(xi, n):
    base = (2.0 / n) * np.dot(np.arange(1, n), xi[: n - 1])
    tails = 2.0 * np.concatenate([np.cumsum(xi[: n - 1][::-1])[::-1], [0.0]])
    return base - tails


def local_lax(xi, theta, c, y=None):
    """Local Lax matrix L(delta(xi), Theta), special-unitary on the interior.

    theta is the diagonal of an element of the maximal torus (vector or
    diagonal matrix).  Pass y=-c.y for the reversed-coupling variant used by
    the second toric identification.
    """
    xi = check_shifted_alcove(xi, c)
    theta = _theta_vector(theta, c.n)
    return _local_lax_signed(xi, theta, c.n, c.y if y is None else y)


def local_hamiltonian(xi, p_angles, c):
    """H = sum_j cos(p_j) prod_{k != j} sqrt(1 - sin^2 y / sin^2(x_j - x_k)).

    Equals Re tr L(delta(xi), Theta) with Theta_j = exp(-i p_j); the momenta
    must satisfy the center-of-mass condition sum p_j = 0 mod 2 pi.
    """
    xi = check_shifted_alcove(xi, c)
    p = np.asarray(p_angles, dtype=float)
    if p.shape != (c.n,):
        raise ValueError(f"need {c.n} momentum angles")
    if abs(math.remainder(p.sum(), 2.0 * math.pi)) > 1e-9:
        raise DomainViolation("momenta must sum to 0 mod 2 pi")
    S = _partial_sums(xi)
    siny2 = math.sin(c.y) ** 2
    total = 0.0
    for j in range(c.n):
        prod = 1.0
        for k in range(c.n):
            if k == j:
                continue
            a = S(min(j, k), max(j, k) - 1)
            bracket = 1.0 - siny2 / math.sin(a) ** 2
            if bracket < -1e-12:
                raise DomainViolation("negative interaction bracket; xi outside domain")
            prod *= max(bracket, 0.0)
        total += math.cos(p[j]) * math.sqrt(prod)
    return total


def v_vector(xi, c, sign=1):
    """Unit vector v(xi, +-y) and its squared components z.

    v_k = sqrt(sin y / sin n y) * W_k(delta(xi), sign*y); z_k = v_k^2 sums
    to one on the whole thick-walled alcove.
    """
    Wp, Wm, _, _ = w_factors(xi, c)
    coeff = math.sqrt(math.sin(c.y) / math.sin(c.n * c.y))
    v = coeff * (Wp if sign > 0 else Wm)
    return v, v * v


def mu_of_v(v, c):
    """Rank-one conjugate e^{2iy} 1 + (e^{2i(1-n)y} - e^{2iy}) v v^dagger of mu0."""
    v = np.asarray(v, dtype=complex)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise NormViolation(f"|v| = {np.linalg.norm(v):.12g}, expected 1")
    coeff = np.exp(2j * (1 - c.n) * c.y) - np.exp(2j * c.y)
    return np.exp(2j * c.y) * np.eye(c.n) + coeff * np.outer(v, np.conjugate(v))


def reflection_g(v):
    """Real orthogonal matrix with last column v, built from a unit vector.

    g_{jn} = -g_{nj} = v_j, g_{nn} = v_n, g_{jl} = delta_{jl} - v_j v_l / (1 + v_n).
    Requires v real with v_n != -1.
    """
    v = np.asarray(v, dtype=float)
    n = len(v)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise NormViolation(f"|v| = {np.linalg.norm(v):.12g}, expected 1")
    d = 1.0 + v[-1]
    if d < 1e-12:
        raise PoleAtMinusOne("reflection undefined at v_n = -1")
    g = np.eye(n)
    g[:-1, :-1] -= np.outer(v[:-1], v[:-1]) / d
    g[:-1, -1] = v[:-1]
    g[-1, :-1] = -v[:-1]
    g[-1, -1] = v[-1]
    return g


def transposition(j, n):
    """Permutation matrix swapping slots j and n (1-based); identity for j = n."""
    t = np.eye(n)
    if j != n:
        t[[j - 1, n - 1]] = t[[n - 1, j - 1]]
    return t


def reflection_g_chart(xi, j, c):
    """Chart gauge g_y^j(xi) = T^j g(T^j v(xi, y)), real orthogonal.

    Its last column is v(xi, y) for every chart index j, so all charts
    conjugate mu_{v} to mu0 and differ by stabilizer factors only.
    """
    v, _ = v_vector(xi, c)
    if j == c.n:
        return reflection_g(v)
    t = transposition(j, c.n)
    return t @ reflection_g(t @ v)


def global_lax(u, c):
    """Global Lax matrix K(u) on the projective phase space.

    K_{kl} = conj(u_k) u_{l-1} Lambda_{kl} off the cyclic superdiagonal and
    K on the superdiagonal equals Lambda there (u_0 := u_n).  The result is
    special-unitary and depends only on the phase class of u.
    """
    from .projective import as_vector

    u = as_vector(u)
    n = c.n
    nrm2 = float(np.vdot(u, u).real)
    if abs(nrm2 - c.chi0) > 1e-8:
        raise NormViolation(f"|u|^2 = {nrm2:.12g}, expected chi0 = {c.chi0:.12g}")
    u = u * math.sqrt(c.chi0 / nrm2)
    xi = np.abs(u) ** 2 + c.y
    lam = lambda_matrix(xi, c)
    K = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            if l == (k + 1) % n:
                K[k, l] = lam[k, l]
            else:
                K[k, l] = np.conjugate(u[k]) * u[(l - 1) % n] * lam[k, l]
    return K
