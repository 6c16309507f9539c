"""Problem parameters and alcove domains.

Everything downstream is parametrized by the pair (n, y): the number of
particles and the coupling, restricted to 0 < y < pi/n.  The derived data
(the minimal-orbit diagonal matrix mu0, the symplectic scale chi0 and the
fundamental weights of su(n)) are computed here once and reused everywhere.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import AlcoveViolation, DomainViolation

SUM_TOL = 1e-12

ALCOVE = "alcove"
OPEN_ALCOVE = "open_alcove"
SHIFTED_ALCOVE = "shifted_alcove"
POLYTOPE_INTERIOR = "polytope_interior"


@dataclass(frozen=True)
class Coupling:
    """Coupling data (n, y) plus numerical tolerances.

    Attributes
    ----------
    n : int
        Number of particles / matrix size, n >= 2.
    y : float
        Coupling in radians, 0 < y < pi/n.
    gap_tol : float
        Eigenphase-gap threshold below which a unitary counts as non-regular.
    chart_tol : float
        Minimum |u_j| for a projective point to count as lying in chart j.
    fd_step : float
        Step used by all central finite-difference checks.
    """

    n: int
    y: float
    gap_tol: float = 1e-8
    chart_tol: float = 1e-10
    fd_step: float = 1e-5

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 < self.y < math.pi / self.n:
            raise ValueError(
                f"coupling must satisfy 0 < y < pi/n, got y={self.y} for n={self.n}"
            )

    @classmethod
    def default(cls, n, **kwargs):
        """Coupling with the default rule y = pi/(2n)."""
        return cls(n, math.pi / (2 * n), **kwargs)

    @property
    def chi0(self):
        """Symplectic scale chi0 = pi - n*y of the projective model."""
        return math.pi - self.n * self.y

    @cached_property
    def mu0(self):
        """diag(e^{2iy}, ..., e^{2iy}, e^{2(1-n)iy}), the moment-map value."""
        phases = np.full(self.n, 2.0 * self.y)
        phases[-1] = 2.0 * (1 - self.n) * self.y
        return np.diag(np.exp(1j * phases))

    @cached_property
    def weights(self):
        """Fundamental weights lambda_k of su(n) as an (n-1, n) array of diagonals.

        lambda_k = sum_{j<=k} E_jj - (k/n) * 1_n, traceless.
        """
        n = self.n
        lam = np.zeros((n - 1, n))
        for k in range(1, n):
            lam[k - 1, :k] = 1.0
            lam[k - 1] -= k / n
        return lam

    def weight_matrix(self, k):
        """lambda_k as a diagonal n x n matrix (k is 1-based)."""
        return np.diag(self.weights[k - 1])


def as_xi(x):
    """Coerce an AlcovePoint or array-like to a float vector."""
    if isinstance(x, AlcovePoint):
        return np.asarray(x.xi, dtype=float)
    return np.asarray(x, dtype=float)


def alcove_region(xi, c, tol=SUM_TOL):
    """Most restrictive region tag the point belongs to, or None."""
    xi = as_xi(xi)
    if xi.shape != (c.n,) or abs(xi.sum() - math.pi) > 1e-9:
        return None
    if np.all(xi > c.y + tol):
        return POLYTOPE_INTERIOR
    if np.all(xi >= c.y - tol):
        return SHIFTED_ALCOVE
    if np.all(xi > tol):
        return OPEN_ALCOVE
    if np.all(xi >= -tol):
        return ALCOVE
    return None


@dataclass(frozen=True)
class AlcovePoint:
    """A point xi of the Weyl alcove together with its region tag."""

    xi: np.ndarray
    region: str = ALCOVE

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        object.__setattr__(self, "xi", xi)
        check_alcove(xi, tol=1e-9)
        order = [ALCOVE, OPEN_ALCOVE, SHIFTED_ALCOVE, POLYTOPE_INTERIOR]
        if self.region not in order:
            raise ValueError(f"unknown region tag {self.region!r}")


def check_alcove(xi, tol=SUM_TOL):
    """Raise AlcoveViolation unless xi_j >= 0 and sum xi_j = pi."""
    xi = as_xi(xi)
    if abs(xi.sum() - math.pi) > max(tol, 1e-9):
        raise AlcoveViolation(f"sum(xi) = {xi.sum():.15g} differs from pi")
    if np.any(xi < -tol):
        raise AlcoveViolation(f"negative alcove coordinate in {xi}")
    return xi


def check_shifted_alcove(xi, c, tol=SUM_TOL, strict=False):
    """Raise DomainViolation unless xi lies in the thick-walled alcove xi_j >= y."""
    xi = check_alcove(xi, tol=tol)
    margin = np.min(xi) - c.y
    if strict and margin <= tol:
        raise DomainViolation(f"xi not interior to the y-shifted alcove: {xi}")
    if margin < -max(tol, 1e-10):
        raise DomainViolation(f"xi_j < y for some j: {xi}, y={c.y}")
    return xi


def full_xi(xi, c):
    """Extend an (n-1)-vector of polytope coordinates by xi_n = pi - sum."""
    xi = as_xi(xi)
    if xi.shape == (c.n,):
        return xi
    if xi.shape == (c.n - 1,):
        return np.append(xi, math.pi - xi.sum())
    raise ValueError(f"expected length {c.n} or {c.n - 1}, got shape {xi.shape}")


def random_shifted_alcove(c, rng, margin=0.0):
    """Uniform-ish sample of the thick-walled alcove, optional interior margin.

    margin is the fraction of the slack chi0 kept away from every wall.
    """
    slack = c.chi0 * (1.0 - c.n * margin)
    w = rng.dirichlet(np.ones(c.n))
    return c.y + margin * c.chi0 + slack * w
