"""The CP(n-1) phase-space model.

Points are phase classes of complex n-vectors with |u|^2 = chi0.  The module
fixes a canonical representative, provides the Darboux parametrization by
(xi, tau), the toric moment map, chart-wise evaluation of the scaled
Fubini-Study form, the rotational torus action and the discrete involutions.
"""

from dataclasses import dataclass
import json
import math
import warnings

import numpy as np

from .coupling import full_xi
from .errors import ChartViolation, DomainViolation, ZeroVector

TIE_TOL = 1e-12


def as_vector(u):
    """Coerce a ProjectivePoint or array-like to a complex vector."""
    if isinstance(u, ProjectivePoint):
        return u.u
    return np.asarray(u, dtype=complex)


def as_angles(theta):
    """Coerce a TorusElement or array-like to an angle vector."""
    if hasattr(theta, "array"):
        return theta.array()
    return np.asarray(theta, dtype=float)


def canonicalize(u, c):
    """Canonical representative: |u|^2 = chi0 and the largest-modulus
    coordinate (smallest index on ties within 1e-12) real non-negative."""
    u = as_vector(u)
    nrm = np.linalg.norm(u)
    if nrm < 1e-300:
        raise ZeroVector("cannot canonicalize the zero vector")
    u = u * (math.sqrt(c.chi0) / nrm)
    mags = np.abs(u)
    jstar = int(np.argmax(mags >= mags.max() - TIE_TOL))
    if mags[jstar] > 0:
        u = u * (np.conjugate(u[jstar]) / mags[jstar])
    return u


def projective_distance(u, v):
    """Gauge-invariant distance min_phase |u - e^{i gamma} v|."""
    u = as_vector(u)
    v = as_vector(v)
    inner = np.vdot(v, u)
    phase = inner / abs(inner) if abs(inner) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


@dataclass(frozen=True)
class ProjectivePoint:
    """Canonical representative of a point of CP(n-1) at scale chi0."""

    u: np.ndarray

    @classmethod
    def from_vector(cls, u, c):
        return cls(canonicalize(u, c))

    def to_json(self):
        return [[float(z.real), float(z.imag)] for z in self.u]

    @classmethod
    def from_json(cls, data, c):
        u = np.array([complex(re, im) for re, im in data])
        return cls.from_vector(u, c)


def point_to_json(u):
    return [[float(z.real), float(z.imag)] for z in np.asarray(u, dtype=complex)]


def point_from_json(data, c):
    u = np.array([complex(re, im) for re, im in data])
    return canonicalize(u, c)


def load_point(path, c):
    """Read a point from JSON: either a bare [re, im] array or the output
    of a CLI command (a dict carrying "point" or "image").

    Non-canonical inputs are canonicalized with a warning.
    """
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        for key in ("image", "point", "u"):
            if key in data:
                data = data[key]
                break
        else:
            raise ValueError(f"{path}: no point data found in JSON object")
    raw = np.array([complex(re, im) for re, im in data])
    u = canonicalize(raw, c)
    if np.max(np.abs(u - raw)) > 1e-9 * math.sqrt(c.chi0):
        warnings.warn(f"point in {path} was not canonical; canonicalized on ingest")
    return u


def e_param(xi, theta, c):
    """Darboux parametrization u_j = e^{i theta_j} sqrt(xi_j - y), u_n real.

    xi may be given as the n-1 polytope coordinates or the full alcove
    vector; theta are the n-1 torus angles.  Returns the canonical
    representative.
    """
    xi = full_xi(xi, c)
    theta = as_angles(theta)
    if theta.shape != (c.n - 1,):
        raise ValueError(f"need {c.n - 1} torus angles")
    if np.any(xi < c.y - 1e-12) or abs(xi.sum() - math.pi) > 1e-9:
        raise DomainViolation(f"xi outside the moment polytope: {xi}")
    r = np.sqrt(np.maximum(xi - c.y, 0.0))
    u = r.astype(complex)
    u[: c.n - 1] *= np.exp(1j * theta)
    return canonicalize(u, c)


def e_param_inv(u, c):
    """Invert the Darboux parametrization on the dense open part.

    Requires every coordinate nonzero; returns (full xi, theta) with the
    gauge u_n > 0.
    """
    u = as_vector(u)
    if np.any(np.abs(u) < 1e-12):
        raise ChartViolation("some coordinate vanishes; point outside CP(n-1)_0")
    u = u * (np.conjugate(u[-1]) / abs(u[-1]))
    xi = np.abs(u) ** 2 + c.y
    theta = np.angle(u[:-1])
    return xi, theta


def moment_J(u, c):
    """Toric moment map J_k = |u_k|^2 + y, k = 1..n-1."""
    u = as_vector(u)
    return np.abs(u[:-1]) ** 2 + c.y


def moment_J_full(u, c):
    """All n shifted moduli; sums to pi when |u|^2 = chi0."""
    u = as_vector(u)
    return np.abs(u) ** 2 + c.y


def chart_index(u):
    """1-based index of the largest-modulus coordinate."""
    return int(np.argmax(np.abs(as_vector(u)))) + 1


def chart_gauge(u, j, c):
    """Representative with u_j real positive (chart gauge), j 1-based."""
    u = as_vector(u)
    if abs(u[j - 1]) <= c.chart_tol:
        raise ChartViolation(f"|u_{j}| = {abs(u[j - 1]):.3e} too small for chart {j}")
    return u * (np.conjugate(u[j - 1]) / abs(u[j - 1]))


def to_chart(u, j, c):
    """Inhomogeneous chart coordinates: the n-1 entries k != j in the
    u_j > 0 gauge."""
    w = chart_gauge(u, j, c)
    return np.delete(w, j - 1)


def from_chart(w, j, c):
    """Rebuild the representative from chart-j coordinates."""
    w = np.asarray(w, dtype=complex)
    rest = float(np.sum(np.abs(w) ** 2))
    if rest >= c.chi0:
        raise ChartViolation(f"chart coordinates have |w|^2 = {rest:.12g} >= chi0")
    u = np.empty(c.n, dtype=complex)
    u[np.arange(c.n) != j - 1] = w
    u[j - 1] = math.sqrt(c.chi0 - rest)
    return u


def chart_transition(u, j, k, a, c):
    """Exact differential of the chart-j to chart-k coordinate change at u.

    a is a chart-j tangent (length n-1); the result is the corresponding
    chart-k tangent.  The transition composes the sphere completion of the
    j-th coordinate with the phase gauge that makes u_k real positive.
    """
    uj = chart_gauge(u, j, c)
    w = np.delete(uj, j - 1)
    a = np.asarray(a, dtype=complex)
    du = np.empty(c.n, dtype=complex)
    du[np.arange(c.n) != j - 1] = a
    du[j - 1] = -np.sum((np.conjugate(w) * a).real) / uj[j - 1].real
    uk = uj[k - 1]
    if abs(uk) <= c.chart_tol:
        raise ChartViolation(f"point not in chart {k}")
    dalpha = (np.conjugate(uk) * du[k - 1]).imag / abs(uk) ** 2
    phase = np.conjugate(uk) / abs(uk)
    dup = phase * (du - 1j * uj * dalpha)
    return np.delete(dup, k - 1)


def fs_omega_eval(u, v1, v2, c, j=None):
    """Scaled Fubini-Study form chi0*omega_FS on chart tangents.

    Tangents are chart-j coordinate vectors (length n-1); the chart with the
    largest |u_j| is used when j is None.  In these coordinates the form is
    the Darboux form i sum d conj(w) wedge d w, i.e.
    omega(a, b) = 2 sum Im(a_k conj(b_k)).
    """
    if j is None:
        j = chart_index(u)
    chart_gauge(u, j, c)  # validates chart membership
    a = np.asarray(v1, dtype=complex)
    b = np.asarray(v2, dtype=complex)
    if a.shape != (c.n - 1,) or b.shape != (c.n - 1,):
        raise ChartViolation(f"tangents must be chart vectors of length {c.n - 1}")
    return 2.0 * float(np.sum((a * np.conjugate(b)).imag))


def rot_action(theta, u):
    """Rotational torus action u_k -> e^{i theta_k} u_k, k = 1..n-1."""
    u = as_vector(u).copy()
    theta = as_angles(theta)
    u[: len(u) - 1] *= np.exp(1j * theta)
    return u


def involution(which, u):
    """Discrete involutions of the phase space.

    'C' is componentwise conjugation, 'Gamma' conjugation composed with
    reversal of the first n-1 slots, and 'sigma' = C Gamma the plain
    reversal.  All three are involutive; C and Gamma are anti-symplectic,
    sigma is symplectic.
    """
    u = as_vector(u)
    if which == "C":
        return np.conjugate(u)
    if which == "Gamma":
        out = np.conjugate(u).copy()
        out[:-1] = out[:-1][::-1]
        return out
    if which == "sigma":
        out = u.copy()
        out[:-1] = out[:-1][::-1]
        return out
    raise ValueError(f"unknown involution {which!r}")


def index_reversal(x):
    """sigma on R^{n-1}: component k goes to component n-k."""
    return np.asarray(x)[::-1].copy()


def random_point(c, rng, interior_bias=0.0):
    """Random canonical point; with interior_bias > 0, resample until
    min_k |u_k|^2 > interior_bias * chi0 / n."""
    while True:
        z = rng.standard_normal(c.n) + 1j * rng.standard_normal(c.n)
        u = canonicalize(z, c)
        if interior_bias <= 0.0:
            return u
        if np.min(np.abs(u) ** 2) > interior_bias * c.chi0 / c.n:
            return u


def vertex_points(c, eps=0.0, rng=None):
    """Near-vertex points of the moment polytope: u concentrated on one axis."""
    pts = []
    for k in range(c.n):
        u = np.zeros(c.n, dtype=complex)
        u[k] = 1.0
        if eps > 0.0:
            noise = rng.standard_normal(c.n) + 1j * rng.standard_normal(c.n)
            u = u + eps * noise
        pts.append(canonicalize(u, c))
    return pts
