"""Bounded symmetric base domains and the Cartan-Hartogs potential.

Only the unit ball and the type-I matrix domains are catalogued.  Every
norm/potential function accepts either jets (polarized evaluation) or plain
complex arrays whose last axis holds the coordinates, so the same formulas
feed both the jet pipeline and the finite-difference oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .jets import Jet, JetDomainError, JetRing, jet_logdet, jet_matmul, lift_point

__all__ = [
    "DomainError",
    "DomainSpec",
    "CHSetup",
    "Point",
    "make_domain",
    "generic_norm_polarized",
    "log_generic_norm_polarized",
    "genus_check",
    "ch_potential",
    "potential_value",
    "norm_value",
    "contains",
    "sample_points",
]


class DomainError(ValueError):
    """Bad domain description or a point outside the domain."""


@dataclass(frozen=True)
class DomainSpec:
    kind: str  # "ball" or "typeI"
    params: tuple[int, ...]
    dim: int
    genus: int

    @classmethod
    def ball(cls, d: int) -> "DomainSpec":
        if d < 1:
            raise DomainError(f"ball dimension must be positive, got {d}")
        return cls("ball", (d,), d, d + 1)

    @classmethod
    def type_one(cls, p: int, q: int) -> "DomainSpec":
        if p < 1 or q < 1:
            raise DomainError(f"type-I sizes must be positive, got p={p}, q={q}")
        return cls("typeI", (p, q), p * q, p + q)

    def __str__(self):
        if self.kind == "ball":
            return f"ball:d={self.params[0]}"
        return f"typeI:p={self.params[0]},q={self.params[1]}"

    def interior(self, z) -> bool:
        z = np.asarray(z, dtype=complex)
        if self.kind == "ball":
            return bool(np.vdot(z, z).real < 1.0)
        p, q = self.params
        return bool(np.linalg.norm(z.reshape(p, q), 2) < 1.0)


_BALL = re.compile(r"ball:d=(-?\d+)")
_TYPE_I = re.compile(r"typeI:p=(-?\d+),q=(-?\d+)")


def make_domain(text: str) -> DomainSpec:
    """Parse ``ball:d=<n>`` or ``typeI:p=<p>,q=<q>``."""
    if m := _BALL.fullmatch(text):
        return DomainSpec.ball(int(m.group(1)))
    if m := _TYPE_I.fullmatch(text):
        return DomainSpec.type_one(int(m.group(1)), int(m.group(2)))
    raise DomainError(f"cannot parse domain {text!r}; expected 'ball:d=<n>' or 'typeI:p=<p>,q=<q>'")


@dataclass(frozen=True)
class CHSetup:
    domain: DomainSpec
    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise DomainError(f"mu must be positive, got {self.mu}")

    @property
    def d(self) -> int:
        return self.domain.dim

    @property
    def n(self) -> int:
        """Ambient complex dimension."""
        return self.domain.dim + 1

    @property
    def gamma(self) -> int:
        return self.domain.genus

    @property
    def ke_mu(self) -> float:
        return self.domain.genus / (self.domain.dim + 1)

    @property
    def prefactor(self) -> float:
        """(mu (d+1) - gamma) / mu, the factor shared by all fiber formulas."""
        return (self.mu * (self.d + 1) - self.gamma) / self.mu

    def __str__(self):
        return f"{self.domain} mu={self.mu:g}"


@dataclass(frozen=True, eq=False)
class Point:
    z: np.ndarray
    w: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "z", np.atleast_1d(np.asarray(self.z, dtype=complex)))
        object.__setattr__(self, "w", complex(self.w))

    @classmethod
    def from_vector(cls, v) -> "Point":
        v = np.asarray(v, dtype=complex).ravel()
        return cls(v[:-1], v[-1])

    @classmethod
    def fiber(cls, d: int, w: complex) -> "Point":
        return cls(np.zeros(d, dtype=complex), w)

    @cached_property
    def vector(self) -> np.ndarray:
        return np.append(self.z, self.w)

    def __repr__(self):
        return f"Point(z={self.z.tolist()}, w={self.w})"


# -- generic norm -----------------------------------------------------------


def _matrix_form(domain: DomainSpec, zh, za):
    p, q = domain.params
    if isinstance(zh, Jet):
        zm = zh.reshape(p, q)
        zt = Jet(za.ring, np.swapaxes(za.reshape(p, q).coeffs, 0, 1))
        return jet_matmul(zm, zt) * -1.0 + np.eye(p)
    zm = zh.reshape(zh.shape[:-1] + (p, q))
    zt = za.reshape(za.shape[:-1] + (p, q))
    return np.eye(p) - zm @ np.swapaxes(zt, -1, -2)


def _check_dims(domain, zh, za):
    nz = zh.batch_shape[-1] if isinstance(zh, Jet) else np.shape(zh)[-1]
    na = za.batch_shape[-1] if isinstance(za, Jet) else np.shape(za)[-1]
    if nz != domain.dim or na != domain.dim:
        raise DomainError(f"{domain} needs {domain.dim} coordinates per sheet, got {nz} and {na}")


def generic_norm_polarized(domain: DomainSpec, zh, za):
    """N(z, zeta): holomorphic in ``zh``, antiholomorphic sheet ``za``.

    Plain arrays may carry leading batch axes.  With ``za = conj(zh)`` this
    is the generic norm N(z, z).
    """
    if not isinstance(zh, Jet):
        zh, za = np.asarray(zh, dtype=complex), np.asarray(za, dtype=complex)
    _check_dims(domain, zh, za)
    if domain.kind == "ball":
        if isinstance(zh, Jet):
            return 1.0 - (zh * za).sum()
        return 1.0 - np.sum(zh * za, axis=-1)
    m = _matrix_form(domain, zh, za)
    if isinstance(m, Jet):
        return jet_logdet(m).exp()
    return np.linalg.det(m)


def log_generic_norm_polarized(domain: DomainSpec, zh, za):
    """log N(z, zeta); for type-I it avoids forming the determinant of jets."""
    if not isinstance(zh, Jet):
        return np.log(generic_norm_polarized(domain, zh, za))
    _check_dims(domain, zh, za)
    if domain.kind == "ball":
        return (1.0 - (zh * za).sum()).log()
    return jet_logdet(_matrix_form(domain, zh, za))


def genus_check(domain: DomainSpec, sample_points, genus: float | None = None) -> float:
    """Relative spread of det(-ddbar log N) * N^genus over the sample points.

    The product is point-independent exactly when ``genus`` is the genus.
    """
    genus = domain.genus if genus is None else genus
    pts = [np.asarray(z, dtype=complex).ravel() for z in sample_points]
    if len(pts) < 5:
        raise DomainError("genus_check needs at least 5 points")
    d = domain.dim
    ring = JetRing(d, d, 1, 1)
    values = []
    for z in pts:
        if z.size != d or not domain.interior(z):
            raise DomainError(f"sample point {z} is not interior to {domain}")
        zh, za = lift_point(ring, z)
        logn = log_generic_norm_polarized(domain, zh, za)
        hess = np.array([[-logn.coefficient(_unit(d, j), _unit(d, k)) for k in range(d)] for j in range(d)])
        norm = np.exp(logn.const.real)
        values.append(np.linalg.det(hess).real * norm**genus)
    values = np.array(values)
    return float((values.max() - values.min()) / values.mean())


def _unit(n: int, k: int) -> tuple[int, ...]:
    e = [0] * n
    e[k] = 1
    return tuple(e)


# -- Cartan-Hartogs potential --------------------------------------------------


def ch_potential(setup: CHSetup, holo, anti):
    """Phi = -log(N^mu - w wbar) on polarized coordinates (z_1..z_d, w).

    For jets the last entry of each sheet is the fiber coordinate.  For plain
    arrays (last axis = coordinates) the real value is returned.
    """
    d = setup.d
    if isinstance(holo, Jet):
        zh, wh = holo[:d], holo[d]
        za, wa = anti[:d], anti[d]
        n_mu = (log_generic_norm_polarized(setup.domain, zh, za) * setup.mu).exp()
        gap = n_mu - wh * wa
        c = np.asarray(gap.const)
        if np.any(c.real <= 0):
            raise DomainError("point violates |w|^2 < N^mu")
        try:
            return -gap.log()
        except JetDomainError as exc:
            raise DomainError(f"potential: {exc}") from exc
    holo = np.asarray(holo, dtype=complex)
    anti = np.asarray(anti, dtype=complex)
    norm = generic_norm_polarized(setup.domain, holo[..., :d], anti[..., :d])
    gap = norm**setup.mu - holo[..., d] * anti[..., d]
    if np.any(gap.real <= 0):
        raise DomainError("point violates |w|^2 < N^mu")
    return -np.log(gap).real


def potential_value(setup: CHSetup, points) -> np.ndarray:
    """Phi at plain points (last axis = (z, w)); vectorized evaluator."""
    points = np.asarray(points, dtype=complex)
    return ch_potential(setup, points, points.conj())


def norm_value(domain: DomainSpec, z) -> float:
    z = np.asarray(z, dtype=complex)
    return float(generic_norm_polarized(domain, z, z.conj()).real)


def contains(setup: CHSetup, point: Point) -> bool:
    z = point.z
    if z.size != setup.d or not setup.domain.interior(z):
        return False
    return abs(point.w) ** 2 < norm_value(setup.domain, z) ** setup.mu


def sample_points(
    setup: CHSetup,
    count: int,
    rng: np.random.Generator,
    margin: float = 0.8,
    fiber: bool = False,
) -> list[Point]:
    """Rejection-sample interior points away from the boundary.

    ``z`` lies in the domain shrunk by ``margin`` and ``|w|^2 < margin N^mu``.
    With ``fiber=True`` all points have ``z = 0``.
    """
    d = setup.d
    out = []
    while len(out) < count:
        if fiber:
            z = np.zeros(d, dtype=complex)
        else:
            z = rng.uniform(-margin, margin, size=d) + 1j * rng.uniform(-margin, margin, size=d)
            if not setup.domain.interior(z / margin):
                continue
        radius = np.sqrt(margin * norm_value(setup.domain, z) ** setup.mu)
        w = complex(*(rng.uniform(-radius, radius, size=2)))
        if abs(w) >= radius:
            continue
        out.append(Point(z, w))
    return out
