"""Closed-form Cartan-Hartogs identities used as oracles for the jet pipeline.

Nothing here touches the curvature pipeline except :func:`base_curvature_norm_sq`,
which measures the homogeneous base constant |R|^2 of (Omega, -ddbar log N)
once per domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curvature import curvature_at, curvature_of_potential, metric_at, ricci_at
from .domains import (
    CHSetup,
    DomainError,
    DomainSpec,
    Point,
    contains,
    log_generic_norm_polarized,
    norm_value,
)
from .jets import JetRing, lift_point

__all__ = [
    "FiberPoint",
    "FiberForms",
    "NormDerivatives",
    "norm_power_derivatives",
    "base_curvature_norm_sq",
    "det_closed_at",
    "metric_block_closed_at",
    "base_metric_at",
    "inverse_relation_check",
    "scalar_curvature_closed_at",
    "ricci_decomposition_residual",
    "fiber_closed_forms",
    "fiber_tensor_identities",
    "extremal_w_closed",
    "extremal_w_printed",
]


@dataclass(frozen=True)
class FiberPoint:
    w: complex

    def __post_init__(self):
        if not abs(self.w) < 1:
            raise DomainError(f"fiber point needs |w| < 1, got {self.w}")

    @classmethod
    def from_t(cls, t: float) -> "FiberPoint":
        if not 0 <= t < 1:
            raise DomainError(f"fiber parameter t must lie in [0, 1), got {t}")
        return cls(complex(np.sqrt(t)))

    @property
    def t(self) -> float:
        return abs(self.w) ** 2

    def point(self, d: int) -> Point:
        return Point.fiber(d, self.w)


@dataclass(frozen=True)
class FiberForms:
    kappa: float
    ric_norm_sq: float
    lap_kappa: float
    r_norm_sq: float


@dataclass(frozen=True)
class NormDerivatives:
    """N^mu and its first and mixed second partials at a base point z."""

    value: float
    holo: np.ndarray  # (N^mu)_j
    anti: np.ndarray  # (N^mu)_kbar
    mixed: np.ndarray  # (N^mu)_{j kbar}


def _require(setup: CHSetup, point: Point):
    if not contains(setup, point):
        raise DomainError(f"point {point!r} is outside M({setup}); need |w|^2 < N^mu")


def norm_power_derivatives(setup: CHSetup, z) -> NormDerivatives:
    d = setup.d
    ring = JetRing(d, d, 1, 1)
    zh, za = lift_point(ring, z)
    nm = (log_generic_norm_polarized(setup.domain, zh, za) * setup.mu).exp()
    p = nm.partials()
    return NormDerivatives(
        value=float(nm.const.real),
        holo=p[1 : d + 1, 0].copy(),
        anti=p[0, 1 : d + 1].copy(),
        mixed=p[1 : d + 1, 1 : d + 1].copy(),
    )


@lru_cache(maxsize=None)
def base_curvature_norm_sq(domain: DomainSpec) -> float:
    """|R|^2 of (Omega, -ddbar log N) at the origin; constant by homogeneity."""

    def potential(zh, za):
        return -log_generic_norm_polarized(domain, zh, za)

    return curvature_of_potential(potential, np.zeros(domain.dim)).r_norm_sq


def det_closed_at(setup: CHSetup, point: Point) -> float:
    _require(setup, point)
    d, mu = setup.d, setup.mu
    n = norm_value(setup.domain, point.z)
    return n ** (mu * (d + 1) - setup.gamma) / (n**mu - abs(point.w) ** 2) ** (d + 2)


def metric_block_closed_at(setup: CHSetup, point: Point) -> np.ndarray:
    _require(setup, point)
    d, w = setup.d, point.w
    nd = norm_power_derivatives(setup, point.z)
    gap = nd.value - abs(w) ** 2
    g = np.empty((d + 1, d + 1), dtype=complex)
    g[:d, :d] = np.outer(nd.holo, nd.anti) - nd.mixed * gap
    g[:d, d] = -nd.holo * w
    g[d, :d] = -nd.anti * np.conj(w)
    g[d, d] = nd.value
    return g / gap**2


def base_metric_at(setup: CHSetup, z) -> np.ndarray:
    """g^{Omega(mu)} = -ddbar log N^mu at z."""
    nd = norm_power_derivatives(setup, z)
    return (np.outer(nd.holo, nd.anti) - nd.mixed * nd.value) / nd.value**2


def inverse_relation_check(setup: CHSetup, point: Point) -> float:
    """max |g^{j kbar} - (N^mu - |w|^2)/N^mu g_Omega^{j kbar}| over base indices."""
    _require(setup, point)
    d = setup.d
    g_inv = metric_at(setup, point).g_inv
    nd_value = norm_value(setup.domain, point.z) ** setup.mu
    scale = (nd_value - abs(point.w) ** 2) / nd_value
    expected = scale * np.linalg.inv(base_metric_at(setup, point.z))
    return float(np.max(np.abs(g_inv[:d, :d] - expected)))


def scalar_curvature_closed_at(setup: CHSetup, point: Point) -> float:
    """kappa = d c (N^mu - |w|^2) / N^mu - (d+1)(d+2) at a general point."""
    _require(setup, point)
    d = setup.d
    nm = norm_value(setup.domain, point.z) ** setup.mu
    return d * setup.prefactor * (nm - abs(point.w) ** 2) / nm - (d + 1) * (d + 2)


def ricci_decomposition_residual(setup: CHSetup, point: Point) -> float:
    """max |Ric + (d+2) g - c blockdiag(g_Omega(mu), 0)| over all entries."""
    _require(setup, point)
    d = setup.d
    g, ric = ricci_at(setup, point)
    block = np.zeros_like(g)
    block[:d, :d] = base_metric_at(setup, point.z)
    return float(np.max(np.abs(ric + (d + 2) * g - setup.prefactor * block)))


def fiber_closed_forms(setup: CHSetup, fiber: FiberPoint) -> FiberForms:
    d, gamma, mu = setup.d, setup.gamma, setup.mu
    t = fiber.t
    s = 1.0 - t
    c = setup.prefactor
    kappa_base = -d * gamma / mu
    r2_base = base_curvature_norm_sq(setup.domain) / mu**2
    return FiberForms(
        kappa=d * c * s - (d + 2) * (d + 1),
        ric_norm_sq=d * c**2 * s**2 - 2 * d * (d + 2) * c * s + (d + 1) * (d + 2) ** 2,
        lap_kappa=-d * c * s * ((d - 1) * t + 1),
        r_norm_sq=s**2 * r2_base - 4 * t * s * kappa_base + 2 * d * (d + 1) * t**2 + 4 * (d + 1),
    )


def fiber_tensor_identities(setup: CHSetup, fiber: FiberPoint, R: np.ndarray | None = None) -> dict[str, float]:
    """Residuals of the vanishing and closed-form curvature components on z=0.

    ``R`` may pass a precomputed curvature tensor at ``(0, w)``.
    """
    d = setup.d
    t = fiber.t
    if R is None:
        R = curvature_at(setup, fiber.point(d)).R
    nd = norm_power_derivatives(setup, np.zeros(d))
    base = slice(0, d)
    mixed_vanishing = max(
        np.max(np.abs(R[d, base, base, base]), initial=0.0),
        np.max(np.abs(R[base, d, base, base]), initial=0.0),
    )
    triple_w = max(np.max(np.abs(R[d, d, d, base]), initial=0.0), np.max(np.abs(R[d, d, base, d]), initial=0.0))
    return {
        "R_wjkl": float(mixed_vanishing),
        "R_wwwl": float(triple_w),
        "R_wwkl": float(np.max(np.abs(R[d, d, base, base] - nd.mixed / (1 - t) ** 3))),
        "R_wwww": float(abs(R[d, d, d, d] + 2 / (1 - t) ** 4)),
    }


def extremal_w_closed(setup: CHSetup, point: Point) -> complex:
    """w-component of the extremal field: -d c w (N^mu - |w|^2)^2 / N^{2 mu}.

    This is the expression that follows from g^{w wbar} = (1 - |w|^2)^2 on
    the fiber and the cofactor identity N^mu g^{w wbar} - wbar sum_j
    g^{j wbar} (N^mu)_jbar = (N^mu - |w|^2)^2.
    """
    _require(setup, point)
    nm = norm_value(setup.domain, point.z) ** setup.mu
    gap = nm - abs(point.w) ** 2
    return complex(-setup.d * setup.prefactor * point.w * gap**2 / nm**2)


def extremal_w_printed(setup: CHSetup, point: Point) -> complex:
    """Variant -d c w / (N^{2 mu} (N^mu - |w|^2)^2) with the gap factor inverted.

    Kept so the acceptance suite can test it as written; it disagrees with
    the computed field whenever c != 0 and w != 0.
    """
    _require(setup, point)
    nm = norm_value(setup.domain, point.z) ** setup.mu
    gap = nm - abs(point.w) ** 2
    return complex(-setup.d * setup.prefactor * point.w / (nm**2 * gap**2))
