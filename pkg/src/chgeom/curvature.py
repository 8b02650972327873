"""Metric, curvature and extremality data from jets of a Kähler potential.

The pipeline below works over any jet ring: feeding it a potential jet of
order ``(p + 2, q + 2)`` yields the metric, inverse, Ricci form and scalar
curvature as jets of order ``(p, q)``.  Plain values are the ``(0, 0)``
case; derivatives of the scalar curvature (its Laplacian, the extremal
vector field) come from running the same code with ``p, q > 0``.

Index conventions: ``g[a, b] = d_a dbar_b Phi``, ``h = inv(g)`` as a matrix,
contractions follow the placement ``g^{b abar} = h[b, a]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import CHSetup, DomainError, Point, ch_potential, contains
from .jets import Jet, JetRing, jet_inv, jet_logdet, jet_matmul, jet_trace, lift_point

__all__ = [
    "MAX_CONDITION",
    "MetricData",
    "CurvatureBundle",
    "ExtremalResidual",
    "metric_at",
    "curvature_at",
    "curvature_of_potential",
    "extremal_residual_at",
    "scalar_curvature_at",
    "ricci_at",
    "riemann_tensor",
    "extremal_field_of_potential",
]

MAX_CONDITION = 1e10

Potential = Callable[[Jet, Jet], Jet]


@dataclass(frozen=True)
class MetricData:
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    d3: np.ndarray  # d3[a, b, e] = d_e g[a, b]
    d3_anti: np.ndarray  # d3_anti[a, b, e] = dbar_e g[a, b]
    d4: np.ndarray  # d4[a, b, e, f] = d_e dbar_f g[a, b]
    condition: float


@dataclass(frozen=True)
class CurvatureBundle:
    metric: MetricData
    R: np.ndarray
    ric: np.ndarray
    kappa: float
    r_norm_sq: float
    ric_norm_sq: float
    lap_kappa: float

    @property
    def g(self) -> np.ndarray:
        return self.metric.g

    @property
    def g_inv(self) -> np.ndarray:
        return self.metric.g_inv


@dataclass(frozen=True)
class ExtremalResidual:
    field_components: np.ndarray
    residual_matrix: np.ndarray

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.residual_matrix))


# -- generic pipeline -------------------------------------------------------


def _potential_jet(potential: Potential, base, orders: tuple[int, int]) -> Jet:
    base = np.asarray(base, dtype=complex).ravel()
    ring = JetRing(base.size, base.size, *orders)
    return potential(*lift_point(ring, base))


def _ddbar(f: Jet) -> Jet:
    """Matrix of d_a dbar_b f for a scalar jet."""
    n = f.ring.num_holo_vars
    rows = []
    for a in range(n):
        fa = f.diff_holo(a)
        rows.append(Jet.stack([fa.diff_anti(b) for b in range(n)]))
    return Jet.stack(rows)


def _check_conditioning(g0: np.ndarray) -> float:
    cond = float(np.linalg.cond(g0))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise DomainError(f"metric condition number {cond:.3g} exceeds {MAX_CONDITION:g}; point too close to the boundary")
    return cond


@dataclass(frozen=True)
class _GeometryJets:
    g: Jet  # order (p+1, q+1)
    g_inv: Jet  # order (p, q)
    ric: Jet  # order (p, q)
    kappa: Jet  # order (p, q)
    condition: float


def _geometry_jets(phi: Jet) -> _GeometryJets:
    g = _ddbar(phi)
    cond = _check_conditioning(g.const)
    ric = -_ddbar(jet_logdet(g))
    p, q = ric.ring.max_holo_order, ric.ring.max_anti_order
    g_inv = jet_inv(g.truncate(p, q))
    kappa = jet_trace(jet_matmul(g_inv, ric))
    return _GeometryJets(g, g_inv, ric, kappa, cond)


def _metric_data(phi: Jet, g: Jet, cond: float) -> MetricData:
    n = phi.ring.num_holo_vars
    g0 = g.const
    g_inv = np.linalg.inv(g0)
    d3 = np.stack([g.diff_holo(e).const for e in range(n)], axis=-1)
    d3_anti = np.stack([g.diff_anti(e).const for e in range(n)], axis=-1)
    d4 = np.stack(
        [np.stack([g.diff_holo(e).diff_anti(f).const for f in range(n)], axis=-1) for e in range(n)],
        axis=-2,
    )
    return MetricData(g0, g_inv, float(np.linalg.det(g0).real), d3, d3_anti, d4, cond)


def riemann_tensor(m: MetricData) -> np.ndarray:
    """R[a,b,e,t] = -g_{a bbar e tbar} + g^{z thbar} g_{a zbar e} g_{th tbar bbar}."""
    quad = np.einsum("zh,aze,htb->abet", m.g_inv, m.d3, m.d3_anti)
    return -m.d4 + quad


def _norms(g_inv: np.ndarray, R: np.ndarray, ric: np.ndarray) -> tuple[float, float]:
    hc = g_inv.conj()
    r2 = np.einsum("az,bn,ex,tu,abet,znxu->", hc, g_inv, hc, g_inv, R, R.conj())
    ric2 = np.einsum("et,ab,ea,tb->", hc, g_inv, ric, ric.conj())
    return float(r2.real), float(ric2.real)


def curvature_of_potential(potential: Potential, base) -> CurvatureBundle:
    """Full curvature data of the Kähler metric with the given potential.

    ``potential`` maps polarized coordinate jets to a scalar jet.
    """
    phi = _potential_jet(potential, base, (3, 3))
    geo = _geometry_jets(phi)
    metric = _metric_data(phi, geo.g, geo.condition)
    R = riemann_tensor(metric)
    ric0 = geo.ric.const
    r2, ric2 = _norms(metric.g_inv, R, ric0)
    n = phi.ring.num_holo_vars
    # Hessian of kappa from the first-order jet coefficients
    hess = np.array(
        [[geo.kappa.diff_holo(a).diff_anti(b).const for b in range(n)] for a in range(n)]
    )
    lap = np.trace(metric.g_inv @ hess)
    return CurvatureBundle(
        metric=metric,
        R=R,
        ric=ric0,
        kappa=float(np.real(geo.kappa.const)),
        r_norm_sq=r2,
        ric_norm_sq=ric2,
        lap_kappa=float(lap.real),
    )


# -- Cartan-Hartogs entry points -------------------------------------------


def _require_interior(setup: CHSetup, point: Point):
    if not contains(setup, point):
        raise DomainError(f"point {point!r} is outside M({setup}); need z in the domain and |w|^2 < N^mu")


def _ch(setup: CHSetup) -> Potential:
    return lambda holo, anti: ch_potential(setup, holo, anti)


def metric_at(setup: CHSetup, point: Point) -> MetricData:
    _require_interior(setup, point)
    phi = _potential_jet(_ch(setup), point.vector, (2, 2))
    g = _ddbar(phi)
    return _metric_data(phi, g, _check_conditioning(g.const))


def curvature_at(setup: CHSetup, point: Point) -> CurvatureBundle:
    _require_interior(setup, point)
    return curvature_of_potential(_ch(setup), point.vector)


def scalar_curvature_at(setup: CHSetup, point: Point) -> float:
    _require_interior(setup, point)
    phi = _potential_jet(_ch(setup), point.vector, (2, 2))
    return float(np.real(_geometry_jets(phi).kappa.const))


def extremal_field_of_potential(potential: Potential, base) -> ExtremalResidual:
    """E^a = sum_b g^{b abar} dbar_b kappa and its antiholomorphic derivatives."""
    phi = _potential_jet(potential, base, (2, 4))
    geo = _geometry_jets(phi)  # kappa jets of order (0, 2)
    n = phi.ring.num_holo_vars
    dk = Jet.stack([geo.kappa.diff_anti(b) for b in range(n)])
    h = geo.g_inv.truncate(0, 1)
    # E[a] = sum_b h[b, a] dk[b]
    field = Jet.stack([(h[:, a] * dk).sum() for a in range(n)])
    residual = np.array([[field[a].diff_anti(e).const for e in range(n)] for a in range(n)])
    return ExtremalResidual(np.asarray(field.const), residual)


def extremal_residual_at(setup: CHSetup, point: Point) -> ExtremalResidual:
    _require_interior(setup, point)
    return extremal_field_of_potential(_ch(setup), point.vector)


def ricci_at(setup: CHSetup, point: Point) -> tuple[np.ndarray, np.ndarray]:
    """Metric and Ricci form at a point (cheaper than :func:`curvature_at`)."""
    _require_interior(setup, point)
    phi = _potential_jet(_ch(setup), point.vector, (2, 2))
    geo = _geometry_jets(phi)
    return geo.g.const, geo.ric.const
