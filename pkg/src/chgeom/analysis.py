"""Engliš coefficients, the a2 fiber polynomial, Einstein deviation and μ scans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curvature import CurvatureBundle, curvature_at, ricci_at
from .domains import CHSetup, DomainError, DomainSpec, Point, contains

__all__ = [
    "DEFAULT_FIBER_SAMPLES",
    "EnglisCoefficients",
    "FiberPolynomial",
    "KEResult",
    "ConjectureScan",
    "englis_coefficients",
    "englis_coefficients_at",
    "fit_fiber_a2",
    "a2_defect",
    "einstein_deviation",
    "find_ke_mu",
    "probe_points",
    "conjecture_scan",
]

DEFAULT_FIBER_SAMPLES = tuple(round(0.05 + 0.1 * k, 2) for k in range(9))


@dataclass(frozen=True)
class EnglisCoefficients:
    a0: float
    a1: float
    a2: float


@dataclass(frozen=True)
class FiberPolynomial:
    """a2(0, sqrt(t)) = const_term + c1 t + c0 t^2."""

    const_term: float
    c1: float
    c0: float
    fit_residual: float

    @property
    def defect(self) -> float:
        return 2.0 * self.c0 + self.c1


@dataclass(frozen=True)
class KEResult:
    mu0: float
    deviation_at_mu0: float
    bracket: tuple[float, float]


@dataclass(frozen=True)
class ConjectureScan:
    a2_min: float
    a2_max: float
    spread: float
    values: tuple[float, ...]


def englis_coefficients(bundle: CurvatureBundle) -> EnglisCoefficients:
    k = bundle.kappa
    a2 = bundle.lap_kappa / 3.0 + (bundle.r_norm_sq - 4.0 * bundle.ric_norm_sq + 3.0 * k * k) / 24.0
    return EnglisCoefficients(1.0, 0.5 * k, a2)


def englis_coefficients_at(setup: CHSetup, point: Point) -> EnglisCoefficients:
    return englis_coefficients(curvature_at(setup, point))


def fit_fiber_a2(setup: CHSetup, t_samples: Sequence[float] = DEFAULT_FIBER_SAMPLES) -> FiberPolynomial:
    """Least-squares quadratic in t = |w|^2 through a2 on the fiber z = 0."""
    t = np.asarray(sorted(set(float(x) for x in t_samples)))
    if t.size < 5:
        raise ValueError("fit_fiber_a2 needs at least 5 distinct samples")
    if t.min() < 0 or t.max() >= 1:
        raise DomainError("fiber samples must lie in [0, 1)")
    a2 = np.array([englis_coefficients_at(setup, Point.fiber(setup.d, np.sqrt(x))).a2 for x in t])
    vander = np.vander(t, 3, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, a2, rcond=None)
    resid = float(np.max(np.abs(vander @ coef - a2)))
    return FiberPolynomial(const_term=float(coef[0]), c1=float(coef[1]), c0=float(coef[2]), fit_residual=resid)


def a2_defect(setup: CHSetup, t_samples: Sequence[float] = DEFAULT_FIBER_SAMPLES) -> float:
    """2 c0 + c1 of the fiber polynomial; vanishes exactly in the KE case."""
    return fit_fiber_a2(setup, t_samples).defect


def einstein_deviation(setup: CHSetup, points: Sequence[Point]) -> float:
    """max over points of |Ric + (d+2) g|_F / |g|_F."""
    if not points:
        raise ValueError("einstein_deviation needs at least one point")
    worst = 0.0
    for pt in points:
        g, ric = ricci_at(setup, pt)
        worst = max(worst, float(np.linalg.norm(ric + (setup.d + 2) * g) / np.linalg.norm(g)))
    return worst


def probe_points(domain: DomainSpec) -> list[Point]:
    """Fixed small points that stay inside M(mu) for every mu used in scans."""
    d = domain.dim
    z = np.zeros(d, dtype=complex)
    z[0] = 0.2 + 0.1j
    return [Point.fiber(d, 0.3), Point(z, 0.25j)]


def find_ke_mu(
    domain: DomainSpec,
    bracket: tuple[float, float],
    points: Sequence[Point] | None = None,
    xatol: float = 1e-11,
) -> KEResult:
    """Minimize the Einstein deviation over mu inside ``bracket``."""
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    points = list(probe_points(domain) if points is None else points)
    for mu in (lo, hi):
        if not all(contains(CHSetup(domain, mu), p) for p in points):
            raise DomainError(f"probe points leave the domain at mu={mu}")

    def objective(mu):
        return einstein_deviation(CHSetup(domain, mu), points)

    mu0, dev = _golden_section(objective, lo, hi, xatol)
    edge = 1e3 * xatol
    if mu0 - lo < edge or hi - mu0 < edge:
        raise ValueError(f"no interior minimum of the Einstein deviation in {bracket}")
    return KEResult(mu0=float(mu0), deviation_at_mu0=float(dev), bracket=(lo, hi))


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, a: float, b: float, xatol: float) -> tuple[float, float]:
    # absolute tolerance: the deviation has a kink at the minimizer, so
    # parabolic steps buy nothing
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xatol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def conjecture_scan(setup: CHSetup, grid: Sequence[Point]) -> ConjectureScan:
    """Exploratory: how much does a2 vary over general interior points?"""
    if not grid:
        raise ValueError("conjecture_scan needs at least one point")
    values = np.array([englis_coefficients_at(setup, p).a2 for p in grid])
    spread = float((values.max() - values.min()) / (abs(values.mean()) + 1.0))
    return ConjectureScan(float(values.min()), float(values.max()), spread, tuple(map(float, values)))
