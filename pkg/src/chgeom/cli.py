"""Command-line front end: ``verify``, ``report``, ``sweep`` and ``explore``.

All commands print to stdout unless ``--out`` is given.  JSON carries a
top-level ``schema`` field and floats with 17 significant digits; for
fixed inputs and seed the output is byte-identical (``verify`` records a
wall time, which ``--no-timing`` suppresses).

Exit codes: 0 success, 1 failed verification, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import __version__
from .analysis import (
    a2_defect,
    conjecture_scan,
    einstein_deviation,
    englis_coefficients,
    fit_fiber_a2,
    probe_points,
)
from .curvature import curvature_at, extremal_residual_at, metric_at, scalar_curvature_at
from .domains import (
    CHSetup,
    DomainError,
    Point,
    ch_potential,
    genus_check,
    make_domain,
    potential_value,
    sample_points,
)
from .jets import JetDomainError, fd_table, mixed_partials
from .reference import (
    FiberPoint,
    det_closed_at,
    extremal_w_closed,
    fiber_closed_forms,
    fiber_tensor_identities,
    inverse_relation_check,
    metric_block_closed_at,
    ricci_decomposition_residual,
    scalar_curvature_closed_at,
)

SCHEMA = 1
SWEEP_HEADER = ("mu", "kappa_origin", "extremal_residual", "a2_defect", "einstein_deviation")

TOL_LINALG = 1e-9
TOL_CURVATURE = 1e-7
TOL_FD = 1e-5

VERIFY_POINTS = 6
VERIFY_FIBER_T = (0.0, 0.25, 0.5, 0.75)
SAMPLE_MARGIN = 0.6


class UsageError(Exception):
    """Bad command-line input (exit code 2)."""


# -- serialization ------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        # keep floats recognizable as floats
        text += ".0"
    return text


def _plain(obj):
    """Numpy scalars/arrays and complex numbers to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""

    def emit(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {emit(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(emit(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + emit(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, float):
            return _fmt_float(o)
        return json.dumps(o)

    return emit(_plain(obj), 0) + "\n"


# -- report types -------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    paper_anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual < self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_anchor": self.paper_anchor,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    setup: dict
    seed: int
    checks: list[Check] = field(default_factory=list)
    wall_time_s: float | None = None

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        passed = sum(c.passed for c in self.checks)
        return {
            "total": len(self.checks),
            "passed": passed,
            "failed": len(self.checks) - passed,
            "all_passed": self.all_passed,
        }

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": "verify",
            "setup": self.setup,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        checks = [
            Check(c["name"], c["paper_anchor"], float("nan") if c["residual"] is None else c["residual"], c["tolerance"])
            for c in data["checks"]
        ]
        return cls(setup=data["setup"], seed=data["seed"], checks=checks, wall_time_s=data.get("wall_time_s"))

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SweepRow:
    mu: float
    kappa_origin: float
    extremal_residual: float
    a2_defect: float
    einstein_deviation: float

    def values(self) -> tuple[float, ...]:
        return tuple(asdict(self).values())


# -- checks -------------------------------------------------------------------


def _rel(a, b) -> float:
    """Elementwise |a - b| / max(|b|, 1), maximized."""
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))


def _check_genus(setup, pts, fiber):
    return genus_check(setup.domain, [p.z for p in pts] + [np.zeros(setup.d)])


def _check_metric_block(setup, pts, fiber):
    return max(_rel(metric_at(setup, p).g, metric_block_closed_at(setup, p)) for p in pts + fiber)


def _check_det_ratio(setup, pts, fiber):
    ratios = np.array([metric_at(setup, p).det_g / det_closed_at(setup, p) for p in pts + fiber])
    return float((ratios.max() - ratios.min()) / ratios.mean())


def _check_inverse_relation(setup, pts, fiber):
    return max(inverse_relation_check(setup, p) for p in pts + fiber)


def _check_ricci(setup, pts, fiber):
    return max(ricci_decomposition_residual(setup, p) for p in pts + fiber)


def _check_kappa(setup, pts, fiber):
    return max(_rel(scalar_curvature_at(setup, p), scalar_curvature_closed_at(setup, p)) for p in pts + fiber)


def _check_fiber_forms(setup, pts, fiber):
    worst = 0.0
    for p in fiber:
        b = curvature_at(setup, p)
        ref = fiber_closed_forms(setup, FiberPoint(p.w))
        got = (b.kappa, b.ric_norm_sq, b.lap_kappa, b.r_norm_sq)
        want = (ref.kappa, ref.ric_norm_sq, ref.lap_kappa, ref.r_norm_sq)
        worst = max(worst, _rel(got, want))
    return worst


def _check_fiber_tensor(setup, pts, fiber):
    return max(max(fiber_tensor_identities(setup, FiberPoint(p.w)).values()) for p in fiber)


def _check_extremal_w(setup, pts, fiber):
    worst = 0.0
    for p in pts + fiber:
        got = extremal_residual_at(setup, p).field_components[setup.d]
        worst = max(worst, _rel(got, extremal_w_closed(setup, p)))
    return worst


def _check_a1(setup, pts, fiber):
    worst = 0.0
    for p in pts[:2] + fiber[:1]:
        a1 = englis_coefficients(curvature_at(setup, p)).a1
        worst = max(worst, abs(a1 - scalar_curvature_at(setup, p) / 2.0))
    return worst


def _check_a2_degree(setup, pts, fiber):
    return fit_fiber_a2(setup).fit_residual


def _check_fd(setup, pts, fiber):
    worst = 0.0
    for p in pts[:1] + fiber[1:2]:
        jet = mixed_partials(lambda h, a: ch_potential(setup, h, a), p.vector, (2, 2))
        fd = fd_table(lambda x: potential_value(setup, x), p.vector, (2, 2))
        worst = max(worst, max(abs(jet[k] - v) / max(abs(jet[k]), 1.0) for k, v in fd.items()))
    return worst


@dataclass(frozen=True)
class _CheckSpec:
    name: str
    anchor: str
    tolerance: float
    run: Callable


CHECKS: tuple[_CheckSpec, ...] = (
    _CheckSpec("genus", "generic norm: det(-ddbar log N) N^genus constant", TOL_LINALG, _check_genus),
    _CheckSpec("metric_block", "block form of the metric matrix", TOL_LINALG, _check_metric_block),
    _CheckSpec("det_ratio", "closed-form metric determinant (ratio constancy)", TOL_LINALG, _check_det_ratio),
    _CheckSpec("inverse_relation", "base block of the inverse metric", TOL_LINALG, _check_inverse_relation),
    _CheckSpec("ricci_decomposition", "Ricci form = -(d+2) g + c g_Omega(mu)", TOL_LINALG, _check_ricci),
    _CheckSpec("kappa_closed", "closed-form scalar curvature", TOL_CURVATURE, _check_kappa),
    _CheckSpec("fiber_forms", "fiber formulas for kappa, |Ric|^2, Laplacian, |R|^2", TOL_CURVATURE, _check_fiber_forms),
    _CheckSpec("fiber_tensor", "vanishing and closed-form curvature components on z=0", TOL_CURVATURE, _check_fiber_tensor),
    _CheckSpec("extremal_w", "w-component of the extremal field", TOL_CURVATURE, _check_extremal_w),
    _CheckSpec("englis_a1", "a1 = kappa/2", TOL_LINALG, _check_a1),
    _CheckSpec("a2_degree", "a2 on the fiber is quadratic in |w|^2", TOL_CURVATURE, _check_a2_degree),
    _CheckSpec("fd_cross_check", "jet partials vs finite differences", TOL_FD, _check_fd),
)
CHECK_NAMES = tuple(c.name for c in CHECKS)


def run_verify(setup: CHSetup, seed: int, tolerances: dict | None = None, timing: bool = True) -> VerificationReport:
    tolerances = tolerances or {}
    unknown = set(tolerances) - set(CHECK_NAMES)
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    pts = sample_points(setup, VERIFY_POINTS, rng, margin=SAMPLE_MARGIN)
    fiber = [FiberPoint.from_t(t).point(setup.d) for t in VERIFY_FIBER_T]
    report = VerificationReport(setup=_setup_dict(setup), seed=seed)
    for spec in CHECKS:
        try:
            residual = float(spec.run(setup, pts, fiber))
        except (DomainError, JetDomainError, np.linalg.LinAlgError):
            residual = float("nan")
        report.checks.append(Check(spec.name, spec.anchor, residual, tolerances.get(spec.name, spec.tolerance)))
    if timing:
        report.wall_time_s = time.perf_counter() - start
    return report


def _setup_dict(setup: CHSetup) -> dict:
    return {
        "domain": str(setup.domain),
        "dim": setup.d,
        "genus": setup.gamma,
        "mu": setup.mu,
        "ke_mu": setup.ke_mu,
    }


# -- report -------------------------------------------------------------------


def point_report(setup: CHSetup, point: Point) -> dict:
    b = curvature_at(setup, point)
    ext = extremal_residual_at(setup, point)
    coeffs = englis_coefficients(b)
    ric_eig = scipy.linalg.eigh(b.ric, b.g, eigvals_only=True)
    closed = {
        "det_g": det_closed_at(setup, point),
        "kappa": scalar_curvature_closed_at(setup, point),
        "extremal_w": extremal_w_closed(setup, point),
    }
    residuals = {
        "metric_block": _rel(b.g, metric_block_closed_at(setup, point)),
        "kappa": _rel(b.kappa, closed["kappa"]),
        "inverse_relation": inverse_relation_check(setup, point),
        "ricci_decomposition": ricci_decomposition_residual(setup, point),
        "extremal_w": _rel(ext.field_components[setup.d], closed["extremal_w"]),
    }
    if not np.any(point.z):
        ref = fiber_closed_forms(setup, FiberPoint(point.w))
        fiber = {
            "kappa": ref.kappa,
            "ric_norm_sq": ref.ric_norm_sq,
            "lap_kappa": ref.lap_kappa,
            "r_norm_sq": ref.r_norm_sq,
        }
        closed["fiber"] = fiber
        residuals["fiber_forms"] = _rel(
            (b.kappa, b.ric_norm_sq, b.lap_kappa, b.r_norm_sq),
            (ref.kappa, ref.ric_norm_sq, ref.lap_kappa, ref.r_norm_sq),
        )
        residuals["fiber_tensor"] = max(fiber_tensor_identities(setup, FiberPoint(point.w), b.R).values())
    return {
        "schema": SCHEMA,
        "command": "report",
        "setup": _setup_dict(setup),
        "point": {"z": point.z, "w": point.w},
        "g": b.g,
        "det_g": b.metric.det_g,
        "condition": b.metric.condition,
        "kappa": b.kappa,
        "r_norm_sq": b.r_norm_sq,
        "ric_norm_sq": b.ric_norm_sq,
        "lap_kappa": b.lap_kappa,
        "ric_eigenvalues": ric_eig,
        "extremal_field": ext.field_components,
        "extremal_residual": ext.residual_norm,
        "a0": coeffs.a0,
        "a1": coeffs.a1,
        "a2": coeffs.a2,
        "closed_forms": closed,
        "residuals": residuals,
    }


# -- sweep / explore ----------------------------------------------------------


def sweep_rows(domain, mu_min: float, mu_max: float, steps: int) -> list[SweepRow]:
    if not (0 < mu_min < mu_max) or not math.isfinite(mu_max):
        raise UsageError(f"need 0 < mu-min < mu-max, got {mu_min}, {mu_max}")
    if steps < 2:
        raise UsageError(f"need steps >= 2, got {steps}")
    probe = Point.fiber(domain.dim, 0.3)
    origin = Point.fiber(domain.dim, 0.0)
    rows = []
    for mu in np.linspace(mu_min, mu_max, steps):
        setup = CHSetup(domain, float(mu))
        rows.append(
            SweepRow(
                mu=float(mu),
                kappa_origin=scalar_curvature_at(setup, origin),
                extremal_residual=extremal_residual_at(setup, probe).residual_norm,
                a2_defect=a2_defect(setup),
                einstein_deviation=einstein_deviation(setup, probe_points(domain)),
            )
        )
    return rows


def explore_report(domain, grid: int, seed: int) -> dict:
    if grid < 1:
        raise UsageError(f"need grid >= 1, got {grid}")
    setup = CHSetup(domain, domain.genus / (domain.dim + 1))
    pts = sample_points(setup, grid, np.random.default_rng(seed), margin=SAMPLE_MARGIN)
    scan = conjecture_scan(setup, pts)
    return {
        "schema": SCHEMA,
        "command": "explore",
        "setup": _setup_dict(setup),
        "seed": seed,
        "grid": grid,
        "a2_min": scan.a2_min,
        "a2_max": scan.a2_max,
        "spread": scan.spread,
        "a2_values": list(scan.values),
        "points": [{"z": p.z, "w": p.w} for p in pts],
    }


# -- argument parsing -----------------------------------------------------------


def parse_point(text: str, setup: CHSetup) -> Point:
    """``re:im,re:im,...`` with the fiber coordinate last; ``:im`` may be omitted."""
    values = []
    for part in text.split(","):
        bits = part.strip().split(":")
        try:
            if len(bits) == 1:
                values.append(complex(float(bits[0]), 0.0))
            elif len(bits) == 2:
                values.append(complex(float(bits[0]), float(bits[1])))
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"cannot parse coordinate {part!r}; expected re:im") from None
    if len(values) != setup.n:
        raise UsageError(f"{setup.domain} needs {setup.n} coordinates (z_1..z_{setup.d}, w), got {len(values)}")
    return Point.from_vector(values)


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chgeom", description="Cartan-Hartogs curvature checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="json"):
        p.add_argument("--domain", required=True, help="ball:d=<n> or typeI:p=<p>,q=<q>")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)

    p = sub.add_parser("verify", help="run every closed-form check at seeded random points")
    common(p)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true", help="omit wall time (byte-reproducible output)")
    for spec in CHECKS:
        p.add_argument(
            f"--tol-{spec.name.replace('_', '-')}",
            dest=f"tol_{spec.name}",
            type=_positive_float,
            metavar="TOL",
            help=f"tolerance for {spec.name} (default {spec.tolerance:g})",
        )

    p = sub.add_parser("report", help="all quantities at one point")
    common(p)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--point", required=True, help="comma-separated re:im pairs, w last")

    p = sub.add_parser("sweep", help="CSV of curvature diagnostics across mu")
    common(p, fmt="csv")
    p.add_argument("--mu-min", type=_positive_float, required=True)
    p.add_argument("--mu-max", type=_positive_float, required=True)
    p.add_argument("--steps", type=int, default=9)

    p = sub.add_parser("explore", help="a2 spread at mu = genus/(d+1) over random points")
    common(p)
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    domain = make_domain(args.domain)
    if args.command == "verify":
        tols = {name: getattr(args, f"tol_{name}") for name in CHECK_NAMES if getattr(args, f"tol_{name}") is not None}
        report = run_verify(CHSetup(domain, args.mu), args.seed, tols, timing=not args.no_timing)
        if args.format == "csv":
            rows = [[c.name, c.paper_anchor, c.residual, c.tolerance, c.passed] for c in report.checks]
            _emit(_csv_text(("name", "paper_anchor", "residual", "tolerance", "pass"), rows), args.out)
        else:
            _emit(report.to_json(), args.out)
        return 0 if report.all_passed else 1

    if args.command == "report":
        if args.format != "json":
            raise UsageError("report supports --format json only")
        setup = CHSetup(domain, args.mu)
        _emit(dumps(point_report(setup, parse_point(args.point, setup))), args.out)
        return 0

    if args.command == "sweep":
        rows = sweep_rows(domain, args.mu_min, args.mu_max, args.steps)
        if args.format == "csv":
            _emit(_csv_text(SWEEP_HEADER, [r.values() for r in rows]), args.out)
        else:
            payload = {
                "schema": SCHEMA,
                "command": "sweep",
                "domain": str(domain),
                "rows": [asdict(r) for r in rows],
            }
            _emit(dumps(payload), args.out)
        return 0

    if args.format != "json":
        raise UsageError("explore supports --format json only")
    _emit(dumps(explore_report(domain, args.grid, args.seed)), args.out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (UsageError, DomainError, JetDomainError) as exc:
        print(f"chgeom: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
