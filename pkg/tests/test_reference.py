import numpy as np
import pytest

from chgeom.curvature import curvature_at, extremal_residual_at, metric_at, scalar_curvature_at
from chgeom.domains import CHSetup, DomainError, DomainSpec, Point, sample_points
from chgeom.reference import (
    FiberPoint,
    base_curvature_norm_sq,
    det_closed_at,
    extremal_w_closed,
    extremal_w_printed,
    fiber_closed_forms,
    fiber_tensor_identities,
    inverse_relation_check,
    metric_block_closed_at,
    norm_power_derivatives,
    ricci_decomposition_residual,
    scalar_curvature_closed_at,
)

SETUPS = [
    CHSetup(DomainSpec.ball(1), 2.0),
    CHSetup(DomainSpec.ball(2), 0.7),
    CHSetup(DomainSpec.ball(3), 1.3),
    CHSetup(DomainSpec.type_one(2, 2), 1.1),
    CHSetup(DomainSpec.type_one(1, 3), 0.9),
]
IDS = [str(s) for s in SETUPS]


def test_fiber_point_validation():
    assert FiberPoint.from_t(0.25).w == pytest.approx(0.5)
    assert FiberPoint(0.3j).t == pytest.approx(0.09)
    with pytest.raises(DomainError):
        FiberPoint.from_t(1.0)
    with pytest.raises(DomainError):
        FiberPoint(1.2)


def test_det_closed_examples():
    for setup in SETUPS:
        assert det_closed_at(setup, Point.fiber(setup.d, 0)) == pytest.approx(1.0)
    s = CHSetup(DomainSpec.ball(1), 2.0)
    assert det_closed_at(s, Point([0], 0.5)) == pytest.approx(1 / 0.75**3)


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_det_ratio_constant(setup):
    pts = sample_points(setup, 12, np.random.default_rng(0))
    ratio = np.array([metric_at(setup, p).det_g / det_closed_at(setup, p) for p in pts])
    assert (ratio.max() - ratio.min()) / ratio.mean() < 1e-9


def test_block_examples():
    s1 = CHSetup(DomainSpec.ball(1), 1.0)
    np.testing.assert_allclose(metric_block_closed_at(s1, Point([0], 0)), np.eye(2), atol=1e-15)
    s2 = CHSetup(DomainSpec.ball(1), 2.0)
    np.testing.assert_allclose(metric_block_closed_at(s2, Point([0], 0.5)), np.diag([8 / 3, 16 / 9]), atol=1e-13)


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_block_matches_pipeline(setup):
    for p in sample_points(setup, 8, np.random.default_rng(1)):
        g = metric_at(setup, p).g
        closed = metric_block_closed_at(setup, p)
        assert np.max(np.abs(g - closed)) <= 1e-10 * np.max(np.abs(closed))


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_inverse_relation_and_ricci_decomposition(setup):
    for p in sample_points(setup, 8, np.random.default_rng(2)):
        assert inverse_relation_check(setup, p) < 1e-10
        assert ricci_decomposition_residual(setup, p) < 1e-9


def test_inverse_on_fiber():
    s = CHSetup(DomainSpec.ball(1), 2.0)
    h = metric_at(s, Point([0], 0.5)).g_inv
    assert h[1, 1].real == pytest.approx(0.5625)
    assert abs(h[0, 1]) < 1e-14 and abs(h[1, 0]) < 1e-14
    s3 = CHSetup(DomainSpec.ball(2), 1.0)
    assert inverse_relation_check(s3, Point([0.1 + 0.2j, 0.3], 0.4)) < 1e-10


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_scalar_curvature_closed(setup):
    for p in sample_points(setup, 6, np.random.default_rng(3)):
        assert scalar_curvature_at(setup, p) == pytest.approx(scalar_curvature_closed_at(setup, p), abs=1e-9)


def test_norm_power_derivatives_at_origin():
    s = CHSetup(DomainSpec.ball(2), 0.7)
    nd = norm_power_derivatives(s, np.zeros(2))
    assert nd.value == 1
    np.testing.assert_allclose(nd.holo, 0, atol=1e-15)
    np.testing.assert_allclose(nd.mixed, -0.7 * np.eye(2), atol=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ball_base_constant(d):
    assert base_curvature_norm_sq(DomainSpec.ball(d)) == pytest.approx(2 * d * (d + 1), rel=1e-9)


def test_fiber_forms_examples():
    s1 = CHSetup(DomainSpec.ball(1), 1.0)
    for t in (0.0, 0.3, 0.8):
        assert fiber_closed_forms(s1, FiberPoint.from_t(t)).r_norm_sq == pytest.approx(12)
    s2 = CHSetup(DomainSpec.ball(1), 2.0)
    f = fiber_closed_forms(s2, FiberPoint.from_t(0.25))
    assert (f.kappa, f.lap_kappa, f.ric_norm_sq, f.r_norm_sq) == pytest.approx((-5.25, -0.75, 14.0625, 9.5625))
    for setup in (CHSetup(DomainSpec.ball(3), 1.0), CHSetup(DomainSpec.type_one(2, 2), 0.8)):
        f = fiber_closed_forms(setup, FiberPoint(0))
        d = setup.d
        assert f.kappa == pytest.approx(-(d + 1) * (d + 2))
        assert f.lap_kappa == pytest.approx(0)


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_fiber_forms_match_pipeline(setup):
    for t in (0.0, 0.35, 0.7):
        fp = FiberPoint.from_t(t)
        b = curvature_at(setup, fp.point(setup.d))
        f = fiber_closed_forms(setup, fp)
        got = np.array([b.kappa, b.ric_norm_sq, b.lap_kappa, b.r_norm_sq])
        want = np.array([f.kappa, f.ric_norm_sq, f.lap_kappa, f.r_norm_sq])
        assert np.max(np.abs(got - want) / np.maximum(np.abs(want), 1)) < 1e-9


def test_fiber_tensor_examples():
    s2 = CHSetup(DomainSpec.ball(1), 2.0)
    R = curvature_at(s2, Point([0], 0.5)).R
    assert R[1, 1, 1, 1].real == pytest.approx(-2 / 0.75**4)
    s = CHSetup(DomainSpec.ball(2), 0.7)
    assert fiber_tensor_identities(s, FiberPoint.from_t(0.4))["R_wjkl"] < 1e-10
    s1 = CHSetup(DomainSpec.ball(1), 1.0)
    R = curvature_at(s1, Point([0], 0)).R
    assert R[1, 1, 0, 0].real == pytest.approx(-1.0)


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_fiber_tensor_identities(setup):
    for t in (0.0, 0.5, 0.85):
        res = fiber_tensor_identities(setup, FiberPoint.from_t(t))
        assert set(res) == {"R_wjkl", "R_wwwl", "R_wwkl", "R_wwww"}
        assert max(res.values()) < 1e-8


def test_extremal_closed_examples():
    ke = CHSetup(DomainSpec.type_one(2, 2), 0.8)
    for p in sample_points(ke, 3, np.random.default_rng(0)):
        assert extremal_w_closed(ke, p) == 0
    s = CHSetup(DomainSpec.ball(2), 0.5)
    assert extremal_w_closed(s, Point([0.1, 0.2], 0)) == 0
    # corrected form at (0, 0.3): 6 * 0.3 * 0.91^2
    assert extremal_w_closed(s, Point([0, 0], 0.3)) == pytest.approx(1.8 * 0.91**2)
    # literal variant with the gap factor in the denominator
    assert extremal_w_printed(s, Point([0, 0], 0.3)) == pytest.approx(1.8 / 0.8281)


@pytest.mark.parametrize("setup", SETUPS, ids=IDS)
def test_extremal_w_component_matches_corrected_closed_form(setup):
    for p in sample_points(setup, 4, np.random.default_rng(4)):
        got = extremal_residual_at(setup, p).field_components[setup.d]
        want = extremal_w_closed(setup, p)
        assert abs(got - want) <= 1e-9 * max(abs(want), 1)


def test_printed_extremal_form_disagrees_off_ke():
    s = CHSetup(DomainSpec.ball(2), 0.5)
    p = Point([0, 0], 0.3)
    got = extremal_residual_at(s, p).field_components[2]
    assert abs(got - extremal_w_printed(s, p)) > 0.1
