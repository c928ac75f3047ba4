import math

import numpy as np
import pytest

from trapmodes.errors import DomainError, NotFound, SeedOffLevel, StagnationEncountered
from trapmodes.geometry import MeridianCurve
from trapmodes.levelset import (EndKind, FeatureKind, find_stagnation, find_trace_extrema,
                                find_trace_zeros, free_surface_trace, trace_level_curve,
                                trace_level_set)
from trapmodes.potential import ModeParams, evaluate
from trapmodes.specfun import bessel_zero

M1 = ModeParams(1)


@pytest.fixture(scope="module")
def stagnation_m1():
    return find_stagnation(M1, 0.1)


def test_trace_sampling_and_guard():
    tr = free_surface_trace(M1, 0.0, rho_max=10.0, n=400)
    assert len(tr) == 400
    assert np.min(np.abs(tr.rho - M1.rho_r)) >= 1e-6
    assert tr.value[0] == 0.0
    with pytest.raises(DomainError):
        free_surface_trace(M1, 0.0, rho_max=10.0, n=50)
    with pytest.raises(DomainError):
        free_surface_trace(M1, 0.0, rho_max=2.0)


def test_trace_starts_at_zero():
    tr = free_surface_trace(M1, 0.0, rho_max=5.0, n=2000, rho_min=0.0)
    assert abs(tr.value[1]) < 1e-4


def test_trace_grows_logarithmically_at_ring():
    rr = M1.rho_r
    gaps = [1e-3, 1e-4, 1e-5]
    for side in (-1.0, 1.0):
        vals = [float(evaluate(rr + side * g, 0.0, M1).psi) for g in gaps]
        steps = np.diff(vals)
        # equal growth per decade: psi ~ ln(1/gap), far below 1e3 at the guard
        assert steps == pytest.approx([math.log(10)] * 2, rel=0.01)
        guard = float(evaluate(rr + side * 2e-6, 0.0, M1).psi)
        assert 10.0 < guard < 20.0


def test_heave_trace_eventually_negative_and_decreasing():
    tr = free_surface_trace(M1, 0.1, rho_max=20.0, n=400)
    tail = tr.value[tr.rho > 8.0]
    assert np.all(np.diff(tail) < 0)
    assert np.all(tail < 0)


def test_m1_single_negative_minimum_left_of_zero():
    feats = find_trace_extrema(M1, 0.0, (0.0, M1.rho_r))
    zeros = find_trace_zeros(M1, 0.0)
    assert len(feats) == 1 and len(zeros) == 1
    assert feats[0].kind is FeatureKind.MIN and feats[0].value < 0
    assert feats[0].rho < zeros[0].rho


def test_m1_heave_single_negative_minimum():
    feats = find_trace_extrema(M1, 0.1, (0.0, M1.rho_r))
    assert len(feats) == 1
    assert feats[0].kind is FeatureKind.MIN and feats[0].value < 0


def test_m6_extrema_sit_near_j0_zeros():
    mp = ModeParams(6)
    feats = find_trace_extrema(mp, 0.0, (0.0, bessel_zero("J", 1, 3)))
    # (0, j_{1,3}) holds j_{0,1}, j_{0,2} and j_{0,3}
    assert len(feats) == 3
    for l, f in enumerate(feats, start=1):
        assert abs(f.rho - bessel_zero("J", 0, l)) < 0.1
    signs = [np.sign(f.value) for f in feats]
    assert all(a == -b for a, b in zip(signs[:-1], signs[1:]))
    for f in feats:
        assert (f.kind is FeatureKind.MIN) == (f.value < 0)


def test_extrema_are_stationary():
    mp = ModeParams(6)
    for f in find_trace_extrema(mp, 0.0, (0.0, 9.0)):
        d = float(evaluate(f.rho, 0.0, mp).psi_rho)
        assert abs(d) <= 1e-8


def test_extrema_approach_j0_zeros_as_m_grows():
    hi = bessel_zero("J", 1, 3)
    dists = []
    for m in (6, 10, 14):
        feats = find_trace_extrema(ModeParams(m), 0.0, (0.0, hi))
        dists.append([abs(f.rho - bessel_zero("J", 0, l)) for l, f in enumerate(feats[:2], 1)])
    dists = np.array(dists)
    assert np.all(np.diff(dists, axis=0) < 0)


def test_empty_interval_gives_no_features():
    assert find_trace_extrema(M1, 0.0, (0.05, 0.1)) == []
    with pytest.raises(DomainError):
        find_trace_extrema(M1, 0.0, (1.0, 6.0))


def _check_curve(curve, mp):
    pts = curve.points
    assert curve.max_residual <= 1e-8
    assert np.all(pts[:, 0] >= 0) and np.all(pts[:, 1] <= 0)
    for end, p in ((curve.left_end, pts[0]), (curve.right_end, pts[-1])):
        if end.kind is EndKind.FREE_SURFACE:
            assert p[1] == 0.0 and p[0] == end.rho


def test_nodal_line_escapes_without_touching_axis():
    z = find_trace_zeros(M1, 0.0)[0].rho
    c = trace_level_curve(M1, 0.0, 0.0, (z, 0.0))
    _check_curve(c, M1)
    kinds = {c.left_end.kind, c.right_end.kind}
    assert kinds == {EndKind.FREE_SURFACE, EndKind.INFINITY}
    assert np.min(c.points[:, 0]) > 0.1


@pytest.mark.parametrize("v", [0.5, 2.0, 6.0])
def test_positive_levels_give_one_closed_curve_round_the_ring(v):
    curves = trace_level_set(M1, 0.0, v, 3 * M1.rho_r)
    assert len(curves) == 1
    c = curves[0]
    _check_curve(c, M1)
    assert c.closed_on_surface and c.encloses_ring


def test_streamline_tangent_parallel_to_velocity():
    # the ends sit about 0.1 from the ring, so the step must resolve that scale
    c = trace_level_set(M1, 0.0, 1.0, 3 * M1.rho_r, step=0.005)[0]
    curve = MeridianCurve(c.points)
    pts = curve.position(curve.s)
    tang = curve.tangent(curve.s)
    f = evaluate(pts[:, 0], pts[:, 1], M1)
    cross = np.abs(f.phi_rho * tang[:, 1] - f.phi_eta * tang[:, 0]) / np.hypot(f.phi_rho, f.phi_eta)
    assert np.max(cross) <= 1e-6


@pytest.mark.parametrize("v", [-2.0, -5.0])
def test_deep_branch_asymptotes_vertical_line(v):
    curves = trace_level_set(M1, 0.1, v, 15.0)
    escaping = [c for c in curves if EndKind.INFINITY in (c.left_end.kind, c.right_end.kind)]
    assert len(escaping) == 1
    tip = escaping[0].points[-1]
    assert tip[0] == pytest.approx(math.sqrt(2 * abs(v) / 0.1), rel=0.01)


def test_seed_checks():
    with pytest.raises(SeedOffLevel):
        trace_level_curve(M1, 0.0, 1.0, (1.0, -1.0))


def test_seed_on_stagnation_point(stagnation_m1):
    loc = stagnation_m1.location
    with pytest.raises(StagnationEncountered):
        trace_level_curve(M1, 0.1, stagnation_m1.level, (loc.rho, loc.eta))


def test_stagnation_levels(stagnation_m1):
    assert stagnation_m1.level == pytest.approx(-0.9464, abs=1e-3)
    assert stagnation_m1.gradient_norm <= 1e-7
    st2 = find_stagnation(ModeParams(2), 0.1)
    assert st2.level == pytest.approx(-2.590, abs=5e-3)


def test_no_interior_stagnation_without_heave():
    with pytest.raises(NotFound):
        find_stagnation(M1, 0.0, (0.3, 10.0, -8.0, -0.2))


def _end_signature(curves):
    return sorted((c.left_end.kind.value, c.right_end.kind.value) for c in curves)


def test_critical_level_separates_families(stagnation_m1):
    vc = stagnation_m1.level
    below = trace_level_set(M1, 0.1, vc - 1e-3, 12.0)
    above = trace_level_set(M1, 0.1, vc + 1e-3, 12.0)
    for curves in (below, above):
        assert _end_signature(curves) == [("FreeSurface", "FreeSurface"),
                                          ("FreeSurface", "Infinity")]
    inner_below = [c for c in below if c.closed_on_surface][0]
    inner_above = [c for c in above if c.closed_on_surface][0]
    # below the critical level the bounded curve starts near the axis,
    # above it the bounded curve lies to the right of the trace minimum
    assert inner_below.left_end.rho < 1.0 < inner_above.left_end.rho
