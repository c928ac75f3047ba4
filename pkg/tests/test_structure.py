import math

import numpy as np
import pytest
import shapely

from conftest import M1_TYPES
from trapmodes.errors import (DomainError, GeometryError, Infeasible, InsufficientExtrema,
                              StabilityViolation)
from trapmodes.levelset import (EndKind, Endpoint, LevelCurve, find_stagnation,
                                find_trace_extrema, trace_level_set)
from trapmodes.potential import ModeParams, evaluate
from trapmodes.structure import (BodySection, Structure, assemble_matrices, body_moments,
                                 heave_limit, min_separation, plan_ballast, synthesize)


def section(points, H=0.0, height=1.0):
    pts = np.asarray(points, dtype=float)
    curve = LevelCurve(0.0, H, pts, Endpoint(EndKind.FREE_SURFACE, float(pts[0, 0])),
                       Endpoint(EndKind.FREE_SURFACE, float(pts[-1, 0])), False, 0.0)
    return BodySection(curve, H, height)


def spar(n=300):
    """Narrow deep hull close to the axis."""
    t = np.linspace(0.0, math.pi, n)
    return section(np.stack([0.2 - 0.1 * np.cos(t), -3.0 * np.sin(t)], axis=1))


def barge(n=300):
    t = np.linspace(0.0, math.pi, n)
    return section(np.stack([3.0 - 1.0 * np.cos(t), -0.4 * np.sin(t)], axis=1))


def test_waterplane_moments_are_annulus_moments():
    b = barge()
    mom = body_moments(b, com_eta=-0.1)
    r_in, r_out = b.waterline_radii
    assert mom.I_D == pytest.approx(math.pi * (r_out ** 2 - r_in ** 2), rel=1e-14)
    assert mom.I_D_11 == mom.I_D_22 == pytest.approx(math.pi / 4 * (r_out ** 4 - r_in ** 4), rel=1e-14)
    assert mom.I_D_1 == mom.I_D_2 == mom.I_D_12 == 0.0
    # Pappus for the half-ellipse section
    assert mom.displaced_volume == pytest.approx(2 * math.pi * 3.0 * math.pi * 0.4 / 2, rel=1e-8)
    assert mom.I_B_y == pytest.approx(mom.displaced_volume * (mom.buoyancy_eta + 0.1), rel=1e-12)


def test_body_section_needs_closed_curve():
    pts = np.array([[1.0, 0.0], [1.2, -1.0], [1.5, -1.5], [2.0, -2.0], [2.5, -3.0], [3.0, -4.0]])
    curve = LevelCurve(0.0, 0.0, pts, Endpoint(EndKind.FREE_SURFACE, 1.0), Endpoint(EndKind.INFINITY),
                       False, 0.0)
    with pytest.raises(GeometryError):
        BodySection(curve)


def test_uniform_density_at_buoyancy_centre():
    b = barge()
    z_b = b.curve.moments().centroid_eta
    plan = plan_ballast(b, z_b)
    dense, light = plan.layers
    assert dense.density == pytest.approx(1.0, rel=1e-12)
    assert light.density == 0.0
    assert plan.center_of_mass_eta == pytest.approx(z_b, abs=1e-12)


@pytest.mark.parametrize("frac", [0.05, 0.5, 0.9])
def test_plan_meets_mass_and_centre_targets(frac):
    b = spar()
    lowest = b.curve.lowest_point()
    z_b = b.curve.moments().centroid_eta
    target = lowest + frac * (z_b - lowest)
    plan = plan_ballast(b, target)
    vol = b.curve.moments().volume
    assert abs(plan.mass - vol) <= 1e-10 * vol
    assert abs(plan.center_of_mass_eta - target) <= 1e-8


def test_plan_with_superstructure_mass():
    b = spar()
    plan = plan_ballast(b, 0.1)
    assert plan.layers[1].density > 0.0
    assert abs(plan.center_of_mass_eta - 0.1) <= 1e-8


def test_infeasible_targets():
    b = spar()
    with pytest.raises(Infeasible):
        plan_ballast(b, b.curve.lowest_point() - 0.1)
    with pytest.raises(Infeasible):
        plan_ballast(b, 2.0)


def test_low_centre_of_mass_is_stable():
    b = spar()
    b.ballast = plan_ballast(b, b.curve.lowest_point() + 0.05)
    mats = assemble_matrices(b)
    mom = body_moments(b)
    expected = np.diag([mom.I_D, mom.I_D_22 + mom.I_B_y, mom.I_D_11 + mom.I_B_y])
    assert np.array_equal(mats.K_hat, expected)
    assert np.min(np.linalg.eigvalsh(mats.K_hat)) > 0
    assert np.all(mats.K0[:3, :] == 0) and np.all(mats.K0[:, :3] == 0)


def test_top_heavy_plan_is_unstable():
    b = spar()
    b.ballast = plan_ballast(b, 0.2)
    with pytest.raises(StabilityViolation):
        assemble_matrices(b)


def test_mass_matrix_structure():
    b = barge()
    b.ballast = plan_ballast(b, b.curve.lowest_point() + 0.05)
    E0 = assemble_matrices(b).E0
    mass = b.ballast.mass
    assert E0[0, 0] == E0[1, 1] == E0[3, 3] == mass
    off = E0 - np.diag(np.diag(E0))
    assert np.all(off == 0.0)
    assert np.array_equal(E0, E0.T)
    assert np.min(np.linalg.eigvalsh(E0)) > 0


def test_matrices_need_ballast():
    with pytest.raises(DomainError):
        assemble_matrices(barge())


@pytest.mark.parametrize("name", list(M1_TYPES))
def test_m1_structure_invariants(m1_structures, name):
    s = m1_structures[name]
    amps = M1_TYPES[name]
    assert s.amplitudes == list(amps)
    assert [b.encloses_ring for b in s.bodies] == [False, True]
    assert s.check()
    assert min_separation(s.bodies) > 0.0
    for b, h in zip(s.bodies, amps):
        mom = body_moments(b)
        vol = mom.displaced_volume
        assert abs(b.ballast.mass - vol) <= 1e-10 * vol
        assert np.min(np.linalg.eigvalsh(b.matrices.K_hat)) > 0
        assert np.array_equal(b.chi, [0, 0, 0, h, 0, 0])
        assert b.wetted.max_residual <= 1e-8
        assert b.wetted.H == h


def test_m1_first_body_hugs_the_trace_minimum(m1_structures):
    for name, amps in M1_TYPES.items():
        s = m1_structures[name]
        ex = find_trace_extrema(s.mode, amps[0], (0.0, s.mode.rho_r))[0]
        b = s.bodies[0]
        r_in, r_out = b.waterline_radii
        assert r_in < ex.rho < r_out
        assert b.wetted.level == pytest.approx(0.95 * ex.value, rel=1e-12)


def test_heaving_first_body_left_of_critical_branch(m1_structures):
    s = m1_structures["heave-still"]
    st = find_stagnation(s.mode, 0.1)
    body = s.bodies[0].curve.polygon()
    assert body.bounds[2] < st.location.rho
    # the bounded curve just below the critical level walls off the region
    # between the axis side and the separatrix
    crit = [c for c in trace_level_set(s.mode, 0.1, st.level - 1e-3, 12.0) if c.closed_on_surface]
    assert len(crit) == 1
    assert shapely.Polygon(crit[0].points).contains(body)


def test_ring_body_separates_ring_from_water(m1_structures):
    for s in m1_structures.values():
        b = s.bodies[-1]
        r_in, r_out = b.waterline_radii
        assert r_in < s.mode.rho_r < r_out
        assert b.curve.polygon().contains(shapely.Point(s.mode.rho_r, -1e-3))


def test_wetted_curves_are_level_lines(m1_structures):
    for s in m1_structures.values():
        for b in s.bodies:
            pts = b.wetted.points
            vals = evaluate(pts[:, 0], pts[:, 1], s.mode, b.H).psi
            assert np.max(np.abs(vals - b.wetted.level)) <= 1e-8


def test_three_bodies_need_higher_mode():
    with pytest.raises(InsufficientExtrema):
        synthesize(ModeParams(1), [0.0, 0.0, 0.0])


def test_synthesis_input_validation():
    with pytest.raises(DomainError):
        synthesize(ModeParams(1), [0.0])
    with pytest.raises(DomainError):
        synthesize(ModeParams(1), [-0.1, 0.0])


def test_structure_check_rejects_two_ring_bodies(m1_structures):
    s = m1_structures["motionless"]
    bad = Structure(s.mode, [s.bodies[1], s.bodies[1]])
    with pytest.raises(GeometryError):
        bad.check()


def test_m6_three_body_structure(m6_structure):
    s = m6_structure
    assert len(s.bodies) == 3
    assert [b.encloses_ring for b in s.bodies] == [False, False, True]
    assert s.amplitudes == [0.0, 0.05, 0.0]
    assert s.check()
    radii = [r for b in s.bodies for r in b.waterline_radii]
    assert radii == sorted(radii)


def test_heave_limit_for_m6():
    h = heave_limit(ModeParams(6), 3)
    assert 0.05 < h < 2.0
    assert len(find_trace_extrema(ModeParams(6), h, (0.0, 10.1734681350627))) >= 2
