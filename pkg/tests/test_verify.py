import numpy as np
import pytest

from conftest import M1_TYPES
from trapmodes.errors import DomainError
from trapmodes.levelset import EndKind, Endpoint, LevelCurve
from trapmodes.potential import ModeParams
from trapmodes.structure import BodySection, Structure
from trapmodes.verify import (TruncationDomain, VerificationReport, check_equipartition,
                              check_far_field, check_green_identity, check_kinematic,
                              check_motion_equations, matrix_energy, motion_scale,
                              perturb_body, verify_structure)


def shifted(s, k, delta):
    """Copy of ``s`` with every vertex of body ``k`` moved outwards by ``delta``."""
    b = s.bodies[k]
    w = b.wetted
    pts = w.points + np.array([delta, 0.0])
    curve = LevelCurve(w.level, w.H, pts, Endpoint(EndKind.FREE_SURFACE, float(pts[0, 0])),
                       Endpoint(EndKind.FREE_SURFACE, float(pts[-1, 0])), w.encloses_ring, np.nan)
    bodies = list(s.bodies)
    bodies[k] = BodySection(curve, b.H, b.superstructure_height, b.ballast, b.matrices)
    return Structure(s.mode, bodies)


def test_truncation_domain_validation():
    with pytest.raises(DomainError):
        TruncationDomain(0.0, 1.0)


@pytest.mark.parametrize("name", list(M1_TYPES))
def test_kinematic_residual_small(m1_structures, name):
    s = m1_structures[name]
    for k in range(len(s.bodies)):
        assert check_kinematic(s, k) <= 1e-6


@pytest.mark.parametrize("name", list(M1_TYPES))
def test_perturbed_bodies_are_detected(m1_structures, name):
    s = m1_structures[name]
    for k in range(len(s.bodies)):
        assert check_kinematic(perturb_body(s, k), k) > 1e-3
        assert check_kinematic(shifted(s, k, 1e-3), k) > 1e-3


def test_kinematic_body_index_checked(motionless):
    with pytest.raises(DomainError):
        check_kinematic(motionless, 5)


@pytest.mark.parametrize("name", list(M1_TYPES))
def test_motion_equations(m1_structures, name):
    s = m1_structures[name]
    for k, b in enumerate(s.bodies):
        res = check_motion_equations(s, k)
        assert res.shape == (6,)
        assert np.all(np.abs(res[1:]) <= 1e-10)
        assert abs(res[0]) <= 1e-5 * motion_scale(s, k)


def test_motionless_ring_body_pressure_balance(motionless):
    k = len(motionless.bodies) - 1
    b = motionless.bodies[k]
    area = b.curve.surface_area()
    pts = b.curve.points
    from trapmodes.potential import evaluate
    phi_max = np.max(np.abs(evaluate(pts[:, 0], pts[:, 1], motionless.mode).phi))
    assert abs(check_motion_equations(motionless, k)[0]) <= 1e-5 * area * phi_max


def test_matrix_terms_vanish_without_motion(motionless):
    assert matrix_energy(motionless) == (0.0, 0.0)


def test_matrix_terms_for_heaving_bodies(m1_structures):
    s = m1_structures["heaving"]
    kin, pot = matrix_energy(s)
    mass = sum(b.ballast.mass for b in s.bodies)
    area = sum(b.matrices.K_hat[0, 0] for b in s.bodies)
    assert kin == pytest.approx(0.01 * mass, rel=1e-14)
    assert pot == pytest.approx(0.01 * area, rel=1e-14)


def test_equipartition_heaving_structure(m1_structures):
    s = m1_structures["heaving"]
    rows = check_equipartition(s)
    gaps = [g for _, _, g in rows]
    assert gaps[-1] <= 0.02
    assert all(b <= a for a, b in zip(gaps[:-1], gaps[1:]))


def test_equipartition_domains_must_grow(motionless):
    with pytest.raises(DomainError):
        check_equipartition(motionless, [TruncationDomain(40, 20), TruncationDomain(20, 10)])
    with pytest.raises(DomainError):
        check_equipartition(motionless, [TruncationDomain(3, 20)])


def test_far_field_trapped_and_radiating():
    assert check_far_field(ModeParams(1)) <= -1.4
    assert check_far_field(ModeParams(1), lo=3.0, hi=10.0) <= -1.5
    assert -0.6 <= check_far_field(ModeParams(1, rho_r=4.5)) <= -0.4


@pytest.fixture(scope="module")
def green(m1_structures):
    s = m1_structures["heaving"]
    return s, check_green_identity(s, TruncationDomain(10.0, 20.0), [80.0, 160.0, 320.0, 640.0])


def _scale(s):
    return sum(motion_scale(s, k) for k in range(len(s.bodies)))


def test_green_identity_closes(green):
    s, g = green
    assert np.max(np.abs(g["identity"])) <= 1e-9 * _scale(s)


def test_green_bottom_decays_like_fourth_power(green):
    _, g = green
    ratios = g["bottom"][1:] / g["bottom"][:-1]
    assert ratios[-1] == pytest.approx(1 / 16, rel=0.02)
    assert np.all(np.abs(np.diff(np.abs(g["bottom"]))) > 0)


def test_green_lateral_limit_matches_surface_term(green):
    s, g = green
    lat = g["lateral"]
    limit = lat[-1] + (lat[-1] - lat[-2]) / 15.0
    assert abs(limit + g["surface"]) <= 1e-4 * _scale(s)


def test_green_depths_must_be_positive(motionless):
    with pytest.raises(DomainError):
        check_green_identity(motionless, TruncationDomain(10.0, 5.0), [-1.0])


def test_verify_heaving_structure_passes(m1_structures):
    rep = verify_structure(m1_structures["still-heave"])
    assert rep.passed
    assert len(rep.bc_residuals) == 2 and len(rep.motion_eq_residuals) == 2
    assert all(a <= 1e-10 for a in rep.archimedes)


def test_verify_flags_perturbed_structure(motionless):
    rep = verify_structure(perturb_body(motionless, 0), equipartition=False)
    assert not rep.bc_passed
    assert not rep.passed


def test_report_verdict_logic():
    rep = VerificationReport([1e-8], [np.zeros(6)], [1e-9], [0.0], [(1.0, 1.0, 0.03), (1.0, 1.0, 0.01)],
                             -2.0, 1e-6, 1e-5)
    assert rep.passed
    rep.equipartition = [(1.0, 1.0, 0.01), (1.0, 1.0, 0.015)]
    assert not rep.equipartition_passed
    rep.equipartition = [(1.0, 1.0, 0.01)]
    rep.far_field_exponent = -0.5
    assert not rep.passed
