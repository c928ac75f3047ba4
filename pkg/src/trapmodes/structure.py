"""
Synthesis of axisymmetric trapping structures.

Each body is bounded below by a closed level curve of ``psi^(H_k)`` that
meets the free surface twice.  Bodies ``1..N-1`` sit around free-surface
extrema of the trace, one extremum per body counted from the axis; body ``N``
surrounds the source ring so that the singularity is never in the water.
Above the waterline every body is completed by an annular box, and a
two-layer ballast fixes its mass (Archimedes) and lowers its centre of mass
enough for hydrostatic stability.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (ConvergenceError, DomainError, GeometryError, Infeasible,
                     InsufficientExtrema, OverlapUnresolvable, StabilityViolation)
from .geometry import MeridianCurve, RegionMoments, box_moments
from .levelset import (LevelCurve, find_level_crossings,
                       find_trace_extrema, trace_level_curve)
from .potential import ModeParams
from .specfun import bessel_zero

__all__ = [
    "BallastLayer",
    "DensityPlan",
    "BodyMoments",
    "EquilibriumMatrices",
    "BodySection",
    "Structure",
    "synthesize",
    "body_moments",
    "plan_ballast",
    "plan_from_layers",
    "assemble_matrices",
    "heave_limit",
    "ring_body_curve",
    "extremum_body_curve",
]

DEFAULT_OFFSET = 0.05
DEFAULT_SUPERSTRUCTURE = 0.5
DEFAULT_COM_FRACTION = 0.1
RING_HALF_WIDTH = 0.3
TARGET_VERTICES = 300
RING_STEP_FRACTION = 0.03


@dataclass(frozen=True)
class BallastLayer:
    """
    Homogeneous annular layer.

    ``immersed`` layers occupy the part of the submerged body below
    ``eta_hi``; the superstructure layer fills the box above the waterline.
    """

    rho_in: float
    rho_out: float
    eta_lo: float
    eta_hi: float
    density: float
    immersed: bool


@dataclass
class DensityPlan:
    """Ballast layers (densities relative to water) and derived totals."""

    layers: List[BallastLayer]
    mass: float
    center_of_mass_eta: float
    moments: List[RegionMoments] = field(repr=False, default_factory=list)


@dataclass(frozen=True)
class BodyMoments:
    """Waterplane and submerged-volume moments of one body."""

    I_D: float
    I_D_1: float
    I_D_2: float
    I_D_11: float
    I_D_22: float
    I_D_12: float
    I_B_y: float
    displaced_volume: float
    buoyancy_eta: float


@dataclass
class EquilibriumMatrices:
    """Mass/inertia matrix ``E0`` and restoring matrix ``K0``."""

    E0: np.ndarray
    K0: np.ndarray

    @property
    def K_hat(self):
        return self.K0[3:, 3:]


@dataclass
class BodySection:
    """
    One axisymmetric body.

    Attributes
    ----------
    wetted : LevelCurve
        Meridional wetted curve, left waterline point first.
    H : float
        Heave amplitude (0 for a motionless body).
    superstructure_height : float
    ballast : DensityPlan or None
    matrices : EquilibriumMatrices or None
    """

    wetted: LevelCurve
    H: float = 0.0
    superstructure_height: float = DEFAULT_SUPERSTRUCTURE
    ballast: Optional[DensityPlan] = None
    matrices: Optional[EquilibriumMatrices] = None
    _curve: Optional[MeridianCurve] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.wetted.closed_on_surface:
            raise GeometryError("wetted curve must meet the waterline at both ends")
        if self.superstructure_height <= 0.0:
            raise DomainError("superstructure height must be positive")

    @property
    def curve(self):
        if self._curve is None:
            self._curve = MeridianCurve(self.wetted.points)
        return self._curve

    @property
    def waterline_radii(self):
        return float(self.wetted.points[0, 0]), float(self.wetted.points[-1, 0])

    @property
    def encloses_ring(self):
        return self.wetted.encloses_ring

    @property
    def chi(self):
        return np.array([0.0, 0.0, 0.0, self.H, 0.0, 0.0])


@dataclass
class Structure:
    """Bodies ordered by waterline radius, sharing one trapped mode."""

    mode: ModeParams
    bodies: List[BodySection]

    @property
    def chi(self):
        return [b.chi for b in self.bodies]

    @property
    def amplitudes(self):
        return [b.H for b in self.bodies]

    def check(self):
        """Validate ordering, disjointness and the single ring-enclosing body."""
        if len(self.bodies) < 2:
            raise DomainError("a structure needs at least two bodies")
        if sum(b.encloses_ring for b in self.bodies) != 1:
            raise GeometryError("exactly one body must enclose the ring")
        for a, b in zip(self.bodies[:-1], self.bodies[1:]):
            if a.waterline_radii[1] >= b.waterline_radii[0]:
                raise GeometryError("bodies must be ordered and their waterplanes disjoint")
        return min_separation(self.bodies) > 0.0


def min_separation(bodies):
    """Smallest distance between the meridional sections of distinct bodies."""
    polys = [b.curve.polygon() for b in bodies]
    best = math.inf
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            best = min(best, polys[i].distance(polys[j]))
    return best


def _whole_body(b):
    """Moments of the submerged part."""
    return b.curve.moments()


def body_moments(b, com_eta=None):
    """
    Waterplane moments, displaced volume and ``I_B_y`` of a body.

    ``I_B_y`` is taken about the centre of mass, read from the ballast plan
    unless ``com_eta`` is given (falls back to the waterline level).

    Raises
    ------
    GeometryError
        Self-intersecting wetted curve.
    """
    b.curve.check_simple()
    sub = _whole_body(b)
    if sub.volume <= 0.0:
        raise GeometryError("wetted curve encloses no submerged volume")
    r_in, r_out = b.waterline_radii
    if com_eta is None:
        com_eta = b.ballast.center_of_mass_eta if b.ballast is not None else 0.0
    # odd integrands over an annulus vanish identically
    return BodyMoments(
        I_D=math.pi * (r_out ** 2 - r_in ** 2),
        I_D_1=0.0,
        I_D_2=0.0,
        I_D_11=0.25 * math.pi * (r_out ** 4 - r_in ** 4),
        I_D_22=0.25 * math.pi * (r_out ** 4 - r_in ** 4),
        I_D_12=0.0,
        I_B_y=sub.eta1 - com_eta * sub.volume,
        displaced_volume=sub.volume,
        buoyancy_eta=sub.centroid_eta,
    )


def _superstructure(b):
    r_in, r_out = b.waterline_radii
    return box_moments(r_in, r_out, 0.0, b.superstructure_height)


def plan_ballast(b, target_com_eta):
    """
    Two-layer ballast with the displaced mass and a prescribed centre of mass.

    A target below the centroid of the submerged volume is met by a single
    dense layer filling the submerged part below a cut level; the cut is
    found by root finding.  A higher target fills the whole submerged part
    and puts the remaining mass into the superstructure.

    Raises
    ------
    Infeasible
        Target at or below the lowest point, or above the superstructure
        centroid (negative densities would be needed).
    """
    curve = b.curve
    sub = curve.moments()
    vol = sub.volume
    z_b = sub.centroid_eta
    lowest = curve.lowest_point()
    top = _superstructure(b)
    r_lo = float(np.min(curve.points[:, 0]))
    r_hi = float(np.max(curve.points[:, 0]))
    h_s = b.superstructure_height
    r_in, r_out = b.waterline_radii
    if not target_com_eta > lowest:
        raise Infeasible("target centre of mass lies at or below the lowest point")
    if target_com_eta <= z_b:
        if target_com_eta == z_b:
            cut = 0.0
        else:
            def gap(c):
                part = curve.moments(eta_cut=c)
                # a vanishing slice has its centroid at the cut
                eta = part.centroid_eta if part.volume > 0.0 else c
                return eta - target_com_eta
            cut = _bracketed_root(gap, lowest, 0.0)
        part = curve.moments(eta_cut=cut) if cut < 0.0 else sub
        dense = vol / part.volume
        light = 0.0
    else:
        if target_com_eta >= top.centroid_eta:
            raise Infeasible("target centre of mass above the superstructure centroid")
        cut = 0.0
        part = sub
        light = vol * (target_com_eta - z_b) / (top.volume * (top.centroid_eta - z_b))
        dense = (vol - light * top.volume) / vol
        if dense < 0.0:
            raise Infeasible("negative ballast density required")
    layers = [
        BallastLayer(r_lo, r_hi, lowest, cut, dense, True),
        BallastLayer(r_in, r_out, 0.0, h_s, light, False),
    ]
    mass = dense * part.volume + light * top.volume
    com = (dense * part.eta1 + light * top.eta1) / mass
    return DensityPlan(layers, mass, com, [part, top])


def plan_from_layers(b, layers):
    """
    Rebuild a :class:`DensityPlan` from stored layers.

    Immersed layers are the submerged part of the body below ``eta_hi``;
    the others are annular boxes.
    """
    curve = b.curve
    moments = []
    for layer in layers:
        if layer.immersed:
            moments.append(curve.moments(eta_cut=layer.eta_hi) if layer.eta_hi < 0.0
                           else curve.moments())
        else:
            moments.append(box_moments(layer.rho_in, layer.rho_out, layer.eta_lo, layer.eta_hi))
    mass = sum(layer.density * m.volume for layer, m in zip(layers, moments))
    if not mass > 0.0:
        raise Infeasible("ballast plan has no mass")
    com = sum(layer.density * m.eta1 for layer, m in zip(layers, moments)) / mass
    return DensityPlan(list(layers), mass, com, moments)


def _bracketed_root(f, lo, hi):
    from scipy.optimize import brentq
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0.0:
        raise Infeasible("centre-of-mass target not reachable with one dense layer")
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15)


def _plan_totals(plan):
    total = RegionMoments()
    for layer, mom in zip(plan.layers, plan.moments):
        total = total + mom.scaled(layer.density)
    return total


def assemble_matrices(b):
    """
    ``E0`` from the ballast plan and ``K0`` from the body moments.

    Raises
    ------
    DomainError
        No ballast planned.
    StabilityViolation
        The restoring block has a non-positive eigenvalue.
    """
    if b.ballast is None:
        raise DomainError("plan the ballast before assembling matrices")
    plan = b.ballast
    tot = _plan_totals(plan)
    mass = tot.volume
    y0 = plan.center_of_mass_eta
    i11 = tot.x11
    iyy = tot.eta2 - 2.0 * y0 * tot.eta1 + y0 * y0 * tot.volume
    # x1 y, x2 y and x1 x2 products vanish for axisymmetric layers
    i1y = i2y = i12 = 0.0
    E0 = np.array([
        [mass, 0, 0, 0, 0, 0],
        [0, mass, 0, 0, 0, 0],
        [0, 0, 2.0 * i11, 0, -i1y, -i2y],
        [0, 0, 0, mass, 0, 0],
        [0, 0, -i1y, 0, i11 + iyy, -i12],
        [0, 0, -i2y, 0, -i12, i11 + iyy],
    ], dtype=float)
    mom = body_moments(b, y0)
    K_hat = np.array([
        [mom.I_D, mom.I_D_2, -mom.I_D_1],
        [mom.I_D_2, mom.I_D_22 + mom.I_B_y, -mom.I_D_12],
        [-mom.I_D_1, -mom.I_D_12, mom.I_D_11 + mom.I_B_y],
    ])
    K0 = np.zeros((6, 6))
    K0[3:, 3:] = K_hat
    if np.min(np.linalg.eigvalsh(E0)) <= 0.0:
        raise StabilityViolation("mass matrix is not positive definite")
    if np.min(np.linalg.eigvalsh(K_hat)) <= 0.0:
        raise StabilityViolation("restoring matrix is not positive definite")
    return EquilibriumMatrices(E0, K0)


def _refined(mp, H, v, seed, first):
    # spline normals lose accuracy like (step / distance to the ring)^5
    gap = float(np.min(np.hypot(first.points[:, 0] - mp.rho_r, first.points[:, 1])))
    step = min(0.05, first.arc_length / TARGET_VERTICES, RING_STEP_FRACTION * gap)
    return trace_level_curve(mp, H, v, seed, step=step)


def extremum_body_curve(mp, H, extremum, offset, neighbours=None):
    """
    Closed level curve around one free-surface extremum.

    The level is ``value * (1 - offset)``, i.e. slightly towards zero, and the
    curve is seeded at the nearest trace crossing left of the extremum.
    """
    v = extremum.value * (1.0 - offset)
    lo = 0.0 if neighbours is None else neighbours[0]
    hi = mp.rho_r if neighbours is None else neighbours[1]
    crossings = find_level_crossings(mp, H, v, (lo, hi))
    left = [r for r in crossings if r < extremum.rho]
    right = [r for r in crossings if r > extremum.rho]
    if not left or not right:
        raise ConvergenceError("level does not cross the trace on both sides")
    seed = (left[-1], 0.0)
    first = trace_level_curve(mp, H, v, seed)
    curve = _refined(mp, H, v, seed, first)
    if not curve.closed_on_surface or curve.encloses_ring:
        raise ConvergenceError("level curve around the extremum does not close")
    if abs(curve.points[-1, 0] - right[0]) > 1e-6:
        raise ConvergenceError("level curve closes on an unexpected crossing")
    return curve


def ring_body_curve(mp, H, half_width, left_limit=0.0):
    """
    Closed level curve around the source ring.

    The level is the larger trace value at ``rho_r -+ half_width``, so both
    waterline points lie within ``half_width`` of the ring.
    """
    rr = mp.rho_r
    vals = [float(v) for v in _trace(mp, H, [rr - half_width, rr + half_width])]
    v = max(vals)
    lo = max(left_limit, rr - 2.0 * half_width)
    crossings = find_level_crossings(mp, H, v, (lo, rr))
    if not crossings:
        raise ConvergenceError("no trace crossing left of the ring")
    seed = (crossings[-1], 0.0)
    first = trace_level_curve(mp, H, v, seed)
    curve = _refined(mp, H, v, seed, first)
    if not curve.encloses_ring:
        raise ConvergenceError("ring level curve does not enclose the ring")
    return curve


def _trace(mp, H, rho):
    from .levelset import trace_values
    return trace_values(np.asarray(rho, dtype=float), mp, H)


def heave_limit(mp, n_bodies, h_hi=2.0, tol=1e-3):
    """
    Largest heave amplitude keeping ``n_bodies - 1`` trace extrema on the
    scan interval used by :func:`synthesize`.
    """
    interval = _scan_interval(mp, n_bodies)

    def ok(h):
        return len(find_trace_extrema(mp, h, interval)) >= n_bodies - 1

    if not ok(0.0):
        return 0.0
    if ok(h_hi):
        return h_hi
    lo, hi = 0.0, h_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def _scan_interval(mp, n_bodies):
    return (0.0, min(bessel_zero("J", 1, n_bodies), mp.rho_r))


def synthesize(mp, heave_amplitudes, offset=DEFAULT_OFFSET,
               superstructure_height=DEFAULT_SUPERSTRUCTURE,
               com_fraction=DEFAULT_COM_FRACTION, max_rounds=8):
    """
    Build an N-body trapping structure for the mode ``mp``.

    Parameters
    ----------
    mp : ModeParams
    heave_amplitudes : sequence of float
        ``H_k >= 0`` per body, ordered from the axis; the last body encloses
        the ring.
    offset : float
        Fractional level offset from each trace extremum.
    superstructure_height : float
        Height of the annular box above the waterline.
    com_fraction : float
        Centre-of-mass target as a fraction of the way from the lowest point
        to the centre of buoyancy.
    max_rounds : int
        Number of shrink rounds allowed to resolve overlaps.

    Returns
    -------
    Structure

    Raises
    ------
    InsufficientExtrema
        Fewer than ``N - 1`` extrema on the scan interval.
    OverlapUnresolvable
        Bodies keep touching after ``max_rounds`` adjustments.
    """
    amps = [float(h) for h in heave_amplitudes]
    n = len(amps)
    if n < 2:
        raise DomainError("a structure needs at least two bodies")
    if any(h < 0.0 or not math.isfinite(h) for h in amps):
        raise DomainError("heave amplitudes must be finite and non-negative")
    interval = _scan_interval(mp, n)
    extrema = []
    for k in range(n - 1):
        ex = find_trace_extrema(mp, amps[k], interval)
        if len(ex) < n - 1:
            raise InsufficientExtrema(
                "found %d trace extrema on (0, %.4f); %d bodies need %d"
                % (len(ex), interval[1], n, n - 1))
        extrema.append(ex[k])
    offsets = [offset] * (n - 1)
    half = RING_HALF_WIDTH
    curves = [None] * n
    for _ in range(max_rounds):
        for k in range(n - 1):
            if curves[k] is None:
                curves[k] = _extremum_with_retry(mp, amps[k], extrema[k], offsets, k)
        left_limit = curves[n - 2].points[-1, 0]
        half = min(half, 0.5 * (mp.rho_r - left_limit))
        if curves[n - 1] is None:
            curves[n - 1] = ring_body_curve(mp, amps[n - 1], half, left_limit)
        bodies = [BodySection(c, h, superstructure_height) for c, h in zip(curves, amps)]
        clash = _first_clash(bodies)
        if clash is None:
            break
        k = clash
        if k == n - 2:
            half *= 0.5
            curves[n - 1] = None
        offsets[k] *= 0.5
        curves[k] = None
    else:
        raise OverlapUnresolvable("bodies still overlap after %d rounds" % max_rounds)
    for b in bodies:
        _ballast_with_retry(b, com_fraction)
    s = Structure(mp, bodies)
    s.check()
    return s


def _extremum_with_retry(mp, H, extremum, offsets, k, attempts=6):
    for _ in range(attempts):
        try:
            return extremum_body_curve(mp, H, extremum, offsets[k])
        except ConvergenceError:
            offsets[k] *= 0.5
    raise OverlapUnresolvable("no closed level curve around the extremum at %.4f" % extremum.rho)


def _first_clash(bodies):
    """Index k of the first pair (k, k+1) that touches, or None."""
    for k in range(len(bodies) - 1):
        a, b = bodies[k], bodies[k + 1]
        if a.waterline_radii[1] >= b.waterline_radii[0]:
            return k
        if a.curve.polygon().distance(b.curve.polygon()) <= 0.0:
            return k
    return None


def _ballast_with_retry(b, com_fraction, attempts=8):
    curve = b.curve
    lowest = curve.lowest_point()
    z_b = curve.moments().centroid_eta
    frac = com_fraction
    for _ in range(attempts):
        target = lowest + frac * (z_b - lowest)
        b.ballast = plan_ballast(b, target)
        try:
            b.matrices = assemble_matrices(b)
            return
        except StabilityViolation:
            frac *= 0.5
    raise StabilityViolation("no stable ballast found")
