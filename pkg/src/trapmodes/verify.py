"""
Numerical certification of synthesized trapping structures.

All checks work in dimensionless variables (``nu = 1``, so ``omega^2 = g``).
Surface integrals over a revolved wetted curve use the meridional spline,
Gauss-Legendre panels in arc length and, for the non-axisymmetric integrands
of the horizontal forces and moments, a trapezoidal rule in the azimuth.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import DomainError, QuadratureError
from .levelset import Endpoint, EndKind, LevelCurve
from .potential import evaluate
from .structure import BodySection, Structure, body_moments

__all__ = [
    "TruncationDomain",
    "VerificationReport",
    "check_kinematic",
    "check_motion_equations",
    "motion_scale",
    "check_equipartition",
    "matrix_energy",
    "check_far_field",
    "check_green_identity",
    "perturb_body",
    "default_domains",
    "verify_structure",
]

SURFACE_TOL = 1e-9
AZIMUTH_NODES = 64
MOTION_LABELS = ("heave", "surge", "sway", "yaw", "roll", "pitch")


@dataclass(frozen=True)
class TruncationDomain:
    """Truncated cylinder ``rho < b``, ``-d < eta < 0``."""

    b: float
    d: float

    def __post_init__(self):
        if not (self.b > 0.0 and self.d > 0.0):
            raise DomainError("truncation radius and depth must be positive")


@dataclass
class VerificationReport:
    """Residuals of every check and the overall verdict."""

    bc_residuals: List[float]
    motion_eq_residuals: List[np.ndarray]
    motion_relative: List[float]
    archimedes: List[float]
    equipartition: List[Tuple[float, float, float]]
    far_field_exponent: float
    tol_bc: float
    tol_motion: float
    tol_equipartition: float = 0.02
    far_field_max: float = -1.4
    domains: List[TruncationDomain] = field(default_factory=list)

    @property
    def bc_passed(self):
        return all(r <= self.tol_bc for r in self.bc_residuals)

    @property
    def motion_passed(self):
        sym = all(np.all(np.abs(r[1:]) <= 1e-10) for r in self.motion_eq_residuals)
        return sym and all(r <= self.tol_motion for r in self.motion_relative)

    @property
    def equipartition_passed(self):
        if not self.equipartition:
            return True
        gaps = [g for _, _, g in self.equipartition]
        monotone = all(b <= a * (1 + 1e-9) + 1e-12 for a, b in zip(gaps[:-1], gaps[1:]))
        return gaps[-1] <= self.tol_equipartition and monotone

    @property
    def far_field_passed(self):
        return self.far_field_exponent <= self.far_field_max

    @property
    def passed(self):
        return (self.bc_passed and self.motion_passed
                and self.equipartition_passed and self.far_field_passed)


def _body(s, k):
    if not 0 <= k < len(s.bodies):
        raise DomainError("body index out of range")
    return s.bodies[k]


def check_kinematic(s, k):
    """
    Largest normalised Neumann residual on the vertices of body ``k``.

    The residual is ``|n . (grad phi - (0, H_k))| / max(|grad phi|, 1e-12)``
    with ``n`` the unit normal of the meridional spline.
    """
    b = _body(s, k)
    curve = b.curve
    pts = curve.position(curve.s)
    nrm = curve.normal(curve.s)
    f = evaluate(pts[:, 0], pts[:, 1], s.mode)
    g_rho, g_eta = f.phi_rho, f.phi_eta
    num = np.abs(nrm[:, 0] * g_rho + nrm[:, 1] * (g_eta - b.H))
    den = np.maximum(np.hypot(g_rho, g_eta), 1e-12)
    return float(np.max(num / den))


def _surface_nodes(b, refine):
    curve = b.curve
    _, xy, dxy, w = curve.nodes(order=8, refine=refine)
    speed = np.hypot(dxy[:, 0], dxy[:, 1])
    nrm = np.stack([-dxy[:, 1], dxy[:, 0]], axis=1) / speed[:, None]
    return xy, nrm, w * speed


def _motion_integrals(s, b, refine):
    """Surface integrals behind the six motion equations."""
    xy, nrm, ds = _surface_nodes(b, refine)
    rho, eta = xy[:, 0], xy[:, 1]
    phi = evaluate(rho, eta, s.mode).phi
    y_g = b.ballast.center_of_mass_eta if b.ballast is not None else 0.0
    th = 2.0 * math.pi * np.arange(AZIMUTH_NODES) / AZIMUTH_NODES
    dth = 2.0 * math.pi / AZIMUTH_NODES
    c, sn = np.cos(th)[None, :], np.sin(th)[None, :]
    r = rho[:, None]
    x1, x2, y = r * c, r * sn, eta[:, None]
    n1, n2, ny = nrm[:, 0:1] * c, nrm[:, 0:1] * sn, nrm[:, 1:2] + 0.0 * c
    yp = y - y_g
    weight = (phi * rho * ds)[:, None] * dth
    integrands = [ny, n1, n2, x1 * n2 - x2 * n1, yp * n2 - x2 * ny, -yp * n1 + x1 * ny]
    return np.array([float(np.sum(weight * f)) for f in integrands])


def _adaptive(fn, scale_fn=None, max_refine=5):
    prev = fn(0)
    for level in range(1, max_refine + 1):
        cur = fn(level)
        scale = max(np.max(np.abs(cur)), 1e-300) if scale_fn is None else scale_fn(cur)
        if np.max(np.abs(cur - prev)) <= SURFACE_TOL * scale:
            return cur
        prev = cur
    raise QuadratureError("surface quadrature did not settle")


def check_motion_equations(s, k):
    """
    Residuals of the six momentum equations of body ``k``.

    Returns ``[heave, surge, sway, yaw, roll, pitch]``.  Heave is
    ``H M + int phi n_y dS - H I_D`` with ``M`` the body mass (for a
    motionless body only the pressure integral remains); the other five
    integrands are odd in the horizontal coordinates.
    """
    b = _body(s, k)
    mom = body_moments(b)
    mass = b.ballast.mass if b.ballast is not None else mom.displaced_volume

    size = _pressure_scale(s, b)
    raw = _adaptive(lambda lv: _motion_integrals(s, b, lv), lambda v: size)
    res = raw.copy()
    res[0] = b.H * mass + raw[0] - b.H * mom.I_D
    res[4] -= mom.I_D_2 * b.H
    res[5] += mom.I_D_1 * b.H
    return res


def motion_scale(s, k):
    """
    Normalisation of the heave residual.

    ``H_k I_D`` for a heaving body; surface area times ``max |phi|`` on the
    wetted curve for a motionless one.
    """
    b = _body(s, k)
    if b.H > 0.0:
        return b.H * body_moments(b).I_D
    return _pressure_scale(s, b)


def _pressure_scale(s, b):
    pts = b.wetted.points
    return b.curve.surface_area() * float(np.max(np.abs(evaluate(pts[:, 0], pts[:, 1], s.mode).phi)))


def _graded(lo, hi, first, ratio=1.3, near=None):
    """Breaks from lo to hi, uniform up to ``near`` then geometric."""
    out = [lo]
    x = lo
    w = first
    while x < hi:
        if near is None or x >= near:
            w *= ratio
        x = min(hi, x + w)
        out.append(x)
    return np.array(out)


def _merge_breaks(base, extra, lo, hi):
    allb = np.unique(np.concatenate([base, np.asarray(extra, dtype=float)]))
    allb = allb[(allb >= lo) & (allb <= hi)]
    keep = [allb[0]]
    for x in allb[1:]:
        if x - keep[-1] > 1e-9:
            keep.append(x)
    return np.array(keep)


def _gauss_on(breaks, order):
    gx, gw = np.polynomial.legendre.leggauss(order)
    a, b = breaks[:-1], breaks[1:]
    h = 0.5 * (b - a)
    x = (0.5 * (a + b)[:, None] + h[:, None] * gx).ravel()
    w = (h[:, None] * gw).ravel()
    return x, w


def _body_intervals(polys, rho):
    """Eta intervals covered by bodies on the vertical line at ``rho``."""
    import shapely
    out = []
    for p in polys:
        x0, y0, x1, y1 = p.bounds
        if not (x0 < rho < x1):
            continue
        line = shapely.LineString([(rho, y0 - 1.0), (rho, 1.0)])
        cut = p.intersection(line)
        for g in getattr(cut, "geoms", [cut]):
            if g.is_empty or g.length == 0.0:
                continue
            ys = [c[1] for c in g.coords]
            out.append((min(ys), max(ys)))
    return out


def _water_nodes(s, rho_breaks, eta_breaks, order):
    """Volume nodes ``(rho, eta, weight)`` of the water meridian."""
    polys = [b.curve.polygon() for b in s.bodies]
    rr, wr = _gauss_on(rho_breaks, order)
    d = -eta_breaks[0]
    R, E, W = [], [], []
    for r, w in zip(rr, wr):
        cuts = sorted(_body_intervals(polys, r))
        intervals, top = [], 0.0
        for lo, hi in sorted(cuts, key=lambda c: -c[1]):
            if hi < top:
                intervals.append((max(hi, -d), top))
            top = min(top, lo)
        intervals.append((-d, top))
        for a, b in intervals:
            if b - a <= 1e-14:
                continue
            br = _merge_breaks(eta_breaks, [a, b], a, b)
            e, we = _gauss_on(br, order)
            R.append(np.full_like(e, r))
            E.append(e)
            W.append(we * w * 2.0 * math.pi * r)
    return np.concatenate(R), np.concatenate(E), np.concatenate(W)


def _surface_nodes_free(s, b_max, rho_breaks, order):
    """Free-surface nodes outside the waterplanes."""
    wl = sorted(b.waterline_radii for b in s.bodies)
    gaps, x = [], 0.0
    for lo, hi in wl:
        if lo > x:
            gaps.append((x, lo))
        x = max(x, hi)
    gaps.append((x, b_max))
    R, W = [], []
    for a, b in gaps:
        br = _merge_breaks(rho_breaks, [a, b], a, b)
        r, w = _gauss_on(br, order)
        R.append(r)
        W.append(w * 2.0 * math.pi * r)
    return np.concatenate(R), np.concatenate(W)


def default_domains(s):
    """Three nested truncation cylinders around the structure."""
    outer = max(b.waterline_radii[1] for b in s.bodies)
    return [TruncationDomain(outer + e, d) for e, d in ((6.0, 5.0), (16.0, 10.0), (36.0, 20.0))]


def matrix_energy(s):
    """
    Body terms of the energy balance, ``(sum chi.E0.chi, sum chi.K0.chi)``.

    With ``nu = 1`` the factors ``omega^2`` and ``g`` coincide and drop out.
    """
    kin = pot = 0.0
    for b in s.bodies:
        chi = b.chi
        if not np.any(chi):
            continue
        if b.matrices is None:
            raise DomainError("heaving body without assembled matrices")
        kin += float(chi @ b.matrices.E0 @ chi)
        pot += float(chi @ b.matrices.K0 @ chi)
    return kin, pot


def check_equipartition(s, domains=None, order=8):
    """
    Kinetic against potential energy on nested truncated cylinders.

    Returns ``(lhs, rhs, gap)`` per domain, where ``lhs`` is the Dirichlet
    integral over the water plus ``sum H_k^2 M_k`` and ``rhs`` the free-surface
    integral of ``phi^2`` plus ``sum H_k^2 I_D``; ``gap = |lhs - rhs| / lhs``.
    Nodes are shared by all domains.  The ring lies inside a body, so no
    guard disc is needed in the water.
    """
    if domains is None:
        domains = default_domains(s)
    domains = list(domains)
    for a, b in zip(domains[:-1], domains[1:]):
        if not (b.b >= a.b and b.d >= a.d):
            raise DomainError("truncation domains must be increasing")
    outer = max(bd.waterline_radii[1] for bd in s.bodies)
    deepest = min(bd.curve.lowest_point() for bd in s.bodies)
    for dom in domains:
        if dom.b <= outer or dom.d <= -deepest:
            raise DomainError("truncation domain must contain every body")
    b_max, d_max = domains[-1].b, domains[-1].d
    extents = []
    for bd in s.bodies:
        p = bd.curve.points
        extents += [p[:, 0].min(), p[:, 0].max(), *bd.waterline_radii]
    rho_breaks = _merge_breaks(_graded(0.0, b_max, 0.5, near=outer + 2.0),
                               extents + [dom.b for dom in domains], 0.0, b_max)
    eta_breaks = -_merge_breaks(_graded(0.0, d_max, 0.25, near=1.0),
                                [dom.d for dom in domains], 0.0, d_max)[::-1]
    R, E, W = _water_nodes(s, rho_breaks, eta_breaks, order)
    f = evaluate(R, E, s.mode)
    dens = (f.phi_rho ** 2 + f.phi_eta ** 2) * W
    Rs, Ws = _surface_nodes_free(s, b_max, rho_breaks, order)
    surf = evaluate(Rs, np.zeros_like(Rs), s.mode).phi ** 2 * Ws
    lhs_extra, rhs_extra = matrix_energy(s)
    out = []
    for dom in domains:
        inside = (R <= dom.b * (1 + 1e-12)) & (E >= -dom.d * (1 + 1e-12))
        lhs = float(np.sum(dens[inside])) + lhs_extra
        rhs = float(np.sum(surf[Rs <= dom.b * (1 + 1e-12)])) + rhs_extra
        out.append((lhs, rhs, abs(lhs - rhs) / lhs))
    return out


def check_far_field(mp, lo=3.0, hi=12.0, samples=4000, windows=12):
    """
    Decay exponent of ``|phi(rho, 0)|`` on ``[lo rho_r, hi rho_r]``.

    The trace oscillates, so the fit uses the largest ``|phi|`` in each of
    ``windows`` equal slices of ``log rho``.
    """
    rho = np.geomspace(lo * mp.rho_r, hi * mp.rho_r, samples)
    val = np.abs(evaluate(rho, np.zeros_like(rho), mp).phi)
    xs, ys = [], []
    for chunk in np.array_split(np.arange(samples), windows):
        i = chunk[np.argmax(val[chunk])]
        if val[i] > 0.0:
            xs.append(math.log(rho[i]))
            ys.append(math.log(val[i]))
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


def _surface_target(s):
    """``int_S (phi - H (eta + 1)) n_y dS`` summed over the bodies."""
    total = 0.0
    for b in s.bodies:
        def one(level, b=b):
            xy, nrm, ds = _surface_nodes(b, level)
            phi = evaluate(xy[:, 0], xy[:, 1], s.mode).phi
            g = (phi - b.H * (xy[:, 1] + 1.0)) * nrm[:, 1] * 2.0 * math.pi * xy[:, 0] * ds
            return np.array([float(np.sum(g))])
        size = _pressure_scale(s, b) + b.H * b.curve.surface_area()
        total += float(_adaptive(one, lambda v, size=size: size)[0])
    return total


def check_green_identity(s, dom, d_sequence, order=16):
    """
    Lateral Green integrals for ``Y = eta + 1`` on ``rho = b``.

    Returns a record with the lateral integrals ``L(d)``, the bottom-disc
    integrals ``B(d)``, the surface term ``T`` and the residuals
    ``L + B + T`` of the closed identity, for each depth in ``d_sequence``.
    ``L(d)`` tends to ``-T`` as the bottom term dies out.
    """
    target = _surface_target(s)
    lat, bot = [], []
    for d in d_sequence:
        if d <= 0.0:
            raise DomainError("depths must be positive")
        eb = -_merge_breaks(_graded(0.0, d, 0.25, near=1.0), [], 0.0, d)[::-1]
        e, we = _gauss_on(eb, order)
        f = evaluate(np.full_like(e, dom.b), e, s.mode)
        lat.append(float(-2.0 * math.pi * dom.b * np.sum((e + 1.0) * f.phi_rho * we)))
        rb = _merge_breaks(_graded(0.0, dom.b, 0.5), [], 0.0, dom.b)
        r, wr = _gauss_on(rb, order)
        g = evaluate(r, np.full_like(r, -d), s.mode)
        bot.append(float(2.0 * math.pi * np.sum(r * (-g.phi + (1.0 - d) * g.phi_eta) * wr)))
    lat, bot = np.array(lat), np.array(bot)
    return {
        "depths": np.asarray(d_sequence, dtype=float),
        "lateral": lat,
        "bottom": bot,
        "surface": target,
        "identity": lat + bot + target,
    }


def perturb_body(s, k, factor=1.01):
    """Copy of ``s`` with body ``k`` scaled about the origin of the meridian."""
    b = _body(s, k)
    w = b.wetted
    pts = w.points * factor
    curve = LevelCurve(w.level, w.H, pts,
                       Endpoint(EndKind.FREE_SURFACE, float(pts[0, 0])),
                       Endpoint(EndKind.FREE_SURFACE, float(pts[-1, 0])),
                       w.encloses_ring, math.nan)
    nb = BodySection(curve, b.H, b.superstructure_height, b.ballast, b.matrices)
    bodies = list(s.bodies)
    bodies[k] = nb
    return Structure(s.mode, bodies)


def verify_structure(s, tol_bc=1e-6, tol_motion=1e-5, domains=None, equipartition=True):
    """Run every check and collect a :class:`VerificationReport`."""
    bc, motion, rel, arch = [], [], [], []
    for k, b in enumerate(s.bodies):
        bc.append(check_kinematic(s, k))
        r = check_motion_equations(s, k)
        motion.append(r)
        rel.append(abs(r[0]) / motion_scale(s, k))
        vol = body_moments(b).displaced_volume
        mass = b.ballast.mass if b.ballast is not None else math.nan
        arch.append(abs(mass - vol) / vol)
    doms = list(domains) if domains is not None else default_domains(s)
    eq = check_equipartition(s, doms) if equipartition else []
    return VerificationReport(bc, motion, rel, arch, eq, check_far_field(s.mode),
                              tol_bc, tol_motion, domains=doms if equipartition else [])
