"""
Free-surface traces and level curves of the (heave-modified) stream function.

Level curves ``{psi - H rho^2/2 = v}`` in the quarter plane ``rho >= 0,
eta <= 0`` are the candidate wetted surfaces.  Along such a curve the flow is
tangential, so a rigid body bounded by it satisfies the kinematic condition
for heave amplitude ``H``.

On the free surface ``eta = 0`` the potential obeys ``phi_eta = phi``, which
gives the cheap derivative of the trace::

    d/drho [psi^(H)(rho, 0)] = rho (phi(rho, 0) - H).

Extrema of the trace are therefore the roots of ``phi(rho, 0) = H``.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import shapely
from scipy.ndimage import minimum_filter
from scipy.optimize import brentq, root

from .errors import (ConvergenceError, DomainError, NotFound, SeedOffLevel,
                     StagnationEncountered)
from .potential import GUARD_RADIUS, FieldPoint, ModeParams, evaluate

__all__ = [
    "FeatureKind",
    "TraceFeature",
    "Trace",
    "EndKind",
    "Endpoint",
    "LevelCurve",
    "StagnationPoint",
    "free_surface_trace",
    "trace_values",
    "find_trace_extrema",
    "find_trace_zeros",
    "find_level_crossings",
    "trace_level_curve",
    "trace_level_set",
    "find_stagnation",
    "find_stagnation_points",
]

# distance from the ring below which trace scans stop
RING_MARGIN = 1e-3
VERTEX_TOL = 1e-10
INFINITY_ARC = 40.0


class FeatureKind(Enum):
    ZERO = "Zero"
    MIN = "Min"
    MAX = "Max"
    SINGULAR_APPROACH = "SingularApproach"


@dataclass(frozen=True)
class TraceFeature:
    """Zero, extremum or ring approach of a free-surface trace."""

    kind: FeatureKind
    rho: float
    value: float


@dataclass(frozen=True)
class Trace:
    """Samples ``(rho, value)`` of ``psi^(H)(rho, 0)``."""

    rho: np.ndarray
    value: np.ndarray
    H: float

    def __iter__(self):
        return iter(zip(self.rho.tolist(), self.value.tolist()))

    def __len__(self):
        return len(self.rho)


class EndKind(Enum):
    FREE_SURFACE = "FreeSurface"
    INFINITY = "Infinity"
    AXIS = "Axis"


@dataclass(frozen=True)
class Endpoint:
    kind: EndKind
    rho: Optional[float] = None

    def __str__(self):
        if self.kind is EndKind.FREE_SURFACE:
            return "FreeSurface(%.17g)" % self.rho
        return self.kind.value


@dataclass
class LevelCurve:
    """
    Polyline approximation of one connected level curve.

    ``points`` is an ``(n, 2)`` array of ``(rho, eta)`` vertices.  The first
    vertex is ``left_end`` and the last one ``right_end``; for curves with both
    ends on the free surface the first vertex has the smaller radius.
    """

    level: float
    H: float
    points: np.ndarray
    left_end: Endpoint
    right_end: Endpoint
    encloses_ring: bool
    max_residual: float

    @property
    def closed_on_surface(self):
        return (self.left_end.kind is EndKind.FREE_SURFACE
                and self.right_end.kind is EndKind.FREE_SURFACE)

    @property
    def arc_length(self):
        return float(np.sum(np.hypot(*np.diff(self.points, axis=0).T)))

    def field_points(self):
        return [FieldPoint(float(r), float(e)) for r, e in self.points]


@dataclass(frozen=True)
class StagnationPoint:
    """Interior zero of the gradient of ``psi^(H)`` and its level."""

    location: FieldPoint
    level: float
    gradient_norm: float


def _avoid_guard(rho, rho_r):
    rho = np.array(rho, dtype=float)
    close = np.abs(rho - rho_r) < 2.0 * GUARD_RADIUS
    rho[close] = rho_r + np.where(rho[close] < rho_r, -2.0, 2.0) * GUARD_RADIUS
    return rho


def free_surface_trace(mp, H=0.0, rho_max=None, n=400, rho_min=0.0):
    """
    Sample ``psi^(H)(rho, 0)`` on a uniform grid.

    Samples that fall inside the guard disc around the ring are moved to its
    edge on the same side.

    Parameters
    ----------
    mp : ModeParams
    H : float
        Heave amplitude, ``H >= 0``.
    rho_max : float, optional
        Upper end of the grid; defaults to ``3 rho_r``.
    n : int
        Number of samples, at least 100.
    rho_min : float
        Lower end of the grid.

    Returns
    -------
    Trace
    """
    if rho_max is None:
        rho_max = 3.0 * mp.rho_r
    if n < 100:
        raise DomainError("a trace needs at least 100 samples")
    if not rho_max > mp.rho_r:
        raise DomainError("rho_max must exceed the ring radius")
    if H < 0.0:
        raise DomainError("heave amplitude must be non-negative")
    rho = _avoid_guard(np.linspace(rho_min, rho_max, int(n)), mp.rho_r)
    return Trace(rho, trace_values(rho, mp, H), H)


def trace_values(rho, mp, H=0.0):
    """``psi^(H)(rho, 0)`` at the given radii."""
    rho = np.asarray(rho, dtype=float)
    return evaluate(rho, np.zeros_like(rho), mp, H).psi


def _scan_grid(lo, hi, rho_r, density=40.0):
    n = max(200, int(density * (hi - lo)))
    grid = np.linspace(lo, hi, n)
    # refine geometrically towards the ring when it bounds the interval
    extra = []
    for side in (-1.0, 1.0):
        edge = hi if side < 0 else lo
        if abs(edge - rho_r) < 0.5:
            gaps = np.geomspace(abs(edge - rho_r), 0.5, 60)
            extra.append(rho_r + side * gaps)
    if extra:
        grid = np.concatenate([grid] + extra)
        grid = np.unique(grid[(grid >= lo) & (grid <= hi)])
    return grid


def _clip_interval(mp, interval):
    lo, hi = interval
    lo = max(lo, 1e-9)
    if lo >= hi:
        raise DomainError("empty interval")
    if lo < mp.rho_r < hi:
        raise DomainError("interval must not contain the ring radius")
    if abs(hi - mp.rho_r) < RING_MARGIN:
        hi = mp.rho_r - RING_MARGIN
    if abs(lo - mp.rho_r) < RING_MARGIN:
        lo = mp.rho_r + RING_MARGIN
    return lo, hi


def find_trace_extrema(mp, H=0.0, interval=None):
    """
    Local extrema of the free-surface trace on an interval.

    Extrema are the sign changes of ``phi(rho, 0) - H``; each is refined with
    Brent's method until the trace derivative is below 1e-8.

    Parameters
    ----------
    mp : ModeParams
    H : float
    interval : (float, float)
        Open interval on one side of the ring; defaults to ``(0, rho_r)``.

    Returns
    -------
    list of TraceFeature
        Minima and maxima ordered by radius.
    """
    if interval is None:
        interval = (0.0, mp.rho_r)
    lo, hi = _clip_interval(mp, interval)
    grid = _scan_grid(lo, hi, mp.rho_r)
    z = np.zeros_like(grid)
    g = evaluate(grid, z, mp).phi - H

    def slope(r):
        return float(evaluate(r, 0.0, mp).phi) - H

    feats = []
    for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]:
        r = brentq(slope, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15)
        kind = FeatureKind.MIN if g[i] < 0 else FeatureKind.MAX
        feats.append(TraceFeature(kind, r, float(trace_values([r], mp, H)[0])))
    return feats


def find_level_crossings(mp, H, v, interval):
    """Radii in ``interval`` where the trace equals ``v``."""
    lo, hi = _clip_interval(mp, interval)
    grid = _scan_grid(lo, hi, mp.rho_r)
    vals = trace_values(grid, mp, H) - v
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        r = brentq(lambda x: float(trace_values([x], mp, H)[0]) - v, grid[i], grid[i + 1],
                   xtol=1e-14, rtol=1e-15)
        out.append(r)
    out.extend(float(grid[i]) for i in np.nonzero(vals == 0.0)[0] if grid[i] > 0.0)
    return sorted(out)


def find_trace_zeros(mp, H=0.0, interval=None):
    """Sign changes of the trace on an interval, as ``Zero`` features."""
    if interval is None:
        interval = (0.0, mp.rho_r)
    return [TraceFeature(FeatureKind.ZERO, r, 0.0) for r in find_level_crossings(mp, H, 0.0, interval)]


def _tangent(f, direction):
    g = np.array([float(f.psi_rho), float(f.psi_eta)])
    norm = math.hypot(*g)
    return direction * np.array([-g[1], g[0]]) / norm, g, norm


class _Tracer:
    """Predictor-corrector marching along one level curve."""

    def __init__(self, mp, H, v, step, max_arc):
        self.mp = mp
        self.H = H
        self.v = v
        self.step = step
        self.max_arc = max_arc
        self.tol = VERTEX_TOL * max(1.0, abs(v))

    def field(self, p):
        return evaluate(p[0], p[1], self.mp, self.H)

    def correct(self, p, max_iter=8):
        """Newton along the gradient; returns (point, field, iterations)."""
        for it in range(max_iter):
            if p[0] < 0.0:
                return None, None, it
            if math.hypot(p[0] - self.mp.rho_r, p[1]) < 2.0 * GUARD_RADIUS:
                return None, None, it
            if p[1] > 0.0:
                # slightly above the surface: the caller lands the curve
                return (p, None, it) if p[1] <= 0.5 * self.step else (None, None, it)
            f = self.field(p)
            res = float(f.psi) - self.v
            g = np.array([float(f.psi_rho), float(f.psi_eta)])
            gg = g @ g
            if abs(res) <= self.tol:
                return p, f, it
            if gg < 1e-18:
                raise StagnationEncountered("gradient vanishes near (%.6g, %.6g)" % tuple(p))
            p = p - res * g / gg
        return None, None, max_iter

    def land_on_surface(self, prev, cur):
        """Point on ``eta = 0`` where the curve crosses between two vertices."""
        s = prev[1] / (prev[1] - cur[1])
        r0 = prev[0] + s * (cur[0] - prev[0])

        def h(r):
            return float(trace_values([r], self.mp, self.H)[0]) - self.v

        r = r0
        for _ in range(30):
            f = evaluate(r, 0.0, self.mp, self.H)
            res = float(f.psi) - self.v
            if abs(res) <= self.tol:
                return r
            d = float(f.psi_rho)
            if d == 0.0:
                break
            rn = r - res / d
            if abs(rn - r0) > 2.0 * max(abs(cur[0] - prev[0]), self.step) or rn <= 0.0:
                break
            r = rn
        width = max(abs(cur[0] - prev[0]), 1e-3)
        lo, hi = r0 - width, r0 + width
        for _ in range(20):
            if h(max(lo, 1e-12)) * h(hi) < 0:
                return brentq(h, max(lo, 1e-12), hi, xtol=1e-15, rtol=1e-15)
            width *= 2.0
            lo, hi = r0 - width, r0 + width
        raise ConvergenceError("could not land the curve on the free surface")

    def march(self, start, fstart, direction):
        """March from ``start`` until an endpoint condition is met."""
        pts = [start]
        p, f = start, fstart
        t, _, gnorm = _tangent(f, direction)
        h = self.step
        arc = 0.0
        rr = self.mp.rho_r
        while True:
            dist = math.hypot(p[0] - rr, p[1])
            h = min(h, self.step, 0.25 * dist)
            while True:
                q = p + h * t
                if q[0] < 0.0:
                    # crossing the axis: only the nodal level can get here
                    pts.append(np.array([0.0, q[1]]))
                    return pts, Endpoint(EndKind.AXIS)
                if q[1] > 0.0:
                    r = self.land_on_surface(p, q)
                    pts.append(np.array([r, 0.0]))
                    return pts, Endpoint(EndKind.FREE_SURFACE, r)
                qc, fq, iters = self.correct(q)
                if qc is not None and qc[1] > 0.0:
                    r = self.land_on_surface(p, qc)
                    pts.append(np.array([r, 0.0]))
                    return pts, Endpoint(EndKind.FREE_SURFACE, r)
                if qc is not None:
                    tq, _, gq = _tangent(fq, direction)
                    turn = math.acos(max(-1.0, min(1.0, float(t @ tq))))
                    if iters <= 3 and turn < 0.15 and np.hypot(*(qc - p)) < 2.0 * h:
                        break
                h *= 0.5
                if h < 1e-9:
                    raise ConvergenceError("step size collapsed while tracing")
            if gq < 1e-9:
                raise StagnationEncountered("gradient vanishes near (%.6g, %.6g)" % tuple(qc))
            arc += float(np.hypot(*(qc - p)))
            p, f, t = qc, fq, tq
            pts.append(p)
            if iters <= 1 and turn < 0.05:
                h *= 1.5
            if arc > self.max_arc:
                if _escaping(np.array(pts)):
                    return pts, Endpoint(EndKind.INFINITY)
                if arc > 3.0 * self.max_arc:
                    raise ConvergenceError("curve neither closes nor escapes")


def _escaping(pts):
    """Monotone growth of rho or depth over the last quarter of vertices."""
    tail = pts[-max(4, len(pts) // 4):]
    dr = np.diff(tail[:, 0])
    de = np.diff(tail[:, 1])
    return bool(np.all(dr > 0) or np.all(de < 0))


def trace_level_curve(mp, H, v, seed, step=0.05, max_arc=INFINITY_ARC):
    """
    Trace the level curve ``psi^(H) = v`` through a seed point.

    Marches in both directions from the seed with an arc-length predictor and
    a Newton corrector along the gradient.  The step is halved when the
    corrector needs more than three iterations or the tangent turns too fast,
    and never exceeds a quarter of the distance to the ring, so curves that
    surround the ring stay outside the guard disc.

    Parameters
    ----------
    mp : ModeParams
    H : float
    v : float
        Level value.
    seed : FieldPoint or (rho, eta)
        Point on the curve, ``|psi^(H)(seed) - v| <= 1e-6``.
    step : float
        Largest step along the curve.
    max_arc : float
        Arc length after which a monotone escape is declared ``Infinity``.

    Returns
    -------
    LevelCurve

    Raises
    ------
    SeedOffLevel
        The seed is not on the level.
    StagnationEncountered
        The gradient vanishes on the curve.
    """
    if not isinstance(seed, FieldPoint):
        seed = FieldPoint(*seed)
    tracer = _Tracer(mp, H, v, step, max_arc)
    p0 = np.array([seed.rho, seed.eta], dtype=float)
    f0 = tracer.field(p0)
    if abs(float(f0.psi) - v) > 1e-6 * max(1.0, abs(v)):
        raise SeedOffLevel("seed value %.6g differs from level %.6g" % (float(f0.psi), v))
    g0 = math.hypot(float(f0.psi_rho), float(f0.psi_eta))
    if g0 <= 1e-9:
        raise StagnationEncountered("seed sits on a stagnation point")
    on_surface = seed.eta == 0.0
    if on_surface:
        r = seed.rho
        for _ in range(20):
            f0 = evaluate(r, 0.0, mp, H)
            res = float(f0.psi) - v
            if abs(res) <= tracer.tol or float(f0.psi_rho) == 0.0:
                break
            r -= res / float(f0.psi_rho)
        p0 = np.array([r, 0.0])
    else:
        p0, f0, _ = tracer.correct(p0)
        if p0 is None or f0 is None:
            raise SeedOffLevel("seed could not be projected onto the level")
    branches = []
    for direction in (1.0, -1.0):
        t, _, _ = _tangent(f0, direction)
        if on_surface and t[1] >= 0.0:
            branches.append(([p0], Endpoint(EndKind.FREE_SURFACE, float(p0[0]))))
            continue
        branches.append(tracer.march(p0, f0, direction))
    (fwd, end_f), (bwd, end_b) = branches
    pts = np.array(bwd[::-1] + fwd[1:])
    left, right = end_b, end_f
    if left.kind is not EndKind.FREE_SURFACE and right.kind is EndKind.FREE_SURFACE:
        pts, left, right = pts[::-1], right, left
    elif left.kind is EndKind.FREE_SURFACE and right.kind is EndKind.FREE_SURFACE and left.rho > right.rho:
        pts, left, right = pts[::-1], right, left
    pts = np.ascontiguousarray(pts)
    resid = np.abs(evaluate(pts[:, 0], pts[:, 1], mp, H).psi - v)
    encloses = (left.kind is EndKind.FREE_SURFACE and right.kind is EndKind.FREE_SURFACE
                and min(left.rho, right.rho) < mp.rho_r < max(left.rho, right.rho))
    return LevelCurve(v, H, pts, left, right, encloses, float(np.max(resid)))


def _on_curve(curve, point, tol):
    line = shapely.LineString(curve.points)
    return bool(line.distance(shapely.Point(point)) < tol)


def _same_ends(a, b):
    """Curves with matching endpoint kinds and free-surface radii."""
    for ea, eb in ((a.left_end, b.left_end), (a.right_end, b.right_end)):
        if ea.kind is not eb.kind:
            return False
        if ea.kind is EndKind.FREE_SURFACE and abs(ea.rho - eb.rho) > 1e-7 * max(1.0, ea.rho):
            return False
    return a.left_end.kind is EndKind.FREE_SURFACE or a.right_end.kind is EndKind.FREE_SURFACE


def trace_level_set(mp, H, v, rho_max, step=0.05, extra_seeds=(), max_arc=INFINITY_ARC):
    """
    All level curves of ``psi^(H) = v`` that reach the free surface within
    ``(0, rho_max)`` or pass through one of ``extra_seeds``.

    Returns
    -------
    list of LevelCurve
    """
    seeds = []
    for interval in ((0.0, mp.rho_r), (mp.rho_r, rho_max)):
        try:
            seeds.extend((r, 0.0) for r in find_level_crossings(mp, H, v, interval))
        except DomainError:
            pass
    seeds.extend(tuple(s) for s in extra_seeds)
    curves = []
    for s in seeds:
        if any(_on_curve(c, s, 1e-6 + 0.02 * step) for c in curves):
            continue
        c = trace_level_curve(mp, H, v, s, step=step, max_arc=max_arc)
        if not any(_same_ends(c, o) for o in curves):
            curves.append(c)
    return curves


def _default_box(mp):
    return (0.05, mp.rho_r + 12.0, -8.0, -0.02)


def find_stagnation_points(mp, H, search_box=None, grid=(200, 200)):
    """
    Every interior stagnation point of ``psi^(H)`` found in a box.

    A coarse grid of ``|grad psi^(H)|`` is screened for local minima, each of
    which seeds a root solve of ``phi_rho = 0, phi_eta = H`` (equivalent to a
    vanishing gradient away from the axis).

    Parameters
    ----------
    mp : ModeParams
    H : float
    search_box : (rho_lo, rho_hi, eta_lo, eta_hi), optional
        Must keep clear of the ring; defaults to
        ``(0.05, rho_r + 12, -8, -0.02)``.
    grid : (int, int)
        Coarse grid size in ``rho`` and ``eta``.

    Returns
    -------
    list of StagnationPoint
        Ordered by radius.
    """
    if search_box is None:
        search_box = _default_box(mp)
    r_lo, r_hi, e_lo, e_hi = search_box
    if not (0.0 < r_lo < r_hi and e_lo < e_hi <= 0.0):
        raise DomainError("invalid search box")
    if e_hi > -2.0 * GUARD_RADIUS and r_lo <= mp.rho_r <= r_hi:
        raise DomainError("search box must exclude the ring guard")
    rs = np.linspace(r_lo, r_hi, grid[0])
    es = np.linspace(e_lo, e_hi, grid[1])
    R, E = np.meshgrid(rs, es, indexing="ij")
    f = evaluate(R, E, mp, H, screening=True)
    scale = np.hypot(f.phi_rho, f.phi_eta - H)
    local = (minimum_filter(scale, size=3, mode="nearest") == scale)
    local[0, :] = local[-1, :] = False
    local[:, 0] = local[:, -1] = False
    cand = np.argwhere(local)
    cand = cand[np.argsort(scale[local])][:20]

    def residual(x):
        r, e = x
        if e > 0.0 or r <= 0.0 or math.hypot(r - mp.rho_r, e) < 2.0 * GUARD_RADIUS:
            return [1e3, 1e3]
        ff = evaluate(r, e, mp, H)
        return [float(ff.phi_rho), float(ff.phi_eta) - H]

    found = []
    for i, j in cand:
        sol = root(residual, [rs[i], es[j]], method="hybr", options={"xtol": 1e-14})
        r, e = sol.x
        if not (r_lo <= r <= r_hi and e_lo <= e <= e_hi):
            continue
        ff = evaluate(r, e, mp, H)
        gn = math.hypot(float(ff.psi_rho), float(ff.psi_eta))
        if gn > 1e-7:
            continue
        if any(math.hypot(r - s.location.rho, e - s.location.eta) < 1e-6 for s in found):
            continue
        found.append(StagnationPoint(FieldPoint(float(r), float(e)), float(ff.psi), gn))
    found.sort(key=lambda s: s.location.rho)
    return found


def find_stagnation(mp, H, search_box=None, grid=(200, 200)):
    """
    The outermost interior stagnation point of ``psi^(H)`` in a box.

    Its level is the critical value that separates level curves closing on
    the free surface from those escaping to infinity.

    Raises
    ------
    NotFound
        No vanishing gradient inside the box.
    """
    pts = find_stagnation_points(mp, H, search_box, grid)
    if not pts:
        raise NotFound("no stagnation point in the search box")
    return pts[-1]
