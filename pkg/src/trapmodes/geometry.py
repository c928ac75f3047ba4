"""
Meridional curves and solids of revolution.

A wetted curve is stored as a polyline of ``(rho, eta)`` vertices running from
its left waterline point to its right one (or from the axis), with the body
region above it.  A quintic interpolating spline in chord length gives smooth
positions and tangents between vertices.

Volume integrals over the solid obtained by revolving the region ``R``
between the curve and ``eta = 0`` are reduced to line integrals through
Green's theorem::

    int_R f(rho, eta) drho deta = oint F deta,   dF/drho = f,

and only the curve contributes because ``deta = 0`` on the waterline and on
any horizontal cut.
"""

import math

import numpy as np
import shapely
from scipy.interpolate import make_interp_spline
from scipy.optimize import brentq

from .errors import GeometryError

__all__ = ["MeridianCurve", "RegionMoments", "box_moments"]


class RegionMoments:
    """Integrals over a solid of revolution, in dimensionless units.

    Attributes
    ----------
    volume : float
    eta1 : float
        First vertical moment ``int eta dV``.
    eta2 : float
        ``int eta^2 dV``.
    x11 : float
        ``int x_1^2 dV`` (equal to ``int x_2^2 dV``).
    """

    __slots__ = ("volume", "eta1", "eta2", "x11")

    def __init__(self, volume=0.0, eta1=0.0, eta2=0.0, x11=0.0):
        self.volume = volume
        self.eta1 = eta1
        self.eta2 = eta2
        self.x11 = x11

    def __add__(self, other):
        return RegionMoments(self.volume + other.volume, self.eta1 + other.eta1,
                             self.eta2 + other.eta2, self.x11 + other.x11)

    def scaled(self, factor):
        return RegionMoments(factor * self.volume, factor * self.eta1,
                             factor * self.eta2, factor * self.x11)

    @property
    def centroid_eta(self):
        return self.eta1 / self.volume


def box_moments(rho_in, rho_out, eta_lo, eta_hi):
    """Moments of the annular cylinder ``rho_in < rho < rho_out``."""
    area = math.pi * (rho_out ** 2 - rho_in ** 2)
    h = eta_hi - eta_lo
    vol = area * h
    return RegionMoments(
        volume=vol,
        eta1=area * 0.5 * (eta_hi ** 2 - eta_lo ** 2),
        eta2=area * (eta_hi ** 3 - eta_lo ** 3) / 3.0,
        x11=0.25 * math.pi * (rho_out ** 4 - rho_in ** 4) * h,
    )


class MeridianCurve:
    """
    Smooth parametrisation of a wetted curve.

    Parameters
    ----------
    points : array_like, shape (n, 2)
        Vertices ``(rho, eta)``, at least six, ordered so that the body region
        lies to the left when walking along the curve.
    degree : int
        Spline degree.
    """

    def __init__(self, points, degree=5):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < degree + 1:
            raise GeometryError("a wetted curve needs at least %d vertices" % (degree + 1))
        seg = np.hypot(*np.diff(pts, axis=0).T)
        if np.any(seg <= 0.0):
            raise GeometryError("repeated vertices in wetted curve")
        self.points = pts
        self.s = np.concatenate([[0.0], np.cumsum(seg)])
        self.spline = make_interp_spline(self.s, pts, k=degree)
        self.dspline = self.spline.derivative()

    @property
    def length(self):
        return float(self.s[-1])

    def is_simple(self):
        return bool(shapely.LineString(self.points).is_simple)

    def check_simple(self):
        if not self.is_simple():
            raise GeometryError("wetted curve intersects itself")

    def polygon(self):
        """Meridional body region closed along the waterline."""
        return shapely.Polygon(self.points)

    def position(self, s):
        return self.spline(s)

    def tangent(self, s):
        d = self.dspline(s)
        return d / np.hypot(d[..., 0], d[..., 1])[..., None]

    def normal(self, s):
        """Unit normal pointing into the body region (out of the water)."""
        t = self.tangent(s)
        return np.stack([-t[..., 1], t[..., 0]], axis=-1)

    def vertex_normals(self):
        return self.normal(self.s)

    def nodes(self, order=8, refine=0, breaks=None):
        """
        Gauss-Legendre nodes along the curve.

        Returns ``(s, xy, dxy, w)``: parameters, positions, derivatives with
        respect to the chord parameter and weights, so that
        ``sum(w * f(xy) * |dxy|)`` approximates ``int f ds``.
        """
        edges = self.s if breaks is None else np.unique(np.concatenate([self.s, breaks]))
        if refine:
            pieces = 2 ** refine
            frac = np.arange(pieces) / pieces
            edges = np.concatenate([(edges[:-1, None] + np.diff(edges)[:, None] * frac).ravel(), edges[-1:]])
        gx, gw = np.polynomial.legendre.leggauss(order)
        a, b = edges[:-1], edges[1:]
        half = 0.5 * (b - a)
        s = ((a + b)[:, None] * 0.5 + half[:, None] * gx).ravel()
        w = (half[:, None] * gw).ravel()
        return s, self.spline(s), self.dspline(s), w

    def _cut_params(self, eta_cut):
        """Chord parameters where the curve crosses ``eta = eta_cut``."""
        eta = self.points[:, 1] - eta_cut
        out = []
        for i in np.nonzero(np.sign(eta[:-1]) * np.sign(eta[1:]) < 0)[0]:
            out.append(brentq(lambda t: float(self.spline(t)[1]) - eta_cut,
                              self.s[i], self.s[i + 1], xtol=1e-15))
        return np.array(out)

    def moments(self, eta_cut=None, order=10):
        """
        Moments of the revolved region between the curve and ``eta = 0``.

        With ``eta_cut`` the region is restricted to ``eta < eta_cut``.
        """
        breaks = None if eta_cut is None else self._cut_params(eta_cut)
        _, xy, dxy, w = self.nodes(order, breaks=breaks)
        rho, eta = xy[:, 0], xy[:, 1]
        deta = dxy[:, 1] * w
        if eta_cut is not None:
            deta = np.where(eta < eta_cut, deta, 0.0)
        r2 = math.pi * rho * rho
        return RegionMoments(
            volume=float(np.sum(r2 * deta)),
            eta1=float(np.sum(r2 * eta * deta)),
            eta2=float(np.sum(r2 * eta * eta * deta)),
            x11=float(np.sum(0.25 * math.pi * rho ** 4 * deta)),
        )

    def lowest_point(self):
        """Minimum depth reached by the curve."""
        s = np.linspace(0.0, self.length, 20 * len(self.points))
        eta = self.spline(s)[:, 1]
        i = int(np.argmin(eta))
        lo, hi = s[max(i - 1, 0)], s[min(i + 1, len(s) - 1)]
        grid = np.linspace(lo, hi, 201)
        return float(np.min(self.spline(grid)[:, 1]))

    def surface_area(self, order=8):
        """Area of the revolved surface."""
        _, xy, dxy, w = self.nodes(order)
        return float(np.sum(2.0 * math.pi * xy[:, 0] * np.hypot(dxy[:, 0], dxy[:, 1]) * w))
