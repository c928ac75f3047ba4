"""
Trapped-mode potential, Stokes stream function and their gradients.

All quantities are dimensionless: lengths are multiplied by the wavenumber
``nu = omega**2 / g`` so that a field point is ``(rho, eta) = (nu|x|, nu y)``
with ``eta <= 0``.  The source ring sits at ``(rho_r, 0)`` where
``rho_r = j_{1,m}``, the m-th positive zero of ``J_1``.

The potential is assembled from two branches.  For ``rho < rho_r``::

    phi = 2 int (k cos k eta + sin k eta) I0(k rho) K1(k rho_r) k^2/(k^2+1) dk
          - pi^2 e^eta J0(rho) Y1(rho_r)

and for ``rho > rho_r``::

    phi = -2 int (k cos k eta + sin k eta) K0(k rho) I1(k rho_r) k^2/(k^2+1) dk
          + pi^2 e^eta Y0(rho) J1(rho_r).

The last term is an outgoing wave; it vanishes when ``rho_r`` is a zero of
``J_1``, which is what makes the mode trapped.  The stream function is::

    psi = -pi^2 rho e^eta J1(rho) Y1(rho_r) - 2 rho Psi(rho, rho_r, eta)   (inner)
    psi = +pi^2 rho e^eta Y1(rho) J1(rho_r) - 2 rho Psi(rho_r, rho, eta)   (outer)

with ``Psi(s, t, eta) = int (k sin k eta - cos k eta) I1(k s) K1(k t) k^2/(k^2+1) dk``.
Both satisfy ``d phi/d rho = -psi_eta / rho`` and ``d phi/d eta = psi_rho / rho``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import DomainError, QuadratureError, SingularPoint
from .specfun import bessel, bessel_zero

__all__ = [
    "GUARD_RADIUS",
    "ModeParams",
    "FieldPoint",
    "FieldSample",
    "FieldArrays",
    "Trig",
    "Derivative",
    "kernel_integral",
    "evaluate",
    "phi",
    "psi",
    "psi_heave",
    "field_sample",
    "lambda_trace",
]

GUARD_RADIUS = 1e-6
PI2 = math.pi ** 2


@dataclass(frozen=True)
class ModeParams:
    """
    Trapping-mode index and the physical scales.

    Parameters
    ----------
    m : int
        Index of the ``J_1`` zero that fixes the ring radius.
    omega : float
        Radian frequency (rad/s).
    g : float
        Gravitational acceleration (m/s^2).
    rho_r : float, optional
        Override of the dimensionless ring radius.  Leave unset for a trapped
        mode; any value that is not a ``J_1`` zero brings back the outgoing
        wave and is meant for diagnostics only.
    """

    m: int
    omega: float = 1.0
    g: float = 9.81
    rho_r: Optional[float] = None
    nu: float = field(init=False)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("mode index m must be a positive integer")
        if not (self.omega > 0.0 and self.g > 0.0):
            raise DomainError("omega and g must be positive")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "nu", self.omega ** 2 / self.g)
        if self.rho_r is None:
            object.__setattr__(self, "rho_r", bessel_zero("J", 1, self.m))
        elif not self.rho_r > 0.0:
            raise DomainError("ring radius must be positive")
        else:
            object.__setattr__(self, "rho_r", float(self.rho_r))

    @property
    def ring_radius(self):
        """Dimensional ring radius in metres."""
        return self.rho_r / self.nu

    @property
    def wave_amplitude(self):
        """``J_1(rho_r)``; zero for a trapped mode."""
        value = bessel("J", 1, self.rho_r)
        return 0.0 if abs(value) <= 1e-12 else value

    @property
    def y1_ring(self):
        """``Y_1(rho_r)``."""
        return bessel("Y", 1, self.rho_r)


@dataclass(frozen=True)
class FieldPoint:
    """Dimensionless meridional point ``(rho, eta)`` with ``rho >= 0, eta <= 0``."""

    rho: float
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.eta)):
            raise DomainError("field point must be finite")
        if self.rho < 0.0 or self.eta > 0.0:
            raise DomainError("field point must satisfy rho >= 0 and eta <= 0")


@dataclass(frozen=True)
class FieldSample:
    """Potential, stream function and both gradients at one point.

    ``psi`` and ``grad_psi`` refer to the heave-modified function
    ``psi - H rho^2 / 2``; with ``H = 0`` they are the plain stream function.
    Gradients are ordered ``(d/drho, d/deta)``.
    """

    phi: float
    psi: float
    grad_phi: tuple
    grad_psi: tuple


class FieldArrays(NamedTuple):
    """Vectorised field values; every member has the shape of the input."""

    phi: np.ndarray
    psi: np.ndarray
    phi_rho: np.ndarray
    phi_eta: np.ndarray
    psi_rho: np.ndarray
    psi_eta: np.ndarray


class Trig(Enum):
    """Trigonometric factor of a kernel integral."""

    COS_PLUS_SIN = "cos+sin"   # k cos(k eta) + sin(k eta)
    SIN_MINUS_COS = "sin-cos"  # k sin(k eta) - cos(k eta)
    NONE = "none"


class Derivative(Enum):
    VALUE = "value"
    DRHO = "drho"
    DETA = "deta"


def _check_guard(rho, eta, rho_r):
    dist = np.hypot(rho - rho_r, eta)
    if np.any(dist < GUARD_RADIUS):
        raise SingularPoint("field point within %.0e of the source ring" % GUARD_RADIUS)


def kernel_integral(trig, inner_order, outer_order, sigma, tau, eta, power,
                    rational=True, tol=1e-9):
    """
    Semi-infinite Bessel-kernel integral.

    Computes::

        int_0^inf T(k, eta) I_a(k sigma) K_b(k tau) k^p R(k) dk

    where ``T`` is ``k cos k eta + sin k eta``, ``k sin k eta - cos k eta`` or
    1, and ``R(k) = 1/(k^2 + 1)`` when ``rational`` is true, else 1.

    Parameters
    ----------
    trig : Trig or str
    inner_order, outer_order : int
        Orders ``a`` of ``I`` and ``b`` of ``K`` (0, 1 or 2).
    sigma, tau : float
        Radii with ``0 <= sigma <= tau``.
    eta : float
        Depth, ``eta <= 0``.  Ignored when ``trig`` is ``NONE``.
    power : int
        Exponent ``p`` of the monomial factor.
    rational : bool
        Include ``1/(k^2 + 1)``.
    tol : float
        Target absolute error relative to ``1 + |result|``.

    Returns
    -------
    float

    Raises
    ------
    SingularPoint
        ``(sigma, eta)`` lies within the guard radius of ``(tau, 0)``.
    ConvergenceError
        Successive panel refinements keep disagreeing.
    """
    trig = Trig(trig)
    if not (0.0 <= sigma <= tau) or eta > 0.0:
        raise DomainError("need 0 <= sigma <= tau and eta <= 0")
    if inner_order not in (0, 1, 2) or outer_order not in (0, 1, 2):
        raise DomainError("Bessel orders must be 0, 1 or 2")
    if trig is Trig.NONE:
        eta = 0.0
    if math.hypot(tau - sigma, eta) < GUARD_RADIUS:
        raise SingularPoint("kernel integral diverges at sigma = tau, eta = 0")
    # integrand behaves like k^lead near k = 0, up to logarithms
    lead = power + (inner_order if sigma > 0 else 0) - outer_order
    if trig is Trig.COS_PLUS_SIN:
        lead += 1
    if lead <= -1:
        raise DomainError("integral diverges at k = 0")
    if sigma == 0.0 and inner_order > 0:
        return 0.0

    def quad(refine):
        def batch(p, weighted):
            return _kernels.kernel_batch(sigma, tau, eta, inner_order, outer_order, p,
                                         rational=weighted, refine=refine)[0]
        if trig is Trig.NONE:
            if rational:
                # 1/(k^2 + 1) = -Im 1/(k + i) on the real axis
                return float(-batch(power, True).imag)
            return float(batch(power, False).real)
        # (k - i) e^{ik eta} carries both trigonometric factors
        if rational:
            val = batch(power, True)
        else:
            val = batch(power + 1, False) - 1j * batch(power, False)
        return float(val.real if trig is Trig.COS_PLUS_SIN else val.imag)

    prev = quad(0)
    for level in range(1, 4):
        cur = quad(level)
        if abs(cur - prev) <= tol * (1.0 + abs(cur)):
            return cur
        prev = cur
    raise QuadratureError("kernel integral did not converge")


def evaluate(rho, eta, mp, H=0.0, branch=None, screening=False):
    """
    Potential, heave-modified stream function and gradients on a batch.

    Parameters
    ----------
    rho, eta : array_like
        Broadcastable coordinates with ``rho >= 0`` and ``eta <= 0``.
    mp : ModeParams
    H : float
        Heave amplitude entering ``psi - H rho^2 / 2``.
    branch : {None, "inner", "outer"}
        Force one integral representation for every point.  By default the
        inner one is used for ``rho < rho_r`` and the outer one otherwise.
    screening : bool
        Use a cheaper quadrature rule (relative accuracy near 1e-7) suited to
        coarse scans.

    Returns
    -------
    FieldArrays

    Raises
    ------
    SingularPoint
        Any point within ``GUARD_RADIUS`` of the ring.
    """
    rho, eta = np.broadcast_arrays(np.asarray(rho, dtype=float), np.asarray(eta, dtype=float))
    shape = rho.shape
    rho = rho.ravel()
    eta = eta.ravel()
    if np.any(rho < 0.0) or np.any(eta > 0.0) or not np.all(np.isfinite(rho + eta)):
        raise DomainError("field points need rho >= 0, eta <= 0")
    rr = mp.rho_r
    _check_guard(rho, eta, rr)
    phi_v = np.empty_like(rho)
    psi_v = np.empty_like(rho)
    phr = np.empty_like(rho)
    phe = np.empty_like(rho)
    psr = np.empty_like(rho)
    pse = np.empty_like(rho)
    ee = np.exp(eta)
    if branch is None:
        inner = rho < rr
    elif branch in ("inner", "outer"):
        inner = np.full(rho.shape, branch == "inner")
    else:
        raise ValueError("branch must be None, 'inner' or 'outer'")
    if inner.any():
        r = rho[inner]
        e = eta[inner]
        A, B, C, D = _kernels.field_integrals(r, np.full_like(r, rr), e, True, screening)
        y1r = mp.y1_ring
        j0v = bessel("J", 0, r)
        j1v = bessel("J", 1, r)
        ex = ee[inner]
        phi_v[inner] = 2.0 * A.real - PI2 * ex * j0v * y1r
        phr[inner] = 2.0 * B.real + PI2 * ex * j1v * y1r
        phe[inner] = -2.0 * C.imag - PI2 * ex * j0v * y1r
        psi_v[inner] = -PI2 * r * ex * j1v * y1r - 2.0 * r * D.imag
        psr[inner] = -PI2 * r * ex * j0v * y1r - 2.0 * r * C.imag
        pse[inner] = -PI2 * r * ex * j1v * y1r - 2.0 * r * B.real
    outer = ~inner
    if outer.any():
        r = rho[outer]
        e = eta[outer]
        A, B, C, D = _kernels.field_integrals(np.full_like(r, rr), r, e, False, screening)
        ex = ee[outer]
        phi_v[outer] = -2.0 * A.real
        phr[outer] = 2.0 * B.real
        phe[outer] = 2.0 * C.imag
        psi_v[outer] = -2.0 * r * D.imag
        psr[outer] = 2.0 * r * C.imag
        pse[outer] = -2.0 * r * B.real
        amp = mp.wave_amplitude
        if amp != 0.0:
            y0v = bessel("Y", 0, r)
            y1v = bessel("Y", 1, r)
            phi_v[outer] += PI2 * ex * y0v * amp
            phr[outer] -= PI2 * ex * y1v * amp
            phe[outer] += PI2 * ex * y0v * amp
            psi_v[outer] += PI2 * r * ex * y1v * amp
            psr[outer] += PI2 * r * ex * y0v * amp
            pse[outer] += PI2 * r * ex * y1v * amp
    if H:
        psi_v = psi_v - 0.5 * H * rho * rho
        psr = psr - H * rho
    return FieldArrays(*(a.reshape(shape) for a in (phi_v, psi_v, phr, phe, psr, pse)))


def _point(p):
    if isinstance(p, FieldPoint):
        return p
    return FieldPoint(*p)


def phi(p, mp):
    """Potential at a single point (``FieldPoint`` or ``(rho, eta)`` pair)."""
    p = _point(p)
    return float(evaluate(p.rho, p.eta, mp).phi)


def psi(p, mp):
    """Stokes stream function, normalised to vanish far from the ring."""
    p = _point(p)
    return float(evaluate(p.rho, p.eta, mp).psi)


def psi_heave(p, mp, H):
    """Heave-modified stream function ``psi - H rho^2 / 2``."""
    if H < 0.0:
        raise DomainError("heave amplitude must be non-negative")
    p = _point(p)
    return float(evaluate(p.rho, p.eta, mp, H).psi)


def field_sample(p, mp, H=0.0):
    """All field quantities at one point, as a :class:`FieldSample`."""
    p = _point(p)
    f = evaluate(p.rho, p.eta, mp, H)
    return FieldSample(
        phi=float(f.phi),
        psi=float(f.psi),
        grad_phi=(float(f.phi_rho), float(f.phi_eta)),
        grad_psi=(float(f.psi_rho), float(f.psi_eta)),
    )


def lambda_trace(rho, mp, derivative=Derivative.VALUE):
    """
    Remainder ``Lambda`` of the scaled stream function on the free surface.

    On ``eta = 0`` and ``rho < rho_r``::

        psi / Y1(rho_r) = -pi^2 rho J1(rho) + Lambda(rho),
        Lambda = -2 rho Psi(rho, rho_r, 0) / Y1(rho_r).

    ``Lambda`` and its first derivatives tend to zero as ``m`` grows, which is
    why the trace extrema approach the zeros of ``J_0``.

    Parameters
    ----------
    rho : float or array_like
        Radii in ``[0, rho_r)``.
    mp : ModeParams
    derivative : Derivative or str
        ``value``, ``drho`` or ``deta``.
    """
    derivative = Derivative(derivative)
    r = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(r < 0.0) or np.any(r >= mp.rho_r):
        raise DomainError("lambda_trace needs 0 <= rho < rho_r")
    _check_guard(r, 0.0, mp.rho_r)
    A, B, C, D = _kernels.field_integrals(r, np.full_like(r, mp.rho_r), np.zeros_like(r), True)
    if derivative is Derivative.VALUE:
        out = -2.0 * r * D.imag
    elif derivative is Derivative.DRHO:
        out = -2.0 * r * C.imag
    else:
        out = -2.0 * r * B.real
    out = out / mp.y1_ring
    return float(out[0]) if np.ndim(rho) == 0 else out
