"""
Rotated-ray Gauss quadrature for the Bessel-kernel integrals.

Every integral handled here has the form

    Q = int_0^inf k^p e^{i k eta} I_a(k sigma) K_b(k tau) w(k) dk,

with ``0 <= sigma <= tau``, ``eta <= 0`` and ``w`` either ``1`` or ``1/(k+i)``.
The real-axis integrand oscillates and decays like ``exp(-k (tau - sigma))``.
Rotating the path to ``k = t exp(-i theta)`` with
``theta = atan(|eta| / (tau - sigma))`` removes the oscillation and leaves the
decay ``exp(-t D)``, where ``D`` is the distance-like quantity
``cos(theta) (tau - sigma) + sin(theta) |eta|``.  The pole of ``1/(k+i)`` sits
at angle ``-pi/2`` and is never crossed because ``theta`` is capped at 1.2.

Panels grow geometrically from the Bessel scale ``min(1, 1/tau)`` up to
``4/D`` and then continue uniformly up to ``40/D``.  Each panel carries a
16-point Gauss-Legendre rule.  Points are processed in vectorised batches; the
panel lists of a batch are padded with zero-length panels.
"""

import numpy as np
import scipy.special as sc

_GL_ORDER = 16
_RULES = {}
THETA_MAX = 1.2
_LOW_SHRINK = 1.0 / 16.0
_GEO_TOP = 4.0
_TAIL_STEP = 6.0
_TAIL_END = 40.0
_CHUNK = 512


def ray_angle(sigma, tau, eta):
    """Rotation angle and decay rate of the rotated path."""
    gap = tau - sigma
    depth = -np.minimum(eta, 0.0)
    theta = np.where(depth > 0.0, np.minimum(np.arctan2(depth, gap), THETA_MAX), 0.0)
    decay = np.cos(theta) * gap + np.sin(theta) * depth
    return theta, decay


def _gauss(order):
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


def panel_edges(decay, tau, refine=0, tail_end=_TAIL_END):
    """
    Panel edges along the ray for a batch of points.

    Parameters
    ----------
    decay : ndarray, shape (P,)
        Exponential decay rate ``D`` per point.
    tau : ndarray, shape (P,)
        Larger Bessel radius per point.
    refine : int
        Each panel is split into ``2**refine`` equal pieces.
    tail_end : float
        Truncation point in units of ``1/D``.

    Returns
    -------
    ndarray, shape (P, E)
        Non-decreasing edges starting at 0; padded entries repeat the end.
    """
    decay = np.asarray(decay, dtype=float)
    tau = np.asarray(tau, dtype=float)
    t_low = 0.25 * np.minimum(1.0, 1.0 / np.maximum(tau, 1e-300)) * _LOW_SHRINK
    t_top = _GEO_TOP / decay
    n_geo = np.ceil(np.log2(np.maximum(t_top / t_low, 1.0))).astype(int)
    geo_last = t_low * 2.0 ** n_geo
    step = _TAIL_STEP / decay
    t_end = np.maximum(tail_end / decay, geo_last)
    n_tail = np.ceil((t_end - geo_last) / step).astype(int)
    n_edges = 2 + int(np.max(n_geo)) + int(np.max(n_tail))
    j = np.arange(n_edges)[None, :]
    ng = n_geo[:, None]
    geo = t_low[:, None] * 2.0 ** np.minimum(j - 1, ng)
    tail = geo_last[:, None] + (j - 1 - ng) * step[:, None]
    edges = np.where(j == 0, 0.0, np.where(j - 1 <= ng, geo, tail))
    edges = np.minimum(edges, t_end[:, None])
    if refine:
        pieces = 2 ** refine
        a, b = edges[:, :-1], edges[:, 1:]
        frac = np.arange(pieces) / pieces
        inner = a[:, :, None] + (b - a)[:, :, None] * frac[None, None, :]
        edges = np.concatenate([inner.reshape(len(edges), -1), edges[:, -1:]], axis=1)
    return edges


def ray_nodes(sigma, tau, eta, refine=0, order=_GL_ORDER, tail_end=_TAIL_END):
    """
    Complex nodes ``k``, weights ``dk`` and the scaled exponential factor.

    The factor is ``exp(i k eta + Re(k sigma) - k tau)`` so that
    ``ive(a, k sigma) * kve(b, k tau) * factor = I_a K_b e^{i k eta}``.
    """
    theta, decay = ray_angle(sigma, tau, eta)
    edges = panel_edges(decay, tau, refine, tail_end)
    gx, gw = _gauss(order)
    a, b = edges[:, :-1], edges[:, 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    t = (mid[:, :, None] + half[:, :, None] * gx).reshape(len(edges), -1)
    w = (half[:, :, None] * gw).reshape(len(edges), -1)
    rot = np.exp(-1j * theta)[:, None]
    k = t * rot
    factor = np.exp(1j * k * eta[:, None] + (k * sigma[:, None]).real - k * tau[:, None])
    return k, w * rot, factor


def _bessel_i(order, z, real):
    if real:
        if order == 0:
            return sc.i0e(z)
        if order == 1:
            return sc.i1e(z)
        return sc.ive(order, z)
    return sc.ive(order, z)


def _bessel_k(order, z, real):
    if real:
        if order == 0:
            return sc.k0e(z)
        if order == 1:
            return sc.k1e(z)
        return sc.kve(order, z)
    return sc.kve(order, z)


def kernel_batch(sigma, tau, eta, i_order, k_order, power, rational=True, refine=0):
    """
    Vectorised ``int k^p e^{ik eta} I_a(k sigma) K_b(k tau) w(k) dk``.

    Returns complex values of shape (P,).  With ``eta = 0`` and no rational
    weight the integral is real.
    """
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    sigma, tau, eta = np.broadcast_arrays(sigma, tau, eta)
    out = np.empty(sigma.shape, dtype=complex)
    for s in range(0, len(sigma), _CHUNK):
        sl = slice(s, s + _CHUNK)
        sg, ta, et = sigma[sl], tau[sl], eta[sl]
        k, dk, factor = ray_nodes(sg, ta, et, refine)
        real = not np.any(et < 0.0)
        kr = k.real if real else k
        val = factor * _bessel_i(i_order, kr * sg[:, None], real) * _bessel_k(k_order, kr * ta[:, None], real)
        val = val * k ** power
        if rational:
            val = val / (k + 1j)
        out[sl] = np.sum(val * dk, axis=1)
    return out


def field_integrals(sigma, tau, eta, inner, screening=False):
    """
    The four integrals behind the potential and the stream function.

    For ``inner`` points the near functions are ``I_0, I_1`` of ``k sigma``
    and the far function ``K_1(k tau)``; for outer points they are
    ``K_0, K_1`` of ``k tau`` and ``I_1(k sigma)``.  Returns the complex
    integrals of ``k^2 X0, k^3 X1, k^3 X0, k^2 X1`` against
    ``e^{ik eta} dk / (k+i)``, where ``X0`` and ``X1`` are the order-0 and
    order-1 products.  ``screening`` selects a cheaper rule (about 1e-7
    relative accuracy) meant for coarse searches.
    """
    opts = {"order": 8, "tail_end": 26.0} if screening else {}
    sigma = np.asarray(sigma, dtype=float)
    tau = np.asarray(tau, dtype=float)
    eta = np.asarray(eta, dtype=float)
    n = len(sigma)
    res = np.empty((4, n), dtype=complex)
    for s in range(0, n, _CHUNK):
        sl = slice(s, s + _CHUNK)
        sg, ta, et = sigma[sl], tau[sl], eta[sl]
        k, dk, factor = ray_nodes(sg, ta, et, **opts)
        real = not np.any(et < 0.0)
        kr = k.real if real else k
        zs = kr * sg[:, None]
        zt = kr * ta[:, None]
        if inner:
            far = _bessel_k(1, zt, real)
            x0 = _bessel_i(0, zs, real) * far
            x1 = _bessel_i(1, zs, real) * far
        else:
            far = _bessel_i(1, zs, real)
            x0 = _bessel_k(0, zt, real) * far
            x1 = _bessel_k(1, zt, real) * far
        base = factor * k * k / (k + 1j) * dk
        x0 = x0 * base
        x1 = x1 * base
        res[0, sl] = np.sum(x0, axis=1)
        res[1, sl] = np.sum(x1 * k, axis=1)
        res[2, sl] = np.sum(x0 * k, axis=1)
        res[3, sl] = np.sum(x1, axis=1)
    return res
