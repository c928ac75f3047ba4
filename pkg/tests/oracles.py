"""
Independent high-precision oracles built on mpmath.

The package integrates along a rotated ray with Gauss panels; these oracles
integrate along the real axis with mpmath's tanh-sinh rule at 20 digits, and
use mpmath's own Bessel functions and zeros.
"""

import mpmath as mp

mp.mp.dps = 20

KIND = {"J": mp.besselj, "Y": mp.bessely, "I": mp.besseli, "K": mp.besselk}


def bessel(kind, order, x):
    return float(KIND[kind](order, mp.mpf(x)))


def modulus(kind, order, x):
    """Envelope used to judge J/Y accuracy near their zeros."""
    x = mp.mpf(x)
    if kind in ("J", "Y"):
        return float(mp.sqrt(mp.besselj(order, x) ** 2 + mp.bessely(order, x) ** 2))
    return abs(float(KIND[kind](order, x)))


def zero(order, index):
    return float(mp.besseljzero(order, index))


def _breaks(decay):
    step = 4 / decay
    return [0] + [step * i for i in range(1, 12)] + [mp.inf]


def kernel(trig, a_fun, b_fun, sigma, tau, eta, power=2):
    """
    ``int (trig) A(k sigma) B(k tau) k^power / (k^2 + 1) dk`` on the real axis.

    ``trig`` is ``"cos+sin"`` for ``k cos k eta + sin k eta`` or ``"sin-cos"``
    for ``k sin k eta - cos k eta``.
    """
    sigma, tau, eta = mp.mpf(sigma), mp.mpf(tau), mp.mpf(eta)

    def f(k):
        if k == 0:
            return mp.mpf(0)
        if trig == "cos+sin":
            t = k * mp.cos(k * eta) + mp.sin(k * eta)
        else:
            t = k * mp.sin(k * eta) - mp.cos(k * eta)
        return t * a_fun(k * sigma) * b_fun(k * tau) * k ** power / (k * k + 1)

    return mp.quad(f, _breaks(max(tau - sigma, mp.mpf("0.05"))))


def closed_form_kernel(mu, a, b):
    """Numerical ``int k I_mu(ka) K_mu(kb) dk`` and its closed form."""
    a, b = mp.mpf(a), mp.mpf(b)
    val = mp.quad(lambda k: k * mp.besseli(mu, k * a) * mp.besselk(mu, k * b),
                  _breaks(b - a))
    return float(val), float((a / b) ** mu / (b * b - a * a))


def _i0(z):
    return mp.besseli(0, z)


def _i1(z):
    return mp.besseli(1, z)


def _k0(z):
    return mp.besselk(0, z)


def _k1(z):
    return mp.besselk(1, z)


def phi(rho, eta, rho_r):
    """Potential at one point, wave term included when ``J1(rho_r) != 0``."""
    rho, eta, rr = mp.mpf(rho), mp.mpf(eta), mp.mpf(rho_r)
    if rho < rr:
        q = kernel("cos+sin", _i0, _k1, rho, rr, eta)
        return float(2 * q - mp.pi ** 2 * mp.exp(eta) * mp.besselj(0, rho) * mp.bessely(1, rr))
    q = kernel("cos+sin", _i1, _k0, rr, rho, eta)
    return float(-2 * q + mp.pi ** 2 * mp.exp(eta) * mp.bessely(0, rho) * mp.besselj(1, rr))


def psi(rho, eta, rho_r):
    """Stokes stream function at one point."""
    rho, eta, rr = mp.mpf(rho), mp.mpf(eta), mp.mpf(rho_r)
    if rho == 0:
        return 0.0
    if rho < rr:
        big = kernel("sin-cos", _i1, _k1, rho, rr, eta)
        wave = -mp.pi ** 2 * rho * mp.exp(eta) * mp.besselj(1, rho) * mp.bessely(1, rr)
    else:
        big = kernel("sin-cos", _i1, _k1, rr, rho, eta)
        wave = mp.pi ** 2 * rho * mp.exp(eta) * mp.bessely(1, rho) * mp.besselj(1, rr)
    return float(wave - 2 * rho * big)


def lambda_surface(rho, m):
    """``-2 rho Psi(rho, j_{1,m}, 0) / Y1(j_{1,m})`` at the free surface."""
    rr = mp.besseljzero(1, m)
    big = kernel("sin-cos", _i1, _k1, rho, rr, 0)
    return float(-2 * mp.mpf(rho) * big / mp.bessely(1, rr))
