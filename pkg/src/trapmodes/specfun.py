"""
Real-argument cylinder and modified Bessel functions.

Orders 0 and 1 are supported for all four kinds; the modified kinds also
accept order 2.  Every routine is vectorised over ``x`` and returns a float
for scalar input.

Regimes
-------
J, Y
    Power series for ``x < 2``, Miller backward recurrence with Neumann-series
    normalisation for ``2 <= x < 25`` and Hankel asymptotics beyond.
I
    Power series up to ``x = 25`` and the large-argument expansion beyond.
K
    Logarithmic series for ``x <= 2``, trapezoidal quadrature of the
    ``cosh`` integral representation for ``2 < x <= 25`` and the
    large-argument expansion beyond.
"""

import math

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "bessel",
    "bessel_zero",
    "j0", "j1", "y0", "y1",
    "i0", "i1", "i2", "k0", "k1", "k2",
]

EULER_GAMMA = 0.57721566490153286061
_SERIES_MAX = 2.0
_MILLER_MAX = 25.0
_I_SERIES_MAX = 25.0
_K_SERIES_MAX = 2.0
_K_QUAD_MAX = 25.0
# largest argument for which I_n(x) is finite in double precision
_I_OVERFLOW = 713.98
_ORDERS = {"J": (0, 1), "Y": (0, 1), "I": (0, 1, 2), "K": (0, 1, 2)}


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return float(out) if scalar else out


def _hankel_coeffs(n, kmax=40):
    """Coefficients a_k(n) of the large-argument Bessel expansions."""
    mu = 4.0 * n * n
    a = [1.0]
    for k in range(1, kmax + 1):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return np.array(a)


_HANKEL = {n: _hankel_coeffs(n) for n in (0, 1, 2)}


def _asymptotic_pq(n, x):
    """P and Q sums of the Hankel expansion, truncated at the smallest term."""
    a = _HANKEL[n]
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    inv = 1.0 / x
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    power = np.ones_like(x)
    for k in range(len(a)):
        term = a[k] * power
        mag = np.abs(term)
        active &= mag < prev
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p = np.where(active, p + sign * term, p)
        else:
            q = np.where(active, q + sign * term, q)
        active &= mag > 1e-18 * (np.abs(p) + np.abs(q))
        if not active.any():
            break
        prev = np.where(active, mag, prev)
        power = power * inv
    return p, q


def _jy_asymptotic(n, x):
    p, q = _asymptotic_pq(n, x)
    chi = x - (0.5 * n + 0.25) * math.pi
    amp = np.sqrt(2.0 / (math.pi * x))
    c, s = np.cos(chi), np.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _j_series(n, x):
    h2 = 0.25 * x * x
    term = (0.5 * x) ** n / math.factorial(n)
    total = term.copy()
    for k in range(1, 40):
        term = -term * h2 / (k * (k + n))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _y_series(n, x):
    """Neumann-type series for Y0 and Y1 at small argument."""
    h2 = 0.25 * x * x
    lg = np.log(0.5 * x)
    if n == 0:
        j = _j_series(0, x)
        term = np.ones_like(x)
        harmonic = 0.0
        acc = np.zeros_like(x)
        for k in range(1, 40):
            term = -term * h2 / (k * k)
            harmonic += 1.0 / k
            acc = acc - harmonic * term
            if np.all(np.abs(harmonic * term) <= 1e-18):
                break
        return (2.0 / math.pi) * ((lg + EULER_GAMMA) * j + acc)
    j = _j_series(1, x)
    # digamma(k+1) + digamma(k+2) = -2*gamma + H_k + H_{k+1}
    term = 0.5 * x
    hk = 0.0
    acc = (-2.0 * EULER_GAMMA + 1.0) * term
    for k in range(1, 40):
        term = -term * h2 / (k * (k + 1))
        hk += 1.0 / k
        contrib = (-2.0 * EULER_GAMMA + 2.0 * hk + 1.0 / (k + 1)) * term
        acc = acc + contrib
        if np.all(np.abs(contrib) <= 1e-18 * np.abs(acc)):
            break
    return -2.0 / (math.pi * x) + (2.0 / math.pi) * lg * j - acc / math.pi


def _miller(x):
    """J_0, J_1 and the Neumann normalisation sums via backward recurrence.

    Returns ``(J0, J1, S0, S1)`` where ``S0 = sum_{k>=1} (-1)^k J_{2k}/k`` and
    ``S1 = sum_{k>=1} (-1)^k (J_{2k-1} - J_{2k+1})/k``.
    """
    top = int(np.max(x)) + 60
    top += top % 2
    nxt = np.zeros_like(x)
    cur = np.full(x.shape, 1e-300)
    vals = np.zeros((top + 2,) + x.shape)
    vals[top] = cur
    for k in range(top, 0, -1):
        prev = (2.0 * k / x) * cur - nxt
        nxt, cur = cur, prev
        vals[k - 1] = cur
        big = np.abs(cur) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            vals[k - 1:] *= scale
            nxt = nxt * scale
            cur = cur * scale
    norm = vals[0] + 2.0 * np.sum(vals[2:top + 1:2], axis=0)
    vals /= norm
    s0 = np.zeros_like(x)
    s1 = np.zeros_like(x)
    for k in range(1, top // 2):
        sign = -1.0 if k % 2 else 1.0
        s0 += sign * vals[2 * k] / k
        s1 += sign * (vals[2 * k - 1] - vals[2 * k + 1]) / k
    return vals[0], vals[1], s0, s1


def _jy(kind, n, x):
    out = np.empty_like(x)
    small = x < _SERIES_MAX
    mid = (x >= _SERIES_MAX) & (x < _MILLER_MAX)
    big = x >= _MILLER_MAX
    if small.any():
        xs = x[small]
        out[small] = _j_series(n, xs) if kind == "J" else _y_series(n, xs)
    if mid.any():
        xm = x[mid]
        j0v, j1v, s0, s1 = _miller(xm)
        if kind == "J":
            out[mid] = j0v if n == 0 else j1v
        else:
            lg = np.log(0.5 * xm) + EULER_GAMMA
            if n == 0:
                out[mid] = (2.0 / math.pi) * (lg * j0v - 2.0 * s0)
            else:
                out[mid] = -(2.0 / math.pi) * (j0v / xm - lg * j1v - s1)
    if big.any():
        jv, yv = _jy_asymptotic(n, x[big])
        out[big] = jv if kind == "J" else yv
    return out


def _i_series(n, x):
    h2 = 0.25 * x * x
    term = (0.5 * x) ** n / math.factorial(n)
    total = term.copy()
    for k in range(1, 200):
        term = term * h2 / (k * (k + n))
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total


def _large_expansion(n, x, alternate):
    """sum_k (+-1)^k a_k(n) / x^k, truncated at the smallest term."""
    a = _HANKEL[n]
    total = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    power = np.ones_like(x)
    for k in range(len(a)):
        term = a[k] * power * ((-1.0) ** k if alternate else 1.0)
        mag = np.abs(term)
        active &= mag < prev
        total = np.where(active, total + term, total)
        active &= mag > 1e-18 * np.abs(total)
        if not active.any():
            break
        prev = np.where(active, mag, prev)
        power = power / x
    return total


def _i(n, x):
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax <= _I_SERIES_MAX
    if small.any():
        out[small] = _i_series(n, ax[small])
    big = ~small
    if big.any():
        xb = ax[big]
        if np.any(xb > _I_OVERFLOW):
            raise OverflowError("modified Bessel I overflows for x > %.2f" % _I_OVERFLOW)
        half = np.exp(0.5 * xb)
        out[big] = half * (_large_expansion(n, xb, True) / np.sqrt(2.0 * math.pi * xb)) * half
    if n % 2 == 1:
        out = np.where(x < 0, -out, out)
    return out


def _k_series(n, x):
    h2 = 0.25 * x * x
    lg = np.log(0.5 * x)
    i0v = _i_series(0, x)
    term = np.ones_like(x)
    harmonic = 0.0
    acc = np.zeros_like(x)
    for k in range(1, 40):
        term = term * h2 / (k * k)
        harmonic += 1.0 / k
        acc = acc + harmonic * term
        if np.all(harmonic * term <= 1e-18 * np.abs(acc)):
            break
    k0v = -(lg + EULER_GAMMA) * i0v + acc
    if n == 0:
        return k0v
    i1v = _i_series(1, x)
    term = 0.5 * x
    hk = 0.0
    acc = (-2.0 * EULER_GAMMA + 1.0) * term
    for k in range(1, 40):
        term = term * h2 / (k * (k + 1))
        hk += 1.0 / k
        contrib = (-2.0 * EULER_GAMMA + 2.0 * hk + 1.0 / (k + 1)) * term
        acc = acc + contrib
        if np.all(np.abs(contrib) <= 1e-18 * np.abs(acc)):
            break
    k1v = 1.0 / x + lg * i1v - 0.5 * acc
    if n == 1:
        return k1v
    return k0v + 2.0 * k1v / x


_KQ_STEP = 0.07


def _k_quadrature(n, x):
    """e^{x} K_n(x) from the trapezoidal rule on the cosh representation."""
    tmax = math.acosh(1.0 + 42.0 / float(np.min(x)))
    t = np.arange(0.0, tmax + _KQ_STEP, _KQ_STEP)
    w = np.full(t.shape, _KQ_STEP)
    w[0] *= 0.5
    expo = -np.multiply.outer(x, np.cosh(t) - 1.0)
    return np.exp(expo) @ (w * np.cosh(n * t))


def _k(n, x):
    out = np.empty_like(x)
    small = x <= _K_SERIES_MAX
    mid = (x > _K_SERIES_MAX) & (x <= _K_QUAD_MAX)
    big = x > _K_QUAD_MAX
    if small.any():
        out[small] = _k_series(n, x[small])
    if mid.any():
        xm = x[mid]
        out[mid] = np.exp(-xm) * _k_quadrature(n, xm)
    if big.any():
        xb = x[big]
        with np.errstate(under="ignore"):
            out[big] = np.exp(-xb) * np.sqrt(math.pi / (2.0 * xb)) * _large_expansion(n, xb, False)
    return out


def bessel(kind, order, x):
    """
    Evaluate a Bessel function of real argument.

    Parameters
    ----------
    kind : {"J", "Y", "I", "K"}
        Cylinder functions of the first and second kind or modified
        functions of the first and second kind.
    order : int
        0 or 1 for every kind; 2 is also accepted for ``I`` and ``K``.
    x : float or array_like
        Argument.  ``Y`` and ``K`` need ``x > 0``; ``J`` and ``I`` accept
        any real value.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.

    Raises
    ------
    ValueError
        Unsupported kind or order.
    DomainError
        ``x <= 0`` for ``Y`` or ``K``, or a non-finite argument.
    OverflowError
        ``I`` at arguments whose value exceeds the double range.
    """
    kind = str(kind).upper()
    if kind not in _ORDERS:
        raise ValueError("unknown Bessel kind %r" % (kind,))
    if order not in _ORDERS[kind]:
        raise ValueError("order %r not supported for kind %s" % (order, kind))
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel argument must be finite")
    if kind in "YK" and np.any(arr <= 0.0):
        raise DomainError("%s_%d needs a positive argument" % (kind, order))
    flat = np.atleast_1d(arr).astype(float).ravel()
    if kind == "J":
        ax = np.abs(flat)
        out = _jy("J", order, np.where(ax == 0.0, 1.0, ax))
        out = np.where(ax == 0.0, 1.0 if order == 0 else 0.0, out)
        if order == 1:
            out = np.where(flat < 0, -out, out)
    elif kind == "Y":
        out = _jy("Y", order, flat)
    elif kind == "I":
        out = _i(order, flat)
    else:
        out = _k(order, flat)
    out = out.reshape(arr.shape)
    return _finish(out, scalar)


def j0(x):
    """J_0(x)."""
    return bessel("J", 0, x)


def j1(x):
    """J_1(x)."""
    return bessel("J", 1, x)


def y0(x):
    """Y_0(x) for x > 0."""
    return bessel("Y", 0, x)


def y1(x):
    """Y_1(x) for x > 0."""
    return bessel("Y", 1, x)


def i0(x):
    """I_0(x)."""
    return bessel("I", 0, x)


def i1(x):
    """I_1(x)."""
    return bessel("I", 1, x)


def i2(x):
    """I_2(x)."""
    return bessel("I", 2, x)


def k0(x):
    """K_0(x) for x > 0."""
    return bessel("K", 0, x)


def k1(x):
    """K_1(x) for x > 0."""
    return bessel("K", 1, x)


def k2(x):
    """K_2(x) for x > 0."""
    return bessel("K", 2, x)


_ZERO_MAX_INDEX = 200


def bessel_zero(kind, order, index):
    """
    Positive zero number ``index`` of ``J_order`` or ``Y_order``.

    A McMahon estimate seeds a Newton iteration that is kept inside a
    sign-change bracket; bisection takes over whenever a Newton step leaves
    the bracket.

    Parameters
    ----------
    kind : {"J", "Y"}
    order : {0, 1}
    index : int
        1-based index of the zero.

    Returns
    -------
    float
        The zero, with ``|f(z)| <= 1e-12``.

    Raises
    ------
    ValueError
        Unsupported kind or order, or ``index < 1``.
    ConvergenceError
        Index beyond the supported range or the iteration failed.
    """
    kind = str(kind).upper()
    if kind not in ("J", "Y") or order not in (0, 1):
        raise ValueError("zeros are provided for J_0, J_1, Y_0 and Y_1 only")
    index = int(index)
    if index < 1:
        raise ValueError("zero index starts at 1")
    if index > _ZERO_MAX_INDEX:
        raise ConvergenceError("zero index %d exceeds supported range" % index)

    def f(z):
        return bessel(kind, order, z)

    def fprime(z):
        # J0' = -J1, Y0' = -Y1, J1' = J0 - J1/z, Y1' = Y0 - Y1/z
        if order == 0:
            return -bessel(kind, 1, z)
        return bessel(kind, 0, z) - bessel(kind, 1, z) / z

    shift = {("J", 0): -0.25, ("J", 1): 0.25, ("Y", 0): -0.75, ("Y", 1): -0.25}[(kind, order)]
    beta = (index + shift) * math.pi
    mu = 4.0 * order * order
    guess = beta - (mu - 1.0) / (8.0 * beta) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * beta) ** 3)
    lo, hi = guess - 0.5, guess + 0.5
    lo = max(lo, 1e-3)
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0.0:
        raise ConvergenceError("could not bracket zero %d of %s_%d" % (index, kind, order))
    z = guess
    for _ in range(100):
        fz = f(z)
        if fz == 0.0:
            return z
        if (fz > 0.0) == (flo > 0.0):
            lo, flo = z, fz
        else:
            hi = z
        step = fz / fprime(z)
        znew = z - step
        if not (lo < znew < hi):
            znew = 0.5 * (lo + hi)
        if abs(znew - z) <= 4e-16 * abs(z):
            z = znew
            break
        z = znew
    else:
        raise ConvergenceError("zero iteration did not settle")
    if abs(f(z)) > 1e-12:
        raise ConvergenceError("zero residual above tolerance")
    return z
