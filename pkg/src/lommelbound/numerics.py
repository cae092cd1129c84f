"""Numerical substrate: semi-infinite quadrature, modified Bessel K of
complex order on the positive axis, and complex log-gamma.

Integrands passed to :func:`integrate_semi_infinite` are vectorized: they
receive a 1-d array of abscissae and return an array of the same length
(or of shape ``(len(t), m)`` for a vector of ``m`` integrals sharing nodes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "QuadratureResult",
    "integrate_semi_infinite",
    "bessel_K",
    "bessel_K_prime",
    "bessel_K_scaled",
    "log_gamma",
    "rgamma",
]

_EPS = np.finfo(float).eps
_HALF_PI = 0.5 * math.pi

# Node ranges in the DE variable s.  Beyond these the transformed weights or
# the distance to the endpoint underflow in double precision.
_TS_SMAX = 4.0
_ES_SMIN = -6.0
_ES_SMAX = 4.0


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | np.ndarray
    err_estimate: float | np.ndarray
    evaluations: int
    converged: bool = True

    def __post_init__(self):
        if np.any(np.asarray(self.err_estimate) < 0):
            raise ValueError("err_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


def _tanh_sinh_nodes(a, b, s):
    """Nodes and weights of the tanh-sinh map of [a, b] at parameters s."""
    u = _HALF_PI * np.sinh(s)
    du = _HALF_PI * np.cosh(s)
    # distance to the nearer endpoint, computed without cancellation
    e = np.exp(-2.0 * np.abs(u))
    frac = e / (1.0 + e)
    t = np.where(u < 0, a + (b - a) * frac, b - (b - a) * frac)
    w = (b - a) * du * 2.0 * e / (1.0 + e) ** 2
    return t, w


def _exp_sinh_nodes(a, scale, s):
    x = _HALF_PI * np.sinh(s)
    ex = np.exp(x)
    t = a + scale * ex
    w = scale * _HALF_PI * np.cosh(s) * ex
    return t, w


def _level_params(level, lo, hi):
    """DE parameters added at a refinement level (step 2**-level)."""
    h = 2.0 ** (-level)
    if level == 0:
        k = np.arange(math.ceil(lo), math.floor(hi) + 1)
        return k * 1.0, h
    k0 = math.ceil((lo / h - 1) / 2)
    k1 = math.floor((hi / h - 1) / 2)
    return (2 * np.arange(k0, k1 + 1) + 1) * h, h


def integrate_semi_infinite(f, rel_tol=1e-10, breakpoints=(), scale=1.0,
                            start=0.0, abs_tol=0.0, max_level=9, strict=False):
    """Integrate ``f`` over ``(start, inf)`` with double-exponential rules.

    The interval is split at ``breakpoints``.  Finite pieces use the
    tanh-sinh rule and the last piece ``(b_k, inf)`` uses the exp-sinh rule
    ``t = b_k + scale * exp(pi/2 sinh s)``, so ``scale`` should be close to
    the decay length of the integrand.  The step is halved until two
    consecutive estimates agree to ``rel_tol`` (componentwise for vector
    integrands).  The difference between them is reported as the error
    estimate; it is floored by rounding noise ``eps * sum|terms|``.

    When the budget runs out the result carries ``converged=False``; with
    ``strict=True`` a :class:`ConvergenceError` is raised instead.
    """
    if not 1e-14 <= rel_tol <= 1e-3:
        raise DomainError(f"rel_tol={rel_tol} outside [1e-14, 1e-3]")
    if not scale > 0:
        raise DomainError("scale must be positive")
    pts = [float(start)] + sorted(float(b) for b in breakpoints if b > start)

    segs = [("ts", pts[i], pts[i + 1]) for i in range(len(pts) - 1)
            if pts[i + 1] > pts[i]]
    segs.append(("es", pts[-1], scale))

    total = None
    mag = None
    prev = None
    nevals = 0
    err = None
    for level in range(max_level + 1):
        new = 0.0
        newmag = 0.0
        for kind, a, b in segs:
            if kind == "ts":
                s, h = _level_params(level, -_TS_SMAX, _TS_SMAX)
                t, w = _tanh_sinh_nodes(a, b, s)
                keep = (t > a) & (t < b)
            else:
                s, h = _level_params(level, _ES_SMIN, _ES_SMAX)
                t, w = _exp_sinh_nodes(a, b, s)
                keep = t > a
            t, w = t[keep], w[keep]
            if t.size == 0:
                continue
            y = np.asarray(f(t))
            nevals += t.size
            if not np.all(np.isfinite(y)):
                raise ConvergenceError("integrand returned a non-finite value")
            if y.ndim == 1:
                terms = w * y
            else:
                terms = w[:, None] * y
            new = new + terms.sum(axis=0)
            newmag = newmag + np.abs(terms).sum(axis=0)
        h = 2.0 ** (-level)
        if total is None:
            acc, accmag = new, newmag
        else:
            acc, accmag = acc + new, accmag + newmag
        total = h * acc
        mag = h * accmag
        if prev is not None:
            err = np.abs(total - prev)
            floor = 8 * _EPS * mag
            err = np.maximum(err, floor)
            if np.all(err <= np.maximum(rel_tol * np.abs(total), abs_tol)) and level >= 3:
                return QuadratureResult(_squeeze(total), _squeeze(err), nevals, True)
        prev = total
    if strict:
        raise ConvergenceError(
            f"quadrature did not reach rel_tol={rel_tol} (estimate {np.max(err):.3g})")
    return QuadratureResult(_squeeze(total), _squeeze(err), nevals, False)


def _squeeze(x):
    x = np.asarray(x)
    if x.ndim == 0:
        return x.item()
    return x


# --- modified Bessel function K ------------------------------------------


def _k_integral(nu, t, derivative):
    """Log-scaled trapezoid rule for the cosh integral of K_nu(t).

    Returns (m, L) with K_nu(t) = m * exp(L) (or K'_nu(t) if derivative).
    The integrand exp(-t cosh u) cosh(nu u) is smooth and even in u, so the
    trapezoid rule on the half line converges geometrically in the step.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(t > 0)):
        raise DomainError("bessel K requires t > 0")
    nu = complex(nu)
    nr = abs(nu.real) + (1.0 if derivative else 0.0)
    # peak of -t cosh u + nr u
    ustar = np.arcsinh(nr / t)
    peak = -t * np.cosh(ustar) + nr * ustar
    sigma = 1.0 / np.sqrt(t * np.cosh(ustar))
    # upper limit: exponent has dropped by 40 below the peak
    lo = ustar.copy()
    hi = ustar + 1.0
    g = lambda u: -t * np.cosh(u) + nr * u - peak + 40.0
    while np.any(g(hi) > 0):
        hi = np.where(g(hi) > 0, hi + 2 * (hi - ustar) + 1, hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        pos = g(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    U = hi
    hmax = math.pi ** 2 / (40.0 + 2.0 * abs(nu) + 2.0 * nr)
    h = np.minimum(0.5 * sigma, hmax)
    n = np.ceil(U / h).astype(int)
    nmax = int(n.max())
    h = U / n
    k = np.arange(nmax + 1)
    u = k[None, :] * h[:, None]
    valid = k[None, :] <= n[:, None]
    base = -t[:, None] * np.cosh(u) - peak[:, None]
    e1 = np.exp(base + nu * u)
    e2 = np.exp(base - nu * u)
    vals = 0.5 * (e1 + e2)
    if derivative:
        vals = -vals * np.cosh(u)
    vals = np.where(valid, vals, 0.0)
    vals[:, 0] *= 0.5
    m = h * vals.sum(axis=1)
    return m, peak


def bessel_K_scaled(nu, t, derivative=False):
    """Return ``(m, L)`` with ``K_nu(t) = m * exp(L)`` (arrays over ``t``).

    Use this inside integrands that multiply K by large or small powers of
    t, where the plain value would overflow or underflow.
    """
    return _k_integral(nu, t, derivative)


def _out(m, L, t):
    v = m * np.exp(L)
    if np.ndim(t) == 0:
        return complex(v[0])
    return v


def bessel_K(nu, t):
    """Modified Bessel function K_nu(t) for complex order and t > 0."""
    m, L = _k_integral(nu, t, False)
    return _out(m, L, t)


def bessel_K_prime(nu, t):
    """Derivative of K_nu at t > 0, equal to -(K_{nu-1}(t) + K_{nu+1}(t))/2."""
    m, L = _k_integral(nu, t, True)
    return _out(m, L, t)


# --- gamma function -------------------------------------------------------


def _is_pole(w):
    w = complex(w)
    return w.imag == 0 and w.real <= 0 and w.real == math.floor(w.real)


def log_gamma(w):
    """Principal branch of log Gamma(w) for complex w."""
    if _is_pole(w):
        raise PoleError(f"Gamma has a pole at {w}")
    return complex(special.loggamma(complex(w)))


def rgamma(w):
    """1/Gamma(w); entire, zero at the poles of Gamma."""
    return complex(special.rgamma(complex(w)))
