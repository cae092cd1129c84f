"""Coefficient families of the Lommel, Bessel K and Anger-Weber expansions,
the regularized Gauss function on the negative axis, and quadrature
representations of the Lommel coefficients used as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, PreconditionError
from .numerics import integrate_semi_infinite, log_gamma, rgamma

__all__ = [
    "OrderPair",
    "lommel_a",
    "lommel_b",
    "besselK_a",
    "besselK_b",
    "anger_F",
    "anger_G",
    "reg_hyp_F",
    "hyp_F_half",
    "coeff_integral_check_a",
    "coeff_integral_check_b",
]


@dataclass(frozen=True)
class OrderPair:
    """Parameters (mu, nu) of S_{mu,nu}."""

    mu: complex
    nu: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))

    @property
    def is_real(self):
        return self.mu.imag == 0 and self.nu.imag == 0

    def lommel_valid(self, N):
        return self.mu.real + abs(self.nu.real) < 2 * N + 1

    def reexp_valid(self, N, M, which="S"):
        if which == "S":
            return self.mu.real < 2 * N - M + 0.5 and abs(self.nu.real) < M + 0.5
        return M >= 1 and self.mu.real < 2 * N - M + 1.5 and abs(self.nu.real) < M - 0.5

    def require_lommel(self, N):
        if not self.lommel_valid(N):
            raise PreconditionError(
                f"Re(mu)+|Re(nu)| < 2N+1 fails: {self.mu.real + abs(self.nu.real):g} >= {2 * N + 1}")

    def gamma_args(self):
        """((-mu+nu+1)/2, (-mu-nu+1)/2)."""
        return (-self.mu + self.nu + 1) / 2, (-self.mu - self.nu + 1) / 2

    def inv_gamma_product(self):
        """1/(Gamma((-mu+nu+1)/2) Gamma((-mu-nu+1)/2)); zero in the terminating case."""
        a1, a2 = self.gamma_args()
        return rgamma(a1) * rgamma(a2)

    def terminates(self):
        return self.inv_gamma_product() == 0


def lommel_a(n, mu, nu):
    """a_n(mu, nu) = prod_{k=1}^n ((mu + 2k - 1)^2 - nu^2)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    mu, nu = complex(mu), complex(nu)
    p = 1 + 0j
    for k in range(1, n + 1):
        p *= (mu + 2 * k - 1) ** 2 - nu * nu
    return p


def lommel_b(n, mu, nu):
    """b_n(mu, nu) = -a_n(mu, nu) (mu + 2n + 1)."""
    return -lommel_a(n, mu, nu) * (complex(mu) + 2 * n + 1)


def besselK_a(m, nu):
    """Coefficient a_m(nu) of the large-argument expansion of K_nu."""
    if m < 0:
        raise ValueError("m must be non-negative")
    nu = complex(nu)
    p = 1 + 0j
    for k in range(1, m + 1):
        p *= (4 * nu * nu - (2 * k - 1) ** 2) / (8 * k)
    return p


def besselK_b(m, nu):
    """Coefficient b_m(nu) of the expansion of -K'_nu, from -2K' = K_{nu-1} + K_{nu+1}."""
    nu = complex(nu)
    return (besselK_a(m, nu - 1) + besselK_a(m, nu + 1)) / 2


def anger_F(n, nu):
    return (-1) ** n * lommel_a(n, 0, nu)


def anger_G(n, nu):
    return (-1) ** n * lommel_a(n, 1, nu)


# --- regularized hypergeometric function on x <= 0 -------------------------

_SERIES_MAX = 2000


def _reg_series(a, b, c, x):
    """sum_n (a)_n (b)_n / n! * x^n / Gamma(c+n) for |x| < 1 (arrays)."""
    x = np.asarray(x, dtype=complex)
    coef = 1 + 0j  # (a)_n (b)_n / n!
    xn = np.ones_like(x)
    total = np.zeros_like(x)
    for n in range(_SERIES_MAX):
        rg = special.rgamma(c + n)
        term = coef * rg * xn
        total = total + term
        if n > 2 and coef != 0:
            ratio = abs((a + n) * (b + n) / ((c + n) * (n + 1)))
            tail = np.abs(term) * np.max(np.abs(x)) * ratio
            if ratio * np.max(np.abs(x)) < 0.999 and np.all(
                    tail <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
                return total
        if coef == 0:
            return total
        coef *= (a + n) * (b + n) / (n + 1)
        xn = xn * x
    raise ConvergenceError("hypergeometric series did not converge")


def _reg_inverse(a, b, c, x):
    """Continuation to x < -2 by the 1/x connection formula.

    Requires b - a away from the integers.
    """
    x = np.asarray(x, dtype=float)
    lx = np.log(-x)
    w = 1.0 / x
    t1 = np.exp(-a * lx) * (rgamma(b) * rgamma(c - a)) * _reg_series(a, a - c + 1, a - b + 1, w)
    t2 = np.exp(-b * lx) * (rgamma(a) * rgamma(c - b)) * _reg_series(b, b - c + 1, b - a + 1, w)
    return math.pi / np.sin(math.pi * (b - a)) * (t1 - t2)


_CIRCLE_K = 32
_CIRCLE_R = 0.1


def _reg_far(a, b, c, x):
    d = b - a
    if abs(d - round(d.real)) > 0.05:
        return _reg_inverse(a, b, c, x)
    # b - a (nearly) an integer: the two terms have cancelling poles.  The
    # function is entire in a, so average over a small circle around it.
    acc = 0
    for k in range(_CIRCLE_K):
        shift = _CIRCLE_R * np.exp(2j * math.pi * k / _CIRCLE_K)
        acc = acc + _reg_inverse(a + shift, b, c, x)
    return acc / _CIRCLE_K


def reg_hyp_F(a, b, c, x):
    """Regularized Gauss function F(a,b;c;x) = 2F1(a,b;c;x)/Gamma(c) for x <= 0.

    Entire in c, so c = 0 and negative integers are allowed.  Accepts a
    scalar or an array of x.
    """
    a, b, c = complex(a), complex(b), complex(c)
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x > 0):
        raise ValueError("reg_hyp_F is implemented for x <= 0 only")
    out = np.empty(x.shape, dtype=complex)
    near = x >= -0.5
    mid = (x < -0.5) & (x >= -2.0)
    far = x < -2.0
    if near.any():
        out[near] = _reg_series(a, b, c, x[near])
    if mid.any():
        xm = x[mid]
        out[mid] = (1 - xm) ** (-a) * _reg_series(a, c - b, c, xm / (xm - 1))
    if far.any():
        out[far] = _reg_far(a, b, c, x[far])
    return complex(out[0]) if scalar else out


def hyp_F_half(nu, s):
    """Closed form of F(nu+1/2, -nu+1/2; 1/2; -s) for s >= 0 (regularized).

    The elementary expression below equals the unregularized Gauss function;
    it is 1 at s = 0, so the regularized value carries the extra 1/sqrt(pi).
    """
    nu = complex(nu)
    s = np.asarray(s, dtype=float)
    r1 = np.sqrt(1 + s)
    r0 = np.sqrt(s)
    # (r1 - r0) = 1/(r1 + r0) avoids cancellation for large s
    up = r1 + r0
    lu = np.log(up)
    val = (np.exp(2 * nu * lu) + np.exp(-2 * nu * lu)) / (2 * r1)
    return val / math.sqrt(math.pi)


# --- integral representations of the coefficients ------------------------


def _prefactor(mu, nu, order, shift):
    pair = OrderPair(mu, nu)
    return (2 ** (pair.mu + shift) * math.sqrt(math.pi)
            * np.exp(log_gamma(order)) * pair.inv_gamma_product())


def coeff_integral_check_a(N, mu, nu, lam, rel_tol=1e-11):
    """a_N(-mu, nu) from its integral over F(nu+1/2, -nu+1/2; lam; -t/2)."""
    pair = OrderPair(mu, nu)
    lam = complex(lam)
    pair.require_lommel(N)
    if not lam.real > 0:
        raise PreconditionError("Re(lambda) > 0 required")
    if not pair.mu.real < 2 * N + lam.real + 0.5:
        raise PreconditionError("Re(mu) < 2N + Re(lambda) + 1/2 fails")
    p = 2 * N - pair.mu + lam + 0.5
    a, b = pair.nu + 0.5, -pair.nu + 0.5

    def f(t):
        return np.exp((lam - 1) * np.log(t) - p * np.log1p(t)) * reg_hyp_F(a, b, lam, -t / 2)

    res = integrate_semi_infinite(f, rel_tol, strict=True)
    return _prefactor(pair.mu, pair.nu, p, 0.5) * res.value


def coeff_integral_check_b(N, mu, nu, lam, rel_tol=1e-11):
    """b_N(-mu, nu) from its integral representation; lam = 0 uses the limiting form."""
    pair = OrderPair(mu, nu)
    lam = complex(lam)
    pair.require_lommel(N)
    nu = pair.nu
    pa = (nu - 0.5, -nu + 1.5)
    pb = (nu + 1.5, -nu - 0.5)
    if lam == 0:
        if not pair.mu.real < 2 * N + 1.5:
            raise PreconditionError("Re(mu) < 2N + 3/2 fails")
        p = 2 * N - pair.mu + 1.5

        def f(t):
            F = reg_hyp_F(*pa, 0, -t / 2) + reg_hyp_F(*pb, 0, -t / 2)
            return np.exp(-np.log(t) - p * np.log1p(t)) * F

        res = integrate_semi_infinite(f, rel_tol, strict=True)
        return -_prefactor(pair.mu, pair.nu, p, -0.5) * (2 + res.value)
    if not lam.real > 0:
        raise PreconditionError("Re(lambda) > 0 or lambda = 0 required")
    p = 2 * N - pair.mu + lam + 1.5

    def g(t):
        F = reg_hyp_F(*pa, lam, -t / 2) + reg_hyp_F(*pb, lam, -t / 2)
        return np.exp((lam - 1) * np.log(t) - p * np.log1p(t)) * F

    res = integrate_semi_infinite(g, rel_tol, strict=True)
    return -_prefactor(pair.mu, pair.nu, p, -0.5) * res.value
