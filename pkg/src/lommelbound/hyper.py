"""Re-expansion of the Lommel remainders in basic terminants.

    R_N(z) = (-1)^N C z^(-2N) (sum_{m<M} a_m(nu) Gamma(q_m) Pi_{q_m}(z) + R_{N,M}(z))

with C = 2^(mu+1/2) sqrt(pi) / (Gamma((1-mu+nu)/2) Gamma((1-mu-nu)/2)) and
q_m = 2N - m - mu + 1/2.  The derivative version carries (-1)^(N+1), the
coefficients b_m(nu) of -K'_nu and q_m = 2N - m - mu + 3/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .coefficients import OrderPair, besselK_a, besselK_b
from .errors import ConvergenceError, InapplicableError, InvariantViolation, PreconditionError
from .lommel import (_LOG_T_SMALL, _log_K_near_zero, CertifiedValue, TruncationScheme, as_pair, auto_N, partial_sum_S,
                     partial_sum_S_prime, _check_z, _round_half_down)
from .numerics import bessel_K_scaled, integrate_semi_infinite, log_gamma
from .terminant import terminant_eval

__all__ = [
    "ReexpansionResult",
    "reexpand_remainder",
    "reexpand_bound",
    "besselK_remainder_oracle",
    "oracle_reexpansion_tail",
    "theta_reexpansion",
    "optimal_truncation",
    "certified_eval_hyper",
]

_PI = math.pi
_SLACK = 1e-8


@dataclass(frozen=True)
class ReexpansionResult:
    """``remainder_approx`` approximates R_N (or R'_N).  ``tail_bound`` bounds
    |R_N - remainder_approx|; ``raw_bound`` bounds |R_{N,M}| itself."""

    remainder_approx: complex
    tail_bound: float
    terms_used: int
    raw_bound: float = 0.0


def _which(which):
    if which not in ("S", "S'"):
        raise ValueError("which must be 'S' or \"S'\"")
    return 0.5 if which == "S" else 1.5


def _require_reexp(pair, N, M, which):
    if which == "S'" and M < 1:
        raise PreconditionError("M >= 1 required")
    half = _which(which)
    if not pair.mu.real < 2 * N - M + half:
        raise PreconditionError(f"Re(mu) < 2N - M + {half:g} fails")
    lim = M + 0.5 if which == "S" else M - 0.5
    if not abs(pair.nu.real) < lim:
        raise PreconditionError(f"|Re(nu)| < {lim:g} fails")


def _check_sector(theta):
    if abs(theta) > _PI / 2:
        raise PreconditionError("|arg z| <= pi/2 required")


def _cos_pi(nu):
    """cos(pi nu), exactly zero at half-integers."""
    nu = complex(nu)
    if nu.imag == 0 and (2 * nu.real) % 2 == 1:
        return 0j
    return complex(np.cos(_PI * nu))


def _bessel_coef(m, nu, which):
    return besselK_a(m, nu) if which == "S" else besselK_b(m, nu)


def _prefactor(z, pair, N, which):
    sign = (-1) ** N if which == "S" else (-1) ** (N + 1)
    return (sign * 2 ** (pair.mu + 0.5) * math.sqrt(_PI) * pair.inv_gamma_product()
            * np.exp(-2 * N * np.log(z)))


def _gamma_pi(q, z):
    """Gamma(q) Pi_q(z)."""
    return np.exp(log_gamma(q)) * terminant_eval(q, z)


def _coef_kernel_bound(nu, M, which):
    """|cos(pi nu)| / |cos(pi Re nu)| * |a_M(Re nu)| (or b_M), written through
    gamma functions so that half-integer Re(nu) needs no limit."""
    x = complex(nu).real
    c = abs(_cos_pi(nu))
    if c == 0:
        return 0.0
    den = math.log(_PI) + M * math.log(2) + special.gammaln(M + 1)
    if which == "S":
        return c * math.exp(special.gammaln(M + 0.5 + x) + special.gammaln(M + 0.5 - x) - den)
    t1 = math.exp(special.gammaln(M - 0.5 + x) + special.gammaln(M + 1.5 - x) - den)
    t2 = math.exp(special.gammaln(M + 1.5 + x) + special.gammaln(M - 0.5 - x) - den)
    return c * (t1 + t2) / 2


def _stieltjes_weight(nu, M, deriv):
    """tau^(M-1/2) e^(-tau) K_nu(tau) (or -K'_nu) after tau = s^k.

    Near 0 the weight behaves like tau^(q-1), q = M + 1/2 - |Re nu| - deriv;
    k = 1/q (when q < 1) makes the s-integrand bounded there.  Returns
    (g, k, scale) with g(s) -> (tau, weight * dtau/ds).
    """
    q = min(1.0, M + 0.5 - abs(nu.real) - (1 if deriv else 0))
    k = 1 / q
    log_tmax = math.log(max(60.0, 3 * M + 60))

    def g(s):
        ls = np.log(s)
        lt = k * ls
        out = np.zeros(s.shape, dtype=complex)
        tiny = lt < _LOG_T_SMALL
        if tiny.any():
            lK = _log_K_near_zero(nu, lt[tiny], deriv)
            out[tiny] = np.exp((M - 0.5) * lt[tiny] + lK + (k - 1) * ls[tiny] - math.log(q))
        live = (lt < log_tmax) & ~tiny
        t = np.exp(lt[live])
        m, L = bessel_K_scaled(nu, t, deriv)
        out[live] = m * np.exp((M - 0.5) * lt[live] - t + L + (k - 1) * ls[live] - math.log(q))
        return np.exp(np.minimum(lt, log_tmax)), out  # weight is 0 past the cutoff

    return g, max(1.0, M / 2) ** q


def besselK_remainder_oracle(x, nu, M, which="K", rel_tol=1e-11):
    """R_M^{(K)}(x, nu) (or R_M^{(K')}) by quadrature, for x > 0.

    Defined through K_nu(x) = sqrt(pi/(2x)) e^(-x) (sum_{m<M} a_m(nu)/x^m + R_M)
    and -K'_nu(x) = sqrt(pi/(2x)) e^(-x) (sum_{m<M} b_m(nu)/x^m + R_M).
    """
    if not x > 0:
        raise PreconditionError("x > 0 required")
    nu = complex(nu)
    if which == "K":
        if not abs(nu.real) < M + 0.5:
            raise PreconditionError("|Re(nu)| < M + 1/2 fails")
    elif which == "K'":
        if M < 1 or not abs(nu.real) < M - 0.5:
            raise PreconditionError("M >= 1 and |Re(nu)| < M - 1/2 required")
    else:
        raise ValueError("which must be 'K' or \"K'\"")
    c = _cos_pi(nu)
    if c == 0:
        return 0.0
    g, scale = _stieltjes_weight(nu, M, which == "K'")

    def f(s):
        t, w = g(s)
        return w / (1 + t / x)

    res = integrate_semi_infinite(f, rel_tol, scale=scale, strict=True)
    val = ((-1) ** M * math.sqrt(2 / _PI) * c / _PI * res.value
           * math.exp(-M * math.log(x)))
    val = complex(val)
    return val.real if nu.imag == 0 else val


def reexpand_bound(z, pair, N, M, which="S", kernel="auto"):
    """Bound for |R_{N,M}| (or |R'_{N,M}|) on |arg z| <= pi/2.

    The factor |z|^M |R_M^{(K)}(|z|, nu)| is taken from quadrature
    (``kernel="quad"``), from the coefficient bound (``"coef"``), or as the
    smaller of the two (``"auto"``, quadrature only for |z| <= 200).
    """
    z, theta = _check_z(z)
    pair = as_pair(pair)
    _check_sector(theta)
    _require_reexp(pair, N, M, which)
    half = _which(which)
    nu = pair.nu
    r = abs(z)
    coef = _coef_kernel_bound(nu, M, which)
    if kernel == "coef" or (kernel == "auto" and r > 200):
        kb = coef
    elif kernel in ("quad", "auto"):
        kq = abs(besselK_remainder_oracle(r, nu, M, "K" if which == "S" else "K'"))
        kq *= math.exp(M * math.log(r))
        kb = kq if kernel == "quad" else min(kq, coef)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    q = 2 * N - M - pair.mu + half
    first = kb * abs(_gamma_pi(q, z)) if kb else 0.0
    second = coef * math.exp(special.gammaln(q.real))
    return first + second


def reexpand_remainder(z, pair, N, M, which="S", kernel="auto"):
    """Approximate R_N (or R'_N) by the first M re-expansion terms."""
    z, theta = _check_z(z)
    pair = as_pair(pair)
    _check_sector(theta)
    _require_reexp(pair, N, M, which)
    half = _which(which)
    pre = _prefactor(z, pair, N, which)
    raw = reexpand_bound(z, pair, N, M, which, kernel)
    if pre == 0:
        return ReexpansionResult(0j, 0.0, M, raw)
    total = 0j
    for m in range(M):
        c = _bessel_coef(m, pair.nu, which)
        if c != 0:
            total += c * _gamma_pi(2 * N - m - pair.mu + half, z)
    return ReexpansionResult(complex(pre * total), abs(pre) * raw, M, raw)


def _inner_ray_angle(theta):
    # Keep the t-ray at least pi/8 away from the pole at t = -iz (or iz).
    return math.copysign(max(0.0, abs(theta) - 3 * _PI / 8), theta)


def oracle_reexpansion_tail(z, pair, N, M, which="S", rel_tol=1e-10):
    """R_{N,M} (or R'_{N,M}) by a double integral.

    The Bessel remainder is replaced by its Stieltjes-type integral over
    tau^(M-1/2) e^(-tau) K_nu(tau), which avoids the cancellation in
    K_nu - partial sum.  The inner t-integral runs along a ray turned by
    max(0, |arg z| - 3pi/8) so that |arg z| = pi/2 is reachable.
    """
    z, theta = _check_z(z)
    pair = as_pair(pair)
    _check_sector(theta)
    _require_reexp(pair, N, M, which)
    c = _cos_pi(pair.nu)
    if c == 0:
        return 0j
    deriv = which == "S'"
    e = 2 * N - M - pair.mu - 0.5 + (1 if deriv else 0)
    phi = _inner_ray_angle(theta)
    rot = complex(math.cos(phi), math.sin(phi))
    inner_tol = min(rel_tol * 1e-2, 1e-12)

    g, scale = _stieltjes_weight(pair.nu, M, deriv)

    def outer(s):
        tau, w = g(s)

        def inner(s):
            t = s[:, None] * rot
            lt = np.log(s)[:, None] + 1j * phi
            x = t / z
            return (np.exp(e * lt - t) * rot
                    / ((1 + x * x) * (1 + tau[None, :] / t)))

        res = integrate_semi_infinite(inner, max(inner_tol, 1e-14),
                                      scale=max(1.0, e.real) / math.cos(phi))
        if not res.converged:
            raise ConvergenceError("inner quadrature did not converge")
        return w * np.atleast_1d(res.value)

    res = integrate_semi_infinite(outer, rel_tol, scale=scale)
    if not res.converged:
        raise ConvergenceError("outer quadrature did not converge")
    val = (-1) ** M * math.sqrt(2 / _PI) * c / _PI * res.value
    return complex(val)


def theta_reexpansion(z, pair, N, M, which="S", rel_tol=1e-10):
    """R_{N,M} / (coef_M(nu) Gamma(q_M) Pi_{q_M}(z)) for z > 0 and real mu, nu;
    lies in (0, 1)."""
    z = complex(z)
    if not (z.imag == 0 and z.real > 0):
        raise PreconditionError("z must be positive")
    pair = as_pair(pair)
    if not pair.is_real:
        raise PreconditionError("real mu and nu required")
    _require_reexp(pair, N, M, which)
    c = _bessel_coef(M, pair.nu, which)
    if c == 0:
        raise PreconditionError("first omitted coefficient vanishes")
    q = 2 * N - M - pair.mu + _which(which)
    R = oracle_reexpansion_tail(z, pair, N, M, which, rel_tol)
    th = (R / (c * _gamma_pi(q, z))).real
    if not -_SLACK < th < 1 + _SLACK:
        raise InvariantViolation(f"ratio {th!r} outside (0, 1)")
    return th


def optimal_truncation(abs_z, pair, mode="plain", rho=0.0, sigma=0.0):
    """N near |z|/2 (plain) or (N, M) near (3|z|/2, 2|z|) (hyper).

    Rounding is to the nearest integer with ties going down; the result is
    then raised into the range where the remainder bounds hold.
    """
    if not abs_z > 0:
        raise PreconditionError("|z| > 0 required")
    pair = as_pair(pair)
    if mode == "plain":
        return TruncationScheme(auto_N(abs_z, pair))
    if mode != "hyper":
        raise ValueError(f"unknown mode {mode!r}")
    M = max(_round_half_down(2 * abs_z + sigma), math.floor(abs(pair.nu.real) - 0.5) + 1, 0)
    n_min = math.floor((pair.mu.real + M - 0.5) / 2) + 1
    N = max(_round_half_down(1.5 * abs_z + rho), n_min, 1)
    if M > max(1.0, 4 * abs_z) or N > max(1.0, 3 * abs_z):
        raise InapplicableError("re-expansion inapplicable: orders too large for |z|")
    return TruncationScheme(N, M)


def certified_eval_hyper(z, pair, N=None, M=None, which="S"):
    """Partial sum plus re-expanded remainder, with a bound from the tail."""
    z, theta = _check_z(z)
    pair = as_pair(pair)
    if N is None or M is None:
        sch = optimal_truncation(abs(z), pair, "hyper")
        N = sch.N if N is None else N
        M = sch.M if M is None else M
    res = reexpand_remainder(z, pair, N, M, which)
    shift = 1 if which == "S" else 2
    scale = np.exp((pair.mu - shift) * np.log(z))
    base = partial_sum_S(z, pair, N) if which == "S" else partial_sum_S_prime(z, pair, N)
    nxt = _bessel_coef(M, pair.nu, which)
    q = 2 * N - M - pair.mu + _which(which)
    omitted = abs(_prefactor(z, pair, N, which) * nxt * _gamma_pi(q, z)) if nxt != 0 else 0.0
    return CertifiedValue(complex(base + scale * res.remainder_approx),
                          res.tail_bound * abs(scale), omitted, "reexpansion",
                          TruncationScheme(N, M), res.tail_bound,
                          {"reexpansion": res.tail_bound})
