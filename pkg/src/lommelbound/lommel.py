"""Large-argument expansions of the Lommel function S_{mu,nu}(z) and of its
derivative, with rigorous bounds for the normalized remainders

    S(z)  = z^(mu-1) (sum_{n<N} (-1)^n a_n(-mu,nu) / z^(2n) + R_N(z))
    S'(z) = z^(mu-2) (sum_{n<N} (-1)^n b_n(-mu,nu) / z^(2n) + R'_N(z))

and quadrature oracles for R_N and R'_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .coefficients import OrderPair, hyp_F_half, lommel_a, lommel_b
from .errors import (ConvergenceError, DomainError, InapplicableError,
                     InvariantViolation, PreconditionError)
from .numerics import bessel_K_scaled, integrate_semi_infinite, log_gamma
from .terminant import chi, terminant_ray, terminant_sup_bound

__all__ = [
    "TruncationScheme",
    "CertifiedValue",
    "as_pair",
    "first_omitted",
    "partial_sum_S",
    "partial_sum_S_prime",
    "remainder_bound_real",
    "remainder_bound_combined_real",
    "remainder_bound_complex",
    "remainder_bound_complex_combined",
    "bound_candidates",
    "pick_bound",
    "oracle_remainder_S",
    "oracle_remainder_S_prime",
    "sign_magnitude_theta",
    "auto_N",
    "certified_eval_S",
    "certified_eval_S_prime",
]

_PI = math.pi
DEFAULT_QUAD_TOL = 1e-10
LAMBDA_GRID = (0.25, 0.5, 1.0)


@dataclass(frozen=True)
class TruncationScheme:
    """Truncation indices; ``None`` means chosen automatically."""

    N: int | None
    M: int | None = None
    lam: float | None = None

    def __post_init__(self):
        if any(x is not None and x < 0 for x in (self.N, self.M)):
            raise DomainError("truncation indices must be non-negative")


@dataclass(frozen=True)
class CertifiedValue:
    """A truncated expansion together with a bound on its error.

    ``abs_bound`` bounds |true - approx| for the function itself;
    ``normalized_bound`` bounds the normalized remainder R_N.
    """

    approx: complex
    abs_bound: float
    first_omitted: float
    bound_tag: str
    scheme: TruncationScheme
    normalized_bound: float = 0.0
    candidates: dict = field(default_factory=dict, compare=False)


def as_pair(pair, nu=None):
    if isinstance(pair, OrderPair):
        return pair
    if nu is not None:
        return OrderPair(pair, nu)
    return OrderPair(*pair)


def _check_z(z):
    z = complex(z)
    if z == 0:
        raise DomainError("z must be non-zero")
    theta = math.atan2(z.imag, z.real)
    if not abs(theta) < _PI:
        raise DomainError("|arg z| < pi required")
    return z, theta


def _coef(which, N, pair):
    if which == "S":
        return lommel_a(N, -pair.mu, pair.nu)
    if which == "S'":
        return lommel_b(N, -pair.mu, pair.nu)
    raise ValueError(f"which must be 'S' or \"S'\", got {which!r}")


def first_omitted(z, pair, N, which="S"):
    """|a_N(-mu,nu)| / |z|^(2N) (or the b_N analogue)."""
    z, _ = _check_z(z)
    pair = as_pair(pair)
    c = abs(_coef(which, N, pair))
    if c == 0:
        return 0.0
    return math.exp(math.log(c) - 2 * N * math.log(abs(z)))


def _partial(z, pair, N, which):
    z, _ = _check_z(z)
    pair = as_pair(pair)
    if N < 0:
        raise DomainError("N must be non-negative")
    z2 = z * z
    total = 0j
    for n in range(N):
        total += (-1) ** n * _coef(which, n, pair) / z2 ** n
    shift = 1 if which == "S" else 2
    return np.exp((pair.mu - shift) * np.log(z)) * total


def partial_sum_S(z, pair, N):
    """z^(mu-1) sum_{n<N} (-1)^n a_n(-mu,nu) / z^(2n)."""
    return complex(_partial(z, pair, N, "S"))


def partial_sum_S_prime(z, pair, N):
    """z^(mu-2) sum_{n<N} (-1)^n b_n(-mu,nu) / z^(2n)."""
    return complex(_partial(z, pair, N, "S'"))


# --- bounds ---------------------------------------------------------------


def _require_real(pair):
    if not pair.is_real:
        raise PreconditionError("real mu and nu required")


def _lambda_choices(pair, N, lam):
    mu, nu = pair.mu.real, pair.nu.real
    lam_min = max(0.0, 0.5 - abs(nu))
    grid = [lam] if lam is not None else sorted({lam_min, *LAMBDA_GRID})
    ok = [x for x in grid if x >= lam_min and mu < 2 * N + x + 0.5]
    if not ok:
        if lam is not None and lam < lam_min:
            raise PreconditionError(f"lambda >= max(0, 1/2 - |nu|) = {lam_min:g} fails")
        raise PreconditionError("mu < 2N + lambda + 1/2 fails for every admissible lambda")
    return ok


def _real_bound(z, pair, N, lam, which):
    z, theta = _check_z(z)
    pair = as_pair(pair)
    _require_real(pair)
    pair.require_lommel(N)
    fo = first_omitted(z, pair, N, which)
    mu = pair.mu.real
    if which == "S'":
        tb = terminant_sup_bound(2 * N - mu + 1.5, theta)
        return fo * tb.value, tb.proposition_used, None
    best = (math.inf, None, None)
    for x in _lambda_choices(pair, N, lam):
        tb = terminant_sup_bound(2 * N - mu + x + 0.5, theta)
        if fo * tb.value < best[0]:
            best = (fo * tb.value, tb.proposition_used, x)
    return best


def remainder_bound_real(z, pair, N, lam=None, which="S"):
    """Bound for |R_N| (or |R'_N|) with real mu, nu, valid for |arg z| < pi.

    ``|coef_N| / |z|^(2N) * sup_{r>=1} |Pi_p(zr)|`` with p = 2N - mu + lam + 1/2
    for S and p = 2N - mu + 3/2 for S'.  With ``lam=None`` the smallest value
    over a grid of admissible lambda is returned.
    """
    return _real_bound(z, pair, N, lam, which)[0]


def remainder_bound_combined_real(z, pair, N):
    """Closed-form bound for |R_N| with real mu, nu (piecewise in arg z)."""
    z, theta = _check_z(z)
    pair = as_pair(pair)
    _require_real(pair)
    pair.require_lommel(N)
    fo = first_omitted(z, pair, N, "S")
    p = 2 * N - pair.mu.real + 1
    at = abs(theta)
    if at <= _PI / 4:
        factor = 1.0
    elif at <= _PI / 2:
        s2 = abs(math.sin(2 * theta))
        csc = 1 / s2 if s2 > 0 else math.inf
        factor = min(csc, 1 + chi(p) / 2)
    else:
        factor = math.sqrt(2 * _PI * p) / (2 * abs(math.sin(theta)) ** p) + 1 + chi(p) / 2
    return fo * factor


def _log_abs_gamma_ratio_coef(pair, N, which):
    """log of |Gamma(a1r) Gamma(a2r) coef_N(-Re mu, Re nu)| computed without
    the (possibly infinite) Gamma(a1r), Gamma(a2r).

    Gamma(a) a_N-type products collapse to 4^N Gamma(a1r+N) Gamma(a2r+N).
    """
    mr, nr = pair.mu.real, pair.nu.real
    a1r = (-mr + nr + 1) / 2 + N
    a2r = (-mr - nr + 1) / 2 + N
    val = N * math.log(4) + special.gammaln(a1r) + special.gammaln(a2r)
    if which == "S'":
        val += math.log(abs(2 * N + 1 - mr))
    return val


def remainder_bound_complex(z, pair, N, which="S", cos_ratio=False):
    """Bound for |R_N| (or |R'_N|) with complex mu, nu, valid for |arg z| < pi.

    The gamma-function prefactor is evaluated in log space.  When
    Re(mu) +- Re(nu) is a positive odd integer the ratio
    Gamma(a_r)/Gamma(a) * a_N(-Re mu, Re nu) is taken as its finite limit by
    cancelling the pole against the vanishing coefficient.  With
    ``cos_ratio=True`` the cheaper cosine over-estimate of the gamma ratio
    is used instead.
    """
    z, theta = _check_z(z)
    pair = as_pair(pair)
    pair.require_lommel(N)
    mu = pair.mu
    shift = 1 if which == "S" else 2
    if which not in ("S", "S'"):
        raise ValueError("which must be 'S' or \"S'\"")
    p = 2 * N - mu + shift
    tb = terminant_sup_bound(p, theta)
    lg = (log_gamma(p) - log_gamma(p.real)).real - 2 * N * math.log(abs(z))
    if cos_ratio:
        num = abs(np.cos(_PI * mu) + np.cos(_PI * pair.nu))
        den = abs(math.cos(_PI * mu.real) + math.cos(_PI * pair.nu.real))
        coef = abs(_coef(which, N, OrderPair(mu.real, pair.nu.real)))
        if num == 0 or coef == 0:
            return 0.0
        if den == 0:
            return math.inf
        return num / den * coef * math.exp(lg) * tb.value
    rg = abs(pair.inv_gamma_product())
    if rg == 0:
        return 0.0
    return rg * math.exp(lg + _log_abs_gamma_ratio_coef(pair, N, which)) * tb.value


def _complex_combined_parts(z, pair, N):
    z, theta = _check_z(z)
    pair = as_pair(pair)
    pair.require_lommel(N)
    if abs(theta) > _PI / 2:
        raise PreconditionError("|arg z| <= pi/2 required")
    mu, nu = pair.mu, pair.nu
    a1, a2 = pair.gamma_args()
    mr, nr = mu.real, nu.real
    lq = (special.gammaln((-mr + nr + 1) / 2 + N) + special.gammaln((-mr - nr + 1) / 2 + N)
          - (log_gamma(a1 + N) + log_gamma(a2 + N)).real)
    Q = math.exp(lq)
    p = 2 * N - mu + 1
    G = math.exp((log_gamma(p) - log_gamma(p.real)).real)
    fo = first_omitted(z, pair, N, "S")
    at = abs(theta)
    b100 = None
    if at < _PI / 2:
        b100 = Q * fo * (1.0 if at <= _PI / 4 else abs(1 / math.sin(2 * theta)))
    b102 = Q * G * fo * (0.5 + abs(p) / (2 * p.real) * chi(p.real)
                         * max(1.0, math.exp(mu.imag * theta)) + 1 / (2 * G))
    return b100, b102


def remainder_bound_complex_combined(z, pair, N):
    """Closed-form bound for |R_N| with complex mu, nu on |arg z| <= pi/2.

    Minimum of a first-omitted-term bound with a csc factor (|arg z| < pi/2)
    and a chi-based bound that stays finite up to |arg z| = pi/2.
    """
    b100, b102 = _complex_combined_parts(z, pair, N)
    return b102 if b100 is None else min(b100, b102)


def bound_candidates(z, pair, N, which="S"):
    """Every applicable normalized bound for |R_N|, keyed by a descriptive tag."""
    z, theta = _check_z(z)
    pair = as_pair(pair)
    pair.require_lommel(N)
    out = {}
    if pair.is_real:
        try:
            out["real-terminant"] = remainder_bound_real(z, pair, N, which=which)
        except PreconditionError:
            pass
        if which == "S":
            out["real-piecewise"] = remainder_bound_combined_real(z, pair, N)
    out["complex-terminant"] = remainder_bound_complex(z, pair, N, which)
    if which == "S" and abs(theta) <= _PI / 2:
        b100, b102 = _complex_combined_parts(z, pair, N)
        if b100 is not None:
            out["complex-piecewise"] = b100
        out["complex-chi"] = b102
    return out


def pick_bound(cands):
    """Tag of the smallest bound; near-ties go to the earlier candidate."""
    best = min(cands.values())
    return next(k for k, v in cands.items() if v <= best * (1 + 1e-12))


# --- quadrature oracles ---------------------------------------------------


def _quad_tol(rel_tol):
    return DEFAULT_QUAD_TOL if rel_tol is None else rel_tol


_LOG_T_SMALL = math.log(1e-150)


def _log_K_near_zero(nu, lt, derivative):
    """log K_nu(t) (or log K'_nu(t)) from the leading small-t terms, given
    log t; the neglected terms are O(t^2) relative."""
    x = lt - math.log(2)
    if nu == 0:
        if derivative:
            return np.log(-1 + 0j) - lt
        return np.log(-x - np.euler_gamma + 0j)
    nd = nu if nu.real >= 0 else -nu
    integer = nd.imag == 0 and nd.real == round(nd.real)
    # K_nu ~ (Gamma(nu) (t/2)^-nu + Gamma(-nu) (t/2)^nu) / 2
    a1 = log_gamma(nd) - math.log(2) - nd * x
    if derivative:
        a1 = a1 + np.log(-nd + 0j) - lt
    if integer:
        return a1
    a2 = log_gamma(-nd) - math.log(2) + nd * x
    if derivative:
        a2 = a2 + np.log(nd) - lt
    return a1 + np.log1p(np.exp(a2 - a1))


def _bessel_path(z, theta, pair, N, rel_tol, derivative):
    mu, nu = pair.mu, pair.nu
    e = 2 * N - mu + (1 if derivative else 0)
    # t^e K_nu(t) ~ t^(e - |Re nu| - derivative) at 0; t = s^(1/q) makes the
    # endpoint behaviour mild when that exponent is close to -1
    q = min(1.0, e.real - abs(nu.real) - (1 if derivative else 0) + 1)
    k = 1 / q

    # beyond t_max the factor t^e e^-t is below 1e-27 of its peak
    log_tmax = math.log(max(60.0, 3 * e.real + 60))

    def f(s):
        ls = np.log(s)
        out = np.zeros(s.shape, dtype=complex)
        lt = k * ls
        tiny = lt < _LOG_T_SMALL
        if tiny.any():
            lK = _log_K_near_zero(nu, lt[tiny], derivative)
            out[tiny] = np.exp((e * k + k - 1) * ls[tiny] + lK - math.log(q))
        live = (lt < log_tmax) & ~tiny
        ls = ls[live]
        t = np.exp(k * ls)
        m, L = bessel_K_scaled(nu, t, derivative)
        x = t / z
        out[live] = m * np.exp((e * k + k - 1) * ls + L - math.log(q)) / (1 + x * x)
        return out

    bps = [(abs(z) * abs(math.sin(theta))) ** q] if abs(theta) > _PI / 8 else []
    res = integrate_semi_infinite(f, rel_tol, breakpoints=bps, scale=max(1.0, e.real) ** q)
    pre = ((-1) ** N * 2 ** (mu + 1) * pair.inv_gamma_product()
           * np.exp(-2 * N * np.log(z)))
    return res, pre


def _terminant_path(z, theta, pair, N, rel_tol):
    # lambda = 1/2 representation; t = u^2 removes the t^(-1/2) endpoint
    # singularity.  F(nu+1/2, 1/2-nu; 1/2; -t/2) has an elementary closed form.
    mu, nu = pair.mu, pair.nu
    p = 2 * N - mu + 1
    r = abs(z)
    # the integrand decays like t^(-1-d), d = Re p - |Re nu|; t = u^m with
    # m = max(2, 1/d) turns this into u^(-2) or faster
    m = max(2.0, 1 / (p.real - abs(nu.real)))

    nd = nu if nu.real >= 0 else -nu
    # Pi_p(w) = 1 - p(p+1)/w^2 + ..., so Pi = 1 to double precision beyond this
    log_wbig = math.log(1e8 * max(1.0, abs(p)))

    def f(u):
        lu = np.log(u)
        lt = m * lu
        l1 = np.logaddexp(0.0, lt)  # log(1 + t)
        # log of F(nu+1/2, 1/2-nu; 1/2; -t/2), written out from hyp_F_half
        ls = lt - math.log(2)
        lup = np.where(ls < 600, np.arcsinh(np.exp(np.minimum(ls, 600) / 2)),
                       0.5 * math.log(4) + ls / 2)
        lF = (2 * nd * lup + np.log1p(np.exp(-4 * nd * lup)) - math.log(2)
              - 0.5 * np.logaddexp(0.0, ls) - 0.5 * math.log(_PI))
        out = np.exp(math.log(m) + (m / 2 - 1) * lu - p * l1 + lF)
        near = math.log(r) + l1 < log_wbig
        if near.any():
            tr = np.exp(lt[near])
            out[near] *= terminant_ray(p, theta, r * (1 + tr),
                                       rel_tol=max(1e-14, min(rel_tol * 1e-2, 1e-12)))
        return out

    res = integrate_semi_infinite(f, rel_tol, scale=max(1.0, p.real) ** (-1 / m))
    pre = ((-1) ** N * 2 ** (mu + 0.5) * math.sqrt(_PI) * np.exp(log_gamma(p))
           * pair.inv_gamma_product() * np.exp(-2 * N * np.log(z)))
    return res, pre


def _finish(res, pre, full, what):
    if not res.converged:
        raise ConvergenceError(f"{what} quadrature did not converge "
                               f"(estimate {res.err_estimate:.3g})")
    val = complex(pre * res.value)
    if full:
        return val, abs(pre) * res.err_estimate
    return val


def _auto_path(theta):
    return "bessel" if abs(theta) <= 3 * _PI / 8 + 1e-12 else "terminant"


def oracle_remainder_S(z, pair, N, path="auto", rel_tol=None, full=False):
    """R_N(z, mu, nu) by quadrature.

    ``path="bessel"`` integrates t^(2N-mu) K_nu(t) / (1 + (t/z)^2) and needs
    |arg z| < pi/2 - 0.01; ``path="terminant"`` integrates the basic
    terminant against an elementary kernel and covers |arg z| < pi.  With
    ``full=True`` returns (value, absolute error estimate).
    """
    z, theta = _check_z(z)
    pair = as_pair(pair)
    pair.require_lommel(N)
    rel_tol = _quad_tol(rel_tol)
    if pair.terminates():
        return (0j, 0.0) if full else 0j
    if path == "auto":
        path = _auto_path(theta)
    if path == "bessel":
        if not abs(theta) < _PI / 2 - 0.01:
            raise PreconditionError("Bessel-kernel path needs |arg z| < pi/2 - 0.01")
        res, pre = _bessel_path(z, theta, pair, N, rel_tol, False)
    elif path == "terminant":
        res, pre = _terminant_path(z, theta, pair, N, rel_tol)
    else:
        raise ValueError(f"unknown path {path!r}")
    return _finish(res, pre, full, "remainder")


def oracle_remainder_S_prime(z, pair, N, path="auto", rel_tol=None, full=False):
    """R'_N(z, mu, nu) by quadrature.

    ``path="bessel"`` integrates against K'_nu (|arg z| < pi/2 - 0.01);
    ``path="functional"`` combines two remainders of S through
    2R'_N(mu,nu) = (mu+nu-1) R_N(mu-1,nu-1) + (mu-nu-1) R_N(mu-1,nu+1).
    """
    z, theta = _check_z(z)
    pair = as_pair(pair)
    pair.require_lommel(N)
    rel_tol = _quad_tol(rel_tol)
    if pair.terminates():
        return (0j, 0.0) if full else 0j
    if path == "auto":
        path = "bessel" if _auto_path(theta) == "bessel" else "functional"
    if path == "bessel":
        if not abs(theta) < _PI / 2 - 0.01:
            raise PreconditionError("Bessel-kernel path needs |arg z| < pi/2 - 0.01")
        res, pre = _bessel_path(z, theta, pair, N, rel_tol, True)
        return _finish(res, pre, full, "derivative remainder")
    if path != "functional":
        raise ValueError(f"unknown path {path!r}")
    mu, nu = pair.mu, pair.nu
    total, err = 0j, 0.0
    for c, nn in ((mu + nu - 1, nu - 1), (mu - nu - 1, nu + 1)):
        if c == 0:
            continue
        v, e = oracle_remainder_S(z, OrderPair(mu - 1, nn), N, path="terminant"
                                  if abs(theta) > 3 * _PI / 8 else "auto",
                                  rel_tol=rel_tol, full=True)
        total += c * v / 2
        err += abs(c) * e / 2
    return (total, err) if full else total


_SLACK = 1e-8


def sign_magnitude_theta(z, pair, N, which="S", rel_tol=None):
    """R_N / ((-1)^N coef_N / z^(2N)) for z > 0 and real mu, nu; lies in (0, 1)."""
    z = complex(z)
    if not (z.imag == 0 and z.real > 0):
        raise PreconditionError("z must be positive")
    pair = as_pair(pair)
    _require_real(pair)
    pair.require_lommel(N)
    c = _coef(which, N, pair)
    if c == 0:
        raise PreconditionError("first omitted coefficient vanishes (terminating case)")
    oracle = oracle_remainder_S if which == "S" else oracle_remainder_S_prime
    R = oracle(z, pair, N, rel_tol=rel_tol)
    term = (-1) ** N * c / z ** (2 * N)
    th = (R / term).real
    if not -_SLACK < th < 1 + _SLACK:
        raise InvariantViolation(f"ratio {th!r} outside (0, 1)")
    return th


# --- certified evaluation --------------------------------------------------


def _round_half_down(x):
    return math.ceil(x - 0.5)


def auto_N(abs_z, pair):
    """Truncation near the least term: round(|z|/2) (ties down), clipped so
    that Re(mu) + |Re(nu)| < 2N + 1 and N >= 1."""
    pair = as_pair(pair)
    s = pair.mu.real + abs(pair.nu.real)
    n_min = max(1, math.floor((s - 1) / 2) + 1)
    if n_min > max(1.0, abs_z):
        raise InapplicableError(
            f"expansion inapplicable: needs N >= {n_min} but |z| = {abs_z:g}")
    return max(_round_half_down(abs_z / 2), n_min)


def _certified(z, pair, N, which):
    z, theta = _check_z(z)
    pair = as_pair(pair)
    if N is None:
        N = auto_N(abs(z), pair)
    pair.require_lommel(N)
    approx = partial_sum_S(z, pair, N) if which == "S" else partial_sum_S_prime(z, pair, N)
    cands = bound_candidates(z, pair, N, which)
    tag = pick_bound(cands)
    norm = cands[tag]
    shift = 1 if which == "S" else 2
    scale = abs(np.exp((pair.mu - shift) * np.log(z)))
    return CertifiedValue(approx, norm * scale, first_omitted(z, pair, N, which), tag,
                          TruncationScheme(N), norm, cands)


def certified_eval_S(z, pair, N=None):
    """Partial sum of the expansion of S_{mu,nu}(z) with a rigorous error bound."""
    return _certified(z, pair, N, "S")


def certified_eval_S_prime(z, pair, N=None):
    """Partial sum of the expansion of S'_{mu,nu}(z) with a rigorous error bound."""
    return _certified(z, pair, N, "S'")
