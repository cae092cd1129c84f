"""The basic terminant Pi_p(w): evaluation and bounds depending only on
(p, arg w).

    Pi_p(w) = 1/Gamma(p) int_0^inf t^(p-1) e^(-t) / (1 + (t/w)^2) dt

for |arg w| < pi/2, continued to |arg w| < pi by deforming the contour
past the pole at t = -+iw.  The incomplete gamma form is available as an
independent evaluation path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError
from .numerics import integrate_semi_infinite, log_gamma

__all__ = [
    "TerminantQuery",
    "TerminantBound",
    "terminant_eval",
    "terminant_ray",
    "terminant_incgamma",
    "upper_incomplete_gamma",
    "chi",
    "phi_angle",
    "terminant_sup_bound",
    "terminant_bound_candidates",
]

_PI = math.pi
TAG_ORDER = ("P1", "P1-remark", "P2a", "P2b", "P3", "phi-bound", "sec-a", "sec-b")


@dataclass(frozen=True)
class TerminantQuery:
    p: complex
    w: complex

    def __post_init__(self):
        p, w = complex(self.p), complex(self.w)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "w", w)
        _check_p(p)
        if w == 0 or not abs(np.angle(w)) < _PI:
            raise DomainError("need w != 0 and |arg w| < pi")


@dataclass(frozen=True)
class TerminantBound:
    """A bound for |Pi_p(w)| valid for every w on the ray arg w = theta."""

    value: float
    proposition_used: str
    candidates: dict = field(default_factory=dict, compare=False)


def _check_p(p):
    if not complex(p).real > 0:
        raise DomainError(f"Re(p) > 0 required, got p={p}")


def _check_theta(theta):
    if not abs(theta) < _PI:
        raise DomainError(f"|arg w| < pi required, got {theta}")


# --- evaluation -----------------------------------------------------------


_POLE_GAP = math.pi / 12


def _contour(theta):
    """Integration ray angle alpha and whether a pole residue must be added.

    The pole of 1/(1 + (t/w)^2) nearest the positive axis sits at angle
    beta = theta -+ pi/2.  Far from the axis we integrate along the axis
    itself (adding the residue once the pole has crossed it); close to it
    the ray is turned to pass the pole at angle _POLE_GAP on the side
    dictated by continuity in theta.
    """
    sg = (theta > 0) - (theta < 0)
    beta = theta - sg * _PI / 2
    if sg and abs(beta) < _POLE_GAP:
        return beta + sg * _POLE_GAP, False
    return 0.0, abs(theta) > _PI / 2


def _residue_term(p, theta, w):
    # -2 pi i Res / Gamma(p) for theta > pi/2, +2 pi i Res / Gamma(p) below -pi/2
    sg = 1 if theta > 0 else -1
    lw = np.log(np.abs(w))
    logt0 = lw + 1j * (theta - sg * _PI / 2)  # log(-+ i w), principal
    return np.exp(math.log(_PI) + lw + 1j * theta + (p - 1) * logt0
                  + sg * 1j * w - log_gamma(p))


def terminant_ray(p, theta, r, rel_tol=1e-12):
    """Pi_p(r e^{i theta}) for an array of moduli r sharing one argument."""
    p = complex(p)
    _check_p(p)
    _check_theta(theta)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(~(r > 0)):
        raise DomainError("|w| must be positive")
    alpha, residue = _contour(theta)
    rot = complex(math.cos(alpha), math.sin(alpha))
    lead = 1j * p * alpha - log_gamma(p)
    w = r * np.exp(1j * theta)
    # t = u^(1/q) removes the t^(p-1) endpoint singularity when Re p < 1
    q = min(1.0, p.real)
    scale = (max(1.0, abs(p)) / math.cos(alpha)) ** q
    lead = lead - math.log(q)

    def kernel(u):
        s = np.minimum(u ** (1 / q), 1e100)  # e^-s is 0 long before the cap
        x = (s * rot)[:, None] / w[None, :]
        base = np.exp((p - q) / q * np.log(u) - s * rot + lead)
        return base[:, None] / (1 + x * x)

    bps = () if r.size > 1 else (r[0] ** q,)
    res = integrate_semi_infinite(kernel, rel_tol, scale=scale, breakpoints=bps)
    if not res.converged:
        raise ConvergenceError("terminant quadrature did not converge")
    out = np.atleast_1d(res.value)
    if residue:
        out = out + _residue_term(p, theta, w)
    return out


def terminant_eval(q, w=None, method="quad", rel_tol=1e-12):
    """Pi_p(w).  Call as terminant_eval(TerminantQuery(p, w)) or terminant_eval(p, w).

    ``method="quad"`` integrates along the turned ray; ``method="incgamma"``
    uses the incomplete gamma definition.
    """
    if w is not None:
        q = TerminantQuery(q, w)
    if method == "incgamma":
        return terminant_incgamma(q.p, q.w)
    if method != "quad":
        raise ValueError(f"unknown method {method!r}")
    theta = float(np.angle(q.w))
    return complex(terminant_ray(q.p, theta, abs(q.w), rel_tol)[0])


def _gamma_cf(a, x):
    """Legendre continued fraction for Gamma(a, x), modified Lentz."""
    tiny = 1e-300
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, 100000):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < 1e-16:
            return np.exp(a * np.log(x) - x) * h
    raise ConvergenceError("continued fraction for Gamma(a, x) did not converge")


def _lower_gamma_series(a, x):
    """gamma(a, x) = x^a e^-x sum x^n / (a)_{n+1}."""
    term = 1 / a
    total = term
    for n in range(1, 5000):
        term *= x / (a + n)
        total += term
        if abs(term) < 1e-17 * abs(total):
            return np.exp(a * np.log(x) - x) * total
    raise ConvergenceError("series for gamma(a, x) did not converge")


def _lower_gamma_left(a, x):
    """gamma(a, x) = x^a sum (-x)^n / (n! (a+n)); no cancellation when Re x < 0."""
    y = -x
    term = 1 + 0j
    total = 1 / a
    for n in range(1, 5000):
        term *= y / n
        add = term / (a + n)
        total += add
        if abs(add) < 1e-17 * abs(total):
            return np.exp(a * np.log(x)) * total
    raise ConvergenceError("series for gamma(a, x) did not converge")


def _gamma_near_cut(a, x):
    if a.real > 0.5 or abs(a - round(a.real)) > 0.05:
        return np.exp(log_gamma(a)) - _lower_gamma_left(a, x)
    # Gamma(a, x) is entire in a: average over a circle that avoids the poles
    # of Gamma(a) and of the series terms
    k = 32
    acc = 0
    for j in range(k):
        b = a + 0.25 * np.exp(2j * _PI * (j + 0.5) / k)
        acc = acc + np.exp(log_gamma(b)) - _lower_gamma_left(b, x)
    return acc / k


def upper_incomplete_gamma(a, x):
    """Gamma(a, x) on the principal branch |arg x| < pi, complex a."""
    a, x = complex(a), complex(x)
    if x == 0:
        raise DomainError("x must be non-zero")
    # the fraction stalls next to the cut, where the unshifted series has
    # no cancellation; the shift below would lose about |x/a| per step
    near_cut = abs(np.angle(x)) > 0.9 * _PI and abs(x) < 100
    if abs(x) > 4.0 and not near_cut:
        return _gamma_cf(a, x)
    if near_cut:
        return _gamma_near_cut(a, x)
    # shift a to the right half plane, use Gamma(b) - gamma(b, x), then recur
    # down with Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a
    k = 0
    is_int = a.imag == 0 and a.real <= 0 and a.real == math.floor(a.real)
    if is_int:
        k = int(-a.real)
        g = complex(special.exp1(x))  # Gamma(0, x)
        b = 0
    else:
        k = max(0, math.ceil(1 - a.real))
        b = a + k
        g = np.exp(log_gamma(b)) - _lower_gamma_series(b, x)
    lx = np.log(x)
    for j in range(k):
        bb = b - 1 - j if not is_int else -1 - j
        g = (g - np.exp(bb * lx - x)) / bb
    return g


def _gamma_upper_any_branch(a, x, turns):
    """Gamma(a, x e^{2 pi i turns}) with x principal."""
    g = upper_incomplete_gamma(a, x)
    if turns == 0:
        return g
    # Gamma(a, x e^{2 pi i m}) = e^{2 pi i m a} Gamma(a, x) + (1 - e^{2 pi i m a}) Gamma(a),
    # and for m = +-1 the second term is -2 pi i m e^{i pi m a} / Gamma(1 - a),
    # which stays finite when a is a non-positive integer.
    m = turns
    e = np.exp(2j * _PI * m * a)
    corr = -2j * _PI * m * np.exp(1j * _PI * m * a) * special.rgamma(1 - a)
    return e * g + corr


def terminant_incgamma(p, w):
    """Pi_p(w) from its incomplete gamma definition."""
    p, w = complex(p), complex(w)
    TerminantQuery(p, w)
    theta = float(np.angle(w))
    a = 1 - p
    total = 0
    for sgn in (1, -1):
        arg = theta + sgn * _PI / 2
        turns = 0
        if arg > _PI:
            turns = 1
        elif arg <= -_PI:
            turns = -1
        x = abs(w) * np.exp(1j * (arg - 2 * _PI * turns))
        g = _gamma_upper_any_branch(a, x, turns)
        total += np.exp(sgn * 0.5j * _PI * p + sgn * 1j * w) * g
    return complex(0.5 * np.exp(p * np.log(w)) * total)


# --- bounds ---------------------------------------------------------------


def chi(p):
    """chi(p) = sqrt(pi) Gamma(p/2 + 1) / Gamma(p/2 + 1/2)."""
    if not p > 0:
        raise DomainError("chi requires p > 0")
    return math.sqrt(_PI) * math.exp(special.gammaln(p / 2 + 1) - special.gammaln(p / 2 + 0.5))


def _phi_interval(theta):
    if _PI / 4 < theta < _PI / 2:
        return 0.0, theta - _PI / 4
    if _PI / 2 <= theta < 3 * _PI / 4:
        return theta - _PI / 2, theta - _PI / 4
    if 3 * _PI / 4 <= theta < _PI:
        return theta - _PI / 2, _PI / 2
    raise DomainError("phi_angle requires pi/4 < |theta| < pi")


def phi_angle(p, theta):
    """Root of (p+2)cos(2theta-3phi) = (p-2)cos(2theta-phi) in the case interval."""
    if not p > 0:
        raise DomainError("phi_angle requires real p > 0")
    if theta < 0:
        return -phi_angle(p, -theta)
    lo, hi = _phi_interval(theta)
    g = lambda f: (p + 2) * math.cos(2 * theta - 3 * f) - (p - 2) * math.cos(2 * theta - f)
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if glo * ghi > 0:
        raise ConvergenceError(f"no sign change for phi on ({lo}, {hi}) at p={p}, theta={theta}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0 or hi - lo < 1e-16:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _gamma_ratio(p):
    """Gamma(Re p) / |Gamma(p)|."""
    return math.exp(special.gammaln(p.real) - log_gamma(p).real)


def _f87(p_re, theta):
    # Gamma(b+1) F(1/2, b; b+1; x) with regularized F is the plain 2F1
    b = p_re / 2
    x = math.sin(theta) ** 2
    if x >= 1.0:
        return chi(p_re)
    return float(special.hyp2f1(0.5, b, b + 1, x))


def terminant_bound_candidates(p, theta, reflect=True):
    """All applicable bounds for sup |Pi_p(w)| over arg w = theta, keyed by tag."""
    p = complex(p)
    _check_p(p)
    _check_theta(theta)
    pr, pi_ = p.real, p.imag
    at = abs(theta)
    real_p = pi_ == 0
    G = _gamma_ratio(p)
    out = {}
    if at <= _PI / 4:
        out["P1"] = G
    elif at < _PI / 2:
        out["P1"] = G * abs(1 / math.sin(2 * theta))
    if real_p and _PI / 4 < at <= _PI / 2:
        out["P1-remark"] = math.sqrt(math.e / 4 * (pr + 1.5))
    if _PI / 4 < at <= _PI / 2:
        sgn = 1 if theta > 0 else -1
        lead = 0.5 + abs(p) / (2 * pr) * _f87(pr, theta) * max(1.0, math.exp(-pi_ * theta))
        out["P2a"] = lead + 0.5 * max(1.0, math.exp(pi_ * (sgn * _PI / 2 - theta)))
        out["P2b"] = lead + G / 2
    if reflect and _PI / 2 < at < _PI:
        sgn = 1 if theta > 0 else -1
        inner = terminant_sup_bound(p, theta - sgn * _PI, _reflect=False).value
        lead = (math.exp(pi_ * (sgn * _PI / 2 - theta)) * G
                * math.sqrt(2 * _PI * pr) / (2 * abs(math.sin(theta)) ** pr))
        out["P3"] = lead + inner
    if real_p and _PI / 4 < at < _PI:
        phi = phi_angle(pr, theta)
        out["phi-bound"] = abs(1 / math.sin(2 * (theta - phi))) / math.cos(phi) ** pr
    if at < _PI / 2:
        best_a = best_b = math.inf
        for sgn in (1, -1):
            if not 0 <= sgn * theta:
                continue
            sec_term = 0.5 / math.cos(theta) ** pr * max(1.0, math.exp(pi_ * (-sgn * _PI / 2 - theta)))
            best_a = min(best_a, sec_term + 0.5 * max(1.0, math.exp(pi_ * (sgn * _PI / 2 - theta))))
            best_b = min(best_b, sec_term + G / 2)
        out["sec-a"] = best_a
        out["sec-b"] = best_b
    return out


def terminant_sup_bound(p, theta, _reflect=True):
    """Smallest available bound for |Pi_p(r e^{i theta})| uniformly in r > 0."""
    cands = terminant_bound_candidates(p, theta, reflect=_reflect)
    best = min(TAG_ORDER, key=lambda t: (cands.get(t, math.inf), TAG_ORDER.index(t)))
    return TerminantBound(cands[best], best, cands)
