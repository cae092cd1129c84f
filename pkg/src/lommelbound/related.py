"""Certified asymptotic tails for the Anger-Weber, Scorer and Struve
families, obtained by mapping their remainders onto Lommel remainders.

Each function returns the bracketed series of the standard expansion, e.g.
for the Struve function

    H_nu(z) = Y_nu(z) + (z/2)^(nu-1)/pi * (sum_{n<N} G(n+1/2)/(G(nu+1/2-n) (z/2)^(2n)) + R_N)

returns the partial sum in the bracket together with a bound for |R_N|.
Assembling the full function value (with J_nu, Y_nu, I_nu, K_nu) is left
to the caller:

    Anger   J_nu(z) + sin(pi nu)/(pi z) (F - nu G / z)
    Weber   -Y_nu(z) - (1 + cos(pi nu))/(pi z) F - nu (1 - cos(pi nu))/(pi z^2) G
    A_nu    F/(pi z) - nu G/(pi z^2)
    Hi(-z)  (Hi block)/(pi z)          Hi'(-z)  (Hi' block)/(pi z^2)
    Gi(z)   (Gi block)/(pi z)          Gi'(z)   -(Gi' block)/(pi z^2)
    L_nu    I_nu(z) +- 2/(pi i) e^(+-pi i nu) K_nu(z) + (z/2)^(nu-1)/pi (L block)

where F and G are the two blocks returned by :func:`anger_weber_tail`.
For derivatives the blocks carry the factors (2n+1), (2m+2) and
(nu/2 - 1/2 - n) and the prefactors follow by differentiation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coefficients import OrderPair, anger_F, anger_G
from .errors import PoleError, PreconditionError
from .lommel import (CertifiedValue, TruncationScheme, auto_N, bound_candidates, pick_bound,
                     oracle_remainder_S, oracle_remainder_S_prime)
from .numerics import log_gamma, rgamma

__all__ = [
    "FAMILIES",
    "DELTA",
    "RelatedQuery",
    "anger_weber_tail",
    "scorer_tail",
    "struve_tail",
    "related_tail",
    "related_remainder_oracle",
]

FAMILIES = ("AngerJ", "WeberE", "AngerWeberA", "ScorerHi", "ScorerGi", "StruveH", "StruveL")
DELTA = 1e-6
_PI = math.pi


@dataclass(frozen=True)
class RelatedQuery:
    family: str
    z: complex
    nu: complex | None = None
    scheme: TruncationScheme | None = None
    derivative: bool = False
    branch: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "z", complex(self.z))
        if self.z == 0:
            raise PreconditionError("z must be non-zero")
        if self.family.startswith("Scorer"):
            if self.nu is not None:
                raise ValueError("Scorer functions take no order")
        else:
            if self.nu is None:
                raise ValueError(f"{self.family} needs an order nu")
            object.__setattr__(self, "nu", complex(self.nu))
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")


@dataclass(frozen=True)
class _Mapped:
    """R_family = weight * sum_k c_k * R_lommel(z_k, pair)."""

    pair: OrderPair
    points: tuple  # ((c_k, z_k), ...)
    weight: complex
    derivative: bool


def _guard(theta, limit, what):
    if abs(theta) > limit - DELTA:
        raise PreconditionError(f"{what} requires |arg z| <= {limit:.6g} - delta")


def _sector(q):
    th = cmath.phase(q.z)
    fam = q.family
    if fam in ("AngerJ", "WeberE", "AngerWeberA", "StruveH"):
        _guard(th, _PI, fam)
    elif fam == "ScorerHi":
        _guard(th, 2 * _PI / 3, fam)
    elif fam == "ScorerGi":
        _guard(th, _PI / 3, fam)
    elif fam == "StruveL":
        s = q.branch * th
        if not (-_PI / 2 + DELTA <= s <= 3 * _PI / 2 - DELTA):
            raise PreconditionError(
                "StruveL requires -pi/2 + delta <= (branch) arg z <= 3pi/2 - delta")


def _zeta(z):
    return 2 / 3 * z ** 1.5


def _scorer_map(q, rot):
    """Lommel data for the Hi / Hi' remainder at z * e^(i rot)."""
    w = q.z * cmath.exp(1j * rot)
    return _zeta(w)


def _certify(N, series_terms, mapped):
    """Sum the series and bound the remainder through the Lommel bounds."""
    approx = complex(sum(series_terms[:N]))
    which = "S'" if mapped.derivative else "S"
    total = 0.0
    tags = []
    cands_all = {}
    for c, zk in mapped.points:
        cands = bound_candidates(zk, mapped.pair, N, which)
        tag = pick_bound(cands)
        total += abs(c) * cands[tag]
        tags.append(tag)
        for k, v in cands.items():
            cands_all[k] = cands_all.get(k, 0.0) + abs(c) * v
    bound = abs(mapped.weight) * total
    nxt = abs(series_terms[N]) if len(series_terms) > N else 0.0
    tag = tags[0] if len(set(tags)) == 1 else "+".join(tags)
    return CertifiedValue(approx, bound, nxt, tag, TruncationScheme(N), bound,
                          {k: abs(mapped.weight) * v for k, v in cands_all.items()})


def _pick_N(N, z, pair):
    return auto_N(abs(z), pair) if N is None else N


# --- Anger-Weber -----------------------------------------------------------


def _anger_blocks(q):
    nu = q.nu
    z = q.z
    sch = q.scheme
    pF, pG = OrderPair(0, nu), OrderPair(-1, nu)
    N = _pick_N(sch.N if sch else None, z, pF)
    M = _pick_N(sch.M if sch else None, z, pG)
    z2 = z * z
    if q.derivative:
        fF = [(2 * n + 1) * anger_F(n, nu) / z2 ** n for n in range(N + 1)]
        fG = [(2 * m + 2) * anger_G(m, nu) / z2 ** m for m in range(M + 1)]
    else:
        fF = [anger_F(n, nu) / z2 ** n for n in range(N + 1)]
        fG = [anger_G(m, nu) / z2 ** m for m in range(M + 1)]
    w = -1 if q.derivative else 1
    mF = _Mapped(pF, ((1, z),), w, q.derivative)
    mG = _Mapped(pG, ((1, z),), w, q.derivative)
    return (N, fF, mF), (M, fG, mG)


def anger_weber_tail(q):
    """The F- and G-blocks shared by the Anger, Weber and Anger-Weber
    expansions (or their derivatives), each with a certified bound.

    ``q.scheme.N`` truncates the F-block and ``q.scheme.M`` the G-block;
    missing values default to about |z|/2.
    """
    if q.family not in ("AngerJ", "WeberE", "AngerWeberA"):
        raise ValueError("Anger-Weber family expected")
    _sector(q)
    (N, fF, mF), (M, fG, mG) = _anger_blocks(q)
    F = _certify(N, fF, mF)
    G = _certify(M, fG, mG)
    return (F, _with_scheme(G, TruncationScheme(M)))


def _with_scheme(cv, sch):
    return CertifiedValue(cv.approx, cv.abs_bound, cv.first_omitted, cv.bound_tag, sch,
                          cv.normalized_bound, cv.candidates)


# --- Scorer ------------------------------------------------------------------


def _scorer_series(z, N, derivative):
    out = []
    lz3 = 3 * np.log(z)
    for n in range(N + 1):
        lg = math.lgamma(3 * n + 2 if derivative else 3 * n + 1) - math.lgamma(n + 1)
        out.append(complex(np.exp(lg - n * math.log(3) - n * lz3)))
    return out


def _scorer_parts(q):
    pair = OrderPair(-1, 2 / 3) if q.derivative else OrderPair(0, 1 / 3)
    if q.family == "ScorerHi":
        points = ((1, _scorer_map(q, 0.0)),)
        sign = True
    else:
        points = ((0.5, _scorer_map(q, -_PI / 3)), (0.5, _scorer_map(q, _PI / 3)))
        sign = False
    zeta_abs = abs(points[0][1])
    N = q.scheme.N if q.scheme and q.scheme.N is not None else auto_N(zeta_abs, pair)
    terms = _scorer_series(q.z, N, q.derivative)
    if sign:
        terms = [(-1) ** n * t for n, t in enumerate(terms)]
    return N, terms, _Mapped(pair, points, 1, False)


def scorer_tail(q):
    """Bracketed series of Hi(-z), Hi'(-z), Gi(z) or Gi'(z) with its bound.

    The remainders equal Lommel remainders at zeta = (2/3) z^(3/2): for Gi
    the average of the Hi remainders at z e^(-pi i/3) and z e^(pi i/3).
    """
    if q.family not in ("ScorerHi", "ScorerGi"):
        raise ValueError("Scorer family expected")
    _sector(q)
    return _certify(*_scorer_parts(q))


# --- Struve ------------------------------------------------------------------


def _struve_prefactor(nu, derivative):
    w = nu + 0.5
    if w.imag == 0 and w.real <= 0 and w.real == math.floor(w.real):
        raise PoleError(f"Gamma(nu + 1/2) has a pole at nu = {nu}")
    c = np.exp(0.5 * math.log(_PI) - log_gamma(w))
    return c / 2 if derivative else c


def _struve_parts(q):
    nu = q.nu
    pair = OrderPair(nu, nu)
    pre = _struve_prefactor(nu, q.derivative)
    if q.family == "StruveH":
        zs = q.z
        w = pre
        sgn = 1
    else:
        zs = q.z * cmath.exp(-q.branch * 0.5j * _PI)
        w = -pre
        sgn = -1
    N = q.scheme.N if q.scheme and q.scheme.N is not None else auto_N(abs(zs), pair)
    lh = np.log(q.z / 2)
    terms = []
    for n in range(N + 1):
        t = np.exp(math.lgamma(n + 0.5) - 2 * n * lh) * rgamma(nu + 0.5 - n)
        if q.derivative:
            t *= nu / 2 - 0.5 - n
        terms.append(complex((-1) ** (n + 1) * t if sgn < 0 else t))
    return N, terms, _Mapped(pair, ((1, zs),), w, q.derivative)


def struve_tail(q):
    """Bracketed series of the Struve H or modified Struve L expansion
    (or derivative) with its bound.

    For L the branch +1 or -1 selects the sign in e^(+-pi i nu); the
    remainder is minus the H remainder at z e^(-+pi i/2).
    """
    if q.family not in ("StruveH", "StruveL"):
        raise ValueError("Struve family expected")
    _sector(q)
    return _certify(*_struve_parts(q))


def related_tail(q):
    if q.family.startswith("Scorer"):
        return scorer_tail(q)
    if q.family.startswith("Struve"):
        return struve_tail(q)
    return anger_weber_tail(q)


def related_remainder_oracle(q, rel_tol=None):
    """Quadrature value of the remainder(s) belonging to ``q``.

    Returns one complex number, or a pair (F-block, G-block) for the
    Anger-Weber family.
    """
    _sector(q)
    if q.family.startswith("Scorer"):
        N, _, m = _scorer_parts(q)
        return _mapped_value(m, N, rel_tol)
    if q.family.startswith("Struve"):
        N, _, m = _struve_parts(q)
        return _mapped_value(m, N, rel_tol)
    (N, _, mF), (M, _, mG) = _anger_blocks(q)
    return _mapped_value(mF, N, rel_tol), _mapped_value(mG, M, rel_tol)


def _mapped_value(m, N, rel_tol):
    oracle = oracle_remainder_S_prime if m.derivative else oracle_remainder_S
    total = 0j
    for c, zk in m.points:
        total += c * oracle(zk, m.pair, N, rel_tol=rel_tol)
    return complex(m.weight * total)
