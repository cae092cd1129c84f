import cmath
import math

import mpmath as mp
import pytest

from lommelbound import OrderPair
from lommelbound.coefficients import anger_F, anger_G, lommel_a
from lommelbound.errors import PoleError, PreconditionError
from lommelbound.lommel import (TruncationScheme as T, bound_candidates, certified_eval_S,
                                oracle_remainder_S, pick_bound)
from lommelbound.related import (DELTA, RelatedQuery, anger_weber_tail, related_remainder_oracle,
                                 related_tail, scorer_tail, struve_tail)

from mpref import hi_prime
from samples import direct_related_remainder, related_sample

PI = math.pi


def lommel_min(z, pair, N, which="S"):
    c = bound_candidates(z, pair, N, which)
    return c[pick_bound(c)]


def check_against(q, exact):
    """exact is the bracketed series value from mpmath."""
    cv = related_tail(q)
    R = related_remainder_oracle(q)
    exact = complex(exact)
    assert abs(cv.approx + R - exact) <= 1e-9 * abs(exact)
    assert abs(exact - cv.approx) <= cv.abs_bound


# --- mpmath cross-checks ------------------------------------------------------


def test_struve_H_mpmath():
    z, nu = cmath.rect(12, 0.4), 1 / 3
    zz = mp.mpc(z)
    ex = mp.pi * (zz / 2) ** (1 - nu) * (mp.struveh(nu, zz) - mp.bessely(nu, zz))
    check_against(RelatedQuery("StruveH", z, nu, T(5)), ex)
    d = mp.diff(lambda x: mp.struveh(nu, x) - mp.bessely(nu, x), zz)
    check_against(RelatedQuery("StruveH", z, nu, T(5), derivative=True),
                  mp.pi * (zz / 2) ** (2 - nu) * d)


@pytest.mark.parametrize("branch", [1, -1])
def test_struve_L_mpmath(branch):
    z, nu = cmath.rect(12, 0.3 * branch), 0.7 - 0.2j
    zz = mp.mpc(z)

    def g(x):
        return (mp.struvel(nu, x) - mp.besseli(nu, x)
                - branch * 2 / (mp.pi * 1j) * mp.exp(branch * mp.pi * 1j * nu) * mp.besselk(nu, x))

    check_against(RelatedQuery("StruveL", z, nu, T(5), branch=branch),
                  mp.pi * (zz / 2) ** (1 - nu) * g(zz))
    check_against(RelatedQuery("StruveL", z, nu, T(5), derivative=True, branch=branch),
                  mp.pi * (zz / 2) ** (2 - nu) * mp.diff(g, zz))


def test_scorer_mpmath():
    z = cmath.rect(6, 0.3)
    zm = mp.mpc(z)
    check_against(RelatedQuery("ScorerHi", z, scheme=T(4)), mp.pi * zm * mp.scorerhi(-zm))
    check_against(RelatedQuery("ScorerHi", z, scheme=T(4), derivative=True),
                  mp.pi * zm ** 2 * hi_prime(-zm))
    check_against(RelatedQuery("ScorerGi", z, scheme=T(4)), mp.pi * zm * mp.scorergi(zm))
    gi_prime = mp.airybi(zm, derivative=1) - hi_prime(zm)
    check_against(RelatedQuery("ScorerGi", z, scheme=T(4), derivative=True),
                  -mp.pi * zm ** 2 * gi_prime)


def test_anger_weber_mpmath():
    z, nu = cmath.rect(15, 0.2), 1 / 3
    zz = mp.mpc(z)
    q = RelatedQuery("AngerWeberA", z, nu, T(7, 7))
    F, G = anger_weber_tail(q)
    RF, RG = related_remainder_oracle(q)
    A = (mp.angerj(nu, zz) - mp.besselj(nu, zz)) / mp.sin(mp.pi * nu)
    lhs = complex(A * mp.pi)
    rhs = (F.approx + RF) / z - nu * (G.approx + RG) / z ** 2
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)
    # Weber from the same blocks
    E = mp.webere(nu, zz) + mp.bessely(nu, zz)
    rhs_e = (-(1 + math.cos(PI * nu)) / (PI * z) * (F.approx + RF)
             - nu * (1 - math.cos(PI * nu)) / (PI * z ** 2) * (G.approx + RG))
    assert abs(complex(E) - rhs_e) <= 1e-8 * abs(complex(E))


def test_anger_derivative_mpmath():
    z, nu = cmath.rect(14, -0.3), 0.4
    zz = mp.mpc(z)
    q = RelatedQuery("AngerWeberA", z, nu, T(6, 6), derivative=True)
    F, G = anger_weber_tail(q)
    RF, RG = related_remainder_oracle(q)
    # d/dz [F/(pi z) - nu G/(pi z^2)] with F, G series in 1/z^2
    dA = mp.diff(lambda x: (mp.angerj(nu, x) - mp.besselj(nu, x)) / mp.sin(mp.pi * nu), zz)
    rhs = -(F.approx + RF) / (PI * z ** 2) + nu * (G.approx + RG) / (PI * z ** 3)
    assert abs(complex(dA) - rhs) <= 1e-8 * abs(complex(dA))


# --- mapping identities --------------------------------------------------------


def test_anger_block_matches_lommel():
    q = RelatedQuery("AngerJ", 20, 1.5, T(10, 10))
    F, G = anger_weber_tail(q)
    assert F.normalized_bound == certified_eval_S(20, OrderPair(0, 1.5), 10).normalized_bound
    assert G.normalized_bound == certified_eval_S(20, OrderPair(-1, 1.5), 10).normalized_bound


def test_anger_integer_order():
    F, G = anger_weber_tail(RelatedQuery("AngerJ", 9 + 4j, 2, T(4, 4)))
    assert math.isfinite(F.abs_bound) and F.abs_bound > 0
    # a_1(1, 2) = 0 so the G-block terminates
    assert G.abs_bound == 0 and related_remainder_oracle(
        RelatedQuery("AngerJ", 9 + 4j, 2, T(4, 4)))[1] == 0


def test_scorer_coefficients():
    for n in range(7):
        lhs = math.factorial(3 * n) / (math.factorial(n) * 3 ** n)
        assert lhs == pytest.approx((lommel_a(n, 0, 1 / 3) * 2.25 ** n).real, rel=1e-12)
        lhs = math.factorial(3 * n + 1) / (math.factorial(n) * 3 ** n)
        assert lhs == pytest.approx((lommel_a(n, 1, 2 / 3) * 2.25 ** n).real, rel=1e-12)


def test_scorer_series_matches_lommel_partial_sum():
    z = cmath.rect(5, 0.5)
    zeta = 2 / 3 * z ** 1.5
    cv = scorer_tail(RelatedQuery("ScorerHi", z, scheme=T(6)))
    lom = sum((-1) ** n * lommel_a(n, 0, 1 / 3) / zeta ** (2 * n) for n in range(6))
    assert cv.approx == pytest.approx(lom, rel=1e-13)


def test_scorer_hi_example():
    q = RelatedQuery("ScorerHi", 9, scheme=T(8))
    R = related_remainder_oracle(q)
    assert R == pytest.approx(oracle_remainder_S(18, OrderPair(0, 1 / 3), 8), rel=1e-12)
    # positive mapped argument: the remainder has the sign of the first omitted term
    assert R.real * (-1) ** 8 * lommel_a(8, 0, 1 / 3).real > 0
    assert abs(R) < abs(lommel_a(8, 0, 1 / 3)) / 18 ** 16


def test_struve_terminates():
    cv = struve_tail(RelatedQuery("StruveH", 7 + 2j, 0.5, T(1)))
    assert cv.abs_bound == 0
    assert related_remainder_oracle(RelatedQuery("StruveH", 7 + 2j, 0.5, T(1))) == 0
    cv = struve_tail(RelatedQuery("StruveH", 7 + 2j, 0.5, T(4)))
    assert cv.approx == pytest.approx(1 / math.gamma(1.0) * math.gamma(0.5) / math.gamma(1.0))


def test_struve_prefactor_one():
    cv = struve_tail(RelatedQuery("StruveH", 20, 0, T(10)))
    assert cv.normalized_bound == pytest.approx(lommel_min(20, OrderPair(0, 0), 10), rel=1e-14)


def test_struve_L_rotation():
    q = RelatedQuery("StruveL", 10, 1 / 3, T(5), branch=1)
    R = related_remainder_oracle(q)
    H = related_remainder_oracle(RelatedQuery("StruveH", 10 * cmath.exp(-0.5j * PI), 1 / 3, T(5)))
    assert R == pytest.approx(-H, rel=1e-12)


def test_struve_series_terms(rng):
    for _ in range(5):
        nu = complex(rng.uniform(-2, 3), rng.uniform(-1, 1))
        z = cmath.rect(rng.uniform(10, 20), rng.uniform(-1, 1))
        cv = struve_tail(RelatedQuery("StruveH", z, nu, T(9)))
        pref = math.sqrt(PI) / complex(mp.gamma(nu + 0.5))
        total = 0
        for n in range(9):
            t = complex(mp.gamma(n + 0.5) / (mp.gamma(nu + 0.5 - n) * (z / 2) ** (2 * n)))
            lom = pref * (-1) ** n * lommel_a(n, -nu, nu) / z ** (2 * n)
            assert t == pytest.approx(lom, rel=1e-11, abs=1e-300)
            total += t
        assert cv.approx == pytest.approx(total, rel=1e-11)


def test_anger_coefficient_identities(rng):
    for _ in range(5):
        nu = complex(*rng.uniform(-3, 3, 2))
        for n in range(6):
            assert anger_F(n, nu) == (-1) ** n * lommel_a(n, 0, nu)
            assert anger_G(n, nu) == (-1) ** n * lommel_a(n, 1, nu)


@pytest.mark.parametrize("family", ["StruveH", "StruveL", "ScorerHi", "ScorerGi", "AngerWeberA"])
def test_mapping_identities(rng, family):
    for _ in range(3):
        q = related_sample(rng, family)
        got = related_remainder_oracle(q)
        want = direct_related_remainder(q)
        if isinstance(got, tuple):
            for g, w in zip(got, want):
                assert abs(g - w) <= 1e-10 * abs(w)
        else:
            assert abs(got - want) <= 1e-10 * abs(want)


# --- guards -------------------------------------------------------------------


@pytest.mark.parametrize("family, limit", [
    ("AngerJ", PI), ("StruveH", PI), ("ScorerHi", 2 * PI / 3), ("ScorerGi", PI / 3),
])
def test_sector_guards(family, limit):
    nu = None if family.startswith("Scorer") else 0.3
    inside = RelatedQuery(family, cmath.rect(20, limit - 1e-3), nu, T(3, 3))
    related_tail(inside)
    for th in (limit + 1e-3, -(limit + 1e-3)):
        if abs(th) >= PI:
            th = math.copysign(PI, th)
        q = RelatedQuery(family, cmath.rect(20, th), nu, T(3, 3))
        with pytest.raises(PreconditionError):
            related_tail(q)


def test_struve_L_guards():
    for br in (1, -1):
        for th in (-PI / 2 + 1e-3, 3 * PI / 2 - 1e-3 - PI):
            related_tail(RelatedQuery("StruveL", cmath.rect(15, br * th), 0.3, T(3), branch=br))
        with pytest.raises(PreconditionError):
            related_tail(RelatedQuery("StruveL", cmath.rect(15, br * (-PI / 2 - 1e-3)), 0.3, T(3),
                                      branch=br))
    assert DELTA == 1e-6


def test_query_validation():
    with pytest.raises(ValueError):
        RelatedQuery("ScorerHi", 3, 0.5)
    with pytest.raises(ValueError):
        RelatedQuery("StruveH", 3)
    with pytest.raises(ValueError):
        RelatedQuery("Bessel", 3, 1)
    with pytest.raises(ValueError):
        RelatedQuery("StruveL", 3, 1, branch=2)
    with pytest.raises(PoleError):
        struve_tail(RelatedQuery("StruveH", 10, -0.5, T(2)))
