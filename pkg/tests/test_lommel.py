import cmath
import math

import numpy as np
import pytest

from lommelbound import OrderPair
from lommelbound.errors import DomainError, InapplicableError, PreconditionError
from lommelbound.lommel import (TruncationScheme, auto_N, bound_candidates, certified_eval_S,
                                certified_eval_S_prime, first_omitted, oracle_remainder_S,
                                oracle_remainder_S_prime, partial_sum_S, partial_sum_S_prime,
                                pick_bound, remainder_bound_combined_real,
                                remainder_bound_complex, remainder_bound_complex_combined,
                                remainder_bound_real, sign_magnitude_theta)

from conftest import TABLE1, TABLE2, TABLE3
from samples import lommel_sample

PI = math.pi

# remainders of the normalized expansion, from the mpmath 1F2 + Bessel
# representation (tests/mpref.py) at 50 digits
FROZEN_S = [
    (-2, 1.5, 20, 5, -4.744048749568777e-06 + 0j),
    (-2, 1.5, cmath.rect(20, PI / 4), 10, -4.492943342554526e-07 - 4.891027896878607e-07j),
    (2 + 2j, 0.5 - 1j, cmath.rect(20, PI / 4), 5, 2.8470240050569647e-08 - 2.8216288774363236e-08j),
    (-6, 4.5, cmath.rect(20, 3 * PI / 8), 5, -5.187829277550763e-05 - 0.0006317999032507878j),
    (0.3, 0.2, 7 - 2j, 3, -2.8354476285949367e-05 - 0.00029689697799193825j),
    (1.5, -0.4 + 0.3j, cmath.rect(11, 2.5), 4, 9.288194276774096e-05 - 9.612481352962561e-05j),
]
FROZEN_S_PRIME = [
    (0, 1 / 3, 15, 4, -2.4265389578719757e-05 + 0j),
    (-1, 0.25, cmath.rect(12, 0.6), 4, 0.0008047965990983512 - 0.0021229479549767115j),
]


@pytest.mark.parametrize("mu, nu, z, N, ref", FROZEN_S)
def test_oracle_S_frozen(mu, nu, z, N, ref):
    assert abs(oracle_remainder_S(z, OrderPair(mu, nu), N) - ref) <= 1e-9 * abs(ref)


@pytest.mark.parametrize("mu, nu, z, N, ref", FROZEN_S_PRIME)
def test_oracle_S_prime_frozen(mu, nu, z, N, ref):
    assert abs(oracle_remainder_S_prime(z, OrderPair(mu, nu), N) - ref) <= 1e-9 * abs(ref)


def test_oracle_live_mpmath(rng):
    from mpref import remainder_S
    for _ in range(4):
        z, mu, nu, N = lommel_sample(rng, complex_params=True)
        ref = remainder_S(mu, nu, z, N)
        got = oracle_remainder_S(z, OrderPair(mu, nu), N)
        assert abs(got - ref) <= 1e-8 * abs(ref) + 1e-300


def test_table_oracle_examples():
    assert abs(oracle_remainder_S(20, TABLE1, 5)) == pytest.approx(0.47440e-5, abs=0.00001e-5)
    assert abs(oracle_remainder_S(20j, TABLE2, 10)) == pytest.approx(0.11804e-2, abs=0.00001e-2)


def test_partial_sums_trivial():
    assert partial_sum_S(5 + 1j, TABLE1, 0) == 0
    assert partial_sum_S_prime(5 + 1j, TABLE1, 0) == 0
    for N in (1, 2, 5):
        assert partial_sum_S(3 - 2j, OrderPair(1, 0), N) == 1
    assert oracle_remainder_S(3 - 2j, OrderPair(1, 0), 1) == 0
    # b_1(0, 1) = 0 so the derivative expansion stops after one term
    z = 4.0
    assert partial_sum_S_prime(z, OrderPair(0, 1), 5) == pytest.approx(partial_sum_S_prime(z, OrderPair(0, 1), 1))


def test_partial_sum_derivative(rng):
    for _ in range(10):
        z, mu, nu, N = lommel_sample(rng, complex_params=True)
        pair = OrderPair(mu, nu)
        h = 1e-5 * abs(z)
        fd = (partial_sum_S(z + h, pair, N) - partial_sum_S(z - h, pair, N)) / (2 * h)
        exact = partial_sum_S_prime(z, pair, N)
        assert abs(fd - exact) <= 1e-7 * max(abs(exact), abs(partial_sum_S(z, pair, N)) / abs(z))


def test_functional_equation(rng):
    for _ in range(10):
        z, mu, nu, N = lommel_sample(rng, complex_params=True)
        N += 1
        lhs = 2 * oracle_remainder_S_prime(z, OrderPair(mu, nu), N)
        rhs = ((mu + nu - 1) * oracle_remainder_S(z, OrderPair(mu - 1, nu - 1), N)
               + (mu - nu - 1) * oracle_remainder_S(z, OrderPair(mu - 1, nu + 1), N))
        assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_derivative_paths_agree(rng):
    for _ in range(8):
        z, mu, nu, N = lommel_sample(rng, complex_params=True, max_theta=PI / 2 - 0.05)
        N += 1
        pair = OrderPair(mu, nu)
        a = oracle_remainder_S_prime(z, pair, N, path="bessel")
        b = oracle_remainder_S_prime(z, pair, N, path="functional")
        assert abs(a - b) <= 1e-7 * abs(a)


def test_oracle_paths_agree(rng):
    for _ in range(15):
        z, mu, nu, N = lommel_sample(rng, complex_params=rng.random() < 0.5,
                                     max_theta=PI / 2 - 0.05)
        pair = OrderPair(mu, nu)
        a = oracle_remainder_S(z, pair, N, path="bessel")
        b = oracle_remainder_S(z, pair, N, path="terminant")
        assert abs(a - b) <= 1e-7 * abs(a)


def test_asymptotic_consistency():
    pair, N = TABLE1, 5
    a = abs(first_omitted(1, pair, N))
    ratios = [abs(z) ** (2 * N) * abs(oracle_remainder_S(z, pair, N)) / a for z in (50, 100, 200)]
    assert ratios[0] < ratios[1] < ratios[2] < 1
    assert abs(ratios[2] - 1) < 0.05


def test_real_bound_examples():
    assert remainder_bound_real(20, TABLE1, 5) == pytest.approx(0.65562e-5, abs=0.00001e-5)
    # these printed values come from the piecewise bound; the terminant form
    # may be sharper, never looser, and must still dominate the remainder
    for z, pair, N, printed in [(20j, TABLE1, 10, 0.43344e-5),
                                (cmath.rect(20, 3 * PI / 8), TABLE2, 5, 0.74016e-3)]:
        b = remainder_bound_real(z, pair, N)
        assert abs(oracle_remainder_S(z, pair, N)) <= b <= printed * (1 + 1e-5)
        assert remainder_bound_combined_real(z, pair, N) == pytest.approx(printed, abs=0.00001 * printed)


def test_combined_real_examples():
    assert remainder_bound_combined_real(cmath.rect(20, PI / 4), TABLE1, 10) == pytest.approx(
        1.07336e-6, rel=1e-5)
    assert remainder_bound_combined_real(20j, TABLE2, 10) == pytest.approx(0.25972e-2, rel=2e-5)
    for pair, N in [(TABLE1, 5), (TABLE2, 10), (OrderPair(0.3, -1.2), 3)]:
        assert remainder_bound_combined_real(13.0, pair, N) == first_omitted(13.0, pair, N)


def test_complex_bound_examples():
    # real parameters: every gamma ratio cancels
    for th in (0, 0.5, PI / 2, 2.5):
        z = cmath.rect(20, th)
        assert remainder_bound_complex(z, TABLE1, 5) == pytest.approx(
            remainder_bound_real(z, TABLE1, 5, lam=0.5), rel=1e-12)
    b = remainder_bound_complex(20, TABLE3, 5)
    assert abs(oracle_remainder_S(20, TABLE3, 5)) <= b <= 0.51174e-7 * (1 + 1e-5)
    assert remainder_bound_complex_combined(20, TABLE3, 5) == pytest.approx(0.51174e-7, rel=2e-5)
    z = 20j
    b = remainder_bound_complex(z, TABLE3, 10)
    assert abs(oracle_remainder_S(z, TABLE3, 10)) <= b <= 3.13582e-8 * (1 + 1e-5)


def test_complex_combined_examples():
    assert remainder_bound_complex_combined(cmath.rect(20, PI / 4), TABLE3, 5) == pytest.approx(
        0.51174e-7, rel=2e-5)
    assert remainder_bound_complex_combined(cmath.rect(20, 3 * PI / 8), TABLE3, 10) == pytest.approx(
        0.75467e-9, rel=2e-5)
    for th in (0.9, 1.2, PI / 2):
        z = cmath.rect(20, th)
        assert remainder_bound_complex_combined(z, TABLE1, 5) == pytest.approx(
            remainder_bound_combined_real(z, TABLE1, 5), rel=1e-12)
    with pytest.raises(PreconditionError):
        remainder_bound_complex_combined(cmath.rect(20, 2.0), TABLE3, 5)


def test_bound_dominance(rng):
    for k in range(60):
        z, mu, nu, N = lommel_sample(rng, complex_params=k % 2 == 1)
        pair = OrderPair(mu, nu)
        R = abs(oracle_remainder_S(z, pair, N))
        for tag, b in bound_candidates(z, pair, N).items():
            assert R <= b, (z, mu, nu, N, tag, R, b)
        Rp = abs(oracle_remainder_S_prime(z, pair, N))
        for tag, b in bound_candidates(z, pair, N, "S'").items():
            assert Rp <= b, (z, mu, nu, N, tag, Rp, b)


def test_sign_magnitude_examples():
    assert sign_magnitude_theta(20, TABLE1, 5) == pytest.approx(0.47440 / 0.65562, abs=2e-5)
    th = sign_magnitude_theta(10, OrderPair(0, 0.25), 3, "S'")
    assert 0 < th < 1
    with pytest.raises(PreconditionError):
        sign_magnitude_theta(10, OrderPair(1, 0), 2)
    with pytest.raises(PreconditionError):
        sign_magnitude_theta(10j, TABLE1, 5)


def test_sign_magnitude_random(rng):
    for _ in range(20):
        z, mu, nu, N = lommel_sample(rng, positive=True)
        pair = OrderPair(mu, nu)
        for which in ("S", "S'"):
            try:
                th = sign_magnitude_theta(z, pair, N, which)
            except PreconditionError:
                continue
            assert 0 < th < 1


def test_certified_eval_auto():
    cv = certified_eval_S(20, TABLE1)
    assert cv.scheme.N == 10
    assert cv.normalized_bound == pytest.approx(first_omitted(20, TABLE1, 10), rel=1e-12)
    assert cv.abs_bound == pytest.approx(cv.normalized_bound * 20 ** -3, rel=1e-12)
    R, err = oracle_remainder_S(20, TABLE1, 10, full=True)
    assert abs(R) + err <= cv.normalized_bound
    assert abs(R) * 20 ** -3 <= cv.abs_bound


def test_certified_eval_large_z():
    cv = certified_eval_S(1e6, OrderPair(0, 0), N=1)
    assert cv.first_omitted == pytest.approx(1e-12, rel=1e-12)
    assert cv.normalized_bound == pytest.approx(cv.first_omitted, rel=1e-12)
    assert cv.approx == pytest.approx(1e-6)


def test_certified_eval_terminating():
    for pair, N in [(OrderPair(1, 0), 1), (OrderPair(3, 0), 2), (OrderPair(0.5, 2.5), 2)]:
        cv = certified_eval_S(4 + 3j, pair, N)
        assert cv.abs_bound == 0 and cv.normalized_bound == 0
        assert oracle_remainder_S(4 + 3j, pair, N) == 0
        cvp = certified_eval_S_prime(4 + 3j, pair, N)
        assert cvp.abs_bound == 0


def test_certified_prime_dominates():
    z = cmath.rect(12, 0.9)
    pair = OrderPair(-1.3 + 0.4j, 0.8)
    cv = certified_eval_S_prime(z, pair)
    R, err = oracle_remainder_S_prime(z, pair, cv.scheme.N, full=True)
    assert abs(R) + err <= cv.normalized_bound
    assert abs(R * cmath.exp((pair.mu - 2) * cmath.log(z))) <= cv.abs_bound


def test_auto_N():
    assert auto_N(20, TABLE1) == 10
    assert auto_N(21, TABLE1) == 10   # tie rounds down
    assert auto_N(1, OrderPair(0, 0)) == 1
    assert auto_N(3, OrderPair(4, 2)) == 3
    with pytest.raises(InapplicableError):
        auto_N(2, OrderPair(8, 3))


def test_pick_bound_prefers_earlier_on_ties():
    assert pick_bound({"a": 1.0, "b": 1.0, "c": 2.0}) == "a"
    cands = bound_candidates(20, TABLE1, 5)
    assert pick_bound(cands) == "real-terminant"


def test_domain_checks():
    with pytest.raises(DomainError):
        certified_eval_S(0, TABLE1, 5)
    with pytest.raises(DomainError):
        certified_eval_S(-3, TABLE1, 5)
    with pytest.raises(PreconditionError):
        certified_eval_S(10, OrderPair(5, 2), 2)
    with pytest.raises(DomainError):
        TruncationScheme(-1)
