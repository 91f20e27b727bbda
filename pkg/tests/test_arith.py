"""Integer arithmetic layer: primality, factorization, sieves."""

import math

import numpy as np
import pytest

from polyprime.arith import (
    Factorization,
    SpfTable,
    big_omega,
    build_spf_table,
    factorize,
    iroot,
    is_prime,
    lambda_from_mobius_check,
    least_prime_at_least,
    liouville,
    liouville_sieve,
    mobius,
    mobius_sieve,
    perfect_power,
    primes_upto,
    theta,
    von_mangoldt,
    zero_audit,
)
from polyprime.errors import FactorBudgetError
from polyprime.rng import stream

# Frozen via a one-off run of an independent primality oracle.
PRIME_1E18 = 10 ** 18 + 9
PRIME_2E18 = 2 * 10 ** 18 + 57
PRIME_ABOVE_MR_BOUND = 10 ** 25 + 13
COMPOSITE_1E22 = 10 ** 22 + 4243
HARD_SEMIPRIME = PRIME_1E18 * PRIME_2E18


def test_primes_upto_20():
    assert primes_upto(20).tolist() == [2, 3, 5, 7, 11, 13, 17, 19]


def test_primes_upto_edges():
    assert primes_upto(1).size == 0
    assert primes_upto(2).tolist() == [2]
    assert primes_upto(0).dtype == np.int64


def test_primes_upto_count():
    # pi(10**5) = 9592
    assert primes_upto(10 ** 5).size == 9592


def test_is_prime_small():
    assert is_prime(2)
    assert is_prime(3)
    assert is_prime(97)
    assert not is_prime(0)
    assert not is_prime(1)
    assert not is_prime(561)  # Carmichael
    assert not is_prime(1024)


def test_is_prime_negative_mirror():
    assert is_prime(-7)
    assert is_prime(-2)
    assert not is_prime(-9)
    for n in range(2, 500):
        assert is_prime(-n) == is_prime(n)


def test_is_prime_matches_sieve():
    sieve = set(primes_upto(20000).tolist())
    for n in range(20000):
        assert is_prime(n) == (n in sieve)


def test_is_prime_frozen_large():
    assert is_prime(PRIME_1E18)
    assert is_prime(PRIME_2E18)
    assert not is_prime(COMPOSITE_1E22)


def test_is_prime_above_deterministic_bound():
    # Exercises the seeded extra-round path (n above the witness bound).
    assert is_prime(PRIME_ABOVE_MR_BOUND)
    assert not is_prime(HARD_SEMIPRIME)
    # Determinism of the seeded path.
    assert is_prime(PRIME_ABOVE_MR_BOUND) == is_prime(PRIME_ABOVE_MR_BOUND)


def test_iroot():
    assert iroot(0, 5) == 0
    assert iroot(63, 3) == 3
    assert iroot(64, 3) == 4
    assert iroot(10 ** 18, 2) == 10 ** 9
    assert iroot(2 ** 100 - 1, 10) == 2 ** 10 - 1
    with pytest.raises(ValueError):
        iroot(-1, 2)
    with pytest.raises(ValueError):
        iroot(8, 0)


def test_perfect_power():
    assert perfect_power(8) == (2, 3)
    assert perfect_power(64) == (2, 6)
    assert perfect_power(36) == (6, 2)
    assert perfect_power(1296) == (6, 4)
    assert perfect_power(3 ** 5) == (3, 5)
    assert perfect_power(12) is None
    assert perfect_power(2) is None
    assert perfect_power(PRIME_1E18 ** 2) == (PRIME_1E18, 2)


def test_perfect_power_exhaustive_small():
    powers = {}
    for b in range(2, 100):
        for e in range(2, 20):
            v = b ** e
            if v <= 10 ** 6:
                cur = powers.get(v)
                if cur is None or e > cur[1]:
                    powers[v] = (b, e)
    for v in range(2, 10 ** 4):
        got = perfect_power(v)
        want = powers.get(v)
        if want is None:
            assert got is None, v
        else:
            assert got is not None and got[0] ** got[1] == v
            assert got[1] == want[1], v


def test_factorize_examples():
    f = factorize(360)
    assert f.sign == 1
    assert f.factors == ((2, 3), (3, 2), (5, 1))
    assert f.big_omega == 6
    assert not f.is_squarefree
    g = factorize(-12)
    assert g.sign == -1
    assert g.factors == ((2, 2), (3, 1))
    assert g.value() == -12
    assert factorize(1).factors == ()
    assert factorize(-1) == Factorization(n=-1, sign=-1, factors=())
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_roundtrip_random():
    rng = stream(20260818, 101)
    for _ in range(300):
        n = rng.randrange(1, 10 ** 9)
        if rng.random() < 0.5:
            n = -n
        f = factorize(n)
        assert f.value() == n
        for p, e in f.factors:
            assert e >= 1
            assert is_prime(p)
        assert [p for p, _ in f.factors] == sorted(p for p, _ in f.factors)


def test_factorize_frozen_prime():
    assert factorize(PRIME_1E18).factors == ((PRIME_1E18, 1),)
    assert factorize(PRIME_1E18).is_prime_power


def test_factorize_big_perfect_power():
    assert factorize(PRIME_1E18 ** 2).factors == ((PRIME_1E18, 2),)
    assert factorize(2 ** 64).factors == ((2, 64),)


def test_factorize_budget_error():
    # Splitting a semiprime with ~1e18-sized factors needs ~1e9 rho
    # iterations; a tiny budget must fail loudly, not hang or guess.
    with pytest.raises(FactorBudgetError):
        factorize(HARD_SEMIPRIME, budget=10_000)


def test_big_omega():
    assert big_omega(360) == 6
    assert big_omega(1) == 0
    assert big_omega(-8) == 3
    assert big_omega(97) == 1


def test_liouville_values():
    assert liouville(1) == 1
    assert liouville(2) == -1
    assert liouville(4) == 1
    assert liouville(12) == -1
    assert liouville(-12) == -1
    assert liouville(-1) == 1


def test_liouville_zero_sentinel_audited():
    zero_audit.reset()
    assert liouville(0) == 0
    assert zero_audit.count == 1
    zero_audit.reset()


def test_liouville_completely_multiplicative():
    rng = stream(20260818, 102)
    for _ in range(200):
        a = rng.randrange(1, 10 ** 6)
        b = rng.randrange(1, 10 ** 6)
        assert liouville(a * b) == liouville(a) * liouville(b)


def test_mobius_values():
    assert mobius(1) == 1
    assert mobius(2) == -1
    assert mobius(4) == 0
    assert mobius(6) == 1
    assert mobius(30) == -1
    assert mobius(-30) == -1


def test_mobius_zero_is_domain_error():
    zero_audit.reset()
    with pytest.raises(ValueError):
        mobius(0)
    # A domain error is not a sentinel evaluation.
    assert zero_audit.count == 0


def test_mobius_squarefree_matches_liouville():
    for n in range(1, 2000):
        m = mobius(n)
        if factorize(n).is_squarefree:
            assert m == liouville(n)
        else:
            assert m == 0


def test_von_mangoldt_values():
    assert von_mangoldt(8) == pytest.approx(math.log(2))
    assert von_mangoldt(9) == pytest.approx(math.log(3))
    assert von_mangoldt(7) == pytest.approx(math.log(7))
    assert von_mangoldt(6) == 0.0
    assert von_mangoldt(1) == 0.0
    assert von_mangoldt(-49) == pytest.approx(math.log(7))


def test_von_mangoldt_zero_sentinel_audited():
    zero_audit.reset()
    assert von_mangoldt(0) == 0.0
    assert zero_audit.count == 1
    zero_audit.reset()


def test_von_mangoldt_brute_force():
    for n in range(1, 3000):
        p = None
        for q in primes_upto(n).tolist():
            m = n
            while m % q == 0:
                m //= q
            if m == 1:
                p = q
                break
        want = math.log(p) if p is not None else 0.0
        assert von_mangoldt(n) == pytest.approx(want)


def test_theta_values():
    assert theta(7) == pytest.approx(math.log(7))
    assert theta(8) == 0.0
    assert theta(-11) == pytest.approx(math.log(11))
    zero_audit.reset()
    assert theta(0) == 0.0
    assert zero_audit.count == 1
    zero_audit.reset()


def test_zero_audit_reset_returns_previous():
    zero_audit.reset()
    liouville(0)
    von_mangoldt(0)
    theta(0)
    assert zero_audit.reset() == 3
    assert zero_audit.count == 0


def test_lambda_from_mobius_check():
    assert lambda_from_mobius_check(1)
    assert lambda_from_mobius_check(12)
    assert lambda_from_mobius_check(360)
    for n in range(1, 400):
        assert lambda_from_mobius_check(n), n
    with pytest.raises(ValueError):
        lambda_from_mobius_check(0)


def test_spf_table_basics():
    t = SpfTable(10 ** 6)
    assert t.spf(2) == 2
    assert t.spf(4) == 2
    assert t.spf(15) == 3
    assert t.spf(999983) == 999983
    with pytest.raises(ValueError):
        t.spf(1)
    with pytest.raises(ValueError):
        t.spf(10 ** 6 + 1)


def test_spf_table_factorize_matches_global():
    t = build_spf_table(2 * 10 ** 6)
    for n in range(2, 2000):
        assert t.factorize(n) == factorize(n)
    rng = stream(20260818, 103)
    for _ in range(500):
        n = rng.randrange(2, 2 * 10 ** 6)
        assert t.factorize(n) == factorize(n)
        assert t.liouville(n) == liouville(n)
    with pytest.raises(ValueError):
        t.factorize(4 * 10 ** 6)
    with pytest.raises(ValueError):
        t.factorize(0)


def test_liouville_sieve_matches_pointwise():
    lam = liouville_sieve(1000)
    assert lam[0] == 0
    for n in range(1, 1001):
        assert int(lam[n]) == liouville(n)


def test_mobius_sieve_matches_pointwise():
    mu = mobius_sieve(1000)
    assert mu[0] == 0
    for n in range(1, 1001):
        assert int(mu[n]) == mobius(n)


def test_least_prime_at_least():
    assert least_prime_at_least(1) == 2
    assert least_prime_at_least(2) == 2
    assert least_prime_at_least(14) == 17
    assert least_prime_at_least(23) == 23
    assert least_prime_at_least(15000) == 15013
