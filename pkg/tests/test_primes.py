import math

import pytest
from hypothesis import given, strategies as st

from mcd_lab.errors import DomainError, TruncationExceeded
from mcd_lab.primes import (
    NTH_ODD_PRIME,
    NTH_PRIME,
    PrimeIndexRule,
    factorize,
    is_prime,
    nth_prime,
    prime_pi_index,
)


def _sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = [False] * len(flags[i * i::i])
    return [i for i, f in enumerate(flags) if f]


PRIMES = _sieve(20000)


def test_is_prime_matches_sieve():
    ps = set(PRIMES)
    assert all(is_prime(n) == (n in ps) for n in range(20001))


def test_large_primality():
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    with pytest.raises(DomainError):
        is_prime(2**64)


def test_nth_prime_and_index():
    assert [nth_prime(n) for n in range(1, 11)] == PRIMES[:10]
    assert nth_prime(len(PRIMES)) == PRIMES[-1]
    assert prime_pi_index(PRIMES[999]) == 1000
    assert prime_pi_index(1001) is None


def test_rules():
    allp, odd = PrimeIndexRule(NTH_PRIME), PrimeIndexRule(NTH_ODD_PRIME)
    assert [odd.nth_of(n) for n in (1, 2, 3, 4)] == [3, 5, 7, 11]
    assert odd.prime_index(2) is None and odd.prime_index(11) == 4
    assert allp.prime_index(11) == 5
    pre = PrimeIndexRule.explicit([3, 7])
    assert pre.prime_index(7) == 2 and pre.prime_index(5) is None
    with pytest.raises(TruncationExceeded):
        pre.nth_of(3)
    with pytest.raises(TruncationExceeded):
        pre.prime_index(11)


@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(st.integers(min_value=1, max_value=400))
def test_rule_index_inverts_nth(n):
    for rule in (PrimeIndexRule(NTH_PRIME), PrimeIndexRule(NTH_ODD_PRIME)):
        assert rule.prime_index(rule.nth_of(n)) == n
