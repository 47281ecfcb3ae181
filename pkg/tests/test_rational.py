from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcd_lab.errors import DomainError
from mcd_lab.rational import (
    common_denominator,
    format_rat,
    int_valuation,
    num_den,
    padic_valuation,
    parse_rat,
    rat,
)

nonneg = st.fractions(min_value=0, max_denominator=10**6).filter(lambda q: q < 10**6)
nonzero = st.fractions(max_denominator=10**4).filter(lambda q: q != 0)
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@given(nonneg)
def test_format_parse_round_trip(q):
    assert parse_rat(format_rat(q)) == q


def test_format_shapes():
    assert format_rat(Fraction(4, 2)) == "2"
    assert format_rat(Fraction(13, 30)) == "13/30"
    assert format_rat(Fraction(0)) == "0"


@pytest.mark.parametrize("bad", ["-1/2", "0.5", "1/0", "a", "", "1/-3"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        parse_rat(bad)


def test_rat_rejects_inexact_and_negative():
    with pytest.raises(DomainError):
        rat(0.5)
    with pytest.raises(DomainError):
        rat(True)
    with pytest.raises(DomainError):
        rat(Fraction(-1, 3))
    assert rat("6/4") == Fraction(3, 2)


def test_num_den_reduces():
    assert num_den("6/4") == (3, 2)


@given(nonzero, nonzero, small_primes)
def test_valuation_is_additive(a, b, p):
    assert padic_valuation(a * b, p) == padic_valuation(a, p) + padic_valuation(b, p)


@given(nonzero, nonzero, small_primes)
def test_valuation_of_sum_is_at_least_min(a, b, p):
    if a + b != 0:
        assert padic_valuation(a + b, p) >= min(padic_valuation(a, p), padic_valuation(b, p))


def test_valuation_errors():
    with pytest.raises(DomainError):
        padic_valuation(0, 3)
    with pytest.raises(DomainError):
        padic_valuation(Fraction(1, 2), 4)
    assert int_valuation(-48, 2) == 4


@given(st.lists(nonneg, min_size=1, max_size=6))
def test_common_denominator_clears_all(xs):
    L = common_denominator(xs)
    assert all((x * L).denominator == 1 for x in xs)
