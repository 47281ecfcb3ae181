import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcd_lab.errors import HypothesisViolation, SearchOverflow
from mcd_lab.oracle import (
    NO_SOLUTION,
    UNREACHABLE,
    Factorization,
    common_divisors_bf,
    factorize_all,
    is_atom_bf,
    mcd_bf,
    membership_bf,
    members_upto,
)

gens_st = st.lists(st.integers(min_value=2, max_value=12), min_size=1, max_size=3, unique=True)


def _naive_factorizations(n, gens):
    ranges = [range(n // g + 1) for g in gens]
    return {c for c in itertools.product(*ranges) if sum(a * g for a, g in zip(c, gens)) == n}


@settings(max_examples=60)
@given(gens_st, st.integers(min_value=0, max_value=60))
def test_factorizations_sound_and_complete(gens, n):
    found = factorize_all(n, gens)
    assert all(f.value([Fraction(g) for g in gens]) == n for f in found)
    expected = {Factorization.from_counts(c) for c in _naive_factorizations(n, gens)}
    assert found == expected


@settings(max_examples=60)
@given(gens_st, st.integers(min_value=0, max_value=60))
def test_membership_matches_naive(gens, n):
    assert membership_bf(n, gens)[0] == bool(_naive_factorizations(n, gens))


def test_reasons():
    assert membership_bf(Fraction(1, 7), [Fraction(1, 3)]) == (False, UNREACHABLE)
    assert membership_bf(7, [3, 5]) == (False, NO_SOLUTION)


def test_numerical_divisors():
    # in <3,5>: common divisors of {15, 18} are d with 15-d, 18-d members
    cds = common_divisors_bf([15, 18], [3, 5])
    naive = [d for d in range(16) if membership_bf(d, [3, 5])[0]
             and membership_bf(15 - d, [3, 5])[0] and membership_bf(18 - d, [3, 5])[0]]
    assert cds == naive
    mcds = mcd_bf([15, 18], [3, 5])
    assert all(not any(d + g in cds for g in (3, 5)) for d in mcds)
    assert set(mcds) <= set(cds)


def test_mcd_of_rational_truncation():
    gens = [Fraction(1, 3), Fraction(1, 10)]
    assert mcd_bf([Fraction(1, 3), Fraction(1, 10)], gens) == [0]


def test_atoms():
    assert is_atom_bf(3, [3, 5, 6])
    assert not is_atom_bf(6, [3, 5, 6])
    with pytest.raises(HypothesisViolation):
        is_atom_bf(7, [3, 5])


def test_members_and_overflow():
    assert members_upto(10, [3, 5]) == [0, 3, 5, 6, 8, 9, 10]
    with pytest.raises(HypothesisViolation):
        common_divisors_bf([7], [3, 5])
    with pytest.raises(SearchOverflow):
        factorize_all(10**6, [1, 2, 3, 5, 7], node_cap=100)
