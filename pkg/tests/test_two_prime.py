import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcd_lab import two_prime
from mcd_lab.errors import HypothesisViolation
from mcd_lab.oracle import factorize_all, is_member_bf, mcd_bf
from mcd_lab.spec import generators, m_p

MP = m_p(6)
GENS = generators(MP)
L = 9699690

counts_st = st.lists(st.integers(min_value=0, max_value=6), min_size=6, max_size=6)


def _combo(counts):
    return sum((c * g for c, g in zip(counts, GENS)), Fraction(0))


def test_generators():
    assert GENS == [Fraction(1, 10), Fraction(1, 21), Fraction(1, 55), Fraction(1, 91),
                    Fraction(1, 187), Fraction(1, 247)]
    assert two_prime.term_value(MP, 1) == Fraction(1, 2)
    assert two_prime.term_value(MP, 3) == Fraction(1, 10)


def test_worked_mcd():
    assert two_prime.mcd([Fraction(1, 10), Fraction(1, 21)], MP) == 0


def test_integer_sets_give_min():
    assert two_prime.mcd([Fraction(2), Fraction(1), Fraction(5)], MP) == 1


@given(counts_st, st.integers(min_value=0, max_value=3))
def test_reduced_form_reconstructs(counts, c):
    q = _combo(counts) + c
    red = two_prime.find_reduced_form(q, MP)
    assert red is not None and red.value(MP) == q


@given(counts_st)
def test_reduction_of_a_factorization(counts):
    q = _combo(counts)
    for f in sorted(factorize_all(q, GENS))[:3]:
        assert two_prime.reduce_decomposition(f, MP).value(MP) == q


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=L // 2))
def test_membership_agrees_with_truncation_oracle(n):
    # the valuation bound keeps every member of this support inside M_6
    q = Fraction(n, L)
    assert two_prime.is_member(q, MP) == is_member_bf(q, GENS)


def test_non_members():
    assert two_prime.is_member(Fraction(1, 3), MP)
    assert not two_prime.is_member(Fraction(1, 6), MP)
    assert not two_prime.is_member(Fraction(1, 4), MP)
    assert not two_prime.is_member(Fraction(1, 49), MP)


def test_mcd_agrees_with_oracle_on_pairs():
    sample = [Fraction(x) for x in ("1/10", "1/21", "1/55", "1/2", "7/10")]
    for S in itertools.combinations(sample, 2):
        m = two_prime.mcd(S, MP)
        assert m in mcd_bf(S, GENS)


def test_mcd_rejects_non_members():
    with pytest.raises(HypothesisViolation):
        two_prime.mcd([Fraction(1, 6)], MP)


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_chain_witnesses(parity):
    for n in range(1, 11):
        w = two_prime.chain_witness(MP, parity, n)
        assert w.verified
        assert w.multiplicity == MP.p_of(w.index + 2) - MP.p_of(w.index)
        assert w.difference == w.multiplicity * w.atom
