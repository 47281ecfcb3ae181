import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcd_lab import grams
from mcd_lab.errors import HypothesisViolation, is_unknown
from mcd_lab.oracle import is_member_bf, mcd_bf, members_upto
from mcd_lab.spec import generators, grams_classical, validate

G4 = grams_classical(4)
GENS = generators(G4)

counts_st = st.lists(st.integers(min_value=0, max_value=12), min_size=4, max_size=4)
dyadic_st = st.builds(lambda a, k: Fraction(a, 2**k), st.integers(0, 9), st.integers(0, 6))


def _combo(counts):
    return sum((c * g for c, g in zip(counts, GENS)), Fraction(0))


def test_worked_decomposition():
    dec = grams.canonical_decompose(Fraction(13, 30), G4)
    assert dec.to_json() == {"c0": "0", "coeffs": {"1": 1, "2": 1}}


def test_rejection_stages():
    assert grams.canonical_decompose(Fraction(7, 30), G4).stage is grams.Stage.NEGATIVE_RESIDUAL
    assert grams.canonical_decompose(Fraction(1, 9), G4).stage is grams.Stage.BAD_VALUATION
    assert str(grams.canonical_decompose(Fraction(7, 30), G4)) == "negative residual"


@given(counts_st, dyadic_st)
def test_decomposition_reconstructs_and_is_canonical(counts, c0):
    q = _combo(counts) + c0
    dec = grams.canonical_decompose(q, G4)
    assert dec.value(G4) == q
    assert all(0 < c < G4.p_of(n) for n, c in dec.coeffs)
    assert grams.is_member_N(dec.c0, G4) is True


@given(counts_st, counts_st)
def test_membership_closed_under_addition(a, b):
    assert grams.is_member(_combo(a) + _combo(b), G4) is True


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2 * 9240))
def test_membership_agrees_with_truncation_oracle(n):
    # on the truncation's support the element lies in M iff it lies in <g_1..g_4>
    # whenever c0 has denominator dividing d_4 = 8
    q = Fraction(n, 9240)
    assert grams.is_member(q, G4) == is_member_bf(q, GENS)


@given(counts_st, counts_st, counts_st)
def test_divides_is_transitive(a, b, c):
    x, y, z = _combo(a), _combo(a) + _combo(b), _combo(a) + _combo(b) + _combo(c)
    assert grams.divides(x, y, G4) and grams.divides(y, z, G4) and grams.divides(x, z, G4)


@given(counts_st, counts_st)
def test_divisibility_report(a, b):
    q1, q2 = _combo(a), _combo(a) + _combo(b)
    assert grams.divisibility_report(q1, q2, G4).all_true


def test_divisibility_report_needs_divisibility():
    with pytest.raises(HypothesisViolation):
        grams.divisibility_report(Fraction(1, 3), Fraction(1, 10), G4)


@pytest.mark.parametrize("S,expected", [
    (["13/30", "23/30"], "13/30"),
    (["1/3", "1/10"], "0"),
    (["1/2", "1/4"], "1/4"),
    (["5/6"], "5/6"),
])
def test_mcd_examples(S, expected):
    assert grams.mcd([Fraction(s) for s in S], G4) == Fraction(expected)


def test_mcd_matches_oracle_on_small_elements():
    sample = members_upto(Fraction(1, 10), GENS)[1:9]
    for S in itertools.combinations(sample, 2):
        m = grams.mcd(S, G4)
        assert mcd_bf(S, GENS) == [m]
        assert grams.is_mcd(m, S, G4)


def test_mcd_is_one_of_several():
    # MCDs need not be unique: both are maximal in the full monoid
    S = [Fraction(13, 30), Fraction(1)]
    found = grams.enumerate_mcds(S, G4)
    assert found == [Fraction(1, 10), Fraction(1, 3)]
    assert grams.mcd(S, G4) in found
    assert mcd_bf(S, GENS) == found
    assert all(grams.is_mcd(d, S, G4) for d in found)


def test_mcd_needs_valuation_companion():
    M = validate({"family": "grams-like", "d": {"prefix": [2, 3]}, "p": {"prefix": [5, 7]},
                  "truncation": 2})
    with pytest.raises(HypothesisViolation):
        grams.mcd([Fraction(1, 10)], M)


def test_is_mcd_rejects():
    S = [Fraction(1, 2), Fraction(1, 4)]
    assert not grams.is_mcd(Fraction(0), S, G4)
    assert not grams.is_mcd(Fraction(1, 8), S, G4)
    assert grams.is_mcd(Fraction(1, 4), S, G4)


def test_lift_divisor():
    S = [Fraction(1, 2), Fraction(3, 4)]
    d = Fraction(1, 10)
    up = grams.lift_divisor(d, S, 2, G4)
    assert up == Fraction(1, 2)
    with pytest.raises(HypothesisViolation):
        grams.lift_divisor(Fraction(0), S, 2, G4)


@given(st.lists(counts_st, min_size=2, max_size=3))
@settings(max_examples=40, deadline=None)
def test_enumerate_mcds_bound(parts):
    S = sorted({_combo(c) + 1 for c in parts})
    decs = [grams.canonical_decompose(s, G4) for s in S]
    k = max(d.max_index for d in decs)
    found = grams.enumerate_mcds(S, G4)
    assert len(found) <= math.prod(G4.p_of(i) for i in range(1, k + 1))
    assert all(grams.is_mcd(d, S, G4) for d in found)


def test_chain_links_ascend():
    links = [grams.chain_link(G4, n) for n in range(1, 21)]
    assert all(c.verified for c in links)
    assert [c.successor for c in links] == [Fraction(1, 2**n) for n in range(1, 21)]


def test_explicit_prefix_membership_can_be_unknown():
    M = validate({"family": "grams-like", "d": {"prefix": [1, 2, 4]}, "p": {"prefix": [3, 5, 7]},
                  "truncation": 3})
    assert is_unknown(grams.is_member(Fraction(1, 8), M))
    assert grams.is_member(Fraction(1, 4), M) is True
