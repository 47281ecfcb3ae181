from fractions import Fraction

from hypothesis import given, settings, strategies as st

from mcd_lab import rank2
from mcd_lab.errors import is_unknown
from mcd_lab.spec import Rat2, generators, rank2_grams

R1, RK2 = rank2_grams(1), rank2_grams(2)

point_st = st.builds(Rat2, st.fractions(min_value=0, max_value=5, max_denominator=60),
                     st.fractions(min_value=0, max_value=5, max_denominator=60))


@given(point_st, point_st, st.integers(min_value=0, max_value=5))
def test_projections_are_homomorphisms(a, b, k):
    for axis in (1, 2):
        assert rank2.project(a + b, axis) == rank2.project(a, axis) + rank2.project(b, axis)
        assert rank2.project(k * a, axis) == k * rank2.project(a, axis)


def test_generators():
    assert rank2.g(1) == Rat2(Fraction(1, 6), 0)
    assert rank2.h(1) == Rat2(Fraction(1, 10), Fraction(1, 5))
    assert generators(RK2)[2:] == [rank2.g(2), rank2.h(2)]


def test_atoms_by_brute_force():
    gens = generators(RK2)
    assert all(rank2.is_atom2_bf(x, gens) for x in gens)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2),
       st.fractions(min_value=0, max_value=1, max_denominator=12),
       st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_truncated_membership_matches_brute_force(counts, x, y):
    gens = generators(R1)
    base = Rat2(0, 0)
    for c, gi in zip(counts, gens):
        base = base + c * gi
    for q in (base, base + Rat2(x, y)):
        if q.x <= 1 and q.y <= 1:
            assert rank2.is_member2_truncated(q, R1) == rank2.is_member2_bf(q, gens)


def test_membership_examples(R2):
    assert rank2.is_member2(Rat2(1, 0), R2) is True
    assert rank2.is_member2(Rat2(1, 1), R2) is True
    assert rank2.is_member2(Rat2(0, 1), R2) is False
    assert is_unknown(rank2.is_member2(Rat2(Fraction(1, 2**10), 0), R2))


def test_common_divisors_at_one():
    divs = rank2.common_divisors2(R1)
    assert [d.x for d in divs] == [0, Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)]
    assert all(d.y == 0 for d in divs)


def test_no_mcd_report():
    rep = rank2.verify_no_2mcd(RK2)
    assert len(rep.divisors) == 38
    assert rep.no_mcd and rep.claims_hold and rep.zero_one_rejected
    assert rep.chain == [rank2.dyadic_divisor(n) for n in range(1, 6)]


def test_improvement_is_strict():
    d = rank2.dyadic_divisor(3)
    up = rank2.improve_divisor(d, R1)
    assert up == rank2.dyadic_divisor(4)
