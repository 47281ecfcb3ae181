import itertools
from fractions import Fraction

import pytest

from mcd_lab import chains
from mcd_lab.errors import HypothesisViolation, InvariantViolation
from mcd_lab.oracle import mcd_bf, members_upto
from mcd_lab.spec import fingen, grams_classical, validate

G4 = grams_classical(4)
NUM = fingen(["3", "5"])


def test_descent_matches_oracle_on_numerical_semigroup():
    elems = members_upto(30, [3, 5])
    for r in (1, 2, 3):
        for S in itertools.combinations(elems, r):
            assert chains.mcd_descent(S, NUM) in mcd_bf(S, [3, 5])


def test_descent_steps():
    steps = chains.descent_steps([Fraction(10), Fraction(13)], NUM)
    assert [s.divisor for s in steps] == [5, 5]
    assert steps[-1].shifted == (0, 3)


def test_enumeration_starts_at_zero():
    els = chains.enumerate_elements(G4, 1, 2)
    assert els[0] == 0 and els == sorted(els)


def test_tail_decisions():
    yes = chains.divides_all_tail(Fraction(1, 10), Fraction(1, 2), G4)
    assert yes.holds is True and yes.mode == chains.EXACT
    no = chains.divides_all_tail(Fraction(1, 3), Fraction(1, 2), G4)
    assert no.holds is False and no.first_failure == 3


def test_tail_agrees_with_direct_checks():
    from mcd_lab import grams
    for c in members_upto(Fraction(1, 2), [Fraction(1, 3), Fraction(1, 10)]):
        for base in (Fraction(0), Fraction(1, 2), Fraction(7, 20)):
            tail = chains.divides_all_tail(c, base, G4)
            direct = [grams.divides(c, base + chains.chain_term(G4, k), G4) for k in range(1, 40)]
            if tail.holds:
                assert all(direct)
            else:
                assert not direct[tail.first_failure - 1]
                assert all(direct[:tail.first_failure - 1])


def test_four_stages_machine_verified():
    con = chains.build_no_mcd_set(G4, 4)
    assert len(con.stages) == 4
    assert con.all_verified
    assert all(st.certificate.mode == chains.EXACT for st in con.stages)
    assert [st.certificate.witness for st in con.stages] == \
        [Fraction(1, 2), Fraction(7, 20), Fraction(13, 40), Fraction(29, 80)]


def test_bounded_mode_is_never_verified():
    M = validate({"family": "grams-like", "d": {"prefix": [1, 2, 4, 8, 16]},
                  "p": {"prefix": [3, 5, 7, 11, 13]}, "truncation": 5})
    con = chains.build_no_mcd_set(M, 2, kmax=3)
    assert not con.all_verified
    assert all(st.certificate.mode.startswith("bounded") for st in con.stages)


def test_needs_divisor_chain():
    M = validate({"family": "grams-like", "d": {"prefix": [2, 3]}, "p": {"prefix": [5, 7]},
                  "truncation": 2})
    with pytest.raises(HypothesisViolation):
        chains.build_no_mcd_set(M, 1)


def test_invariant_check_catches_shrinking():
    con = chains.build_no_mcd_set(G4, 3)
    st = con.stages[2]
    con.stages[2] = chains.Stage(st.index, (), st.ell, st.branch, st.m, st.excluded,
                                 st.certificate)
    with pytest.raises(InvariantViolation):
        chains.check_stage_invariants(con)
