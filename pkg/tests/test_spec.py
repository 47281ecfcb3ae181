import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from mcd_lab.errors import SpecValidationError, TruncationExceeded
from mcd_lab.spec import (
    PROVEN,
    VERIFIED,
    Rat2,
    atom_set,
    fingen,
    generators,
    load_spec,
    validate,
)

SPECS = Path(__file__).resolve().parent.parent / "specs"


def _schema():
    return json.loads(resources.files("mcd_lab").joinpath("schemas/spec.schema.json").read_text())


@pytest.mark.parametrize("path", sorted(SPECS.glob("*.json")), ids=lambda p: p.name)
def test_spec_files_match_schema(path):
    jsonschema.validate(json.loads(path.read_text()), _schema())


def test_classical_generators(G):
    assert generators(G) == [Fraction(1, 3), Fraction(1, 10), Fraction(1, 28), Fraction(1, 88)]
    assert G.proof == PROVEN and G.n_is_valuation


def test_mp_generators(MP):
    assert generators(MP)[:3] == [Fraction(1, 10), Fraction(1, 21), Fraction(1, 55)]


def test_rank2_generators(R2):
    gens = generators(R2, 1)
    assert gens == [Rat2(Fraction(1, 6), 0), Rat2(Fraction(1, 10), Fraction(1, 5))]


def test_bad_grams_lists_violation():
    with pytest.raises(SpecValidationError) as err:
        load_spec(SPECS / "bad-grams.json")
    assert "p_1 = 3 divides d_3 = 3" in err.value.violations


def test_every_violation_reported():
    with pytest.raises(SpecValidationError) as err:
        validate({"family": "grams-like", "truncation": 3, "extra": 1,
                  "d": {"prefix": [1, 4, 2]}, "p": {"prefix": [3, 9, 7]}})
    text = " | ".join(err.value.violations)
    assert "unknown keys" in text
    assert "not strictly increasing" in text
    assert "composite" in text


@pytest.mark.parametrize("raw", [
    {"family": "grams-like", "d": {"rule": "pow2"}, "p": {"rule": "nth-prime"}, "truncation": 2},
    {"family": "two-prime", "p": {"prefix": [2, 3, 5]}, "truncation": 2},
    {"family": "two-prime", "p": {"prefix": [5, 3, 7, 11]}, "truncation": 2},
    {"family": "rank2", "truncation": 0},
    {"family": "fingen", "generators": ["1", "0"]},
    {"family": "nope", "truncation": 1},
    {"family": "rank2", "truncation": 2, "d": {"rule": "pow2"}},
])
def test_rejected(raw):
    with pytest.raises(SpecValidationError):
        validate(raw)


def test_prefix_is_verified_only():
    M = validate({"family": "grams-like", "d": {"prefix": [1, 2, 4]},
                  "p": {"prefix": [3, 5, 7]}, "truncation": 3})
    assert M.proof == VERIFIED and M.n_is_valuation
    with pytest.raises(TruncationExceeded):
        M.atom(4)


def test_round_trip(G, MP, R2):
    for M in (G, MP, R2, fingen(["3", "5"])):
        assert validate(M.to_json()) == M


def test_atom_sets(G):
    assert atom_set(G).atoms == tuple(generators(G))
    assert atom_set(fingen(["2", "3", "4"])).atoms == (2, 3)
    from mcd_lab.spec import rank2_grams
    assert len(atom_set(rank2_grams(1)).atoms) == 2
