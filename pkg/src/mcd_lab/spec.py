"""Monoid family descriptors, validation and generator streams.

Four families are supported:

``fingen``
    ``<g_1, ..., g_K>`` for an explicit list of positive rationals.
``grams-like``
    ``M = <1/(d_n p_n)>`` with companion ``N = <1/d_n>``.
``two-prime``
    ``M = <1/(p_n p_(n+2))>`` for a strictly increasing prime sequence.
``rank2``
    the submonoid of Q_{>=0}^2 generated by ``(1/(2^n p_2n), 0)`` and
    ``(1/(2^n p_(2n+1)), 1/p_(2n+1))`` with ``p`` the primes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DomainError, SpecValidationError, TruncationExceeded
from .primes import NTH_ODD_PRIME, NTH_PRIME, PrimeIndexRule, is_prime
from .rational import format_rat, rat

FINGEN = "fingen"
GRAMS = "grams-like"
TWO_PRIME = "two-prime"
RANK2 = "rank2"
FAMILIES = (FINGEN, GRAMS, TWO_PRIME, RANK2)

PROVEN = "proven-for-all"
VERIFIED = "verified-up-to-K"


def weaker(*modes: str) -> str:
    """Combine proof markers; any bounded verification wins."""
    return VERIFIED if VERIFIED in modes else PROVEN


@dataclass(frozen=True, order=True)
class Rat2:
    """Point of Q_{>=0}^2; ordered lexicographically by (x, y)."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def __add__(self, other: "Rat2") -> "Rat2":
        return Rat2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Rat2") -> "Rat2":
        # signed result; callers test nonnegativity
        return Rat2(self.x - other.x, self.y - other.y)

    def __rmul__(self, k: int) -> "Rat2":
        return Rat2(k * self.x, k * self.y)

    def is_nonnegative(self) -> bool:
        return self.x >= 0 and self.y >= 0

    def __str__(self):
        return f"({format_rat(self.x)}, {format_rat(self.y)})"

    def to_json(self) -> list[str]:
        return [format_rat(self.x), format_rat(self.y)]


@dataclass(frozen=True)
class DRule:
    """The denominator sequence ``d_n`` of a Grams-like monoid."""

    rule: str
    prefix: tuple[int, ...] = ()

    @property
    def is_named(self) -> bool:
        return self.rule == "pow2"

    @property
    def length(self) -> Optional[int]:
        return None if self.is_named else len(self.prefix)

    def nth_of(self, n: int) -> int:
        if n < 1:
            raise DomainError("sequence indices start at 1")
        if self.rule == "pow2":
            return 1 << (n - 1)
        if n > len(self.prefix):
            raise TruncationExceeded(
                f"index {n} beyond explicit d-prefix of length {len(self.prefix)}")
        return self.prefix[n - 1]

    def to_json(self) -> dict:
        return {"rule": "pow2"} if self.is_named else {"prefix": list(self.prefix)}


@dataclass(frozen=True)
class MonoidSpec:
    family: str
    truncation: int
    gens: tuple[Fraction, ...] = ()
    d: Optional[DRule] = None
    p: Optional[PrimeIndexRule] = None
    n_is_valuation: bool = False
    proof: str = PROVEN
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # sequence access -------------------------------------------------
    # explicit prefixes are only trusted up to the truncation index
    def _known(self, n: int, rule) -> None:
        if not rule.is_named and n > self.truncation:
            raise TruncationExceeded(f"index {n} beyond truncation K={self.truncation}")

    def d_of(self, n: int) -> int:
        self._known(n, self.d)
        return self.d.nth_of(n)

    def p_of(self, n: int) -> int:
        if self.family == TWO_PRIME:
            # generator n uses p_(n+2)
            if not self.p.is_named and n > self.truncation + 2:
                raise TruncationExceeded(f"p_{n} beyond truncation K={self.truncation}")
        else:
            self._known(n, self.p)
        return self.p.nth_of(n)

    def prime_index(self, p: int) -> Optional[int]:
        idx = self.p.prime_index(p)
        if idx is not None and not self.p.is_named:
            self.p_of(idx)
        return idx

    def atom(self, n: int) -> Fraction:
        """The ``n``-th defining generator of a rank-1 family."""
        if self.family == GRAMS:
            return Fraction(1, self.d_of(n) * self.p_of(n))
        if self.family == TWO_PRIME:
            return Fraction(1, self.p_of(n) * self.p_of(n + 2))
        if self.family == FINGEN:
            if n > len(self.gens):
                raise TruncationExceeded(f"generator {n} beyond the {len(self.gens)} given")
            return self.gens[n - 1]
        raise DomainError(f"atom(n) is undefined for family {self.family}")

    @property
    def max_index(self) -> Optional[int]:
        """Largest usable sequence index, or None when unbounded."""
        if self.family == FINGEN:
            return len(self.gens)
        if self.family == GRAMS:
            lens = [x for x in (self.d.length, self.p.length) if x is not None]
            return min(lens) if lens else None
        if self.family == TWO_PRIME:
            return None if self.p.length is None else self.p.length - 2
        return None

    def with_truncation(self, k: int) -> "MonoidSpec":
        return validate(dict(self.to_json(), truncation=k))

    def to_json(self) -> dict:
        out: dict = {"family": self.family, "truncation": self.truncation}
        if self.family == FINGEN:
            out["generators"] = [format_rat(g) for g in self.gens]
        if self.d is not None:
            out["d"] = self.d.to_json()
        if self.p is not None and self.family != RANK2:
            out["p"] = self.p.to_json()
        if self.family == RANK2:
            out["p"] = {"rule": NTH_PRIME}
        return out


_ALLOWED_KEYS = {"family", "d", "p", "truncation", "generators"}


def _parse_p(raw, violations) -> Optional[PrimeIndexRule]:
    if not isinstance(raw, dict) or len(raw) != 1 or not ({"rule", "prefix"} & raw.keys()):
        violations.append(f"p must be {{'rule': ...}} or {{'prefix': [...]}}, got {raw!r}")
        return None
    if "rule" in raw:
        if raw["rule"] not in (NTH_PRIME, NTH_ODD_PRIME):
            violations.append(f"unknown p rule {raw['rule']!r}")
            return None
        return PrimeIndexRule(raw["rule"])
    primes = raw["prefix"]
    if not isinstance(primes, list) or not primes or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in primes):
        violations.append("p prefix must be a nonempty list of integers")
        return None
    bad = [x for x in primes if not is_prime(x)]
    if bad:
        violations.append(f"composite entries in p: {bad}")
    if len(set(primes)) != len(primes):
        violations.append("repeated primes in p")
    if bad:
        return None
    return PrimeIndexRule.explicit(primes)


def _parse_d(raw, violations) -> Optional[DRule]:
    if raw == {"rule": "pow2"}:
        return DRule("pow2")
    if isinstance(raw, dict) and raw.keys() == {"prefix"}:
        ds = raw["prefix"]
        if not isinstance(ds, list) or not ds or not all(
                isinstance(x, int) and not isinstance(x, bool) and x > 0 for x in ds):
            violations.append("d prefix must be a nonempty list of positive integers")
            return None
        if any(a >= b for a, b in zip(ds, ds[1:])):
            violations.append("d is not strictly increasing")
        return DRule("prefix", tuple(ds))
    violations.append(f"d must be {{'rule': 'pow2'}} or {{'prefix': [...]}}, got {raw!r}")
    return None


def validate(raw) -> MonoidSpec:
    """Validate a raw descriptor (the JSON config as a dict).

    Raises :class:`SpecValidationError` listing every violated constraint.
    """
    if isinstance(raw, MonoidSpec):
        raw = raw.to_json()
    violations: list[str] = []
    if not isinstance(raw, dict):
        raise SpecValidationError(["spec must be a JSON object"])
    unknown = sorted(set(raw) - _ALLOWED_KEYS)
    if unknown:
        violations.append(f"unknown keys: {unknown}")
    family = raw.get("family")
    if family not in FAMILIES:
        violations.append(f"family must be one of {list(FAMILIES)}, got {family!r}")
        raise SpecValidationError(violations)
    k = raw.get("truncation")
    if family == FINGEN and k is None:
        k = len(raw.get("generators") or [])
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        violations.append(f"truncation must be a positive integer, got {k!r}")
        raise SpecValidationError(violations)

    inapplicable = {
        FINGEN: ("d", "p"), GRAMS: ("generators",), TWO_PRIME: ("d", "generators"),
        RANK2: ("d", "generators"),
    }[family]
    for key in inapplicable:
        if key in raw:
            violations.append(f"key {key!r} does not apply to family {family}")

    if family == FINGEN:
        spec = _validate_fingen(raw, k, violations)
    elif family == GRAMS:
        spec = _validate_grams(raw, k, violations)
    elif family == TWO_PRIME:
        spec = _validate_two_prime(raw, k, violations)
    else:
        spec = _validate_rank2(raw, k, violations)
    if violations:
        raise SpecValidationError(violations)
    return spec


def _validate_fingen(raw, k, violations):
    gens_raw = raw.get("generators")
    if not isinstance(gens_raw, list) or not gens_raw:
        violations.append("fingen needs a nonempty generators list")
        return None
    gens = []
    for g in gens_raw:
        try:
            q = rat(g)
        except DomainError as exc:
            violations.append(str(exc))
            continue
        if q == 0:
            violations.append("generators must be positive")
        gens.append(q)
    if k > len(gens_raw):
        violations.append(f"truncation {k} exceeds the {len(gens_raw)} generators given")
    return MonoidSpec(FINGEN, k, gens=tuple(gens[:k]))


def _validate_grams(raw, k, violations):
    d = _parse_d(raw.get("d"), violations)
    p = _parse_p(raw.get("p"), violations)
    if d is None or p is None:
        return None
    for rule, name in ((d, "d"), (p, "p")):
        if rule.length is not None and k > rule.length:
            violations.append(f"truncation {k} exceeds the {name} prefix length {rule.length}")
    if violations:
        return None
    if d.is_named and p.is_named:
        if p.rule == NTH_PRIME:
            # 2 = p_1 divides d_2 = 2 whatever K is
            violations.append("p_1 = 2 divides d_2 = 2 (p_n must not divide any d_m)")
            return None
        proof = PROVEN
        valuation = True
    else:
        proof = VERIFIED
        n_check = k
        ds = [d.nth_of(m) for m in range(1, n_check + 1)]
        ps = [p.nth_of(n) for n in range(1, n_check + 1)]
        for n, pn in enumerate(ps, 1):
            for m, dm in enumerate(ds, 1):
                if dm % pn == 0:
                    violations.append(f"p_{n} = {pn} divides d_{m} = {dm}")
        valuation = all(b % a == 0 for a, b in zip(ds, ds[1:]))
    return MonoidSpec(GRAMS, k, d=d, p=p, n_is_valuation=valuation, proof=proof)


def _validate_two_prime(raw, k, violations):
    p = _parse_p(raw.get("p", {"rule": NTH_PRIME}), violations)
    if p is None:
        return None
    proof = PROVEN
    if not p.is_named:
        proof = VERIFIED
        if any(a >= b for a, b in zip(p.prefix, p.prefix[1:])):
            violations.append("p is not strictly increasing")
        if k + 2 > len(p.prefix):
            violations.append(
                f"truncation {k} needs {k + 2} primes but the prefix has {len(p.prefix)}")
    return MonoidSpec(TWO_PRIME, k, p=p, proof=proof)


def _validate_rank2(raw, k, violations):
    p = raw.get("p", {"rule": NTH_PRIME})
    if p != {"rule": NTH_PRIME}:
        violations.append("rank2 is defined with p = nth-prime only")
        return None
    return MonoidSpec(RANK2, k, p=PrimeIndexRule(NTH_PRIME))


def load_spec(path) -> MonoidSpec:
    with open(path) as fh:
        return validate(json.load(fh))


def grams_classical(k: int = 4) -> MonoidSpec:
    return validate({"family": GRAMS, "d": {"rule": "pow2"}, "p": {"rule": NTH_ODD_PRIME},
                     "truncation": k})


def m_p(k: int = 6) -> MonoidSpec:
    return validate({"family": TWO_PRIME, "p": {"rule": NTH_PRIME}, "truncation": k})


def rank2_grams(k: int = 3) -> MonoidSpec:
    return validate({"family": RANK2, "truncation": k})


def fingen(gens, k: Optional[int] = None) -> MonoidSpec:
    raw = {"family": FINGEN, "generators": [format_rat(rat(g)) for g in gens]}
    if k is not None:
        raw["truncation"] = k
    return validate(raw)


def generators(spec: MonoidSpec, k: Optional[int] = None):
    """First ``k`` defining generators (defaults to the descriptor's truncation)."""
    k = spec.truncation if k is None else k
    if spec.family == RANK2:
        out = []
        for n in range(1, k + 1):
            a, b = spec.p_of(2 * n), spec.p_of(2 * n + 1)
            out.append(Rat2(Fraction(1, 2**n * a), 0))
            out.append(Rat2(Fraction(1, 2**n * b), Fraction(1, b)))
        return out
    return [spec.atom(n) for n in range(1, k + 1)]


@dataclass(frozen=True)
class AtomSet:
    atoms: tuple
    provenance: str
    proof: str

    def to_json(self) -> dict:
        return {
            "atoms": [a.to_json() if isinstance(a, Rat2) else format_rat(a) for a in self.atoms],
            "provenance": self.provenance,
            "proof": self.proof,
        }


def atom_set(spec: MonoidSpec, k: Optional[int] = None, node_cap: int = 10**7) -> AtomSet:
    """Atoms among the first ``k`` generators.

    Grams-like and two-prime families have structural atom sets (every
    defining generator is an atom).  Other families fall back to brute force
    over the truncation.
    """
    k = spec.truncation if k is None else k
    gens = generators(spec, k)
    if spec.family == GRAMS:
        return AtomSet(tuple(gens), "structural (grams-like: each generator owns a prime)",
                       spec.proof)
    if spec.family == TWO_PRIME:
        return AtomSet(tuple(gens), "structural (two-prime: each generator owns a prime)",
                       spec.proof)
    if spec.family == FINGEN:
        from .oracle import is_atom_bf

        atoms = tuple(g for g in gens if is_atom_bf(g, gens, node_cap=node_cap))
        return AtomSet(atoms, "brute-force fallback", VERIFIED)
    from .rank2 import is_atom2_bf

    atoms = tuple(g for g in gens if is_atom2_bf(g, gens))
    return AtomSet(atoms, "brute-force fallback", VERIFIED)
