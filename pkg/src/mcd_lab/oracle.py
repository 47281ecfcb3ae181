"""Brute-force ground truth on finitely generated truncations ``<g_1, ..., g_K>``.

Everything here scales the generators by the lcm ``L`` of their
denominators and answers integer questions: a coefficient DFS for
factorizations and membership, and a reachability sieve over ``[0, max S * L]``
for divisor questions.  No structural theorem about any monoid family is
used, so these answers can be held against the structural algorithms.

Answers concern the truncation only.  A query whose denominator does not
divide ``L`` is outside the truncation's support and is refused as a
non-member ("unreachable valuation").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernels
from .errors import DomainError, HypothesisViolation
from .rational import common_denominator, format_rat, rat

DEFAULT_NODE_CAP = 10**7

UNREACHABLE = "unreachable valuation"
FOUND = "solution found"
NO_SOLUTION = "no solution"


@dataclass(frozen=True, order=True)
class Factorization:
    """Multiset of generators: sorted ``(index, multiplicity)`` pairs, 1-based."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "Factorization":
        return cls(tuple((i + 1, c) for i, c in enumerate(counts) if c))

    @classmethod
    def from_map(cls, terms: dict[int, int]) -> "Factorization":
        if any(i < 1 or m < 0 for i, m in terms.items()):
            raise DomainError("indices start at 1 and multiplicities are nonnegative")
        return cls(tuple(sorted((i, m) for i, m in terms.items() if m)))

    def value(self, gens: Sequence[Fraction]) -> Fraction:
        return sum((m * gens[i - 1] for i, m in self.terms), Fraction(0))

    def length(self) -> int:
        return sum(m for _, m in self.terms)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def to_json(self) -> dict[str, int]:
        return {str(i): m for i, m in self.terms}


class _Scaled:
    """Generators scaled to integers; DFS order is decreasing generator value."""

    def __init__(self, gens: Sequence[Fraction]):
        gens = [rat(g) for g in gens]
        if not gens or any(g == 0 for g in gens):
            raise DomainError("the oracle needs a nonempty list of positive generators")
        self.gens = gens
        self.L = common_denominator(gens)
        self.weights = [int(g * self.L) for g in gens]
        self.order = sorted(range(len(gens)), key=lambda i: (-self.weights[i], i))

    def scale(self, q: Fraction):
        """Integer image of ``q``, or None when ``q`` is off the truncation's support."""
        t = Fraction(q) * self.L
        return t.numerator if t.denominator == 1 else None

    def solve(self, target: int, limit: int, node_cap: int) -> list[tuple[int, ...]]:
        ordered = [self.weights[i] for i in self.order]
        sols, _ = _kernels.dfs_solve(ordered, target, limit, node_cap)
        out = []
        for s in sols:
            counts = [0] * len(self.gens)
            for pos, i in enumerate(self.order):
                counts[i] = s[pos]
            out.append(tuple(counts))
        return out

    def reach(self, bound: int, node_cap: int) -> bytearray:
        return _kernels.reach_table(self.weights, bound, node_cap)


def _set_bits(table) -> list[int]:
    out = []
    i = table.find(1)
    while i != -1:
        out.append(i)
        i = table.find(1, i + 1)
    return out


def factorize_all(q, gens, node_cap: int = DEFAULT_NODE_CAP) -> set[Factorization]:
    """Every factorization of ``q`` over ``gens``; empty when ``q`` is not a member."""
    q = rat(q)
    sc = _Scaled(gens)
    t = sc.scale(q)
    if t is None:
        return set()
    return {Factorization.from_counts(c) for c in sc.solve(t, 0, node_cap)}


def membership_bf(q, gens, node_cap: int = DEFAULT_NODE_CAP) -> tuple[bool, str]:
    """Membership in the truncation together with the reason for the answer."""
    q = rat(q)
    sc = _Scaled(gens)
    t = sc.scale(q)
    if t is None:
        return False, UNREACHABLE
    found = sc.solve(t, 1, node_cap)
    return (True, FOUND) if found else (False, NO_SOLUTION)


def is_member_bf(q, gens, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return membership_bf(q, gens, node_cap)[0]


def _divisor_mask(S: Iterable, gens, node_cap: int):
    S = sorted({rat(s) for s in S})
    if not S:
        raise DomainError("S must be nonempty")
    sc = _Scaled(gens)
    targets = [sc.scale(s) for s in S]
    if any(t is None for t in targets):
        raise HypothesisViolation("every element of S must lie in the truncation")
    reach = sc.reach(max(targets), node_cap)
    missing = [format_rat(s) for s, t in zip(S, targets) if not reach[t]]
    if missing:
        raise HypothesisViolation(f"not members of the truncation: {missing}")
    return sc, _kernels.cd_mask(reach, targets, min(targets))


def common_divisors_bf(S, gens, node_cap: int = DEFAULT_NODE_CAP) -> list[Fraction]:
    """All common divisors of ``S`` in the truncation, ascending by value."""
    sc, mask = _divisor_mask(S, gens, node_cap)
    return [Fraction(d, sc.L) for d in _set_bits(mask)]


def mcd_bf(S, gens, node_cap: int = DEFAULT_NODE_CAP) -> list[Fraction]:
    """Maximal common divisors of ``S`` in the truncation, ascending by value.

    A common divisor ``d`` is maximal iff no ``d + g_i`` is a common divisor:
    if ``d + e`` were one for a nonzero member ``e``, any generator ``g_i``
    occurring in a factorization of ``e`` would give one too.
    """
    sc, mask = _divisor_mask(S, gens, node_cap)
    top = _kernels.maximal_mask(mask, sc.weights)
    return [Fraction(d, sc.L) for d in _set_bits(top)]


def is_atom_bf(a, gens, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff no ``0 < b < a`` has both ``b`` and ``a - b`` in the truncation."""
    a = rat(a)
    if a == 0:
        raise DomainError("0 is a unit, not an atom")
    sc = _Scaled(gens)
    t = sc.scale(a)
    if t is None:
        raise HypothesisViolation(f"{format_rat(a)} is not in the truncation")
    reach = sc.reach(t, node_cap)
    if not reach[t]:
        raise HypothesisViolation(f"{format_rat(a)} is not in the truncation")
    split = _kernels.cd_mask(reach, [t], t)
    return split.count(1) == 2


def members_upto(bound, gens, node_cap: int = DEFAULT_NODE_CAP) -> list[Fraction]:
    """Elements of the truncation in ``[0, bound]``, ascending."""
    bound = rat(bound)
    sc = _Scaled(gens)
    top = int(bound * sc.L)
    return [Fraction(v, sc.L) for v in _set_bits(sc.reach(top, node_cap))]
