"""Two-prime reciprocal monoids ``M = <1/(p_n p_(n+2))>``.

Elements are handled through reduced forms ``c + sum c_j / (p_(j-2) p_j)``
with ``p_(-1) = p_0 = 1``: term ``j >= 3`` is the atom ``j - 2``, terms 1 and 2
are ``c_1/p_1`` and ``c_2/p_2`` (both in ``M``), and ``c`` is an integer.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    SearchOverflow,
    Unknown,
)
from .oracle import DEFAULT_NODE_CAP, Factorization
from .primes import factorize
from .rational import format_rat, int_valuation, lcm_of, rat
from .spec import TWO_PRIME, MonoidSpec


def _require(M: MonoidSpec) -> None:
    if M.family != TWO_PRIME:
        raise DomainError(f"expected a two-prime spec, got {M.family}")


def _p(M: MonoidSpec, j: int) -> int:
    return 1 if j <= 0 else M.p_of(j)


def term_value(M: MonoidSpec, j: int) -> Fraction:
    """Value of the ``j``-th reduced-form term ``1/(p_(j-2) p_j)``."""
    return Fraction(1, _p(M, j - 2) * _p(M, j))


@dataclass(frozen=True)
class ReducedForm:
    c: int
    coeffs: tuple[tuple[int, int], ...]

    def value(self, M: MonoidSpec) -> Fraction:
        return self.c + sum((cj * term_value(M, j) for j, cj in self.coeffs), Fraction(0))

    @property
    def max_index(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    def to_json(self) -> dict:
        return {"c": self.c, "coeffs": {str(j): cj for j, cj in self.coeffs}}


def _negative_indices(q: Fraction, M: MonoidSpec) -> list[int]:
    """Indices ``i`` with ``v_(p_i)(q) < 0``; None marks a prime outside the rule."""
    out = []
    for p in factorize(q.denominator):
        out.append(M.prime_index(p))
    return out


def valuation_bound(q, M: MonoidSpec) -> int:
    """``max {i : v_(p_i)(q) < 0}``, 0 when ``q`` is an integer."""
    idx = _negative_indices(Fraction(q), M)
    if any(i is None for i in idx):
        raise DomainError(f"{format_rat(Fraction(q))} has a prime outside the sequence")
    return max(idx, default=0)


def reduce_decomposition(f: Factorization, M: MonoidSpec) -> ReducedForm:
    """Fold a factorization (atom index -> multiplicity) down to a reduced form.

    While the top term ``J`` lies beyond the valuation bound of the value,
    ``p_J`` must divide ``c_J`` and ``c_J/(p_(J-2) p_J)`` equals
    ``p_(J-4) c_J / p_J`` copies of term ``J - 2``.
    """
    _require(M)
    terms: dict[int, int] = {}
    for i, m in f.terms:
        terms[i + 2] = terms.get(i + 2, 0) + m
    value = f.value([M.atom(i) for i in range(1, max((i for i, _ in f.terms), default=0) + 1)])
    n = valuation_bound(value, M)
    while terms:
        J = max(terms)
        if J <= max(n, 2):
            break
        cJ = terms.pop(J)
        pJ = M.p_of(J)
        if cJ % pJ:
            raise InvariantViolation(f"p_{J} does not divide c_{J} = {cJ} above the bound {n}")
        terms[J - 2] = terms.get(J - 2, 0) + _p(M, J - 4) * (cJ // pJ)
    c = 0
    for j in (1, 2):
        if j in terms:
            c += terms[j] // M.p_of(j)
            terms[j] %= M.p_of(j)
    red = ReducedForm(c, tuple(sorted((j, cj) for j, cj in terms.items() if cj)))
    if red.value(M) != value:
        raise InvariantViolation("reduction changed the value")
    return red


def find_reduced_form(q, M: MonoidSpec) -> Union[ReducedForm, None]:
    """A reduced form of ``q``, or None when ``q`` is not in ``M``.

    Top-down over ``j``: only term ``j`` carries ``p_j`` once the terms above are
    fixed, so ``c_j`` is forced modulo ``p_j``.  The least residue suffices:
    ``t p_j`` extra copies of term ``j`` equal ``t p_(j-4)`` copies of term
    ``j - 2``, so no branching is needed.  Terms 1, 2 and ``c`` reduce to
    membership of ``q p_1 p_2`` in the numerical semigroup ``<p_1, p_2>``.
    """
    _require(M)
    q = rat(q)
    idx = _negative_indices(q, M)
    if any(i is None for i in idx):
        return None
    r = q
    coeffs = []
    for j in range(max(idx, default=0), 2, -1):
        pj = M.p_of(j)
        v = int_valuation(r.numerator, pj) - int_valuation(r.denominator, pj) if r else 0
        if v < -1:
            return None
        if v == 0 or r == 0:
            continue
        # c_j / p_(j-2) == r * p_j  (mod p_j)
        t = r * pj
        cj = t.numerator * _p(M, j - 2) * pow(t.denominator, -1, pj) % pj
        r -= cj * term_value(M, j)
        if r < 0:
            return None
        coeffs.append((j, cj))
    p1, p2 = M.p_of(1), M.p_of(2)
    t = r * p1 * p2
    if t.denominator != 1:
        return None
    N = t.numerator
    a = N * pow(p1, -1, p2) % p2
    if a * p1 > N:
        return None
    b = (N - a * p1) // p2
    # N = a p1 + b p2 gives r = a/p2 + b/p1
    c2, c1 = a, b
    c = c1 // p1 + c2 // p2
    c1, c2 = c1 % p1, c2 % p2
    coeffs += [(j, cj) for j, cj in ((1, c1), (2, c2)) if cj]
    red = ReducedForm(c, tuple(sorted(coeffs)))
    if red.value(M) != q:
        raise InvariantViolation("reduced form does not reconstruct q")
    return red


def is_member(q, M: MonoidSpec) -> Union[bool, Unknown]:
    return find_reduced_form(q, M) is not None


def divides(a, b, M: MonoidSpec) -> bool:
    diff = Fraction(b) - Fraction(a)
    if diff < 0:
        return False
    return is_member(diff, M)


def _all_divide(d: Fraction, S, M: MonoidSpec) -> bool:
    return all(divides(d, s, M) for s in S)


def _ascending_members(gens: list[Fraction], bound: Fraction, node_cap: int):
    """Distinct elements of ``<gens>`` up to ``bound`` in ascending order."""
    gens = sorted({g for g in gens if g <= bound})
    L = lcm_of(g.denominator for g in gens) if gens else 1
    w = [int(g * L) for g in gens]
    top = int(bound * L)
    heap = [(0, 0)]
    last = -1
    popped = 0
    while heap:
        v, i = heapq.heappop(heap)
        popped += 1
        if popped > node_cap:
            raise SearchOverflow(f"candidate enumeration exceeded node cap {node_cap}", popped)
        # each multiset is generated once, along nondecreasing generator index
        for k in range(i, len(w)):
            if v + w[k] <= top:
                heapq.heappush(heap, (v + w[k], k))
        if v != last:
            last = v
            yield Fraction(v, L)


def search_generators(M: MonoidSpec, n: int) -> list[Fraction]:
    """Generators of the bounded forms ``d0 + sum_(j<=n) d_j/(p_(j-2) p_j)``."""
    return [Fraction(1)] + [term_value(M, j) for j in range(1, n + 1)]


def mcd(S, M: MonoidSpec, node_cap: int = DEFAULT_NODE_CAP) -> Fraction:
    """Largest common divisor of bounded form, which is an MCD of ``S``.

    ``n`` is the top prime index occurring in ``S`` plus 5.  A candidate ``d``
    divides ``m = min S`` exactly when ``e = m - d`` is a member, and ``e`` then
    has a form bounded by ``n`` as well, so scanning ``e`` upward through the
    bounded forms visits the candidates in decreasing order; the first one
    dividing every element wins.
    """
    _require(M)
    S = sorted({rat(s) for s in S})
    if not S:
        raise DomainError("S must be nonempty")
    bad = [format_rat(s) for s in S if not is_member(s, M)]
    if bad:
        raise HypothesisViolation(f"not members of M: {bad}")
    if all(s.denominator == 1 for s in S):
        result = S[0]
        n = 0
    else:
        n = max(valuation_bound(s, M) for s in S) + 5
        m = S[0]
        result = None
        for e in _ascending_members(search_generators(M, n), m, node_cap):
            d = m - e
            if is_member(d, M) and _all_divide(d, S[1:], M):
                result = d
                break
        if result is None:
            raise InvariantViolation("no common divisor found (0 always divides)")
    _check_post(result, S, M, n)
    return result


def _check_post(result: Fraction, S, M: MonoidSpec, n: int) -> None:
    if not _all_divide(result, S, M):
        raise InvariantViolation(f"{format_rat(result)} does not divide every element of S")
    for i in range(1, n + 6):
        if _all_divide(result + M.atom(i), S, M):
            raise InvariantViolation(f"atom {i} extends {format_rat(result)}")


@dataclass(frozen=True)
class ChainWitness:
    parity: str
    n: int
    index: int
    ideal: Fraction
    successor: Fraction
    atom: Fraction
    multiplicity: int
    verified: bool

    @property
    def difference(self) -> Fraction:
        return self.ideal - self.successor

    def to_json(self) -> dict:
        return {"parity": self.parity, "n": self.n, "index": self.index,
                "ideal": format_rat(self.ideal), "successor": format_rat(self.successor),
                "difference": {"atom": format_rat(self.atom), "multiplicity": self.multiplicity},
                "verified": self.verified}


def chain_witness(M: MonoidSpec, parity: str, n: int) -> ChainWitness:
    """Link ``n`` of the chain ``(1/p_(2n-1) + M)`` (odd) or ``(1/p_(2n) + M)`` (even)."""
    _require(M)
    if parity not in ("odd", "even"):
        raise DomainError("parity must be 'odd' or 'even'")
    if n < 1:
        raise DomainError("n must be positive")
    idx = 2 * n - 1 if parity == "odd" else 2 * n
    a, b = M.p_of(idx), M.p_of(idx + 2)
    ideal, succ, atom = Fraction(1, a), Fraction(1, b), M.atom(idx)
    mult = b - a
    verified = (ideal - succ == mult * atom and mult > 0
                and is_member(succ, M) and divides(succ, ideal, M))
    return ChainWitness(parity, n, idx, ideal, succ, atom, mult, verified)
