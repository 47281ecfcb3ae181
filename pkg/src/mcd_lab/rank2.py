"""The rank-2 monoid generated by ``g_n = (1/(2^n p_2n), 0)`` and
``h_n = (1/(2^n p_(2n+1)), 1/p_(2n+1))``, which is atomic but not 2-MCD:
the pair ``{(1,0), (1,1)}`` has common divisors ``(1 - 1/2^n, 0)`` climbing
forever and no maximal one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    SearchOverflow,
    Unknown,
    is_unknown,
)
from .oracle import DEFAULT_NODE_CAP
from .primes import factorize, nth_prime, prime_pi_index
from .rational import int_valuation
from .spec import RANK2, MonoidSpec, Rat2, generators


def project(point: Rat2, axis: int) -> Fraction:
    """The coordinate projections ``pi_1`` and ``pi_2``."""
    if axis == 1:
        return point.x
    if axis == 2:
        return point.y
    raise DomainError("axis must be 1 or 2")


def _require(M: MonoidSpec) -> None:
    if M.family != RANK2:
        raise DomainError(f"expected a rank2 spec, got {M.family}")


def g(n: int) -> Rat2:
    return Rat2(Fraction(1, 2**n * nth_prime(2 * n)), 0)


def h(n: int) -> Rat2:
    q = nth_prime(2 * n + 1)
    return Rat2(Fraction(1, 2**n * q), Fraction(1, q))


def _vp(q: Fraction, p: int) -> int:
    if q == 0:
        return 0
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def _residue(q: Fraction, p: int, scale: int) -> int:
    """The ``c`` in ``[0, p)`` with ``q - c/(scale p)`` free of ``p`` in the denominator."""
    t = q * p
    return t.numerator * scale * pow(t.denominator, -1, p) % p


@dataclass(frozen=True)
class _Analysis:
    verdict: Optional[bool]  # None: depends only on the dyadic depth
    x_rest: Fraction = Fraction(0)
    y_rest: int = 0
    need: int = 0  # largest generator index forced by odd primes
    reason: str = ""


def _analyse(q: Rat2) -> _Analysis:
    """Strip the forced odd-prime parts of ``q``.

    ``p_2n`` lives only in ``g_n`` and ``p_(2n+1)`` only in ``h_n``, so their
    multiplicities are fixed modulo those primes, and the residue of ``h_n``
    read from ``x`` must agree with the one read from ``y``.  What is left is
    ``(x', y')`` with ``y'`` an integer: the extra whole blocks of ``p_2n``
    copies of ``g_n`` add ``(1/2^n, 0)``, those of ``h_n`` add ``(1/2^n, 1)``.
    """
    x, y = q.x, q.y
    if x < 0 or y < 0:
        return _Analysis(False, reason="negative coordinate")
    g_res: dict[int, int] = {}
    hx_res: dict[int, int] = {}
    hy_res: dict[int, int] = {}
    for p in factorize(y.denominator) if y else ():
        idx = prime_pi_index(p)
        if idx < 3 or idx % 2 == 0:
            return _Analysis(False, reason=f"prime {p} cannot occur in a second coordinate")
        if _vp(y, p) < -1:
            return _Analysis(False, reason=f"v_{p}(y) < -1")
        hy_res[(idx - 1) // 2] = _residue(y, p, 1)
    for p in factorize(x.denominator) if x else ():
        if p == 2:
            continue
        if _vp(x, p) < -1:
            return _Analysis(False, reason=f"v_{p}(x) < -1")
        idx = prime_pi_index(p)
        n = idx // 2
        (g_res if idx % 2 == 0 else hx_res)[n] = _residue(x, p, 2**n)
    if hx_res != hy_res:
        return _Analysis(False, reason="h_n residues differ between the coordinates")
    xr = x - sum((Fraction(c, 2**n * nth_prime(2 * n)) for n, c in g_res.items()), Fraction(0))
    xr -= sum((Fraction(c, 2**n * nth_prime(2 * n + 1)) for n, c in hx_res.items()), Fraction(0))
    yr = y - sum((Fraction(c, nth_prime(2 * n + 1)) for n, c in hy_res.items()), Fraction(0))
    if xr < 0:
        return _Analysis(False, reason="negative first-coordinate remainder")
    if yr.denominator != 1:
        raise InvariantViolation("second-coordinate remainder must be integral")
    if xr == 0 and yr > 0:
        return _Analysis(False, reason="second coordinate left with nothing in the first")
    need = max([*g_res, *hx_res], default=0)
    return _Analysis(None, xr, int(yr), need)


def _dyadic_fits(a: _Analysis, K: int) -> bool:
    t = a.x_rest * 2**K
    return t.denominator == 1 and t.numerator >= a.y_rest and (a.y_rest == 0 or K >= 1)


def is_member2(q: Rat2, M: MonoidSpec) -> Union[bool, Unknown]:
    """Membership in the full monoid, decided within truncation ``K`` when possible.

    True and False answers are definitive; ``Unknown(K)`` means the first ``K``
    generator pairs do not suffice but more might.
    """
    _require(M)
    a = _analyse(q)
    if a.verdict is not None:
        return a.verdict
    K = M.truncation
    if a.need <= K and _dyadic_fits(a, K):
        return True
    return Unknown(K, "needs generators beyond the truncation")


def is_member2_truncated(q: Rat2, M: MonoidSpec) -> bool:
    """Membership in the submonoid generated by ``g_n, h_n`` with ``n <= K``."""
    _require(M)
    a = _analyse(q)
    if a.verdict is not None:
        return a.verdict
    return a.need <= M.truncation and _dyadic_fits(a, M.truncation)


def combinations_upto(gens: Sequence[Rat2], bound: Rat2,
                      node_cap: int = DEFAULT_NODE_CAP) -> set[Rat2]:
    """Every sum of generators lying componentwise below ``bound`` (brute force)."""
    out = set()
    nodes = 0

    def rec(i, cur):
        nonlocal nodes
        if i == len(gens):
            out.add(cur)
            return
        gi = gens[i]
        while cur.x <= bound.x and cur.y <= bound.y:
            nodes += 1
            if nodes > node_cap:
                raise SearchOverflow(f"enumeration exceeded node cap {node_cap}", nodes)
            rec(i + 1, cur)
            cur = cur + gi

    rec(0, Rat2(0, 0))
    return out


def is_member2_bf(q: Rat2, gens: Sequence[Rat2], node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return q in combinations_upto(gens, q, node_cap)


def is_atom2_bf(a: Rat2, gens: Sequence[Rat2], node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff ``a`` is a nonzero member with no split ``a = b + c`` into nonzero members."""
    if a == Rat2(0, 0):
        raise DomainError("0 is a unit, not an atom")
    below = combinations_upto(gens, a, node_cap)
    if a not in below:
        raise HypothesisViolation(f"{a} is not in the truncation")
    zero = Rat2(0, 0)
    return not any(b != zero and b != a and (a - b) in below for b in below)


ONE_ZERO = Rat2(1, 0)
ONE_ONE = Rat2(1, 1)

SEARCH_HEADROOM = 8


def _deep(M: MonoidSpec) -> MonoidSpec:
    return M.with_truncation(M.truncation + SEARCH_HEADROOM)


def _divides(d: Rat2, q: Rat2, M: MonoidSpec):
    diff = q - d
    if not diff.is_nonnegative():
        return False
    return is_member2(diff, M)


def is_common_divisor(d: Rat2, M: MonoidSpec) -> Union[bool, Unknown]:
    """Whether ``d`` divides both ``(1, 0)`` and ``(1, 1)``."""
    ins = is_member2(d, M)
    if is_unknown(ins) or not ins:
        return ins
    for target in (ONE_ZERO, ONE_ONE):
        ok = _divides(d, target, M)
        if is_unknown(ok) or not ok:
            return ok
    return True


def dyadic_divisor(n: int) -> Rat2:
    return Rat2(1 - Fraction(1, 2**n), 0)


def improve_divisor(d: Rat2, M: MonoidSpec) -> Union[Rat2, Unknown]:
    """The least ``(1 - 1/2^n, 0)`` strictly above the common divisor ``d``.

    Searches ``n <= K + 8`` with membership in the matching truncation;
    returns Unknown past that bound.
    """
    _require(M)
    deep = _deep(M)
    pre = is_common_divisor(d, deep)
    if is_unknown(pre) or not pre:
        raise HypothesisViolation(f"{d} is not a verified common divisor of (1,0) and (1,1)")
    for n in range(1, deep.truncation + 1):
        cand = dyadic_divisor(n)
        if cand != d and _divides(d, cand, deep) is True:
            return cand
    return Unknown(deep.truncation, "no (1 - 1/2^n, 0) above d found")


def common_divisors2(M: MonoidSpec, node_cap: int = DEFAULT_NODE_CAP) -> list[Rat2]:
    """Common divisors of ``{(1,0), (1,1)}`` in the truncation, lexicographic.

    A common divisor of ``(1, 0)`` has zero second coordinate, so only sums of
    the ``g_n`` up to ``(1, 0)`` are candidates.
    """
    _require(M)
    gs = [x for x in generators(M) if x.y == 0]
    out = []
    for d in sorted(combinations_upto(gs, ONE_ZERO, node_cap)):
        if all(is_member2_truncated(t - d, M) for t in (ONE_ZERO, ONE_ONE)):
            out.append(d)
    return out


@dataclass(frozen=True)
class DivisorEntry:
    divisor: Rat2
    claim_n: Optional[int]
    improved: Optional[Rat2]
    improvement_verified: bool

    def to_json(self) -> dict:
        return {"divisor": self.divisor.to_json(), "claim_n": self.claim_n,
                "improved": None if self.improved is None else self.improved.to_json(),
                "improvement_verified": self.improvement_verified}


@dataclass
class DivisorReport:
    truncation: int
    entries: list[DivisorEntry] = field(default_factory=list)
    zero_one_rejected: bool = False
    chain: list[Rat2] = field(default_factory=list)

    @property
    def divisors(self) -> list[Rat2]:
        return [e.divisor for e in self.entries]

    @property
    def claims_hold(self) -> bool:
        return all(e.claim_n is not None for e in self.entries)

    @property
    def no_mcd(self) -> bool:
        return bool(self.entries) and all(e.improvement_verified for e in self.entries)

    def to_json(self) -> dict:
        return {"truncation": self.truncation,
                "divisors": [e.to_json() for e in self.entries],
                "claims_hold": self.claims_hold,
                "zero_one_rejected": self.zero_one_rejected,
                "no_mcd": self.no_mcd,
                "chain": [c.to_json() for c in self.chain]}


def improvement_chain(M: MonoidSpec, length: int, start: Rat2 = Rat2(0, 0)) -> list[Rat2]:
    out = []
    d = start
    for _ in range(length):
        d = improve_divisor(d, M)
        if is_unknown(d):
            break
        out.append(d)
    return out


def verify_no_2mcd(M: MonoidSpec, K: Optional[int] = None, chain_length: int = 5,
                   node_cap: int = DEFAULT_NODE_CAP) -> DivisorReport:
    """Enumerate the truncation's common divisors of ``{(1,0), (1,1)}`` and improve each.

    For every divisor the report records the least ``n <= K + 1`` with
    ``d | (1 - 1/2^n, 0)`` and a strictly larger common divisor, both checked
    by exact membership.
    """
    _require(M)
    if K is not None and K != M.truncation:
        M = M.with_truncation(K)
    deep = _deep(M)
    report = DivisorReport(M.truncation)
    for d in common_divisors2(M, node_cap):
        claim = next((n for n in range(1, M.truncation + 2)
                      if _divides(d, dyadic_divisor(n), deep) is True), None)
        imp = improve_divisor(d, M)
        ok = (not is_unknown(imp)
              and imp != d
              and is_common_divisor(imp, deep) is True
              and _divides(d, imp, deep) is True)
        report.entries.append(DivisorEntry(d, claim, None if is_unknown(imp) else imp, ok))
    report.zero_one_rejected = is_member2(Rat2(0, 1), deep) is False
    report.chain = improvement_chain(M, chain_length)
    return report
