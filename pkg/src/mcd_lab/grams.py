"""Grams-like monoids ``M = <1/(d_n p_n)>`` and their companion ``N = <1/d_n>``.

Every element ``q`` of ``M`` has a unique canonical decomposition
``q = c0 + sum c_n / (d_n p_n)`` with ``c0`` in ``N`` and ``0 <= c_n < p_n``.
Since ``p_n`` divides no ``d_m``, the generator ``1/(d_n p_n)`` is the only
one carrying ``p_n`` in its denominator, so ``c_n`` is read off the
``p_n``-adic part of ``q`` and everything else is an ``N`` membership question.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from . import _kernels
from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    TruncationExceeded,
    Unknown,
    is_unknown,
)
from .oracle import DEFAULT_NODE_CAP, is_member_bf
from .primes import factorize
from .rational import common_denominator, format_rat, int_valuation, rat
from .spec import GRAMS, MonoidSpec


class Stage(enum.Enum):
    """Where a non-member was rejected."""

    BAD_VALUATION = "bad valuation"
    NEGATIVE_RESIDUAL = "negative residual"
    RESIDUAL_NOT_IN_N = "residual not in N"


@dataclass(frozen=True)
class NotMember:
    stage: Stage
    detail: str = ""

    def __bool__(self):
        return False

    def __str__(self):
        return self.stage.value


@dataclass(frozen=True)
class CanonicalDecomp:
    c0: Fraction
    coeffs: tuple[tuple[int, int], ...]

    def c(self, n: int) -> int:
        return dict(self.coeffs).get(n, 0)

    @property
    def max_index(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    def value(self, M: MonoidSpec) -> Fraction:
        return self.c0 + sum((c * M.atom(n) for n, c in self.coeffs), Fraction(0))

    def to_json(self) -> dict:
        return {"c0": format_rat(self.c0), "coeffs": {str(n): c for n, c in self.coeffs}}


Decomposition = Union[CanonicalDecomp, NotMember, Unknown]


def _require_grams(M: MonoidSpec) -> None:
    if M.family != GRAMS:
        raise DomainError(f"expected a grams-like spec, got {M.family}")


def _divides_some_d(M: MonoidSpec, p: int) -> bool:
    if M.d.is_named:
        return p == 2
    return any(M.d_of(m) % p == 0 for m in range(1, M.truncation + 1))


def is_member_N(q, M: MonoidSpec) -> Union[bool, Unknown]:
    """Membership in the companion ``N = <1/d_n>``."""
    _require_grams(M)
    q = Fraction(q)
    if q < 0:
        return False
    if q == 0:
        return True
    den = q.denominator
    if M.d.is_named:
        return den & (den - 1) == 0
    K = M.truncation
    if M.n_is_valuation:
        # divisor chain: d(q) | d_n for some n <= K iff d(q) | d_K
        if M.d_of(K) % den == 0:
            return True
        return Unknown(K, "no d_n with n <= K is divisible by d(q)")
    if is_member_bf(q, [Fraction(1, M.d_of(n)) for n in range(1, K + 1)]):
        return True
    return Unknown(K, "not in the truncation <1/d_1, ..., 1/d_K>")


def canonical_decompose(q, M: MonoidSpec) -> Decomposition:
    """Canonical decomposition of ``q``, or the stage at which it fails.

    Raises TruncationExceeded when a prime of ``d(q)`` cannot be classified
    as some ``p_n`` or as a factor of some ``d_m`` within the descriptor.
    """
    _require_grams(M)
    q = rat(q)
    if q == 0:
        return CanonicalDecomp(Fraction(0), ())
    coeffs = []
    for p, _ in factorize(q.denominator).items():
        n = M.prime_index(p)
        if n is None:
            if not _divides_some_d(M, p):
                raise TruncationExceeded(f"prime {p} of d(q) is neither a p_n nor a factor of a d_m")
            continue
        v = int_valuation(q.numerator, p) - int_valuation(q.denominator, p)
        if v < -1:
            return NotMember(Stage.BAD_VALUATION, f"v_{p}(q) = {v} < -1")
        # c/d_n must match q*p modulo p
        t = q * p
        c = t.numerator * M.d_of(n) * pow(t.denominator, -1, p) % p
        coeffs.append((n, c))
    coeffs.sort()
    residual = q - sum((Fraction(c, M.d_of(n) * M.p_of(n)) for n, c in coeffs), Fraction(0))
    if residual < 0:
        return NotMember(Stage.NEGATIVE_RESIDUAL, f"residual {format_rat(residual)}")
    in_n = is_member_N(residual, M)
    if is_unknown(in_n):
        return in_n
    if not in_n:
        return NotMember(Stage.RESIDUAL_NOT_IN_N, f"residual {format_rat(residual)}")
    return CanonicalDecomp(residual, tuple(coeffs))


def is_member(q, M: MonoidSpec) -> Union[bool, Unknown]:
    dec = canonical_decompose(q, M)
    if is_unknown(dec):
        return dec
    return isinstance(dec, CanonicalDecomp)


def divides(a, b, M: MonoidSpec) -> Union[bool, Unknown]:
    """Whether ``a`` divides ``b`` in ``M``, i.e. ``b - a`` lies in ``M``."""
    diff = Fraction(b) - Fraction(a)
    if diff < 0:
        return False
    return is_member(diff, M)


def _decompose_member(s, M: MonoidSpec) -> CanonicalDecomp:
    dec = canonical_decompose(s, M)
    if is_unknown(dec):
        raise TruncationExceeded(f"membership of {format_rat(Fraction(s))} undecided: {dec.reason}")
    if not dec:
        raise HypothesisViolation(f"{format_rat(Fraction(s))} is not in M ({dec})")
    return dec


def _divides_N(a: Fraction, b: Fraction, M: MonoidSpec):
    return b >= a and is_member_N(b - a, M)


@dataclass(frozen=True)
class DivisibilityReport:
    q1: Fraction
    q2: Fraction
    statements: tuple[bool, bool, bool, bool, bool]
    decompositions: tuple[CanonicalDecomp, CanonicalDecomp, CanonicalDecomp]

    @property
    def all_true(self) -> bool:
        return all(self.statements)

    def to_json(self) -> dict:
        return {
            "q1": format_rat(self.q1), "q2": format_rat(self.q2),
            "statements": {str(i + 1): v for i, v in enumerate(self.statements)},
            "decompositions": {k: d.to_json() for k, d in
                               zip(("q1", "q2", "q2-q1"), self.decompositions)},
        }


def divisibility_report(q1, q2, M: MonoidSpec) -> DivisibilityReport:
    """Check the five consequences of uniqueness for a divisibility pair ``q1 | q2``.

    (1) c0(q1) divides c0(q2) in N; (2) c_n(q2) = c_n(q1) + c_n(q2 - q1) mod p_n;
    and when c0(q1) = c0(q2): (3) c0(q2 - q1) = 0, (4) c_n(q1) + c_n(q2 - q1) < p_n,
    (5) c_n(q1) <= c_n(q2).
    """
    q1, q2 = rat(q1), rat(q2)
    ok = divides(q1, q2, M)
    if is_unknown(ok) or not ok:
        raise HypothesisViolation(f"{format_rat(q1)} does not divide {format_rat(q2)} in M")
    d1, d2, d3 = (_decompose_member(x, M) for x in (q1, q2, q2 - q1))
    idx = sorted({n for d in (d1, d2, d3) for n, _ in d.coeffs})
    st1 = _divides_N(d1.c0, d2.c0, M)
    st1 = bool(st1) if not is_unknown(st1) else False
    st2 = all((d1.c(n) + d3.c(n) - d2.c(n)) % M.p_of(n) == 0 for n in idx)
    same = d1.c0 == d2.c0
    st3 = (not same) or d3.c0 == 0
    st4 = (not same) or all(d1.c(n) + d3.c(n) < M.p_of(n) for n in idx)
    st5 = (not same) or all(d1.c(n) <= d2.c(n) for n in idx)
    return DivisibilityReport(q1, q2, (st1, st2, st3, st4, st5), (d1, d2, d3))


def _require_valuation(M: MonoidSpec) -> None:
    _require_grams(M)
    if not M.n_is_valuation:
        raise HypothesisViolation("N is not a valuation monoid (d is not a divisor chain)")


def _all_divide(d: Fraction, S: Iterable[Fraction], M: MonoidSpec) -> bool:
    for s in S:
        ok = divides(d, s, M)
        if is_unknown(ok):
            raise TruncationExceeded(f"divisibility undecided: {ok.reason}")
        if not ok:
            return False
    return True


def f_elements(M: MonoidSpec, k: int, bound, node_cap: int = DEFAULT_NODE_CAP) -> list[Fraction]:
    """Distinct elements of ``F = <1/(d_i p_i) : i <= k>`` in ``[0, bound]``, ascending."""
    if k == 0:
        return [Fraction(0)]
    gens = [M.atom(i) for i in range(1, k + 1)]
    L = common_denominator(gens)
    values = _kernels.bounded_sums([int(g * L) for g in gens], int(Fraction(bound) * L), node_cap)
    return [Fraction(v, L) for v in values]


def mcd(S, M: MonoidSpec, node_cap: int = DEFAULT_NODE_CAP) -> Fraction:
    """A maximal common divisor of the finite set ``S`` when ``N`` is a valuation monoid.

    Subtract the least ``c0(s)``; then take the largest element of the finitely
    generated ``F = <1/(d_i p_i) : i <= k>`` (``k`` the top index occurring in
    ``S``) dividing every shifted element.
    """
    _require_valuation(M)
    S = sorted({rat(s) for s in S})
    if not S:
        raise DomainError("S must be nonempty")
    decs = [_decompose_member(s, M) for s in S]
    if len(S) == 1:
        return S[0]
    c0min = min(d.c0 for d in decs)
    shifted = [s - c0min for s in S]
    if 0 in shifted:
        result = c0min
        k = max(d.max_index for d in decs)
    else:
        k = max(d.max_index for d in decs)
        m = Fraction(0)
        for f in reversed(f_elements(M, k, min(shifted), node_cap)):
            if _all_divide(f, shifted, M):
                m = f
                break
        result = c0min + m
    _check_mcd_post(result, S, M, k)
    return result


def _check_mcd_post(result: Fraction, S, M: MonoidSpec, k: int) -> None:
    if not _all_divide(result, S, M):
        raise InvariantViolation(f"{format_rat(result)} does not divide every element of S")
    rest = [s - result for s in S]
    for i in range(1, k + 6):
        try:
            a = M.atom(i)
        except TruncationExceeded:
            break
        if _all_divide(a, rest, M):
            raise InvariantViolation(
                f"atom {i} divides every element of S - {format_rat(result)}")


def is_mcd(d, S, M: MonoidSpec) -> bool:
    """Exact maximality test for a common divisor ``d`` (valuation ``N``).

    ``S - d`` has a nonzero common divisor iff some atom divides all of it.
    Atoms up to the top index ``k`` of ``S - d`` are tested directly.  An atom
    ``1/(d_l p_l)`` with ``l > k`` divides ``x`` iff ``1/d_l`` divides ``c0(x)``
    in ``N``, which for a divisor chain happens for some ``l`` exactly when
    every ``c0(x)`` is positive.  For explicit prefixes only ``l <= K`` is tried.
    """
    _require_valuation(M)
    d = rat(d)
    S = sorted({rat(s) for s in S})
    if not _all_divide(d, S, M):
        return False
    rest = [s - d for s in S]
    decs = [_decompose_member(x, M) for x in rest]
    k = max(x.max_index for x in decs)
    top = k if M.d.is_named else max(k, M.truncation)
    for i in range(1, top + 1):
        if _all_divide(M.atom(i), rest, M):
            return False
    if M.d.is_named and all(x.c0 > 0 for x in decs):
        return False
    return True


def lift_divisor(d, S, n: int, M: MonoidSpec) -> Fraction:
    """Push a common divisor's ``n``-th coefficient up to ``p_n``.

    Requires ``d`` to divide every ``s``, ``c_n(s) = 0`` for all ``s`` and
    ``c_n(d) > 0``; returns ``d + (p_n - c_n(d)) / (d_n p_n)``, again a common
    divisor.
    """
    _require_grams(M)
    d = rat(d)
    S = sorted({rat(s) for s in S})
    if not _all_divide(d, S, M):
        raise HypothesisViolation(f"{format_rat(d)} is not a common divisor of S")
    bad = [format_rat(s) for s in S if _decompose_member(s, M).c(n) != 0]
    if bad:
        raise HypothesisViolation(f"c_{n}(s) != 0 for s in {bad}")
    cd = _decompose_member(d, M).c(n)
    if cd == 0:
        raise HypothesisViolation(f"c_{n}({format_rat(d)}) = 0")
    out = d + Fraction(M.p_of(n) - cd, M.d_of(n) * M.p_of(n))
    if not _all_divide(out, S, M):
        raise InvariantViolation(f"lifted divisor {format_rat(out)} does not divide S")
    return out


def enumerate_mcds(S, M: MonoidSpec, c0_candidates: Optional[Iterable] = None) -> list[Fraction]:
    """All MCDs of ``S`` whose ``c0`` part is one of the candidates, ascending.

    An MCD has no coefficient beyond the top index ``k`` of ``S`` (otherwise
    :func:`lift_divisor` would extend it), so it is ``d0 + sum e_i/(d_i p_i)``
    with ``e_i < p_i``.  At most ``prod_{i<=k} p_i`` results per candidate.
    Candidates default to the MCD of ``{c0(s)}`` in ``N``, its minimum.
    """
    _require_valuation(M)
    S = sorted({rat(s) for s in S})
    decs = [_decompose_member(s, M) for s in S]
    if c0_candidates is None:
        c0_candidates = [min(x.c0 for x in decs)]
    k = max(x.max_index for x in decs)
    ranges = [range(M.p_of(i)) for i in range(1, k + 1)]
    atoms = [M.atom(i) for i in range(1, k + 1)]
    out = set()
    for d0 in sorted({rat(c) for c in c0_candidates}):
        in_n = is_member_N(d0, M)
        if is_unknown(in_n) or not in_n:
            raise HypothesisViolation(f"c0 candidate {format_rat(d0)} is not in N")
        for es in itertools.product(*ranges):
            d = d0 + sum((e * a for e, a in zip(es, atoms)), Fraction(0))
            if d > S[0]:
                continue
            if _all_divide(d, S, M) and is_mcd(d, S, M):
                out.add(d)
    return sorted(out)


@dataclass(frozen=True)
class ChainLink:
    """``1/d_(n+1)`` divides ``1/d_n`` with a nonzero difference."""

    n: int
    ideal: Fraction
    successor: Fraction
    difference: Fraction
    verified: bool

    def to_json(self) -> dict:
        return {"n": self.n, "ideal": format_rat(self.ideal),
                "successor": format_rat(self.successor),
                "difference": format_rat(self.difference), "verified": self.verified}


def chain_link(M: MonoidSpec, n: int) -> ChainLink:
    """The ``n``-th step of the non-stabilizing chain ``(1/d_n + M)``."""
    _require_valuation(M)
    a, b = Fraction(1, M.d_of(n)), Fraction(1, M.d_of(n + 1))
    ok = divides(b, a, M)
    verified = (not is_unknown(ok)) and bool(ok) and a - b != 0
    return ChainLink(n, a, b, a - b, verified)
