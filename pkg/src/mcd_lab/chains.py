"""Divisor descent under ACCP, and a staged subset with no MCD when ACCP fails.

The staged construction runs on a Grams-like monoid along the chain
``a_n = 1/d_n``, where ``b_n = a_n - a_(n+1)``.  For the dyadic rule the stage
test "does ``c`` divide ``base + a_k`` for every ``k``" is decided exactly;
any other rule gets a bounded check that is labelled as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import grams
from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    TruncationExceeded,
    is_unknown,
)
from .oracle import DEFAULT_NODE_CAP, common_divisors_bf, members_upto
from .primes import factorize
from .rational import format_rat, int_valuation, rat
from .spec import FINGEN, GRAMS, MonoidSpec, generators

EXACT = "exact-tail"
DEFAULT_KMAX = 64


def bounded_mode(kmax: int) -> str:
    return f"bounded({kmax})"


def _gens(M) -> list[Fraction]:
    if isinstance(M, MonoidSpec):
        if M.family == FINGEN:
            return list(M.gens)
        return generators(M)
    return [rat(g) for g in M]


@dataclass(frozen=True)
class DescentStep:
    divisor: Fraction
    shifted: tuple[Fraction, ...]


def descent_steps(S, M, node_cap: int = DEFAULT_NODE_CAP) -> list[DescentStep]:
    """Shift ``S`` by its least nonzero common divisor until none is left.

    Terminates in a finitely generated monoid: each step strictly enlarges the
    principal ideal generated by the accumulated divisor inside ``min S + M``.
    """
    gens = _gens(M)
    cur = sorted({rat(s) for s in S})
    if not cur:
        raise DomainError("S must be nonempty")
    steps = []
    while True:
        cds = common_divisors_bf(cur, gens, node_cap)
        nonzero = [d for d in cds if d != 0]
        if not nonzero:
            return steps
        d = nonzero[0]
        cur = [s - d for s in cur]
        steps.append(DescentStep(d, tuple(cur)))


def mcd_descent(S, M, node_cap: int = DEFAULT_NODE_CAP) -> Fraction:
    """An MCD of ``S`` obtained as the sum of the descent's divisors."""
    return sum((st.divisor for st in descent_steps(S, M, node_cap)), Fraction(0))


def enumerate_elements(M, bound, K: Optional[int] = None,
                       node_cap: int = DEFAULT_NODE_CAP) -> list[Fraction]:
    """Elements of the ``K``-truncation up to ``bound``, ascending, starting at 0."""
    if isinstance(M, MonoidSpec) and M.family != FINGEN:
        gens = generators(M, K)
    else:
        gens = _gens(M)
        if K is not None:
            gens = gens[:K]
    return members_upto(bound, gens, node_cap)


@dataclass(frozen=True)
class TailDecision:
    """Whether ``c`` divides ``base + a_k`` for every ``k >= 1``."""

    holds: Optional[bool]
    mode: str
    first_failure: Optional[int] = None

    def to_json(self) -> dict:
        return {"holds": self.holds, "mode": self.mode, "first_failure": self.first_failure}


def chain_term(M: MonoidSpec, k: int) -> Fraction:
    return Fraction(1, M.d_of(k))


def _exact_tail(c: Fraction, base: Fraction, M: MonoidSpec) -> TailDecision:
    # base + 2^-(k-1) - c: the odd-prime coefficients do not depend on k and
    # the leftover r_inf + 2^-(k-1) must be a nonnegative dyadic rational
    y = base - c
    rest = y
    if y != 0:
        for p in factorize(y.denominator):
            if p == 2:
                continue
            n = M.prime_index(p)
            if n is None:
                return TailDecision(False, EXACT, 1)
            if int_valuation(y.denominator, p) > 1:
                return TailDecision(False, EXACT, 1)
            t = y * p
            cn = t.numerator * M.d_of(n) * pow(t.denominator, -1, p) % p
            rest -= Fraction(cn, M.d_of(n) * p)
    den = rest.denominator
    if den & (den - 1):
        return TailDecision(False, EXACT, 1)
    if rest >= 0:
        return TailDecision(True, EXACT)
    k = 1
    while rest + Fraction(1, 2 ** (k - 1)) >= 0:
        k += 1
    return TailDecision(False, EXACT, k)


def divides_all_tail(c, base, M: MonoidSpec, kmax: int = DEFAULT_KMAX) -> TailDecision:
    """Decide ``c | base + a_k`` for all ``k``; exact for the dyadic rule.

    Other divisor chains get the bounded check over ``k <= kmax``, whose
    positive answer is reported with ``holds=None`` since it proves nothing
    about larger ``k``.
    """
    if M.family != GRAMS:
        raise DomainError("the tail test needs a grams-like spec")
    c, base = rat(c), rat(base)
    if c == 0:
        return TailDecision(True, EXACT)
    if M.d.is_named:
        return _exact_tail(c, base, M)
    for k in range(1, kmax + 1):
        try:
            ok = grams.divides(c, base + chain_term(M, k), M)
        except TruncationExceeded:
            return TailDecision(None, bounded_mode(kmax), None)
        if is_unknown(ok):
            return TailDecision(None, bounded_mode(kmax), None)
        if not ok:
            return TailDecision(False, bounded_mode(kmax), k)
    return TailDecision(None, bounded_mode(kmax), None)


def _fails(c: Fraction, base: Fraction, k: int, M: MonoidSpec) -> bool:
    ok = grams.divides(c, base + chain_term(M, k), M)
    return (not is_unknown(ok)) and not ok


@dataclass(frozen=True)
class Certificate:
    """Why the element ``excluded`` cannot be an MCD of the final set."""

    kind: str  # "extension-witness" | "non-divisor-witness"
    witness: Fraction
    mode: str
    verified: bool
    target: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "witness": format_rat(self.witness), "mode": self.mode,
               "verified": self.verified}
        if self.target is not None:
            out["target"] = format_rat(self.target)
        return out


@dataclass(frozen=True)
class Stage:
    index: int
    S: tuple[int, ...]
    ell: int
    branch: str  # "divides-all" | "fails-at"
    m: Optional[int]
    excluded: Fraction
    certificate: Certificate

    def to_json(self) -> dict:
        return {"index": self.index, "S": list(self.S), "ell": self.ell, "branch": self.branch,
                "m": self.m, "excluded": format_rat(self.excluded),
                "certificate": self.certificate.to_json()}


@dataclass
class NoMcdConstruction:
    chain: list[Fraction]
    b: list[Fraction]
    enumeration: list[Fraction]
    stages: list[Stage] = field(default_factory=list)

    @property
    def all_verified(self) -> bool:
        return all(st.certificate.verified for st in self.stages)

    def to_json(self) -> dict:
        return {"chain": [format_rat(a) for a in self.chain],
                "b": [format_rat(x) for x in self.b],
                "enumeration": [format_rat(c) for c in self.enumeration],
                "stages": [st.to_json() for st in self.stages]}


def _verify_extension(w: Fraction, base: Fraction, M: MonoidSpec, kmax: int):
    """Certificate check for ``w | base + a_k``; returns ``(mode, verified)``."""
    tail = divides_all_tail(w, base, M, kmax)
    if M.d.is_named:
        spot = all(grams.divides(w, base + chain_term(M, k), M) is True
                   for k in range(1, 3 * kmax + 1))
        return EXACT, bool(tail.holds) and spot
    # bounded evidence is recorded but never counted as a proof
    return bounded_mode(kmax), False


def build_no_mcd_set(M: MonoidSpec, stages: int, enum_bound=1, enum_K: int = 2,
                     kmax: int = DEFAULT_KMAX) -> NoMcdConstruction:
    """Run the first ``stages`` stages of the construction of ``S``.

    ``T = {sum_(i in S, i<k) b_i + a_k}`` ends up with no MCD; each stage
    excludes the next enumerated element ``c_i`` by an extension witness
    (``c_i + b_(l+1)`` still divides everything) or a non-divisor witness
    ``e_(m+1)``.  Bounded-mode certificates are emitted but marked unverified.
    """
    if M.family != GRAMS or not M.n_is_valuation:
        raise HypothesisViolation("needs a grams-like spec whose d-sequence is a divisor chain")
    if stages < 0:
        raise DomainError("stages must be nonnegative")
    elements = enumerate_elements(M, enum_bound, enum_K) if stages else []
    if len(elements) < stages:
        raise DomainError(f"only {len(elements)} elements up to {format_rat(rat(enum_bound))}; "
                          "raise the enumeration bound")
    elements = elements[:stages]

    def a(n):
        return chain_term(M, n)

    def b(n):
        return a(n) - a(n + 1)

    out = NoMcdConstruction([], [], elements)
    S: list[int] = []
    ell = 0
    for i, c in enumerate(elements, start=1):
        if i == 1:
            if c != 0:
                raise InvariantViolation("the enumeration must start at 0")
            S, ell = [1], 1
            w = c + b(1)
            mode, ok = _verify_extension(w, sum(b(j) for j in S), M, kmax)
            cert = Certificate("extension-witness", w, mode, ok)
            out.stages.append(Stage(1, tuple(S), ell, "divides-all", None, c, cert))
            continue
        base = sum((b(j) for j in S), Fraction(0))
        tail = divides_all_tail(c, base, M, kmax)
        if tail.holds is None:
            # bounded evidence of divisibility: follow the divides-all branch, unverified
            tail = TailDecision(True, tail.mode)
        if tail.holds:
            w = c + b(ell + 1)
            S = S + [ell + 1]
            ell += 1
            new_base = sum((b(j) for j in S), Fraction(0))
            mode, ok = _verify_extension(w, new_base, M, kmax)
            cert = Certificate("extension-witness", w, mode if tail.mode == EXACT else tail.mode,
                               ok and tail.mode == EXACT)
            out.stages.append(Stage(i, tuple(S), ell, "divides-all", None, c, cert))
        else:
            m = ell + 1
            while not _fails(c, base, m + 1, M):
                m += 1
                if m > ell + 3 * kmax:
                    raise InvariantViolation("failure index not found")
            ell = m
            target = base + a(m + 1)
            verified = _fails(c, base, m + 1, M)
            cert = Certificate("non-divisor-witness", c, tail.mode, verified, target)
            out.stages.append(Stage(i, tuple(S), ell, "fails-at", m, c, cert))
    top = max(ell + 1, 1) if stages else 0
    out.chain = [a(n) for n in range(1, top + 1)]
    out.b = [b(n) for n in range(1, top + 1)]
    check_stage_invariants(out)
    return out


def check_stage_invariants(con: NoMcdConstruction) -> None:
    prev_S: Sequence[int] = ()
    prev_ell = 0
    for st in con.stages:
        if not set(prev_S) <= set(st.S):
            raise InvariantViolation(f"stage {st.index}: S shrank")
        if [j for j in st.S if j <= prev_ell] != [j for j in prev_S if j <= prev_ell]:
            raise InvariantViolation(f"stage {st.index}: S changed below ell")
        if st.S and max(st.S) > st.ell:
            raise InvariantViolation(f"stage {st.index}: element of S above ell")
        if st.ell <= prev_ell:
            raise InvariantViolation(f"stage {st.index}: ell did not grow")
        prev_S, prev_ell = st.S, st.ell
    if any(x == 0 for x in con.b):
        raise InvariantViolation("b_n must be nonzero")
