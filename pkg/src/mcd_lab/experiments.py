"""Seeded acceptance experiments; each returns a JSON-ready record.

``python -m mcd_lab.experiments --seed S`` prints the full report.  Records
hold no timings or other run-dependent data, so equal seeds give equal bytes.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import random
import sys
from fractions import Fraction
from typing import Callable

from . import chains, grams, rank2, two_prime
from .errors import SearchOverflow
from .primes import factorize
from .oracle import common_divisors_bf, is_member_bf, mcd_bf, members_upto
from .rational import common_denominator, format_rat
from .spec import fingen, grams_classical, m_p, rank2_grams

DEFAULT_SEED = 20260101
MP_ORACLE_CAP = 4 * 10**7

MP_SAMPLE = ("1/10", "1/21", "1/55", "1/2", "7/10", "1", "2")
# built from the worked examples of the toolkit: atoms, their sums, dyadics
EXAMPLE_SAMPLE = ("1/3", "1/10", "1/28", "1/88", "13/30", "23/30",
                  "1/2", "1/4", "3/4", "5/6", "1", "2/3")


def _rng(seed: int, criterion: int) -> random.Random:
    return random.Random(seed * 1009 + criterion)


def _fmt(xs) -> list[str]:
    return [format_rat(x) for x in xs]


def _record(n: int, name: str, violations: list, **extra) -> dict:
    out = {"criterion": n, "name": name, "passed": not violations,
           "violations": len(violations), "examples": violations[:5]}
    out.update(extra)
    return out


def _random_combo(rng: random.Random, gens, max_copies: int) -> Fraction:
    total = rng.randint(0, max_copies)
    counts = [0] * len(gens)
    for _ in range(total):
        counts[rng.randrange(len(gens))] += 1
    return sum((c * g for c, g in zip(counts, gens)), Fraction(0))


# 1 ------------------------------------------------------------------------
def count_decompositions(q: Fraction, M, K: int) -> int:
    """Exhaustive count of ``q = c0 + sum c_n/(d_n p_n)`` with ``c_n < p_n`` and ``d(c0) | d_K``."""
    ps = [M.p_of(n) for n in range(1, K + 1)]
    ds = [M.d_of(n) for n in range(1, K + 1)]
    L = ds[-1] * math.prod(ps)
    Q = q * L
    if Q.denominator != 1:
        return 0
    Q = Q.numerator
    w = [L // (d * p) for d, p in zip(ds, ps)]
    unit = L // ds[-1]
    count = 0
    for cs in itertools.product(*(range(p) for p in ps)):
        rest = Q - sum(c * wi for c, wi in zip(cs, w))
        if rest >= 0 and rest % unit == 0:
            count += 1
    return count


def criterion_1(seed: int, n_elements: int = 500) -> dict:
    rng = _rng(seed, 1)
    M = grams_classical(4)
    gens = [M.atom(i) for i in range(1, 5)]
    bad = []
    for _ in range(n_elements):
        q = _random_combo(rng, gens, 8)
        dec = grams.canonical_decompose(q, M)
        ok = isinstance(dec, grams.CanonicalDecomp) and dec.value(M) == q
        if not ok or count_decompositions(q, M, 4) != 1:
            bad.append(format_rat(q))
    return _record(1, "canonical decomposition is unique", bad, elements=n_elements)


# 2 ------------------------------------------------------------------------
def _random_supported(rng: random.Random, L: int, top: int) -> Fraction:
    den = 1
    for p, e in factorize(L).items():
        den *= p ** rng.randint(0, e)
    return Fraction(rng.randint(1, top * den), den)


def _membership_agreement(rng, gens, structural: Callable, n_each: int, cap: int):
    L = common_denominator(gens)
    bad = []
    members = [_random_combo(rng, gens, 12) for _ in range(n_each)]
    non = []
    tries = 0
    while len(non) < n_each:
        tries += 1
        q = _random_supported(rng, L, 2)
        if not is_member_bf(q, gens, cap):
            non.append(q)
    for q, expect in [(q, True) for q in members] + [(q, False) for q in non]:
        got = structural(q)
        if got is not expect or is_member_bf(q, gens, cap) is not expect:
            bad.append(format_rat(q))
    return bad, tries


def criterion_2(seed: int, n_each: int = 200) -> dict:
    rng = _rng(seed, 2)
    G = grams_classical(4)
    P = m_p(6)
    bad_g, _ = _membership_agreement(rng, [G.atom(i) for i in range(1, 5)],
                                     lambda q: grams.is_member(q, G), n_each, 10**7)
    bad_p, _ = _membership_agreement(rng, [P.atom(i) for i in range(1, 7)],
                                     lambda q: two_prime.is_member(q, P), n_each, MP_ORACLE_CAP)
    return _record(2, "membership agrees with the oracle", bad_g + bad_p,
                   grams_checked=2 * n_each, two_prime_checked=2 * n_each,
                   grams_disagreements=len(bad_g), two_prime_disagreements=len(bad_p))


# 3 ------------------------------------------------------------------------
def grams_fixed_sample(M=None) -> list[Fraction]:
    """The 12 smallest nonzero elements of the ``K = 4`` truncation."""
    M = M or grams_classical(4)
    gens = [M.atom(i) for i in range(1, 5)]
    return members_upto(Fraction(1, 10), gens)[1:13]


def _grams_mcd_checks(S, M, gens, strict: bool):
    """Returns ``(violations, oracle MCD count)`` for one subset."""
    S = list(S)
    out = []
    m = grams.mcd(S, M)
    if not all(grams.divides(m, s, M) is True for s in S):
        out.append("does not divide")
    k = max(grams.canonical_decompose(s, M).max_index for s in S)
    rest = [s - m for s in S]
    if any(all(grams.divides(M.atom(i), r, M) is True for r in rest) for i in range(1, k + 6)):
        out.append("atom extension")
    bf = mcd_bf(S, gens)
    if strict and bf != [m]:
        out.append(f"oracle MCDs {_fmt(bf)}")
    if m not in bf:
        out.append("not an oracle MCD")
    return out, len(bf)


def criterion_3(seed: int) -> dict:
    M = grams_classical(4)
    gens = [M.atom(i) for i in range(1, 5)]
    bad = []
    sample = grams_fixed_sample(M)
    checked = 0
    for r in (2, 3):
        for S in itertools.combinations(sample, r):
            v, _ = _grams_mcd_checks(S, M, gens, strict=True)
            checked += 1
            if v:
                bad.append({"S": _fmt(S), "problems": v})
    # second sample: the oracle may return several MCDs; mcd must be one of them
    example = [Fraction(x) for x in EXAMPLE_SAMPLE]
    multi = 0
    for r in (2, 3):
        for S in itertools.combinations(example, r):
            v, count = _grams_mcd_checks(S, M, gens, strict=False)
            multi += count > 1
            checked += 1
            if v:
                bad.append({"S": _fmt(S), "problems": v})
    return _record(3, "grams-like mcd is a verified MCD", bad, sample=_fmt(sample),
                   example_sample=list(EXAMPLE_SAMPLE), subsets=checked,
                   example_subsets_with_several_mcds=multi)


# 4 ------------------------------------------------------------------------
def criterion_4(seed: int) -> dict:
    M = m_p(6)
    gens = [M.atom(i) for i in range(1, 7)]
    sample = [Fraction(x) for x in MP_SAMPLE]
    bad = []
    compared = skipped = 0
    for r in (1, 2, 3):
        for S in itertools.combinations(sample, r):
            m = two_prime.mcd(S, M)
            problems = []
            if not all(two_prime.divides(m, s, M) for s in S):
                problems.append("does not divide")
            n = max(two_prime.valuation_bound(s, M) for s in S) + 5
            if any(all(two_prime.divides(m + M.atom(i), s, M) for s in S)
                   for i in range(1, n + 6)):
                problems.append("atom extension")
            if all(s.denominator == 1 for s in S) and m != min(S):
                problems.append("integer set must give min S")
            try:
                bf = mcd_bf(S, gens, MP_ORACLE_CAP)
                compared += 1
                if bf != [m]:
                    problems.append(f"oracle MCDs {_fmt(bf)}")
            except SearchOverflow:
                skipped += 1
            if problems:
                bad.append({"S": _fmt(S), "mcd": format_rat(m), "problems": problems})
    return _record(4, "two-prime mcd agrees with the oracle", bad, sample=list(MP_SAMPLE),
                   compared=compared, oracle_overflow=skipped)


# 5 ------------------------------------------------------------------------
def criterion_5(seed: int) -> dict:
    G = grams_classical(4)
    P = m_p(6)
    bad = []
    for n in range(1, 21):
        link = grams.chain_link(G, n)
        if not (link.verified and link.difference == Fraction(1, 2**n)):
            bad.append(f"dyadic link {n}")
    links = []
    for parity in ("odd", "even"):
        for n in range(1, 11):
            w = two_prime.chain_witness(P, parity, n)
            expected = P.p_of(w.index + 2) - P.p_of(w.index)
            if not (w.verified and w.multiplicity == expected and w.difference > 0):
                bad.append(f"{parity} link {n}")
            links.append(w.to_json())
    return _record(5, "non-stabilizing chains", bad, dyadic_links=20, two_prime_links=links)


# 6 ------------------------------------------------------------------------
def criterion_6(seed: int, n_pairs: int = 200) -> dict:
    rng = _rng(seed, 6)
    M = grams_classical(4)
    gens = [M.atom(i) for i in range(1, 5)] + [Fraction(1, 8)]
    bad = []
    for _ in range(n_pairs):
        q1 = _random_combo(rng, gens, 6)
        q2 = q1 + _random_combo(rng, gens, 6)
        rep = grams.divisibility_report(q1, q2, M)
        if not rep.all_true:
            bad.append({"q1": format_rat(q1), "q2": format_rat(q2)})
    atoms = gens[:4]
    pool = [q for q in members_upto(Fraction(1, 2), atoms) if q > 0]
    triples = 0
    while triples < 100:
        n = rng.randint(1, 4)
        S = sorted(set(rng.sample(pool, rng.randint(1, 2))))
        if any(grams.canonical_decompose(s, M).c(n) for s in S):
            continue
        cands = [d for d in common_divisors_bf(S, atoms)
                 if grams.canonical_decompose(d, M).c(n) > 0]
        if not cands:
            continue
        d = rng.choice(cands)
        triples += 1
        out = grams.lift_divisor(d, S, n, M)
        if not all(grams.divides(out, s, M) is True for s in S):
            bad.append({"d": format_rat(d), "S": _fmt(S), "n": n})
    return _record(6, "divisibility consequences and lifting", bad, pairs=n_pairs,
                   lift_triples=triples)


# 7 ------------------------------------------------------------------------
def criterion_7(seed: int) -> dict:
    M = grams_classical(4)
    bad = []
    sizes = []
    for sample in (grams_fixed_sample(M), [Fraction(x) for x in EXAMPLE_SAMPLE]):
        for S in itertools.combinations(sample, 2):
            k = max(grams.canonical_decompose(s, M).max_index for s in S)
            bound = math.prod(M.p_of(i) for i in range(1, k + 1))
            found = grams.enumerate_mcds(S, M)
            sizes.append(len(found))
            if len(found) > bound or not found:
                bad.append({"S": _fmt(S), "count": len(found), "bound": bound})
            if not all(grams.is_mcd(d, S, M) for d in found):
                bad.append({"S": _fmt(S), "problem": "maximality"})
            if grams.mcd(S, M) not in found:
                bad.append({"S": _fmt(S), "problem": "mcd missing"})
    return _record(7, "MCD enumeration is bounded", bad, sets=len(sizes),
                   max_count=max(sizes), several=sum(s > 1 for s in sizes))


# 8 ------------------------------------------------------------------------
def criterion_8(seed: int) -> dict:
    G = fingen([3, 5])
    elems = chains.enumerate_elements(G, 30)
    bad = []
    subsets = 0
    for r in (1, 2, 3):
        for S in itertools.combinations(elems, r):
            subsets += 1
            steps = chains.descent_steps(S, G)
            d = sum((s.divisor for s in steps), Fraction(0))
            if d not in mcd_bf(S, G.gens) or len(steps) > sum(S):
                bad.append(_fmt(S))
    con = chains.build_no_mcd_set(grams_classical(4), 4)
    for st in con.stages:
        if not (st.certificate.verified and st.certificate.mode == chains.EXACT):
            bad.append(f"stage {st.index}")
    if len(con.stages) != 4:
        bad.append("stage count")
    return _record(8, "descent and the no-MCD construction", bad, descent_subsets=subsets,
                   construction=con.to_json())


# 9 ------------------------------------------------------------------------
def criterion_9(seed: int) -> dict:
    rep = rank2.verify_no_2mcd(rank2_grams(3))
    bad = []
    if len(rep.entries) < 3:
        bad.append("fewer than 3 common divisors")
    bad += [str(e.divisor) for e in rep.entries if not e.improvement_verified]
    bad += [f"claim {e.divisor}" for e in rep.entries if e.claim_n is None]
    if not rep.zero_one_rejected:
        bad.append("(0,1) accepted")
    expected = [rank2.dyadic_divisor(n) for n in range(1, 6)]
    if rep.chain != expected:
        bad.append("improvement chain")
    return _record(9, "rank-2 pair without an MCD", bad, divisors=len(rep.entries),
                   chain=[c.to_json() for c in rep.chain],
                   first_divisors=[e.to_json() for e in rep.entries[:4]])


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run(seed: int = DEFAULT_SEED, only=None) -> dict:
    keys = sorted(CRITERIA) if not only else sorted(only)
    return {"seed": seed, "criteria": [CRITERIA[k](seed) for k in keys]}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m mcd_lab.experiments",
                                 description="Seeded acceptance experiments as JSON.")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--only", type=int, nargs="*", choices=sorted(CRITERIA))
    args = ap.parse_args(argv)
    report = run(args.seed, args.only)
    sys.stdout.write(dumps(report))
    return 0 if all(c["passed"] for c in report["criteria"]) else 1


if __name__ == "__main__":
    sys.exit(main())
