"""``mcd-lab``: run any toolkit operation on a monoid spec file.

Exit codes: 0 success, 1 invalid input, 2 answer unknown (truncation or
search budget), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import chains, experiments, grams, rank2, two_prime
from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    McdLabError,
    SearchOverflow,
    SpecValidationError,
    TruncationExceeded,
    is_unknown,
)
from .oracle import (
    DEFAULT_NODE_CAP,
    common_divisors_bf,
    factorize_all,
    is_atom_bf,
    mcd_bf,
    membership_bf,
)
from .rational import format_rat, parse_rat
from .spec import (
    FINGEN,
    GRAMS,
    RANK2,
    TWO_PRIME,
    Rat2,
    atom_set,
    generators,
    grams_classical,
    load_spec,
    m_p,
    rank2_grams,
)

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN, EXIT_INVARIANT = 0, 1, 2, 3

PRESETS = {
    "grams-classical": grams_classical,
    "m-p": m_p,
    "rank2": rank2_grams,
}


class UsageError(McdLabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_INPUT)


def _node_cap(args) -> int:
    if args.node_cap is not None:
        return args.node_cap
    env = os.environ.get("MCD_LAB_NODE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"MCD_LAB_NODE_CAP is not an integer: {env!r}")
    return DEFAULT_NODE_CAP


def _load(args):
    if not args.spec:
        raise UsageError("--spec is required for this command")
    if args.spec in PRESETS and not Path(args.spec).exists():
        spec = PRESETS[args.spec]()
    else:
        try:
            spec = load_spec(args.spec)
        except OSError as exc:
            raise UsageError(f"cannot read spec: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"spec is not valid JSON: {exc}")
    if args.truncation is not None:
        spec = spec.with_truncation(args.truncation)
    return spec


def _rats(values) -> list[Fraction]:
    return [parse_rat(v) for v in values]


def _point(text: str) -> Rat2:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"expected a point 'x,y', got {text!r}")
    return Rat2(parse_rat(parts[0]), parse_rat(parts[1]))


def _family(spec, *allowed):
    if spec.family not in allowed:
        raise UsageError(f"command not available for family {spec.family}")


# each handler returns (json payload, text rendering, exit code)

def cmd_validate(args, spec):
    return spec.to_json() | {"n_is_valuation": spec.n_is_valuation, "proof": spec.proof}, \
        "valid", EXIT_OK


def cmd_generators(args, spec):
    gens = generators(spec, args.k)
    payload = [g.to_json() if isinstance(g, Rat2) else format_rat(g) for g in gens]
    text = "\n".join(str(g) if isinstance(g, Rat2) else format_rat(g) for g in gens)
    return payload, text, EXIT_OK


def cmd_atoms(args, spec):
    res = atom_set(spec, args.k, node_cap=_node_cap(args))
    payload = res.to_json()
    atoms = payload["atoms"]
    text = ("\n".join(a if isinstance(a, str) else f"({a[0]}, {a[1]})" for a in atoms)
            + f"\n[{res.provenance}; {res.proof}]")
    return payload, text, EXIT_OK


def cmd_decompose(args, spec):
    _family(spec, GRAMS, TWO_PRIME)
    q = parse_rat(args.q)
    if spec.family == GRAMS:
        dec = grams.canonical_decompose(q, spec)
        if is_unknown(dec):
            return {"unknown": dec.truncation}, f"unknown (K={dec.truncation})", EXIT_UNKNOWN
        if not dec:
            return {"not_member": dec.stage.value}, f"not a member ({dec})", EXIT_OK
        terms = " + ".join(f"{c}/({spec.d_of(n)}*{spec.p_of(n)})" for n, c in dec.coeffs)
        return dec.to_json(), f"{format_rat(dec.c0)}" + (f" + {terms}" if terms else ""), EXIT_OK
    red = two_prime.find_reduced_form(q, spec)
    if red is None:
        return {"not_member": "no reduced form"}, "not a member", EXIT_OK
    return red.to_json(), json.dumps(red.to_json()), EXIT_OK


def _answer(ans, reason=""):
    if is_unknown(ans):
        return {"answer": None, "unknown": ans.truncation}, f"unknown (K={ans.truncation})", \
            EXIT_UNKNOWN
    text = "true" if ans else "false"
    if reason:
        text += f" ({reason})"
    payload = {"answer": bool(ans)}
    if reason:
        payload["reason"] = reason
    return payload, text, EXIT_OK


def cmd_member(args, spec):
    if spec.family == RANK2:
        return _answer(rank2.is_member2(_point(args.q), spec))
    q = parse_rat(args.q)
    if spec.family == GRAMS:
        dec = grams.canonical_decompose(q, spec)
        if is_unknown(dec):
            return _answer(dec)
        return _answer(bool(dec), "" if dec else dec.stage.value)
    if spec.family == TWO_PRIME:
        return _answer(two_prime.is_member(q, spec))
    ok, reason = membership_bf(q, spec.gens, _node_cap(args))
    return _answer(ok, reason)


def cmd_divides(args, spec):
    if spec.family == RANK2:
        a, b = _point(args.a), _point(args.b)
        diff = b - a
        return _answer(False if not diff.is_nonnegative() else rank2.is_member2(diff, spec))
    a, b = parse_rat(args.a), parse_rat(args.b)
    if spec.family == GRAMS:
        return _answer(grams.divides(a, b, spec))
    if spec.family == TWO_PRIME:
        return _answer(two_prime.divides(a, b, spec))
    return _answer(b >= a and membership_bf(b - a, spec.gens, _node_cap(args))[0])


def cmd_mcd(args, spec):
    S = _rats(args.S)
    cap = _node_cap(args)
    if spec.family == GRAMS:
        m = grams.mcd(S, spec, cap)
    elif spec.family == TWO_PRIME:
        m = two_prime.mcd(S, spec, cap)
    elif spec.family == FINGEN:
        m = chains.mcd_descent(S, spec, cap)
    else:
        raise UsageError("mcd is not available for rank2; see the rank2 command")
    return format_rat(m), format_rat(m), EXIT_OK


def cmd_mcd_enum(args, spec):
    _family(spec, GRAMS)
    S = _rats(args.S)
    c0 = _rats(args.c0) if args.c0 else None
    found = grams.enumerate_mcds(S, spec, c0)
    payload = [format_rat(d) for d in found]
    return payload, "\n".join(payload) if payload else "none", EXIT_OK


def cmd_chain(args, spec):
    start, stop = args.start, args.stop
    if spec.family == TWO_PRIME:
        links = [two_prime.chain_witness(spec, args.parity, n) for n in range(start, stop + 1)]
        rows = [f"{w.n:>3}  1/{w.ideal.denominator} - 1/{w.successor.denominator}"
                f" = {w.multiplicity} x {format_rat(w.atom)}  {'ok' if w.verified else 'FAILED'}"
                for w in links]
    else:
        _family(spec, GRAMS)
        links = [grams.chain_link(spec, n) for n in range(start, stop + 1)]
        rows = [f"{c.n:>3}  {format_rat(c.ideal)} - {format_rat(c.successor)}"
                f" = {format_rat(c.difference)}  {'ok' if c.verified else 'FAILED'}"
                for c in links]
    code = EXIT_OK if all(x.verified for x in links) else EXIT_INVARIANT
    payload = [x.to_json() for x in links]
    return payload, "\n".join(rows) if rows else "none", code


def cmd_descent(args, spec):
    _family(spec, FINGEN)
    steps = chains.descent_steps(_rats(args.S), spec, _node_cap(args))
    total = sum((s.divisor for s in steps), Fraction(0))
    payload = {"mcd": format_rat(total),
               "steps": [{"divisor": format_rat(s.divisor),
                          "shifted": [format_rat(x) for x in s.shifted]} for s in steps]}
    rows = [f"-{format_rat(s.divisor)} -> {{{', '.join(format_rat(x) for x in s.shifted)}}}"
            for s in steps]
    return payload, "\n".join(rows + [f"mcd {format_rat(total)}"]), EXIT_OK


def cmd_no_mcd_set(args, spec):
    _family(spec, GRAMS)
    con = chains.build_no_mcd_set(spec, args.stages, parse_rat(args.enum_bound), args.enum_k,
                                  args.kmax)
    rows = [f"stage {st.index}: S={list(st.S)} ell={st.ell} {st.branch}"
            f" excluded {format_rat(st.excluded)} via {st.certificate.kind}"
            f" {format_rat(st.certificate.witness)} [{st.certificate.mode},"
            f" {'verified' if st.certificate.verified else 'unverified'}]"
            for st in con.stages]
    return con.to_json(), "\n".join(rows) if rows else "none", EXIT_OK


def cmd_rank2(args, spec):
    _family(spec, RANK2)
    rep = rank2.verify_no_2mcd(spec, chain_length=args.chain, node_cap=_node_cap(args))
    text = (f"K={rep.truncation}: {len(rep.entries)} common divisors of (1,0), (1,1);"
            f" every one strictly improved: {rep.no_mcd}; claims hold: {rep.claims_hold};"
            f" (0,1) rejected: {rep.zero_one_rejected}\nchain: "
            + ", ".join(str(c) for c in rep.chain))
    return rep.to_json(), text, EXIT_OK


def cmd_oracle(args, spec):
    if spec.family == RANK2:
        raise UsageError("the oracle works on rank-1 truncations")
    gens = spec.gens if spec.family == FINGEN else generators(spec)
    cap = _node_cap(args)
    xs = _rats(args.values)
    op = args.op
    if op == "member":
        ok, reason = membership_bf(xs[0], gens, cap)
        return _answer(ok, reason)
    if op == "factorize":
        fs = sorted(factorize_all(xs[0], gens, cap))
        payload = [f.to_json() for f in fs]
        return payload, "\n".join(json.dumps(p) for p in payload) if payload else "none", EXIT_OK
    if op == "atom":
        return _answer(is_atom_bf(xs[0], gens, cap))
    res = common_divisors_bf(xs, gens, cap) if op == "cd" else mcd_bf(xs, gens, cap)
    payload = [format_rat(d) for d in res]
    return payload, " ".join(payload) if payload else "none", EXIT_OK


def cmd_report(args, spec):
    rep = experiments.run(args.seed if args.seed is not None else experiments.DEFAULT_SEED,
                          args.only)
    rows = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['criterion']}. {c['name']}"
            for c in rep["criteria"]]
    code = EXIT_OK if all(c["passed"] for c in rep["criteria"]) else EXIT_INVARIANT
    return rep, "\n".join(rows), code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="monoid spec JSON file, or a preset: "
                        + ", ".join(PRESETS))
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--truncation", type=int, help="override the descriptor's K")
    common.add_argument("--node-cap", type=int, help="search budget (env MCD_LAB_NODE_CAP)")
    common.add_argument("--seed", type=int, help="seed for randomized reports")

    ap = _Parser(prog="mcd-lab", description="Maximal common divisors in Puiseux monoids.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "validate a spec file")
    add("generators", cmd_generators, "list defining generators").add_argument(
        "-k", type=int, help="how many (default K)")
    add("atoms", cmd_atoms, "atoms among the generators").add_argument("-k", type=int)
    add("decompose", cmd_decompose, "canonical or reduced form").add_argument("q")
    add("member", cmd_member, "membership test (rank2: 'x,y')").add_argument("q")
    p = add("divides", cmd_divides, "does a divide b")
    p.add_argument("a")
    p.add_argument("b")
    add("mcd", cmd_mcd, "a maximal common divisor").add_argument("S", nargs="+")
    p = add("mcd-enum", cmd_mcd_enum, "all MCDs with the given c0 parts")
    p.add_argument("S", nargs="+")
    p.add_argument("--c0", nargs="+", help="c0 candidates (default: min c0)")
    p = add("chain", cmd_chain, "links of a non-stabilizing chain")
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--stop", type=int, default=3)
    add("descent", cmd_descent, "MCD by divisor descent (finitely generated)").add_argument(
        "S", nargs="+")
    p = add("no-mcd-set", cmd_no_mcd_set, "staged subset with no MCD")
    p.add_argument("--stages", type=int, default=4)
    p.add_argument("--enum-bound", default="1")
    p.add_argument("--enum-k", type=int, default=2)
    p.add_argument("--kmax", type=int, default=chains.DEFAULT_KMAX)
    add("rank2", cmd_rank2, "common divisors of (1,0), (1,1) and their improvements"
        ).add_argument("--chain", type=int, default=5)
    p = add("oracle", cmd_oracle, "brute force on the truncation")
    p.add_argument("op", choices=("member", "factorize", "cd", "mcd", "atom"))
    p.add_argument("values", nargs="+")
    add("report", cmd_report, "seeded acceptance report").add_argument(
        "--only", type=int, nargs="*", choices=sorted(experiments.CRITERIA))
    return ap


def emit(payload, text: str, as_json: bool) -> str:
    if as_json:
        if payload in (None, [], {}):
            payload = {}
        return json.dumps(payload, sort_keys=False) + "\n"
    return (text if text else "none") + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _load(args) if args.command != "report" else None
        payload, text, code = args.func(args, spec)
    except SpecValidationError as exc:
        return _fail(args, EXIT_INPUT, "invalid spec", exc.violations)
    except (TruncationExceeded, SearchOverflow) as exc:
        return _fail(args, EXIT_UNKNOWN, "unknown", [str(exc)])
    except InvariantViolation as exc:
        return _fail(args, EXIT_INVARIANT, "invariant violation", [str(exc)])
    except (DomainError, HypothesisViolation, UsageError) as exc:
        return _fail(args, EXIT_INPUT, "invalid input", [str(exc)])
    sys.stdout.write(emit(payload, text, args.json))
    return code


def _fail(args, code: int, kind: str, details) -> int:
    if args.json:
        sys.stdout.write(json.dumps({"error": kind, "details": list(details)}) + "\n")
    else:
        sys.stderr.write(f"{kind}: " + "; ".join(details) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
