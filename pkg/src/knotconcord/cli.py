"""Command-line interface: ``knotconcord <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 computation error,
3 verification mismatch.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .alg_concordance import (
    DEFAULT_BOUND,
    InvalidAlexanderError,
    SearchBudgetExceeded,
    find_metabolizer,
    fox_milnor,
)
from .branched_cover import SingularFormError, characters, cover_homology, linking_form
from .casson_gordon import obstruction_report, pairwise_survey
from .cyclotomic import CertificationError
from .polynomials import DegreeCapExceeded
from .seifert import KnotParseError, alexander, describe, genus, loads, seifert_matrix
from .signatures import knot_profile, knot_signature
from .verify import ALIASES, CHECKS, verify_paper

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def read_knot(arg: str):
    """Inline JSON, or a path to a JSON file."""
    text = arg
    if not arg.lstrip().startswith("{"):
        if not os.path.isfile(arg):
            raise KnotParseError(f"no such file and not inline JSON: {arg!r}")
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    return loads(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="knotconcord", description="Exact concordance invariants of knots given as Seifert-form expressions.")
    p.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--reproducible", action="store_true", help="omit the timestamp and timings")
    common.add_argument("--output", "-o", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def knot_cmd(name, help_):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("--knot", required=True, help="knot expression as inline JSON or a file path")
        return c

    knot_cmd("invariants", "Alexander polynomial, genus bound and Fox-Milnor test")
    c = knot_cmd("signature", "Tristram-Levine signature and nullity at p")
    c.add_argument("--p", type=_fraction, required=True, help="rational argument, e.g. 1/5")
    knot_cmd("profile", "CSV step function of the signature on (0, 1/2]")
    c = knot_cmd("cover", "homology of the double branched cover and its linking form")
    c.add_argument("--q", type=int, help="also list characters to Z/q up to sign")
    c = knot_cmd("metabolizer", "bounded search for a metabolizer of the Seifert form")
    c.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    c.add_argument("--max-nodes", type=int, default=2_000_000)
    c.add_argument("--no-prefilter", action="store_true", help="search even when an obstruction is known")

    c = sub.add_parser("obstruct", parents=[common], help="Casson-Gordon obstruction for J_i # J_j")
    c.add_argument("i", type=int)
    c.add_argument("j", type=int)
    c = sub.add_parser("survey", parents=[common], help="verdict table for all pairs in [lo, hi]")
    c.add_argument("lo", type=int)
    c.add_argument("hi", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c = sub.add_parser("verify-paper", parents=[common], help="recompute the published values")
    c.add_argument("--only", action="append", help=f"check to run (repeatable): {', '.join(CHECKS)}")
    c.add_argument("--range", nargs=2, type=int, metavar=("LO", "HI"), help="family range for the family checks")
    return p


# ---------------------------------------------------------------------------


def _emit(args, text: str | None, payload: dict):
    if args.json:
        doc = dict(payload)
        if not args.reproducible:
            doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        out = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_invariants(args) -> int:
    k = read_knot(args.knot)
    delta = alexander(k)
    try:
        fm = fox_milnor(delta)
        fm_text = ("pass" if fm.passed else "fail") + f" ({fm.reason})"
        fm_doc = {"passed": fm.passed, "reason": fm.reason}
        if fm.passed and fm.f is not None:
            fm_doc["f"] = str(fm.f)
    except DegreeCapExceeded as exc:
        fm_text, fm_doc = f"undecided ({exc})", {"passed": None, "reason": str(exc)}
    g = genus(k)
    text = "\n".join([
        f"knot: {describe(k)}",
        f"alexander: {delta}",
        f"genus bound: {g}",
        f"fox-milnor: {fm_text}",
    ])
    _emit(args, text, {"knot": describe(k), "alexander": list(delta.coeffs), "genus_bound": g, "fox_milnor": fm_doc})
    return EXIT_OK


def cmd_signature(args) -> int:
    k = read_knot(args.knot)
    s = knot_signature(k, args.p)
    _emit(args, str(s), {"knot": describe(k), "p": _fr(args.p), "signature": s.signature, "nullity": s.nullity})
    return EXIT_OK


def cmd_profile(args) -> int:
    k = read_knot(args.knot)
    prof = knot_profile(k)
    doc = {
        "knot": describe(k),
        "jumps": [j.render() for j in prof.jumps],
        "intervals": [
            {"p_lo": row[0], "p_hi": row[1], "signature": int(row[2])}
            for row in (line.split(",") for line in prof.to_csv().splitlines()[1:])
        ],
    }
    _emit(args, prof.to_csv(), doc)
    return EXIT_OK


def cmd_cover(args) -> int:
    k = read_knot(args.knot)
    V = seifert_matrix(k)
    h = cover_homology(V)
    form = linking_form(V)
    lines = [f"knot: {describe(k)}", f"H1: {h.describe()}", f"order: {h.order}"]
    lines.append("meridians: " + ", ".join(f"e{i} -> {list(h.meridian(i))}" for i in range(h.rank)))
    lines.append("linking form:")
    for row in form.matrix:
        lines.append("  " + " ".join(_fr(x) for x in row))
    doc = {
        "knot": describe(k),
        "factors": list(h.factors),
        "order": h.order,
        "meridians": [list(h.meridian(i)) for i in range(h.rank)],
        "linking_form": [[_fr(x) for x in row] for row in form.matrix],
    }
    if args.q is not None:
        if args.q < 2:
            raise UsageError("--q must be at least 2")
        chars = characters(h, args.q)
        lines.append(f"characters to Z/{args.q} (up to sign, values on e0..): " + ", ".join(str(list(c.values)) for c in chars))
        doc["characters"] = [list(c.values) for c in chars]
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK


def cmd_metabolizer(args) -> int:
    k = read_knot(args.knot)
    V = seifert_matrix(k)
    w = find_metabolizer(V, args.bound, prefilter=not args.no_prefilter, max_nodes=args.max_nodes)
    if w is None:
        text = f"no metabolizer with entries bounded by {args.bound}"
        doc = {"knot": describe(k), "bound": args.bound, "witness": None}
    else:
        text = "metabolizer basis:\n" + "\n".join("  " + " ".join(str(x) for x in row) for row in w.basis)
        doc = {"knot": describe(k), "bound": args.bound, "witness": [list(r) for r in w.basis], "verified": w.verify(V)}
    _emit(args, text, doc)
    return EXIT_OK


def _report_text(rep) -> str:
    d = rep.to_dict()
    out = [f"J_{d['i']} # J_{d['j']}: {' # '.join(d['summands'])}"]
    out += [f"  {step}" for step in d["reduction_chain"]]
    out.append(f"reduced sum: {' # '.join(d['reduced_summands']) or 'unknot'}")
    out.append(f"H1: {' + '.join(d['group']) or '0'}")
    out += [f"relation: {r}" for r in d["normalization_relations"]]
    for m in rep.metabolizers:
        gens = ", ".join(str(g) for g in m.generators)
        out.append(f"metabolizer <{gens}>: {'certified' if m.certified else 'not certified'}")
        for c in m.characters:
            if c.value is None:
                out.append(f"  chi={c.character}: skipped (trivial on a summand)")
            else:
                out.append(f"  chi={c.character}: {c.value}  ->  {c.reduced}")
    out.append(f"verdict: {rep.verdict}")
    out.append("geometric step: paper-asserted")
    return "\n".join(out)


def cmd_obstruct(args) -> int:
    rep = obstruction_report(args.i, args.j)
    _emit(args, _report_text(rep), rep.to_dict())
    return EXIT_OK


def cmd_survey(args) -> int:
    if args.lo > args.hi:
        raise UsageError("survey needs lo <= hi")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    table = pairwise_survey(args.lo, args.hi, jobs=args.jobs)
    _emit(args, table.to_text(), table.to_dict())
    return EXIT_OK


def cmd_verify(args) -> int:
    only = args.only
    if only:
        for n in only:
            if n not in CHECKS and n not in ALIASES:
                raise UsageError(f"unknown check {n!r}; choose from {', '.join(CHECKS)}")
    rng = tuple(args.range) if args.range else None
    if rng and rng[0] > rng[1]:
        raise UsageError("--range needs LO <= HI")
    results = verify_paper(only, rng)
    timings = not args.reproducible
    ok = all(r.passed for r in results)
    text = "\n".join(r.line(timings) for r in results)
    text += f"\n{sum(r.passed for r in results)}/{len(results)} checks passed"
    _emit(args, text, {"checks": [r.to_dict(timings) for r in results], "passed": ok})
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {
    "invariants": cmd_invariants,
    "signature": cmd_signature,
    "profile": cmd_profile,
    "cover": cmd_cover,
    "metabolizer": cmd_metabolizer,
    "obstruct": cmd_obstruct,
    "survey": cmd_survey,
    "verify-paper": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KnotParseError as exc:
        print(f"error: invalid knot expression: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CertificationError, SingularFormError, DegreeCapExceeded, SearchBudgetExceeded, InvalidAlexanderError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
