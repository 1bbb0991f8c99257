"""Command line front end.

Exit codes: 0 success (valid, found, suite clean), 1 failure (invalid, not
found, untypable, suite failures), 2 usage or parse errors, 3 search or fuel
budget exhausted.  Set LAMMU_COLOR=1 to colorize verdicts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .grammar import (LanguageViolation, ParseError, parse_judgment,
                      parse_term, print_judgment, print_term,
                      print_type)
from .iu import (InvalidNode, NotPureLambda, SearchBudget, check_derivation,
                 derivation_from_json, derivation_to_json, derive,
                 embed_simple)
from .metatheory import (demo_erasing_failure, suite_struct_subst,
                         suite_subject_expansion, suite_subject_reduction,
                         suite_term_subst)
from .reduction import RULES, format_trace, normalize
from .simple import (CheckFailure, SimpleJudgment, UntypableError,
                     check_simple, infer_simple)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

SUITES = {
    "subject-reduction": suite_subject_reduction,
    "subject-expansion": suite_subject_expansion,
    "term-subst": suite_term_subst,
    "struct-subst": suite_struct_subst,
}


def _color(text: str, code: str) -> str:
    if os.environ.get("LAMMU_COLOR", "") in ("1", "always", "yes"):
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _ok(msg: str) -> None:
    print(_color(msg, "32"))


def _bad(msg: str) -> None:
    print(_color(msg, "31"), file=sys.stderr)


def _read_source(arg: str | None) -> str:
    if arg is None or arg == "-":
        return sys.stdin.read()
    return arg


def cmd_fmt(args) -> int:
    term = parse_term(_read_source(args.term))
    print(print_term(term))
    return EXIT_OK


def cmd_reduce(args) -> int:
    term = parse_term(_read_source(args.term))
    rules = set(args.rules.split(","))
    unknown = rules - set(RULES)
    if unknown:
        _bad(f"unknown rules: {', '.join(sorted(unknown))}")
        return EXIT_USAGE
    trace = normalize(term, rules, fuel=args.fuel)
    if args.trace:
        print(format_trace(trace))
    else:
        print(print_term(trace.final))
    if trace.fuel_exhausted:
        _bad("fuel exhausted")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_check_simple(args) -> int:
    gamma, term, ty, delta = parse_judgment(_read_source(args.judgment),
                                            language="curry")
    try:
        d = check_simple(SimpleJudgment(gamma, term, ty, delta))
    except CheckFailure as e:
        _bad(f"invalid: {e}")
        return EXIT_FAIL
    _ok(f"valid: {print_judgment(gamma, term, ty, delta)}")
    if args.cert:
        cert = derivation_to_json(embed_simple(d))
        if args.cert == "-":
            print(cert)
        else:
            with open(args.cert, "w") as fh:
                fh.write(cert + "\n")
    return EXIT_OK


def cmd_infer_simple(args) -> int:
    term = parse_term(_read_source(args.term))
    try:
        gamma, ty, delta = infer_simple(term)
    except UntypableError as e:
        _bad(f"untypable: {e}")
        return EXIT_FAIL
    print(print_judgment(gamma, term, ty, delta))
    return EXIT_OK


def cmd_check_iu(args) -> int:
    gamma, term, ty, delta = parse_judgment(_read_source(args.judgment))
    budget = SearchBudget(max_depth=args.depth, max_width=args.width)
    d = derive(gamma, term, ty, delta, budget)
    if d is None:
        _bad("not found" + (" (budget exhausted)" if budget.exhausted else ""))
        return EXIT_BUDGET if budget.exhausted else EXIT_FAIL
    _ok(f"found: {print_judgment(gamma, term, ty, delta)}")
    if args.cert:
        cert = derivation_to_json(d)
        if args.cert == "-":
            print(cert)
        else:
            with open(args.cert, "w") as fh:
                fh.write(cert + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cert == "-":
        text = sys.stdin.read()
    else:
        with open(args.cert) as fh:
            text = fh.read()
    d = derivation_from_json(text)
    try:
        check_derivation(d)
    except InvalidNode as e:
        _bad(f"invalid: {e}")
        return EXIT_FAIL
    j = d.conclusion
    _ok(f"valid: {print_judgment(j.gamma, j.term, j.ty, j.delta)}")
    return EXIT_OK


def cmd_metatheory(args) -> int:
    suite = SUITES[args.suite]
    budget = SearchBudget(max_depth=args.depth, max_width=args.width)
    report = suite(seed=args.seed, cases=args.cases, budget=budget)
    print(report.render())
    return EXIT_OK if report.fail == 0 else EXIT_FAIL


def _load_cert(name: str) -> str:
    return resources.files("lammu").joinpath(f"certs/{name}.json").read_text()


def cmd_examples(args) -> int:
    if args.name == "erasing":
        rep = demo_erasing_failure()
        j = rep["judgment_before"]
        print("before:", print_judgment(j.gamma, j.term, j.ty, j.delta))
        pos, rule = rep["step"]
        print(f"step:   {rule} at root")
        print("after:  ", print_term(rep["term_after"]), ":", print_type(j.ty),
              "under the same environments")
        if rep["derivable_after"] or rep["search_found_after"]:
            _bad("unexpectedly derivable after erasing")
            return EXIT_FAIL
        _ok("the reduced judgment is not derivable: erasing loses the union")
        return EXIT_OK
    cert = _load_cert(args.name.replace("-", "_"))
    d = derivation_from_json(cert)
    check_derivation(d)
    j = d.conclusion
    _ok(f"valid: {print_judgment(j.gamma, j.term, j.ty, j.delta)}")
    if args.cert:
        print(cert)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lammu",
        description="workbench for reduction and typing of lambda-mu terms")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fmt", help="parse a term and print it back")
    s.add_argument("term", nargs="?", help="term text, or - for stdin")
    s.set_defaults(func=cmd_fmt)

    s = sub.add_parser("reduce", help="normalize a term")
    s.add_argument("term", nargs="?")
    s.add_argument("--rules", default="beta,mu,renaming",
                   help="comma separated rule names (default beta,mu,renaming)")
    s.add_argument("--fuel", type=int, default=1000)
    s.add_argument("--trace", action="store_true",
                   help="print every step with its position and rule")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("check-simple", help="check a judgment in the simple system")
    s.add_argument("judgment", nargs="?")
    s.add_argument("--cert", metavar="FILE",
                   help="also write the embedded derivation certificate")
    s.set_defaults(func=cmd_check_simple)

    s = sub.add_parser("infer-simple", help="infer a principal simple typing")
    s.add_argument("term", nargs="?")
    s.set_defaults(func=cmd_infer_simple)

    s = sub.add_parser("check-iu",
                       help="search a derivation in the intersection-union system")
    s.add_argument("judgment", nargs="?")
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--width", type=int, default=4)
    s.add_argument("--cert", metavar="FILE", help="write the found certificate")
    s.set_defaults(func=cmd_check_iu)

    s = sub.add_parser("verify", help="check a derivation certificate")
    s.add_argument("cert", help="certificate file, or - for stdin")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("metatheory", help="run a metatheory suite")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=100)
    s.add_argument("--depth", type=int, default=9)
    s.add_argument("--width", type=int, default=4)
    s.set_defaults(func=cmd_metatheory)

    s = sub.add_parser("examples", help="walk through a bundled example")
    s.add_argument("name", choices=["peirce", "dne", "no-choice", "erasing"])
    s.add_argument("--cert", action="store_true",
                   help="print the bundled certificate")
    s.set_defaults(func=cmd_examples)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, LanguageViolation, json.JSONDecodeError) as e:
        _bad(f"parse error: {e}")
        return EXIT_USAGE
    except NotPureLambda as e:
        _bad(str(e))
        return EXIT_FAIL
    except OSError as e:
        _bad(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
