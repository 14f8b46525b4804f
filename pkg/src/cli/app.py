# src/cli/app.py
"""Command-line surface: diagram arithmetic, enumeration, degrees, actions and the brute-force oracle."""
import argparse
import json
import sys
from typing import List, Optional

from src.config.settings import settings
from src.core.actions import (
    ActionTable,
    CheckResult,
    build_action,
    check_action_law,
    check_faithful_full,
    check_faithful_minpairs,
    check_monogenic,
)
from src.core.degrees import deg_prime, family_size, table2_csv, table2_json
from src.core.diagram import (
    Family,
    families_of,
    format_diagram,
    is_planar,
    is_projection,
    minimal_pairs,
    multiply,
    parse_diagram,
    star,
    stats,
)
from src.core.errors import BudgetExceeded, DiagramError, FamilyError, ValidityError
from src.core.families import enumerate_family, projections, standard_generators
from src.core.oracle import TableMonoid, all_right_congruences, degrc_bruteforce, minimal_congruences
from src.utils.logger import logger
from src.utils.validation import parse_family, sanitize_degree

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _family(text: str) -> Family:
    try:
        return parse_family(text)
    except FamilyError as e:
        raise argparse.ArgumentTypeError(str(e))


def _degree(text: str) -> int:
    try:
        return sanitize_degree(int(text))
    except (ValueError, DiagramError) as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diagramdeg", description="Minimum transformation degrees of diagram monoids")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mul", help="multiply two diagrams")
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("star", help="involution of a diagram")
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("a")

    p = sub.add_parser("info", help="rank, kernels, planarity and family memberships")
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("a")

    p = sub.add_parser("enum", help="list elements or projections of a family")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--count", action="store_true")

    p = sub.add_parser("degree", help="degree by formula, construction or verified construction")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("--mode", choices=["formula", "construct", "verify"], default="formula")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("table", help="degree table for all families")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("action", help="export or verify a constructed action")
    p.add_argument("op", choices=["build", "verify"])
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--n", type=_degree, required=True)
    how = p.add_mutually_exclusive_group()
    how.add_argument("--full", action="store_true")
    how.add_argument("--minpairs", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="brute-force checks on tiny monoids")
    p.add_argument("op", choices=["rc-lattice", "minimal-congruences", "degrc"])
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("--cap", type=int)
    return parser


def _flag(result: Optional[CheckResult]) -> str:
    if result is None:
        return "n/a"
    return "true" if result.ok else "false"


def _faithfulness(t: ActionTable, full: Optional[bool] = None) -> CheckResult:
    if full is None:
        full = family_size(t.family, t.n) <= settings.full_check_limit
    if full:
        return check_faithful_full(t, enumerate_family(t.family, t.n))
    return check_faithful_minpairs(t, minimal_pairs(t.family, t.n))


def _monogenic(t: ActionTable) -> Optional[CheckResult]:
    # the even Brauer push-out is not monogenic
    if t.seed is None or t.construction == "brauer-even":
        return None
    return check_monogenic(t, t.seed, standard_generators(t.family, t.n))


def _verify(t: ActionTable, full: Optional[bool] = None, law: bool = False) -> List[CheckResult]:
    checks = [_faithfulness(t, full)]
    mono = _monogenic(t)
    if mono is not None:
        checks.append(mono)
    if law:
        m = enumerate_family(t.family, t.n)
        sample = None if len(m) ** 2 <= settings.full_check_limit * 50 else 5000
        checks.append(check_action_law(t, m, sample=sample))
    return checks


def _require_valid(f: Family, n: int):
    report = deg_prime(f, n)
    if not report.valid:
        raise ValidityError(f"{f.value}_{n} is outside validity range {report.validity}")
    return report


def _cmd_degree(args) -> int:
    report = _require_valid(args.family, args.n)
    if args.mode == "formula":
        if args.format == "json":
            print(report.model_dump_json())
        else:
            print(f"deg={report.deg} deg_prime={report.deg_prime}")
        return EXIT_OK
    t = build_action(args.family, args.n)
    matches = t.deg_prime == report.deg_prime
    if args.mode == "construct":
        payload = {"family": t.family.value, "n": t.n, "construction": t.construction,
                   "deg": t.degree, "deg_prime": t.deg_prime, "formula_deg_prime": report.deg_prime}
        if args.format == "json":
            print(json.dumps(payload))
        else:
            print(f"deg={t.degree} deg_prime={t.deg_prime} construction={t.construction} formula_match={str(matches).lower()}")
        return EXIT_OK if matches else EXIT_FAILED
    checks = _verify(t)
    faithful = checks[0]
    mono = next((c for c in checks if c.mode == "monogenic"), None)
    ok = matches and all(checks)
    if args.format == "json":
        print(json.dumps({"deg": t.degree, "deg_prime": t.deg_prime, "faithful": faithful.ok,
                          "monogenic": None if mono is None else mono.ok,
                          "checks": [c.mode for c in checks], "formula_match": matches}))
    else:
        print(f"deg={t.degree} deg_prime={t.deg_prime} faithful={_flag(faithful)} monogenic={_flag(mono)}")
        print("checks=" + ",".join(c.mode for c in checks) + f" formula_match={str(matches).lower()}")
    for c in checks:
        if not c.ok:
            print(f"witness[{c.mode}]: {c.witness}")
    return EXIT_OK if ok else EXIT_FAILED


def _cmd_action(args) -> int:
    t = build_action(args.family, args.n)
    if args.op == "build":
        text = t.to_json(standard_generators(t.family, t.n))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text + "\n")
            logger.info(f"Wrote {t.degree}-state action to {args.out}")
        else:
            print(text)
        return EXIT_OK
    full = True if args.full else False if args.minpairs else None
    checks = _verify(t, full=full, law=full is not False)
    for c in checks:
        line = f"{c.mode}: {'ok' if c.ok else 'FAILED'}"
        print(line if c.ok else f"{line} ({c.witness})")
    return EXIT_OK if all(checks) else EXIT_FAILED


def _cmd_oracle(args) -> int:
    cap = settings.oracle_cap if args.cap is None else args.cap
    size = family_size(args.family, args.n)
    if size > cap:
        raise BudgetExceeded(f"|{args.family.value}_{args.n}| = {size} exceeds oracle cap {cap}")
    m = enumerate_family(args.family, args.n)
    t = TableMonoid.from_monoid(m)
    out = {"family": args.family.value, "n": args.n}
    if args.op == "rc-lattice":
        lattice = all_right_congruences(t, cap)
        out.update(count=len(lattice), classes=[r.num_classes for r in lattice])
    elif args.op == "minimal-congruences":
        found = minimal_congruences(t, cap)
        out.update(count=len(found), congruences=[
            [[format_diagram(m[i]) for i in cls] for cls in r.classes() if len(cls) > 1] for r in found])
    else:
        out.update(degrc=degrc_bruteforce(t, cap))
    print(json.dumps(out))
    return EXIT_OK


def _dispatch(args) -> int:
    if args.command in ("mul", "star", "info"):
        a = parse_diagram(args.a, args.n)
        if args.command == "mul":
            print(format_diagram(multiply(a, parse_diagram(args.b, args.n))))
        elif args.command == "star":
            print(format_diagram(star(a)))
        else:
            s = stats(a)
            print(json.dumps({"n": a.n, "rank": s.rank, "dom": list(s.dom), "codom": list(s.codom),
                              "ker": str(s.ker), "coker": str(s.coker), "planar": is_planar(a),
                              "projection": is_projection(a), "families": [f.value for f in families_of(a)]}))
        return EXIT_OK
    if args.command == "enum":
        if args.rank is not None:
            items = projections(args.family, args.n, args.rank)
        else:
            items = list(enumerate_family(args.family, args.n))
        if args.count:
            payload = {"family": args.family.value, "n": args.n}
            if args.rank is not None:
                payload["r"] = args.rank
            payload["count"] = len(items)
            print(json.dumps(payload))
        else:
            sys.stdout.write("".join(format_diagram(d) + "\n" for d in items))
        return EXIT_OK
    if args.command == "degree":
        return _cmd_degree(args)
    if args.command == "table":
        text = table2_csv(args.max_n) if args.format == "csv" else table2_json(args.max_n) + "\n"
        sys.stdout.write(text)
        return EXIT_OK
    if args.command == "action":
        return _cmd_action(args)
    return _cmd_oracle(args)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DiagramError, FamilyError, ValidityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
