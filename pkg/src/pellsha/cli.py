"""Command line interface.

Subcommands: sha, verify, classgroup, conic, form. Output formats:
table (default), json, csv. JSON output renders every number as a
decimal string and uses a fixed key order, so output is byte-identical
regardless of --jobs. Exit codes: 0 success / verified, 1 a requested
verification failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .arith import prime_divisors, valuation
from .bqf import (Form, class_group, compose, form_class, is_equivalent,
                  principal_form, reduce, represents_globally)
from .conic import fundamental_point, scalar_mul, torsion_points, ConicPoint
from .oracle import brute_local, naive_class_count
from .qfield import NotFundamental, PerfectSquare, as_discriminant
from .sha import ShaReport, scan, verify_main_theorem

_CSV_HEADER = "D,h_plus,t,sha_order,squared_order,genus_index,ok"


def _form_str(f: Form) -> str:
    return f"{f.a},{f.b},{f.c}"


def _parse_form(text: str) -> Form:
    try:
        a, b, c = (int(part) for part in text.split(","))
    except ValueError:
        raise SystemExit(2)
    return Form(a, b, c)


def _report_dict(r: ShaReport) -> dict:
    return {
        "D": str(r.D),
        "h_plus": str(r.h_plus),
        "t": str(r.t),
        "sha_order": str(r.sha_order),
        "squared_order": str(r.squared_order),
        "genus_index": str(r.genus_index),
        "ok": r.ok,
        "sha_classes": [_form_str(c.rep) for c in r.sha_classes],
        "hasse_failures": [_form_str(c.rep) for c in r.hasse_failures],
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _report_row(r: ShaReport) -> str:
    return (f"{r.D},{r.h_plus},{r.t},{r.sha_order},{r.squared_order},"
            f"{r.genus_index},{str(r.ok).lower()}")


def _report_table(rows: list[ShaReport]) -> str:
    header = ["D", "h+", "t", "#Sha", "#Cl^2", "2^(t-1)", "ok"]
    data = [[str(r.D), str(r.h_plus), str(r.t), str(r.sha_order),
             str(r.squared_order), str(r.genus_index),
             "ok" if r.ok else "FAIL"] for r in rows]
    widths = [max(len(header[i]), *(len(d[i]) for d in data)) if data else len(header[i])
              for i in range(len(header))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for d in data:
        lines.append("  ".join(v.rjust(w) for v, w in zip(d, widths)))
    return "\n".join(lines)


def _paranoid_ok(r: ShaReport) -> bool:
    """Re-check a report row against the brute-force oracles."""
    if naive_class_count(r.D) != r.h_plus:
        return False
    for cls in r.sha_classes:
        for p in prime_divisors(2 * r.D):
            k = valuation(4 * r.D, p) + 3
            if not brute_local(cls.rep, 1, p, k):
                return False
    return True


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("PELLSHA_JOBS", "1")))
    except ValueError:
        return 1


def cmd_sha(args) -> int:
    disc = as_discriminant(args.D)
    report = verify_main_theorem(disc)
    if args.paranoid and not _paranoid_ok(report):
        report.ok = False
    if args.format == "json":
        print(_dump_json(_report_dict(report)))
    elif args.format == "csv":
        print(_CSV_HEADER)
        print(_report_row(report))
    else:
        print(_report_table([report]))
        if report.sha_classes:
            print("sha classes:     " + "  ".join(_form_str(c.rep) for c in report.sha_classes))
        if report.hasse_failures:
            print("hasse failures:  " + "  ".join(_form_str(c.rep) for c in report.hasse_failures))
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    reports = scan(args.min, args.max, jobs=args.jobs)
    if args.paranoid:
        for r in reports:
            if r.ok and not _paranoid_ok(r):
                r.ok = False
    bad = [r for r in reports if not r.ok]
    if args.format == "json":
        print(_dump_json([_report_dict(r) for r in reports]))
    elif args.format == "csv":
        print(_CSV_HEADER)
        for r in reports:
            print(_report_row(r))
    else:
        print(_report_table(reports))
        print(f"checked {len(reports)} discriminants in [{args.min}, {args.max}]: "
              f"{len(reports) - len(bad)} ok, {len(bad)} failed")
    return 1 if bad else 0


def cmd_classgroup(args) -> int:
    disc = as_discriminant(args.D)
    G = class_group(disc)
    structure = G.structure
    if args.format == "json":
        print(_dump_json({
            "D": str(disc.D),
            "h_plus": str(G.order),
            "structure": [str(d) for d in structure],
            "classes": [_form_str(c.rep) for c in G.elements],
        }))
    elif args.format == "csv":
        print("D,h_plus,structure,classes")
        struct = "x".join(str(d) for d in structure) or "1"
        classes = ";".join(_form_str(c.rep) for c in G.elements)
        print(f'{disc.D},{G.order},{struct},"{classes}"')
    else:
        struct = " x ".join(f"Z/{d}" for d in structure) or "trivial"
        print(f"D = {disc.D}: h+ = {G.order}, Cl+ = {struct}")
        for c in G.elements:
            tag = "  (identity)" if c == G.identity else ""
            print(f"  {_form_str(c.rep)}{tag}")
    return 0


def _point_str(P: ConicPoint) -> str:
    return f"({P.x}, {P.y})"


def cmd_conic(args) -> int:
    disc = as_discriminant(args.D)
    if disc.D > 0:
        gen = fundamental_point(disc)
        pts = [scalar_mul(disc, k, gen) for k in range(1, args.count + 1)]
        if args.format == "json":
            print(_dump_json({
                "D": str(disc.D),
                "fundamental_point": [str(gen.x), str(gen.y)],
                "multiples": [[str(p.x), str(p.y)] for p in pts],
            }))
        else:
            print(f"D = {disc.D}: fundamental point {_point_str(gen)}")
            for k, p in enumerate(pts, start=1):
                print(f"  {k}P = {_point_str(p)}")
    else:
        tors = torsion_points(disc)
        gen = max(tors, key=lambda p: _point_order(disc, p))
        pts = [scalar_mul(disc, k, gen) for k in range(1, args.count + 1)]
        if args.format == "json":
            print(_dump_json({
                "D": str(disc.D),
                "torsion": [[str(p.x), str(p.y)] for p in tors],
                "generator": [str(gen.x), str(gen.y)],
                "multiples": [[str(p.x), str(p.y)] for p in pts],
            }))
        else:
            print(f"D = {disc.D}: torsion " + " ".join(_point_str(p) for p in tors))
            print(f"generator {_point_str(gen)}")
            for k, p in enumerate(pts, start=1):
                print(f"  {k}P = {_point_str(p)}")
    return 0


def _point_order(disc, P) -> int:
    from .conic import add, identity

    k, cur = 1, P
    while cur != identity(disc):
        cur = add(disc, cur, P)
        k += 1
    return k


def cmd_form(args) -> int:
    disc = as_discriminant(args.D)
    D = disc.D

    def check(f: Form):
        if f.disc != D:
            print(f"form {_form_str(f)} has discriminant {f.disc}, not {D}",
                  file=sys.stderr)
            raise SystemExit(2)

    if args.action == "reduce":
        f = _parse_form(args.forms[0])
        check(f)
        g, M = reduce(f if D > 0 or f.a > 0 else f.neg())
        if D < 0 and f.a < 0:
            g = g.neg()
        print(_form_str(g))
        return 0
    if args.action == "compose":
        f, g = _parse_form(args.forms[0]), _parse_form(args.forms[1])
        check(f)
        check(g)
        print(_form_str(compose(form_class(f), form_class(g)).rep))
        return 0
    if args.action == "equiv":
        f, g = _parse_form(args.forms[0]), _parse_form(args.forms[1])
        check(f)
        check(g)
        print("true" if is_equivalent(f, g) else "false")
        return 0
    if args.action == "represent":
        f = _parse_form(args.forms[0])
        check(f)
        n = int(args.forms[1])
        witness = represents_globally(f, n, args.bound)
        if witness is None:
            print("none")
        else:
            print(f"{witness[0]},{witness[1]}")
        return 0
    raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"),
                        default="table")
    common.add_argument("--jobs", type=int, default=_jobs_default(),
                        help="worker processes (default $PELLSHA_JOBS or 1)")
    common.add_argument("--paranoid", action="store_true",
                        help="re-check results with brute-force oracles")

    ap = argparse.ArgumentParser(
        prog="pellsha",
        description="Hasse-principle failures of Pell conics x^2 - D y^2 = 4 over Z")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sha", parents=[common],
                       help="Sha report for one discriminant")
    p.add_argument("D", type=int)
    p.set_defaults(func=cmd_sha)

    p = sub.add_parser("verify", parents=[common],
                       help="verify #Sha = #(Cl+)^2 over a range")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classgroup", parents=[common],
                       help="narrow class group via reduced forms")
    p.add_argument("D", type=int)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("conic", parents=[common],
                       help="integral points of the Pell conic")
    p.add_argument("D", type=int)
    p.add_argument("--count", type=int, default=5,
                   help="how many multiples of the generator to print")
    p.set_defaults(func=cmd_conic)

    p = sub.add_parser("form", parents=[common],
                       help="reduce / compose / equiv / represent")
    p.add_argument("action", choices=("reduce", "compose", "equiv", "represent"))
    p.add_argument("D", type=int)
    p.add_argument("forms", nargs="+",
                   help="forms as a,b,c (represent takes a form then n)")
    p.add_argument("--bound", type=int, default=1000)
    p.set_defaults(func=cmd_form)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotFundamental, PerfectSquare) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        raise exc
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
