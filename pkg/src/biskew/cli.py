"""Command-line entry point: ``biskew <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or cap errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .groups import GroupError, VerificationError, build_group
from .maps import enumerate_abelian_maps
from .report import MAX_REPORT_ORDER, classify, dihedral_table
from .suite import run_suite
from .ybe import four_solutions

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VARIANT_INDEX = {"R1": 0, "R2": 1, "R3": 2, "R4": 3}


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load(spec: str):
    g = build_group(spec)
    if g.order > MAX_REPORT_ORDER:
        raise GroupError(f"order {g.order} exceeds cap {MAX_REPORT_ORDER}")
    return g


def cmd_classify(args) -> tuple[str, int]:
    rep = classify(_load(args.spec))
    if args.csv:
        fields = ["index", "images", "fixed_point_free", "type", "equals_lambda", "opposite_distinct",
                  "subgroup_index", "opposite_index"]
        rows = [[i, " ".join(map(str, r.images)), r.fixed_point_free, r.type, r.equals_lambda,
                 r.opposite_distinct, r.subgroup_index, r.opposite_index] for i, r in enumerate(rep.records)]
        return _csv_text(fields, rows), EXIT_OK
    return _json_text(rep.to_dict()), EXIT_OK


def cmd_dihedral_table(args) -> tuple[str, int]:
    rows = dihedral_table(args.max_n)
    code = EXIT_OK if all(r.match for r in rows) else EXIT_FAIL
    if args.csv:
        keys = sorted({k for r in rows for k in r.computed})
        header = ["n", *(f"predicted_{k}" for k in keys), *(f"computed_{k}" for k in keys), "match"]
        body = [[r.n, *(r.predicted.get(k, 0) for k in keys), *(r.computed.get(k, 0) for k in keys), r.match]
                for r in rows]
        return _csv_text(header, body), code
    data = [{"n": r.n, "predicted": r.predicted, "computed": r.computed, "match": r.match} for r in rows]
    return _json_text({"rows": data, "all_match": code == EXIT_OK}), code


def cmd_verify(args) -> tuple[str, int]:
    res = run_suite(_load(args.spec), oracle=args.oracle, jobs=args.jobs)
    code = EXIT_OK if res.ok else EXIT_FAIL
    summary = res.summary()
    if args.csv:
        rows = [[fam, s["pass"], s["checked"], len(res.failures[fam])] for fam, s in summary.items()]
        return _csv_text(["family", "pass", "checked", "failures"], rows), code
    return _json_text({"group": res.group, "ok": res.ok, "families": summary}), code


def cmd_ybe(args) -> tuple[str, int]:
    g = _load(args.spec)
    maps = enumerate_abelian_maps(g)
    if not 0 <= args.map < len(maps):
        raise GroupError(f"map index {args.map} out of range 0..{len(maps) - 1}")
    sol = four_solutions(maps[args.map])[VARIANT_INDEX[args.variant]]
    if args.csv:
        rows = [[x, y, a, b] for x, row in enumerate(sol.table.tolist()) for y, (a, b) in enumerate(row)]
        return _csv_text(["x", "y", "r_first", "r_second"], rows), EXIT_OK
    return _json_text({
        "group": g.spec,
        "map": maps[args.map].images.tolist(),
        "variant": args.variant,
        "size": sol.size,
        "R": sol.table.tolist(),
        "properties": {"involutive": sol.involutive, "nondegenerate": True, "braid": True},
    }), EXIT_OK


def cmd_maps(args) -> tuple[str, int]:
    g = _load(args.spec)
    maps = enumerate_abelian_maps(g)
    if args.csv:
        rows = [[i, " ".join(map(str, m.images.tolist())), m.fixed_point_free] for i, m in enumerate(maps)]
        return _csv_text(["index", "images", "fixed_point_free"], rows), EXIT_OK
    data = [{"index": i, "images": m.images.tolist(), "fixed_point_free": m.fixed_point_free,
             "generators": {g.names[x]: g.names[m.images[x]] for x in g.generating_set}}
            for i, m in enumerate(maps)]
    return _json_text({"group": g.spec, "count": len(maps), "maps": data}), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def options(suppress: bool) -> argparse.ArgumentParser:
        # globals are accepted before or after the command; the copy on the
        # subcommands must not overwrite values given up front
        p = argparse.ArgumentParser(add_help=False)
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--csv", action="store_true", default=default(False), help="CSV instead of JSON")
        p.add_argument("--out", default=default(None), help="write output to this file instead of stdout")
        p.add_argument("--jobs", type=int, default=default(1), help="worker processes for per-map checks")
        return p

    parser = argparse.ArgumentParser(prog="biskew", description=__doc__.splitlines()[0], parents=[options(False)])
    common = options(True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="enumerate maps, build and type every N")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("dihedral-table", parents=[common], help="closed-form counts vs computation for D_n")
    p.add_argument("--max-n", type=int, default=12)
    p.set_defaults(func=cmd_dihedral_table)

    p = sub.add_parser("verify", parents=[common], help="run every invariant family on one group")
    p.add_argument("spec")
    p.add_argument("--oracle", action="store_true", help="also compare against brute-force search (order <= 8)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ybe", parents=[common], help="emit one of the four solutions of an abelian map")
    p.add_argument("spec")
    p.add_argument("--map", type=int, default=0, help="index into the `maps` listing")
    p.add_argument("--variant", choices=sorted(VARIANT_INDEX), default="R1")
    p.set_defaults(func=cmd_ybe)

    p = sub.add_parser("maps", parents=[common], help="list abelian maps")
    p.add_argument("spec")
    p.set_defaults(func=cmd_maps)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage or help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        text, code = args.func(args)
    except GroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
