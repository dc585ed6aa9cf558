"""Command line front end.

Exit codes: 0 when every check passes, 1 when a mathematical verdict is
negative, 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import brat
from .bundles import build, build_case2, closed_form_connection, trivialization_Mn
from .calculus import CalculusError, calculus_report

OK, NEGATIVE, USAGE = 0, 1, 2


def _int_list(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _subset(text: str) -> list:
    pairs = re.findall(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text)
    leftover = re.sub(r"\(\s*-?\d+\s*,\s*-?\d+\s*\)|[\s,]", "", text)
    if leftover:
        raise argparse.ArgumentTypeError(f"cannot parse subset {text!r}; expected e.g. \"(0,1),(1,0)\"")
    return [(int(a), int(b)) for a, b in pairs]


def _emit(args, payload: dict, lines: list[str]) -> None:
    target = getattr(args, "json", None)
    if target == "-":
        print(json.dumps(payload, indent=2))
        return
    for line in lines:
        print(line)
    if target:
        with open(target, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _flag(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def _piece_lines(r: brat.PieceReport) -> list[str]:
    lines = [
        f"{r.label}: hopf-galois={r.is_hopf_galois} dims={tuple(r.dims)} rank={r.rank}",
        f"  base is coinvariant: {_flag(r.base_is_coinvariant)}",
        f"  back map: {_flag(r.back_map_ok)}",
        f"  averaged connection equals closed form: {_flag(r.connections_equal)}",
    ]
    lines += [f"  {name}: {_flag(v)}" for name, v in r.checks.items()]
    return lines


def _run_case(args, kind: str, params: dict) -> int:
    r = brat.analyze_piece(kind, params, f"{kind}({', '.join(f'{k}={v}' for k, v in params.items())})")
    payload = r.to_json()
    payload["connection"] = closed_form_connection(build(int(kind[-1]), params)).to_json()
    _emit(args, payload, _piece_lines(r))
    return OK if r.ok else NEGATIVE


def cmd_case1(args) -> int:
    return _run_case(args, "case1", {"lengths": args.lengths})


def cmd_case2(args) -> int:
    return _run_case(args, "case2", {"k": args.k, "n": args.n})


def cmd_case3(args) -> int:
    return _run_case(args, "case3", {"dims": args.dims, "n": args.n})


def cmd_analyze(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            level = brat.parse_level(fh.read())
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except brat.LevelError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return USAGE

    if args.direct:
        v = brat.analyze_direct(level)
        lines = [f"direct inclusion {brat.render_level(level)}", f"  hopf-galois={v.is_hopf_galois} dims={tuple(v.dims)}"]
        if v.obstruction:
            lines.append(f"  obstruction: {v.obstruction}")
        _emit(args, v.to_json(), lines)
        return OK if v.is_hopf_galois else NEGATIVE

    try:
        plan = brat.decompose(level)
        report = brat.analyze(plan, max_dim=args.max_dim, workers=args.workers)
    except brat.LevelError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    lines = [f"level {report.level}"]
    for name, labels in zip("ABC", report.stages):
        lines.append(f"stage {name}: " + "; ".join(labels))
    lines.append(f"composite equals level embedding: {_flag(report.composite_matches)}")
    for r in report.pieces:
        lines += _piece_lines(r)
    lines.append("all checks passed" if report.ok else "some checks FAILED")
    _emit(args, report.to_json(), lines)
    return OK if report.ok else NEGATIVE


def cmd_trivial(args) -> int:
    t = trivialization_Mn(args.n)
    lines = [f"trivialization of M{args.n} over C[Z{args.n}xZ{args.n}]"]
    lines += [f"  {name}: {_flag(v)}" for name, v in t.checks.items()]
    ok = all(t.checks.values())
    _emit(args, {"n": args.n, "checks": t.checks, "ok": ok}, lines)
    return OK if ok else NEGATIVE


def cmd_calculus(args) -> int:
    try:
        rep = calculus_report(build_case2(1, args.n), args.subset)
    except CalculusError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    lines = [f"M{args.n}, subset {list(rep.subset)}: {rep.description}", f"  leibniz: {_flag(rep.leibniz_ok)}"]
    if rep.inner_central_basis:
        lines += [f"  inner {k}: {v}" for k, v in rep.to_json()["inner_element_central_basis"].items()]
    lines += [f"  {r}" for r in rep.relations]
    _emit(args, rep.to_json(), lines)
    return OK if rep.leibniz_ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfbrat", description="Hopf-Galois checks for Bratteli-diagram embeddings")
    sub = p.add_subparsers(dest="command", required=True)

    def with_json(sp):
        sp.add_argument("--json", nargs="?", const="-", metavar="FILE", help="write JSON report (stdout if no FILE)")
        return sp

    sp = with_json(sub.add_parser("analyze", help="decompose and analyze a level file"))
    sp.add_argument("file")
    sp.add_argument("--max-dim", type=int, default=12, help="largest total matrix size per piece (default 12)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--direct", action="store_true", help="test the undecomposed inclusion instead")
    sp.set_defaults(func=cmd_analyze)

    sp = with_json(sub.add_parser("case1", help="block-diagonal subalgebra of M_m"))
    sp.add_argument("--lengths", type=_int_list, required=True)
    sp.set_defaults(func=cmd_case1)

    sp = with_json(sub.add_parser("case2", help="M_k inside M_nk"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_case2)

    sp = with_json(sub.add_parser("case3", help="B inside B^n"))
    sp.add_argument("--dims", type=_int_list, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_case3)

    sp = with_json(sub.add_parser("trivial", help="trivialization of M_n"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_trivial)

    sp = with_json(sub.add_parser("calculus", help="calculus on M_n from a subset of Z_n x Z_n"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--subset", type=_subset, required=True, help='e.g. "(0,1),(1,0),(1,1)"')
    sp.set_defaults(func=cmd_calculus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("n", "k", "max_dim", "workers"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            print(f"error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return USAGE
    for name in ("lengths", "dims"):
        v = getattr(args, name, None)
        if v is not None and min(v) < 1:
            print(f"error: --{name} entries must be positive", file=sys.stderr)
            return USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
