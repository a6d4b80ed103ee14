"""Command-line front end: ``python -m belyi <command> ...``.

Every command prints (or writes to ``--out``) a JSON document with a
``status`` field.  Failures produce ``{"status": "error", "error": {...}}``
and a nonzero exit code.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import families, level_curves, poles
from .families import FamilyIndex, critical_data
from .hurwitz import data_from_json, resultant_polynomial, solve
from .numeric import DEFAULT_PREC, MIN_PREC
from .poly import RationalMap

EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CHECK_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_k_range(text: str) -> list[int]:
    """``"3"`` or ``"3..5"`` (inclusive)."""
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise UsageError(f"empty k range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _prec(value: str) -> int:
    p = int(value)
    if p < MIN_PREC:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PREC} bits")
    return p


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="belyi", description="Rational maps with prescribed critical data.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_default="0"):
        sp.add_argument("--family", choices=[families.HARMONIC, families.AIRY, families.TRITRONQUEE],
                        default=families.TRITRONQUEE)
        sp.add_argument("--n", type=int, default=0)
        sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--k", default=k_default, help="index or inclusive range a..b")
        sp.add_argument("--variant", choices=families.TRITRONQUEE_VARIANTS, default="published",
                        help="tritronquee multiplicity pattern")
        sp.add_argument("--prec-bits", type=_prec, default=DEFAULT_PREC)
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["json", "csv", "svg"], default=None)

    s = sub.add_parser("solve", help="solve the Hurwitz problem for a family or a data file")
    common(s)
    s.add_argument("--data", help="JSON file with explicit critical data")

    h = sub.add_parser("harmonic", help="differential recursion and kernel cross-check")
    common(h, k_default="0..4")
    h.add_argument("--cauchy", choices=families.CAUCHY_RULES, default="conjecture")

    q = sub.add_parser("poles", help="cubic normal form estimates a_k")
    common(q, k_default="3..5")
    q.add_argument("--no-certify", action="store_true", help="skip the doubled-precision rerun")

    g = sub.add_parser("graph", help="level curves to SVG and CSV")
    common(g, k_default="1")
    g.add_argument("--map", help="JSON file {\"P\": [...], \"Q\": [...]} instead of a family")
    g.add_argument("--kind", choices=["modulus", "real"], default="modulus")
    g.add_argument("--window", default="-3,-3,3,3")
    g.add_argument("--resolution", type=int, default=level_curves.DEFAULT_RESOLUTION)
    g.add_argument("--regions", help="also write the sign of |f|-1 at cell centres to this CSV")

    v = sub.add_parser("verify", help="re-run the reproduction fixtures")
    v.add_argument("--full", action="store_true", help="include the slow fixtures")
    v.add_argument("--prec-bits", type=_prec, default=DEFAULT_PREC)
    v.add_argument("--out")
    v.add_argument("--format", choices=["json"], default=None)
    return p


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _index(args, k: int) -> FamilyIndex:
    if args.family == families.HARMONIC:
        return FamilyIndex.harmonic(args.n, k)
    if args.family == families.AIRY:
        return FamilyIndex.airy(args.n)
    return FamilyIndex.tritronquee(args.n, args.m, k, args.variant)


def _family_map(args, k: int) -> RationalMap:
    idx = _index(args, k)
    if idx.family != families.TRITRONQUEE:
        return families.kernel_map(idx)
    for _k, sols in poles.tritronquee_maps(idx.n, idx.m, list(range(0, k + 1)), args.prec_bits, idx.variant):
        if isinstance(sols, Exception):
            raise sols
        last = sols
    if not last[0].admissible:
        raise ValueError("no admissible solution")
    return last[0].map


def cmd_solve(args) -> dict:
    if args.data:
        data = data_from_json(json.loads(Path(args.data).read_text()))
        sols = solve(data, prec=args.prec_bits)
        res = sols[0].resultant
        return {"data": data.to_json(), "solutions": [s.to_json() for s in sols],
                "resultant": [str(int(c)) for c in res.coeffs] if res is not None else None}
    ks = parse_k_range(args.k)
    results = []
    if args.family == families.TRITRONQUEE:
        for k, sols in poles.tritronquee_maps(args.n, args.m, ks, args.prec_bits, args.variant):
            idx = _index(args, k)
            if isinstance(sols, Exception):
                results.append({"family": idx.to_json(), "status": "error", "error": str(sols)})
                continue
            res = sols[0].resultant
            results.append({"family": idx.to_json(), "status": "ok" if sols[0].admissible else "no admissible solution",
                            "resultant": [str(int(c)) for c in res.coeffs] if res is not None else None,
                            "solutions": [s.to_json() for s in sols]})
    else:
        for k in ks:
            idx = _index(args, k)
            sols = solve(critical_data(idx), prec=args.prec_bits)
            results.append({"family": idx.to_json(), "status": "ok", "solutions": [s.to_json() for s in sols]})
    return {"results": results}


def cmd_harmonic(args) -> dict:
    ks = parse_k_range(args.k)
    states = families.harmonic_recursion(args.n, max(ks), args.cauchy)
    checks = families.cross_check(args.n, max(ks), args.cauchy, states)
    return {"n": args.n, "cauchy": args.cauchy,
            "states": [st.to_json() for st in states if st.k in ks],
            "cross_check": [c.to_json() for c in checks if c.k in ks]}


def cmd_poles(args) -> dict:
    ks = parse_k_range(args.k)
    seq = poles.pole_sequence(args.n, args.m, ks, prec=args.prec_bits, variant=args.variant,
                              certify=not args.no_certify)
    return seq.to_json()


def cmd_graph(args) -> Optional[dict]:
    if args.map:
        f = RationalMap.from_json(json.loads(Path(args.map).read_text()))
    else:
        ks = parse_k_range(args.k)
        if len(ks) != 1:
            raise UsageError("graph takes a single k")
        f = _family_map(args, ks[0])
    window = level_curves.parse_window(args.window)
    kind = level_curves.MODULUS_ONE if args.kind == "modulus" else level_curves.REAL_ZERO
    lc = level_curves.trace_level_set(f, kind, window, args.resolution)
    if args.regions:
        signs = level_curves.region_signs(f, window, args.resolution)
        Path(args.regions).write_text(level_curves.regions_csv(signs, window, args.resolution))
    summary = {"kind": kind, "window": list(window), "resolution": args.resolution,
               "polylines": len(lc.polylines), "points": int(sum(len(p) for p in lc.polylines))}
    fmt = args.format
    if fmt == "svg" or fmt == "csv":
        text = level_curves.to_svg(lc) if fmt == "svg" else level_curves.to_csv(lc)
        _emit(text, args.out)
        return None
    if args.out and fmt is None:
        stem = Path(args.out)
        stem = stem.with_suffix("") if stem.suffix in (".svg", ".csv", ".json") else stem
        svg, csvp = stem.with_suffix(".svg"), stem.with_suffix(".csv")
        svg.write_text(level_curves.to_svg(lc))
        csvp.write_text(level_curves.to_csv(lc))
        summary["files"] = [str(svg), str(csvp)]
        sys.stdout.write(_dump({"status": "ok", "command": "graph", "result": summary}))
        return None
    return summary


def run_fixtures(full: bool, prec: int) -> list[dict]:
    """Small reproduction checks; ``full`` adds the slower ones."""
    from .fixtures import FIXTURES
    out = []
    for name, slow, fn in FIXTURES:
        if slow and not full:
            continue
        try:
            ok, detail = fn(prec)
        except Exception as e:  # noqa: BLE001 - reported per fixture
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append({"fixture": name, "ok": bool(ok), "detail": detail})
    return out


def cmd_verify(args) -> dict:
    return {"fixtures": run_fixtures(args.full, args.prec_bits)}


COMMANDS = {"solve": cmd_solve, "harmonic": cmd_harmonic, "poles": cmd_poles,
            "graph": cmd_graph, "verify": cmd_verify}


def _join_window(argv: Sequence[str]) -> list[str]:
    """``--window -3,-3,3,3`` would read the value as a flag; glue it on."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--window={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _join_window(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stdout.write(_dump({"status": "error", "error": {"type": "usage", "message": str(e)}}))
        return EXIT_USAGE
    out = getattr(args, "out", None)
    try:
        if args.command != "graph" and getattr(args, "format", None) in ("csv", "svg"):
            raise UsageError(f"--format {args.format} is only available for graph")
        result = COMMANDS[args.command](args)
    except UsageError as e:
        sys.stdout.write(_dump({"status": "error", "command": args.command,
                                "error": {"type": "usage", "message": str(e)}}))
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports every failure as JSON
        _emit(_dump({"status": "error", "command": args.command,
                     "error": {"type": type(e).__name__, "message": str(e)}}), out)
        return EXIT_ERROR
    if result is None:
        return 0
    status = "ok"
    if args.command == "verify" and not all(f["ok"] for f in result["fixtures"]):
        status = "failed"
    _emit(_dump({"status": status, "command": args.command, "result": result}), out)
    return 0 if status == "ok" else EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
