"""Command-line interface: ``castelbound <command> ...``.

JSON goes to stdout with sorted keys and rationals written as ``num/den``.
Exit status is 0 on success, 2 on bad usage or unparsable input, and 3 when
the input is well-formed but outside an operation's domain.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds, constants, gvseries
from .certifier import certify, explain, reference_bound
from .errors import CastelboundError, ConfigError, MissingTable
from .numerics import floor_of_surd, format_rat, format_surd, parse_rat, parse_surd
from .svg import SvgDiagram, write_svg
from .targets import load_script, load_target
from .tiltwalls import (ChernH, Polarization, TiltPoint, b_d, bmt_q, chern_to_json, ideal_class,
                        ideal_class_p3, line_bundle, numerical_wall, reaches_b_d, twist,
                        wall_to_json)

EXIT_USAGE = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", message)
        sys.exit(EXIT_USAGE)


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True) + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like a..b, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError("window start exceeds its end")
    return lo, hi


def _rat(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def _nh_map(text: str) -> dict[int, int]:
    out = {}
    try:
        for item in text.split(","):
            k, v = item.split(":")
            out[int(k)] = int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k:n pairs like 1:5,2:5, got {text!r}")
    return out


def _parse_ch(text: str) -> ChernH:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (3, 4):
        raise UsageError("--ch needs 3 or 4 comma-separated entries")
    try:
        c = [parse_rat(p) for p in parts[:3]]
        c3 = None if len(parts) == 3 or parts[3] in ("*", "?", "") else parse_rat(parts[3])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --ch entry: {exc}")
    return ChernH.of(*c, c3)


# -- commands ------------------------------------------------------------------------


def cmd_walls(args) -> str:
    if args.ch:
        v = _parse_ch(args.ch)
        deg = -v.c2 if v.c0 == 1 and v.c1 == 0 else None
    elif args.d is not None:
        v = ideal_class_p3(args.d, args.g) if args.g is not None else ideal_class(args.d, args.n)
        if args.g is not None and args.n != 1:
            raise UsageError("--g fixes ch_3 on P^3 only; drop it or use --n 1")
        deg = Fraction(args.d, args.n) if args.g is None else Fraction(args.d)
    else:
        raise UsageError("walls needs --d or --ch")
    rows = []
    for k in range(1, args.k_max + 1):
        if args.family == "line-bundles":
            cands = [(0, line_bundle(-k))]
        else:
            cands = [(d1, twist(ideal_class(d1, args.n), k)) for d1 in range(1, args.d1_max + 1)]
        for d1, w in cands:
            wall = numerical_wall(v, w)
            if wall is None:
                continue
            entry = {"k": k, "d1": d1, **wall_to_json(wall)}
            if args.d is not None:
                entry["reaches_b_d"] = reaches_b_d(wall, args.d, args.n)
            rows.append((k, d1, wall, entry))
    rows.sort(key=lambda r: (r[0], r[1]))
    result = {"class": chern_to_json(v), "family": args.family,
              "walls": [r[3] for r in rows]}
    if args.d is not None:
        result["b_d"] = format_surd(b_d(args.d, args.n))
    if args.bmt_b0 is not None:
        result["bmt_q"] = format_rat(bmt_q(v, TiltPoint.on_boundary(args.bmt_b0)))
    if args.svg:
        marker = b_d(args.d, args.n) if args.d is not None else None
        diagram = SvgDiagram(walls=[(f"k={k}" + (f",d1={d1}" if d1 else ""), w) for k, d1, w, _ in rows],
                             b_marker=marker, shade=None if marker is None else (marker, 0),
                             hyperbola=v if deg is not None else None)
        write_svg(args.svg, diagram)
    if args.format == "csv":
        return _csv(["k", "d1", "kind", "center", "radius_sq", "rightmost"],
                    [(e["k"], e["d1"], e["kind"], e.get("center", e.get("b")), e.get("radius_sq", ""),
                      e.get("rightmost", "")) for *_, e in rows])
    return _dump(result)


def _value(x) -> dict:
    return {"exact": format_surd(x), "floor": floor_of_surd(x)}


def cmd_bound(args) -> str:
    d, n = args.d, args.n
    kind = args.kind
    if kind == "planar":
        out = {"exact": str(bounds.planar_bound(d)), "floor": bounds.planar_bound(d)}
    elif kind == "surface":
        out = _value(bounds.surface_bound(d, n))
    elif kind == "bmt":
        if args.b0 is None:
            raise UsageError("--kind bmt needs --b0")
        out = _value(bounds.bmt_bound(d, parse_surd(args.b0)))
    elif kind == "asymptotic":
        out = _value(bounds.asymptotic_main_bound(d, n, args.m, args.s))
    elif kind == "castelnuovo":
        out = _value(bounds.castelnuovo_conjecture_bound(d, n))
    elif kind == "cy4":
        out = _value(bounds.cy4_ch3_bound(d, n))
    elif kind == "epsilon":
        out = {"exact": format_rat(bounds.epsilon(d, n))}
    else:  # optimal
        if not args.target:
            raise UsageError("--kind optimal needs --target")
        target = load_target(args.target)
        out = _value(bounds.optimal_bound(target, d))
        n = target.n
    out.update({"kind": kind, "d": d, "n": n})
    return _dump(out)


def cmd_constants(args) -> str:
    if args.l is not None:
        if args.which == "nl":
            report = constants.solve_N_nl(args.n, args.l)
        elif args.which == "divisor":
            report = constants.cor_in_divisor_report(args.n, args.n_D or args.n, args.m, args.l)
        else:
            report = constants.solve_N1(args.n, args.l, args.only)
        out = report.to_json()
        out["verified"] = constants.verify_report(report)
        if args.format == "csv":
            return _csv(["name", "value", "verified"], [(out["name"], out["value"], out["verified"])])
        return _dump(out)
    if args.which == "N0":
        report = constants.solve_N0(args.n)
        out = report.to_json()
        out["verified"] = constants.verify_report(report)
        return _dump(out)
    pol = Polarization(args.n, args.s, args.m)
    chain = constants.solve_theorem_chain(pol, args.nH_map, args.nD_map)
    out = {name: {**r.to_json(), "verified": constants.verify_report(r)} for name, r in chain.items()}
    out["gv_degree_threshold"] = constants.gv_degree_threshold_report(pol.n_H, pol.m_H, chain["N_H"].value)
    if args.format == "csv":
        return _csv(["name", "value", "verified"],
                    [(k, out[k]["value"], out[k]["verified"]) for k in chain])
    return _dump(out)


def cmd_certify(args) -> str:
    target = load_target(args.target)
    script = load_script(target, args.script)
    max_d = args.max_d or target.D1
    degrees = [args.d] if args.d is not None else range(1, max_d + 1)
    certs = [certify(target, d, script) for d in degrees]
    rows = []
    for c in certs:
        try:
            ref = reference_bound(target, c.d)
        except MissingTable:
            ref = None
        rows.append({"d": c.d, "bound": format_rat(c.bound), "reference": ref,
                     "matches_reference": None if ref is None else c.bound == ref})
    if args.format == "csv":
        return _csv(["d", "bound", "reference"], [(r["d"], r["bound"], "" if r["reference"] is None
                                                   else r["reference"]) for r in rows])
    out = {"target": target.name, "script": script.name, "table": rows}
    if args.explain:
        out["certificates"] = [explain(c, "json") for c in certs]
        if args.explain_text:
            return "\n\n".join(explain(c) for c in certs) + "\n"
    return _dump(out)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(str(exc))


def cmd_gvpt(args) -> str:
    if args.action == "to-pt":
        gv = gvseries.gv_from_csv(_read(args.input), args.d_max)
        pt = gvseries.pt_from_gv(gv, args.window)
        if args.format == "csv":
            return gvseries.pt_to_csv(pt)
        return _dump({"window": list(args.window), "d_max": pt.d_max, "clipped": pt.clipped,
                      "entries": [[s, d, format_rat(v)] for s, d, v in pt.rows()]})
    if args.action == "to-gv":
        pt = gvseries.pt_from_csv(_read(args.input), args.window, args.d_max)
        gv = gvseries.gv_from_pt(pt)
        if args.format == "csv":
            return gvseries.gv_to_csv(gv)
        return _dump({"d_max": gv.d_max, "entries": [[g, d, v] for g, d, v in gv.rows()]})
    # check: round trip plus optional vanishing consistency
    gv = gvseries.gv_from_csv(_read(args.input), args.d_max)
    pt = gvseries.pt_from_gv(gv, args.window)
    back = gvseries.gv_from_pt(pt)
    out = {"round_trip": back.entries == gv.entries, "window": list(args.window)}
    if args.n is not None and args.NH is not None:
        out["vanishing_violations"] = gvseries.vanishing_consistency(gv, args.n, args.m, args.NH)
    return _dump(out)


def cmd_vanish(args) -> str:
    n, m, NH = args.n, args.m, args.NH
    if args.kind == "gv":
        if args.g is None:
            raise UsageError("vanish gv needs --g")
        out = {"vanishes": constants.gv_vanish(args.g, args.d, n, m, NH),
               "inequality": constants.gv_vanish_inequality(n, m),
               "bound": format_rat(constants.vanishing_bound(args.d, n, m) + 1),
               "degree_threshold": constants.gv_degree_threshold_report(n, m, NH), "g": args.g}
    elif args.kind == "pt":
        if args.s is None:
            raise UsageError("vanish pt needs --s")
        out = {"vanishes": constants.pt_dt_vanish(args.s, args.d, n, m, NH),
               "inequality": constants.pt_vanish_inequality(n, m),
               "bound": format_rat(-constants.vanishing_bound(args.d, n, m)), "s": args.s}
    else:
        if args.betaH is None:
            raise UsageError("vanish cy4 needs --betaH")
        out = {"empty": constants.cy4_empty(args.d, args.betaH, n, NH),
               "bound": format_rat(-bounds.cy4_ch3_bound(args.d, n)), "betaH": format_rat(args.betaH)}
    out.update({"d": args.d, "n": n, "m": m, "N_H": NH})
    return _dump(out)


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="castelbound", description="Exact genus bounds for curves on polarized threefolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, choices=("json", "csv")):
        sp.add_argument("--format", choices=choices, default="json")

    w = sub.add_parser("walls", help="numerical walls for an ideal-sheaf class")
    w.add_argument("--d", type=int)
    w.add_argument("--g", type=int, help="genus (fixes ch_3; P^3 only)")
    w.add_argument("--n", type=int, default=1)
    w.add_argument("--ch", help='raw class "c0,c1,c2,c3"; use * for an unknown c3')
    w.add_argument("--family", choices=("line-bundles", "curves"), default="line-bundles")
    w.add_argument("--k-max", type=int, default=3)
    w.add_argument("--d1-max", type=int, default=3)
    w.add_argument("--bmt-b0", type=_rat, help="also evaluate the BMT quadratic at (b0, 0)")
    w.add_argument("--svg")
    fmt(w)
    w.set_defaults(func=cmd_walls)

    b = sub.add_parser("bound", help="closed-form genus bounds")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--s", type=int, default=1)
    b.add_argument("--b0", help="boundary point, rational or p+q*sqrt(m)")
    b.add_argument("--kind", default="optimal",
                   choices=("planar", "surface", "bmt", "asymptotic", "castelnuovo", "cy4", "epsilon",
                            "optimal"))
    b.add_argument("--target")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("constants", help="degree thresholds with minimality witnesses")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--l", type=int)
    c.add_argument("--s", type=int, default=1)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--n-D", type=int, dest="n_D")
    c.add_argument("--only", help="restrict to one named condition, e.g. no-wall")
    c.add_argument("--which", choices=("N0", "N1", "nl", "divisor", "chain"))
    c.add_argument("--nH-map", type=_nh_map, dest="nH_map")
    c.add_argument("--nD-map", type=_nh_map, dest="nD_map")
    fmt(c)
    c.set_defaults(func=cmd_constants)

    ce = sub.add_parser("certify", help="certified low-degree bounds")
    ce.add_argument("--target", required=True)
    ce.add_argument("--script", default="reference",
                    help="reference (the target's own script; alias: paper), default, or a script name/path")
    ce.add_argument("--max-d", type=int)
    ce.add_argument("--d", type=int)
    ce.add_argument("--explain", action="store_true")
    ce.add_argument("--text", dest="explain_text", action="store_true",
                    help="with --explain, print indented traces instead of JSON")
    fmt(ce)
    ce.set_defaults(func=cmd_certify)

    g = sub.add_parser("gvpt", help="convert between GV and PT tables")
    g.add_argument("action", choices=("to-pt", "to-gv", "check"))
    g.add_argument("--input", required=True, help="CSV file, or - for stdin")
    g.add_argument("--window", type=_window, required=True)
    g.add_argument("--d-max", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--NH", type=int)
    fmt(g)
    g.set_defaults(func=cmd_gvpt)

    v = sub.add_parser("vanish", help="vanishing predicates")
    v.add_argument("kind", choices=("gv", "pt", "cy4"))
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--NH", type=int, required=True)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--g", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--betaH", type=_rat)
    v.set_defaults(func=cmd_vanish)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except (UsageError, ConfigError) as exc:
        _emit_error(getattr(exc, "code", "usage"), str(exc))
        return EXIT_USAGE
    except CastelboundError as exc:
        _emit_error(exc.code, str(exc))
        return EXIT_DOMAIN
    except ValueError as exc:
        _emit_error("invalid_input", str(exc))
        return EXIT_USAGE
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
