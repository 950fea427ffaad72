"""Command line interface.

Exit codes: 0 success, 1 a check found failures, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import plot as plotting
from .deckgroup import format_word, load_alphabet, monodromy, parse_word
from .errors import K3StabError
from .exact import format_rational, parse_rational
from .halfplane import apply, twist_moebius
from .lattice import MukaiVector
from .model import HPoint, K3Context
from .spherical import enumerate_spherical
from .verify import CHECKS, RunConfig, run_verify
from .walls import (
    disk_D,
    disk_membership,
    large_volume_path,
    printed_disk,
    region_R,
    scan_disk,
    wall,
    wall_containment_check,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _vector(text: str) -> MukaiVector:
    try:
        return MukaiVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # On subcommands the defaults are suppressed so a flag given before the
    # subcommand is not overwritten by the subparser's default.
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--d", type=int, default=default(1), help="degree parameter, L^2 = 2d")
    parser.add_argument("--rmax", type=int, default=default(10), help="rank bound for enumerations")
    parser.add_argument("--format", choices=["json", "csv", "svg"], default=default(None))
    parser.add_argument("--out", default=default(None), help="write output here instead of stdout")
    parser.add_argument("--tolerance", type=float, default=default(1e-12),
                        help="relative tolerance for floating distance checks")
    parser.add_argument("--paper-printed-B", dest="paper_printed_B", action="store_true",
                        default=default(False), help="use the printed radius of the region R")
    parser.add_argument("--paper-printed-disk", dest="paper_printed_disk", action="store_true",
                        default=default(False), help="use the printed disk D_A")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3stab", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, **kw):
        p = subparsers.add_parser(name, **kw)
        _global_flags(p, suppress=True)
        return p

    sph = sub.add_parser("spherical", help="spherical classes").add_subparsers(dest="action", required=True)
    p = leaf(sph, "enum", help="enumerate spherical classes in a window")
    p.add_argument("--xmin", type=_rational, default=parse_rational("-1"))
    p.add_argument("--xmax", type=_rational, default=parse_rational("1"))

    mp = sub.add_parser("map", help="induced Moebius maps").add_subparsers(dest="action", required=True)
    p = leaf(mp, "twist", help="map induced by the spherical twist of delta")
    p.add_argument("--delta", type=_vector, required=True)
    p.add_argument("--apply", nargs=2, type=_rational, metavar=("X", "T"))

    wl = sub.add_parser("walls", help="walls W(A, E)").add_subparsers(dest="action", required=True)
    p = leaf(wl, "show", help="one wall with its marked points")
    p.add_argument("--A", type=_vector, required=True)
    p.add_argument("--E", type=_vector, required=True)
    p = leaf(wl, "scan", help="all walls for E over spherical A")
    p.add_argument("--E", type=_vector, required=True)
    p.add_argument("--xmin", type=_rational)
    p.add_argument("--xmax", type=_rational)
    p.add_argument("--svg", help="also write an SVG figure (with CSV twin)")

    p = leaf(sub, "region", help="the region R for v0")
    p.add_argument("--v0", type=_vector, required=True)
    p.add_argument("--check", action="store_true", help="run the wall containment check")

    p = leaf(sub, "path", help="large volume path for v0")
    p.add_argument("--v0", type=_vector, required=True)

    p = leaf(sub, "disk", help="the disk D_A")
    p.add_argument("--A", type=_vector, required=True)
    p.add_argument("--scan-spherical", type=int, metavar="R", help="scan spherical points of rank <= R")
    p.add_argument("--point", nargs=2, type=_rational, metavar=("X", "T"))

    dk = sub.add_parser("deck", help="loop words and deck transformations").add_subparsers(
        dest="action", required=True)
    p = leaf(dk, "reduce", help="reduce a loop word and take its monodromy")
    p.add_argument("--word", required=True, help='e.g. "A:1 g:1 A:-1"')
    p.add_argument("--alphabet", required=True, help="JSON file mapping labels to [d, r, n, s]")

    p = leaf(sub, "verify", help="run the batch invariant checks")
    p.add_argument("--v0", type=_vector, action="append", default=[], help="extra v0 for containment")
    p.add_argument("--only", action="append", choices=sorted(CHECKS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--xmin", type=_rational, default=parse_rational("-2"))
    p.add_argument("--xmax", type=_rational, default=parse_rational("2"))

    p = leaf(sub, "plot", help="write an SVG figure and its CSV twin")
    p.add_argument("what", choices=["spherical", "boundary", "walls", "region", "disk"])
    p.add_argument("--E", type=_vector, help="isotropic vector for walls")
    p.add_argument("--v0", type=_vector, help="isotropic vector for region")
    p.add_argument("--A", type=_vector, help="spherical vector for disk")
    p.add_argument("--xmin", type=_rational, default=parse_rational("-1"))
    p.add_argument("--xmax", type=_rational, default=parse_rational("1"))
    return parser


# -- output helpers -----------------------------------------------------------

def _emit(args, payload: str) -> None:
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_figure(fig: plotting.Figure, svg_path: str) -> None:
    path = Path(svg_path)
    path.write_text(fig.to_svg(), encoding="utf-8")
    path.with_suffix(".csv").write_text(fig.to_csv(), encoding="utf-8")


# -- commands -------------------------------------------------------------------

def cmd_spherical(args, ctx) -> int:
    classes = enumerate_spherical(ctx, args.rmax, args.xmin, args.xmax)
    if args.format == "csv":
        rows = [[sc.delta.r, sc.delta.n, sc.delta.s, format_rational(sc.point.x), format_rational(sc.point.t)]
                for sc in classes]
        _emit(args, _csv(["r", "n", "s", "x", "t"], rows))
    else:
        _emit(args, _json([{"delta": sc.delta.to_json(), "point": sc.point.to_json()} for sc in classes]))
    return EXIT_OK


def cmd_map(args, ctx) -> int:
    m = twist_moebius(args.delta, ctx)
    out = {"delta": args.delta.to_json(), "d": ctx.d, **m.to_json()}
    if args.apply:
        p = HPoint(*args.apply)
        out["point"] = p.to_json()
        out["image"] = apply(m, p, ctx).to_json()
    _emit(args, _json(out))
    return EXIT_OK


def cmd_walls(args, ctx) -> int:
    if args.action == "show":
        _emit(args, _json(wall(args.A, args.E, ctx).to_json()))
        return EXIT_OK
    E = args.E
    x_E = parse_rational(f"{E.n}/{E.r}") if E.r else None
    if x_E is None:
        raise UsageError("walls scan needs E with positive rank")
    lo = args.xmin if args.xmin is not None else x_E - 2
    hi = args.xmax if args.xmax is not None else x_E + 2
    walls = [wall(sc.delta, E, ctx) for sc in enumerate_spherical(ctx, args.rmax, lo, hi)]
    if args.svg:
        _write_figure(plotting.plot_walls(ctx, E, args.rmax, lo, hi), args.svg)
    if args.format == "csv":
        rows = [[*w.A.to_json(), w.wall_type.value, format_rational(w.x_E),
                 "" if w.alpha_E is None else format_rational(w.alpha_E),
                 "" if w.alpha_A is None else format_rational(w.alpha_A)] for w in walls]
        _emit(args, _csv(["r_A", "n_A", "s_A", "type", "x_E", "alpha_E", "alpha_A"], rows))
    else:
        _emit(args, _json([w.to_json() for w in walls]))
    return EXIT_OK


def cmd_region(args, ctx) -> int:
    region = region_R(args.v0, ctx, args.paper_printed_B)
    out = {"region": region.to_json()}
    code = EXIT_OK
    if args.check:
        rep = wall_containment_check(args.v0, ctx, args.rmax, paper_printed_B=args.paper_printed_B)
        out["containment"] = rep.to_json()
        if rep.violations:
            code = EXIT_FAIL
    _emit(args, _json(out))
    return code


def cmd_path(args, ctx) -> int:
    path = large_volume_path(args.v0, ctx)
    _emit(args, _json(path.to_json()))
    return EXIT_OK if path.certificate else EXIT_FAIL


def cmd_disk(args, ctx) -> int:
    disk = printed_disk(args.A, ctx) if args.paper_printed_disk else disk_D(args.A, ctx)
    out = {"A": args.A.normalized().to_json(), "kind": "printed" if args.paper_printed_disk else "twist image",
           "disk": disk.to_json()}
    code = EXIT_OK
    if args.point:
        p = HPoint(*args.point)
        out["point"] = p.to_json()
        out["membership"] = disk_membership(args.A, p, ctx, args.paper_printed_disk).value
    if args.scan_spherical:
        scan = scan_disk(args.A, ctx, args.scan_spherical, args.paper_printed_disk)
        out["scan"] = scan.to_json()
        if not scan.ok:
            code = EXIT_FAIL
    _emit(args, _json(out))
    return code


def cmd_deck(args, ctx) -> int:
    d, alphabet = load_alphabet(args.alphabet)
    w = parse_word(args.word, alphabet)
    dw = monodromy(w)
    out = {
        "d": d,
        "reduced": format_word(w, alphabet),
        "loop_word": w.to_json(),
        "monodromy": format_word(dw, alphabet),
        "deck_word": dw.to_json(),
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_verify(args, ctx) -> int:
    cfg = RunConfig(
        d=ctx.d,
        r_max=args.rmax,
        x_min=args.xmin,
        x_max=args.xmax,
        tolerance=args.tolerance,
        seed=args.seed,
        paper_printed_B=args.paper_printed_B,
        paper_printed_disk=args.paper_printed_disk,
        extra_v0=tuple(args.v0),
    )
    report = run_verify(cfg, args.only)
    _emit(args, _json(report))
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_plot(args, ctx) -> int:
    what = args.what
    if what == "spherical":
        fig = plotting.plot_spherical(ctx, args.rmax, args.xmin, args.xmax)
    elif what == "boundary":
        fig = plotting.plot_boundary(ctx, args.rmax, args.xmin, args.xmax)
    elif what == "walls":
        if args.E is None:
            raise UsageError("plot walls needs --E")
        fig = plotting.plot_walls(ctx, args.E, args.rmax, args.xmin, args.xmax)
    elif what == "region":
        if args.v0 is None:
            raise UsageError("plot region needs --v0")
        fig = plotting.plot_region(ctx, args.v0, args.rmax, args.paper_printed_B)
    else:
        if args.A is None:
            raise UsageError("plot disk needs --A")
        fig = plotting.plot_disk(ctx, args.A, args.rmax, args.paper_printed_disk)
    if args.format == "csv":
        _emit(args, fig.to_csv())
    elif args.out:
        _write_figure(fig, args.out)
    else:
        sys.stdout.write(fig.to_svg())
    return EXIT_OK


COMMANDS = {
    "spherical": cmd_spherical,
    "map": cmd_map,
    "walls": cmd_walls,
    "region": cmd_region,
    "path": cmd_path,
    "disk": cmd_disk,
    "deck": cmd_deck,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = K3Context(args.d)
        if args.rmax < 1:
            raise UsageError("--rmax must be >= 1")
        return COMMANDS[args.command](args, ctx)
    except (UsageError, K3StabError, ValueError, TypeError, OSError) as exc:
        print(f"k3stab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
