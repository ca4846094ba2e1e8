"""Command-line interface: ``ellfib <command> ...``.

Surfaces and maps are given as file paths or as catalog ids.  Exit status is
0 on success, 1 when a verification fails and 2 on unparsable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ellfib.catalog import Catalog, load_catalog, verify_all
from ellfib.covers import (
    PreimageCount,
    RationalMap,
    deflate,
    hurwitz_excess,
    parse_map,
    pullback,
    ramification_profile,
    transfer_star,
)
from ellfib.errors import CatalogCorrupt, EllfibError, ParseError
from ellfib.exactalg import parse_homog, parse_point
from ellfib.fibers import classify_fibers, configuration
from ellfib.weier import WeierstrassModel, euler_number, minimalize, parse_surface, quadratic_twist, save_surface


class UsageError(Exception):
    """Bad input detected by the CLI itself; reported with exit status 2."""


def _catalog() -> Catalog:
    return load_catalog()


def load_surface_arg(text: str) -> WeierstrassModel:
    path = Path(text)
    if path.is_file():
        return parse_surface(path.read_text())[0]
    cat = _catalog()
    if text in cat.surfaces:
        return cat.surfaces[text].model
    raise UsageError(f"no surface file or catalog surface named {text!r}")


def load_map_arg(text: str) -> RationalMap:
    path = Path(text)
    if path.is_file():
        return parse_map(path.read_text())[0]
    cat = _catalog()
    if text in cat.maps:
        return cat.maps[text].map
    raise UsageError(f"no map file or catalog map named {text!r}")


def verdict(m: WeierstrassModel) -> str:
    e = euler_number(m)
    return {12: "rational", 24: "K3"}.get(e, f"M={m.M}")


def _headline(m: WeierstrassModel) -> str:
    return f"{configuration(m)} e={euler_number(m)} {verdict(m)}"


def cluster_table(m: WeierstrassModel) -> str:
    rows = [("place", "count", "type", "vA", "vB", "vDelta")]
    for c in classify_fibers(m):
        d = c.to_dict()
        rows.append((d["place"], str(d["count"]), d["type"], str(d["vA"]), str(d["vB"]), str(d["vDelta"])))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows)


def _write_result(m: WeierstrassModel, args) -> None:
    if args.output:
        save_surface(m, args.output)
        print(f"wrote {args.output}")
    print(_headline(m))


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    m, removed = minimalize(load_surface_arg(args.surface))
    if args.json:
        out = {"configuration": str(configuration(m)), "euler": euler_number(m), "verdict": verdict(m),
               "M": m.M, "clusters": [c.to_dict() for c in classify_fibers(m)]}
        print(json.dumps(out, sort_keys=True))
        return 0
    print(_headline(m))
    if not removed.is_constant:
        print(f"(minimalized: removed {removed})")
    print(cluster_table(m))
    return 0


def cmd_pullback(args) -> int:
    m = load_surface_arg(args.surface)
    pi = load_map_arg(args.map)
    if not pi.field.contains(m.field):
        m = m.lift(pi.field)
    out = pullback(m, pi)
    if args.deflate_all:
        out = deflate(out)
    elif args.twist:
        out = quadratic_twist(out, parse_homog(args.twist, out.field))
    _write_result(out, args)
    return 0


def cmd_twist(args) -> int:
    m = minimalize(load_surface_arg(args.surface))[0]
    _write_result(quadratic_twist(m, parse_homog(args.poly, m.field)), args)
    return 0


def cmd_transfer(args) -> int:
    m = minimalize(load_surface_arg(args.surface))[0]
    out = transfer_star(m, parse_homog(args.source, m.field), parse_homog(args.target, m.field))
    _write_result(out, args)
    return 0


def _profile(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ParseError(f"profile must be a comma list of integers: {text!r}", token=text) from exc


def cmd_hurwitz(args) -> int:
    profiles = [_profile(p) for p in args.profile or ()]
    if args.profile_preimages is not None:
        points = args.cusps - len(profiles)
        if points < 1:
            raise UsageError("--profile-preimages needs at least one branch point without an explicit profile")
        profiles.append(PreimageCount(points, args.profile_preimages))
    total, bound = hurwitz_excess(args.degree, profiles)
    if total <= bound:
        print(f"feasible ({total} <= {bound})")
    else:
        print(f"infeasible ({total} > {bound})")
    return 0


def cmd_ramify(args) -> int:
    pi = load_map_arg(args.map)
    prof = ramification_profile(pi, parse_point(args.at, pi.field))
    print(prof)
    return 0


def cmd_verify(args) -> int:
    cat = load_catalog(extra_dir=args.catalog_dir, builtin=not args.no_builtin)
    report = verify_all(cat, only=args.only, parallel=not args.serial, deep=args.deep)
    if args.json:
        if len(report):
            print(report.to_jsonl(timing=not args.no_timing))
    else:
        print(report.to_table(timing=not args.no_timing))
    return report.exit_code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellfib", description="Exact computations with elliptic surfaces over P^1.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="singular fibers of a surface")
    c.add_argument("surface", help="surface file or catalog id")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("pullback", help="base change along a map")
    c.add_argument("surface")
    c.add_argument("map", help="map file or catalog id")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--twist", metavar="POLY", help="quadratic twist applied after the pullback")
    g.add_argument("--deflate-all", action="store_true", help="twist away every non-reduced fiber")
    c.add_argument("-o", "--output", help="write the resulting surface here")
    c.set_defaults(func=cmd_pullback)

    c = sub.add_parser("twist", help="quadratic twist by a squarefree form")
    c.add_argument("surface")
    c.add_argument("poly")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_twist)

    c = sub.add_parser("transfer-star", help="move the * from one place to another")
    c.add_argument("surface")
    c.add_argument("source", metavar="from")
    c.add_argument("target", metavar="to")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_transfer)

    c = sub.add_parser("hurwitz", help="Riemann-Hurwitz feasibility of a ramification pattern")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--profile", action="append", help="indices over one branch point, e.g. 4,4")
    c.add_argument("--profile-preimages", type=int,
                   help="total number of preimages of the branch points without an explicit profile")
    c.add_argument("--cusps", type=int, default=3, help="number of branch points (default 3)")
    c.set_defaults(func=cmd_hurwitz)

    c = sub.add_parser("ramify", help="ramification profile of a map over a point")
    c.add_argument("map")
    c.add_argument("--at", required=True, help="point: a field element, a:b or inf")
    c.set_defaults(func=cmd_ramify)

    c = sub.add_parser("verify-catalog", help="run the catalog through the pipeline")
    c.add_argument("--only", help="id prefix or section name")
    c.add_argument("--json", action="store_true", help="one JSON record per entry")
    c.add_argument("--deep", action="store_true", help="also check the fiber prediction and the j-invariant")
    c.add_argument("--catalog-dir", help="extra catalog directory (default $ELLFIB_CATALOG_DIR)")
    c.add_argument("--no-builtin", action="store_true", help="ignore the shipped catalog")
    c.add_argument("--serial", action="store_true", help="no worker threads")
    c.add_argument("--no-timing", action="store_true", help="omit timings, for reproducible output")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        token = f" (offending token: {exc.token!r})" if exc.token is not None else ""
        print(f"error: {exc}{token}", file=sys.stderr)
        return 2
    except CatalogCorrupt as exc:
        print(f"catalog corrupt: {exc}", file=sys.stderr)
        return 1
    except (UsageError, EllfibError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
