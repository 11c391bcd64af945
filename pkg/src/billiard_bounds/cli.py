"""Command-line entry point: ``billiard-bounds <subcommand> ...``.

Every subcommand prints a JSON document ``{"manifest": ..., "result": ...}``
on stdout, or a flattened two-column CSV with ``--csv``.  Exit status is 0 on
success, 1 when a check fails and 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import metadata

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, result, message):
        super().__init__(message)
        self.result = result


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def digest(result) -> str:
    blob = json.dumps(result, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    version: str = field(default_factory=tool_version)
    wall_time: float = 0.0
    result_digest: str = ""

    def as_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "version": self.version,
            "wall_time": round(self.wall_time, 4),
            "result_digest": self.result_digest,
        }


# ---------------------------------------------------------------------------
# CSV view of a JSON document


def to_csv(doc) -> str:
    """Flatten nested dicts into ``path,value`` rows; values are JSON-encoded."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["path", "value"])

    def walk(prefix, node):
        if isinstance(node, dict) and node:
            for k, v in node.items():
                k = str(k)
                if "/" in k:
                    raise ValueError(f"key {k!r} contains the path separator")
                walk(f"{prefix}/{k}" if prefix else k, v)
        else:
            w.writerow([prefix, json.dumps(node, sort_keys=True)])

    walk("", doc)
    return buf.getvalue()


def from_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["path", "value"]:
        raise ValueError("not a path,value CSV")
    out: dict = {}
    for path, value in rows[1:]:
        node = out
        parts = path.split("/")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = json.loads(value)
    return out


# ---------------------------------------------------------------------------
# argument helpers


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def bouquet_from_args(args):
    from .cells import BouquetSpec, CellModelError

    try:
        if getattr(args, "betti", None):
            return BouquetSpec.from_betti(args.betti, duality=not args.no_duality)
        if args.m is None:
            raise UsageError("give --betti or --m (with --k for a bouquet)")
        if args.k:
            return BouquetSpec(args.m, args.k, duality=not args.no_duality)
        return BouquetSpec.sphere(args.m)
    except CellModelError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_bounds(args):
    from .bounds import BoundsError, bound_report
    from .chain import BettiVector

    if args.betti:
        try:
            BettiVector(args.betti).validate_manifold()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            return bound_report(betti=args.betti).as_dict()
        except BoundsError as exc:
            raise CheckFailed({"betti": list(args.betti)}, str(exc)) from None
    if args.B is None or args.m is None:
        raise UsageError("give --betti, or both --B and --m")
    try:
        return bound_report(args.B, args.m).as_dict()
    except BoundsError as exc:
        raise UsageError(str(exc)) from None


def cmd_rd2_sphere(args):
    from .cells import rd2_sphere_complex, smith_feasibility, smith_sequence_dims
    from .chain import betti, euler_characteristic

    if args.m < 1:
        raise UsageError("--m must be >= 1")
    cx = rd2_sphere_complex(args.m)
    b = betti(cx)
    smith = smith_feasibility(smith_sequence_dims(args.m, b))
    result = {
        "m": args.m,
        "betti": list(b.values),
        "total": b.total,
        "cells": list(cx.dims),
        "euler": euler_characteristic(cx),
        "smith_feasible": smith.feasible,
    }
    if b.total != args.m + 1 or not smith.feasible:
        raise CheckFailed(result, "RD2 sphere homology does not match m+1")
    return result


def cmd_rd3_assembly(args):
    from .cells import rd2_bouquet_assembly, rd3_bouquet_assembly

    spec = bouquet_from_args(args)
    a3 = rd3_bouquet_assembly(spec)
    result = {"rd3": a3.as_dict(), "rd2": rd2_bouquet_assembly(spec).as_dict()}
    if spec.duality and not a3.match:
        raise CheckFailed(result, "assembly total differs from the closed form")
    return result


def cmd_dold(args):
    from .dold import FDModule, FDModuleError, check_axioms, homology_through_degree, rd2_homology, rd3_homology

    if args.file:
        try:
            with open(args.file) as fh:
                K = FDModule.from_json(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read FD-module: {exc}") from None
        bad = check_axioms(K)
        if bad is not None:
            raise CheckFailed({"violation": str(bad)}, "module fails the simplicial identities")
        d = K.q_max - 1 if args.degree is None else args.degree
        try:
            moore = homology_through_degree(K, d)
        except FDModuleError as exc:
            raise UsageError(str(exc)) from None
        alt = homology_through_degree(K, d, route="alternating")
        result = {"levels": list(K.levels), "moore": list(moore.values), "alternating": list(alt.values)}
        if not moore.same_as(alt):
            raise CheckFailed(result, "Moore and alternating complexes disagree")
        return result
    spec = bouquet_from_args(args)
    route = rd3_homology if args.route == "rd3" else rd2_homology
    b = route(spec)
    return {"spec": spec.as_dict(), "route": args.route, "betti": list(b.values), "total": b.total}


def cmd_power(args):
    from . import power

    models = {
        "triangle": power.triangle_boundary,
        "square": power.square_boundary,
        "tetrahedron": power.tetrahedron_boundary,
        "octahedron": power.octahedron_boundary,
    }
    if args.complex:
        try:
            K = power.SimplicialComplex.load(args.complex)
        except (OSError, power.PowerEngineError) as exc:
            raise UsageError(str(exc)) from None
    elif args.model:
        K = models[args.model]()
    else:
        raise UsageError("give --complex FILE or --model NAME")
    if args.p not in (2, 3):
        raise UsageError("--p must be 2 or 3")
    try:
        res = power.rd_power(K, args.p, args.rounds)
    except power.CellCapExceeded as exc:
        raise CheckFailed({"estimate": exc.estimate, "cap": exc.cap}, str(exc)) from None
    result = {"facets": [list(f) for f in K.facets], "p": args.p} | res.as_dict()
    if res.euler != res.burnside_euler or res.euler != sum((-1) ** q * b for q, b in enumerate(res.betti.values)):
        raise CheckFailed(result, "Euler characteristic bookkeeping disagrees")
    return result


def cmd_billiards(args):
    from .billiards import BilliardError, SearchConfig, compare_to_bound, find_orbits, parse_shape, shape_betti

    try:
        shape = parse_shape(args.shape)
    except BilliardError as exc:
        raise UsageError(str(exc)) from None
    if args.period not in (2, 3):
        raise UsageError("--period must be 2 or 3")
    cfg = SearchConfig(starts=args.starts, density=args.density, seed=args.seed)
    orbits = find_orbits(shape, args.period, cfg)
    b = shape_betti(shape)
    cmp = compare_to_bound(orbits, sum(b), len(b) - 1, args.period)
    result = {
        "shape": shape.spec(),
        "period": args.period,
        "count": len(orbits),
        "generic": sum(o.generic for o in orbits),
        "comparison": cmp,
        "orbits": [o.as_dict() for o in orbits],
    }
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result, fh, indent=2)
    if args.plot:
        from .plotting import plot_orbits

        result["figures"] = [str(plot_orbits(shape, orbits, args.period, args.plot))]
    if cmp["status"] == "fail":
        raise CheckFailed(result, "orbit count is below the lower bound")
    return result


def cmd_reproduce(args):
    from .reproduce import run_table, sphere_routes

    rows = run_table(set(args.only) if args.only else None, echo=lambda s: print(s, file=sys.stderr))
    result = {"rows": [r.as_dict() for r in rows], "passed": sum(r.passed for r in rows), "total": len(rows)}
    if args.plot:
        from .plotting import plot_bounds, plot_routes

        routes = next((r.detail for r in rows if r.id == 8), None) or {m: sphere_routes(m) for m in (1, 2)}
        result["figures"] = [str(plot_bounds(args.plot)), str(plot_routes(routes, args.plot))]
    if not all(r.passed for r in rows):
        raise CheckFailed(result, "some acceptance rows failed")
    return result


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="billiard-bounds",
        description="Mod-2 homology of reduced dihedral powers and periodic billiard bounds.",
        epilog="Exit status: 0 ok, 1 failed check, 2 bad usage.",
    )
    ap.add_argument("--csv", action="store_true", help="emit path,value CSV instead of JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--csv", action="store_true", default=argparse.SUPPRESS, help="emit CSV instead of JSON")
        return p

    p = common(sub.add_parser("bounds", help="closed-form lower bounds"))
    p.add_argument("--betti", type=int_list, help="mod-2 Betti vector, e.g. 1,2,1")
    p.add_argument("--B", type=int)
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_bounds)

    p = common(sub.add_parser("rd2-sphere", help="cell model of RD2(S^m)"))
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_rd2_sphere)

    def bouquet(p):
        p.add_argument("--betti", type=int_list)
        p.add_argument("--m", type=int)
        p.add_argument("--k", type=int_list, help="multiplicities k_1..k_m")
        p.add_argument("--no-duality", action="store_true", help="allow non-manifold bouquets")

    p = common(sub.add_parser("rd3-assembly", help="bouquet assembly of RD2 and RD3 Betti sums"))
    bouquet(p)
    p.set_defaults(func=cmd_rd3_assembly)

    p = common(sub.add_parser("dold", help="simplicial-module route"))
    bouquet(p)
    p.add_argument("--route", choices=["rd2", "rd3"], default="rd3")
    p.add_argument("--file", help="FD-module JSON; prints Moore and alternating homology")
    p.add_argument("--degree", type=int, help="top degree for --file (default q_max - 1)")
    p.set_defaults(func=cmd_dold)

    p = common(sub.add_parser("power", help="geometric dihedral power of a triangulation"))
    p.add_argument("--complex", help="facet list file")
    p.add_argument("--model", choices=["triangle", "square", "tetrahedron", "octahedron"])
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--rounds", type=int, default=1)
    p.set_defaults(func=cmd_power)

    p = common(sub.add_parser("billiards", help="numerical periodic-orbit search"))
    p.add_argument("--shape", default="ellipse:2,1")
    p.add_argument("--period", type=int, default=2)
    p.add_argument("--starts", type=int)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="also write the orbit list to this file")
    p.add_argument("--plot", metavar="DIR", help="write a figure of the orbits into DIR")
    p.set_defaults(func=cmd_billiards)

    p = common(sub.add_parser("reproduce-paper", help="run the acceptance table"))
    p.add_argument("--only", type=int_list, help="comma-separated row numbers")
    p.add_argument("--plot", metavar="DIR", help="write summary figures into DIR")
    p.set_defaults(func=cmd_reproduce)
    return ap


def emit(doc, as_csv: bool, out) -> None:
    out.write(to_csv(doc) if as_csv else json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    params = {k: v for k, v in vars(args).items() if k not in ("func", "csv", "command")}
    manifest = RunManifest(args.command, json.loads(json.dumps(params, default=list)))
    t = time.perf_counter()
    code = EXIT_OK
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"billiard-bounds {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckFailed as exc:
        print(f"billiard-bounds {args.command}: check failed: {exc}", file=sys.stderr)
        result, code = exc.result, EXIT_FAILED
    manifest.wall_time = time.perf_counter() - t
    manifest.result_digest = digest(result)
    emit({"manifest": manifest.as_dict(), "result": result}, args.csv, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
