"""Command line entry point: ``odd-ramsey <command> [flags]``.

Exit codes: 0 ok, 1 verification failed, 2 bad arguments or input, 3 guard
or budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import secrets
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import exact, graph_tiles, hyper_tiles, matcher
from .conflicts import ConflictEngine
from .graph_tiles import GraphTileSystem, TileSystemConfig, condition_report
from .host import ColoringFormatError, HostInstance, read_coloring, write_coloring
from .hyper_tiles import HyperTileConfig, HyperTileSystem, hyper_condition_report
from .odd import UncoloredEdge, find_bad_target
from .reporting import build_report, dumps, manifest, now
from .tiles import GuardExceeded, degree_tables

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_GUARD = 0, 1, 2, 3
KINDS = {"graph": "graph", "bg": "graph", "hyper": "hyper", "kh": "hyper"}


class UsageError(Exception):
    pass


def threads() -> int:
    try:
        return max(1, int(os.environ.get("ODD_RAMSEY_THREADS", "1")))
    except ValueError:
        return 1


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _kind(text: str) -> str:
    if text not in KINDS:
        raise argparse.ArgumentTypeError(f"kind must be graph or hyper, got {text!r}")
    return KINDS[text]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("instance")
    g.add_argument("--kind", type=_kind, default="graph", help="graph (K_{n,n}) or hyper (k-partite)")
    g.add_argument("--n", type=int)
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--eps", type=_fraction, help="epsilon, e.g. 1/7")
    g.add_argument("--delta", type=_fraction)
    g.add_argument("--n1", type=int)
    g.add_argument("--n2", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--guard", type=int, default=10**8, help="largest enumeration allowed")
    g.add_argument("--budget", type=int, default=10**7, help="search node or proposal budget")
    g.add_argument("--out", type=Path, help="directory for reports and artifacts")
    g.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="odd-ramsey", description="Odd Ramsey colorings: tiles, conflicts, search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a coloring file for bad target copies")
    p.add_argument("coloring", type=Path)
    p.add_argument("--require-total", action="store_true")

    p = sub.add_parser("tiles", parents=[common], help="enumerate tiles, dump them, report degrees")
    p.add_argument("--dump-limit", type=int, default=None, help="dump at most this many H1 tiles")

    sub.add_parser("conditions", parents=[common], help="degree and codegree conditions of the tile system")

    p = sub.add_parser("conflicts", parents=[common], help="enumerate conflicts, codegrees, and claim checks")
    p.add_argument("--samples", type=int, default=10**4, help="random conflicts for the sub-conflict check")
    p.add_argument("--maximal", type=int, default=10**3, help="random maximal conflict-free matchings")
    p.add_argument("--max-n", type=int, default=4)

    p = sub.add_parser("color", parents=[common], help="run the matcher and write colorings")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--stagnation", type=int, default=None)

    p = sub.add_parser("exact", parents=[common], help="exact odd Ramsey number by backtracking")
    p.add_argument("--qmax", type=int, default=4)
    p.add_argument("--pruning", choices=exact.PRUNING_LEVELS, default="color-canonical")

    p = sub.add_parser("lowerbound", parents=[common], help="check the floor(n/t) lower bound")
    p.add_argument("--mode", choices=("exhaustive", "sampling"), default="exhaustive")
    p.add_argument("--samples", type=int, default=10**6)
    return parser


def _parameters(args) -> dict:
    return {
        "kind": args.kind,
        "n": args.n,
        "t": args.t if args.kind == "graph" else None,
        "k": args.k if args.kind == "hyper" else None,
        "seed": args.seed,
        "epsilon": None if args.eps is None else str(args.eps),
        "delta": None if args.delta is None else str(args.delta),
        "n1": args.n1,
        "n2": args.n2,
        "guard": args.guard,
        "budget": args.budget,
    }


def _need_n(args):
    if args.n is None:
        raise UsageError(f"{args.command} needs --n")


def _config(args):
    _need_n(args)
    try:
        if args.kind == "graph":
            return TileSystemConfig(args.n, args.t, args.eps, args.delta, args.n1, args.n2, args.guard)
        return HyperTileConfig(args.n, args.k, args.eps, args.delta, args.n1, args.n2, args.guard)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _system(config):
    return GraphTileSystem(config) if isinstance(config, TileSystemConfig) else HyperTileSystem(config)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _host(args) -> HostInstance:
    _need_n(args)
    try:
        return HostInstance.graph(args.n, args.t) if args.kind == "graph" else HostInstance.hyper(args.n, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------
# each returns (exit code, result dict, checks or None, csv rows)


def cmd_verify(args):
    try:
        coloring = read_coloring(str(args.coloring), require_total=args.require_total)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except ColoringFormatError as exc:
        raise UsageError(f"{args.coloring}: {exc}") from None
    host = coloring.host
    args.kind = "graph" if host.is_graph else "hyper"
    args.n, args.t, args.k = host.n, host.t, host.k
    if not coloring.total:
        result = {"file": str(args.coloring), "clean": False, "reason": "coloring is not total", "witness": None}
        print(f"{args.coloring}: not total", file=sys.stderr)
        return EXIT_VERIFY, result, None, [result]
    witness = find_bad_target(coloring)
    clean = witness is None
    result = {
        "file": str(args.coloring),
        "clean": clean,
        "colors_used": len(coloring.colors_used()),
        "witness": None if clean else witness.to_dict(),
    }
    if clean:
        print(f"{args.coloring}: no bad copy", file=sys.stderr)
    else:
        print(f"{args.coloring}: bad copy {witness.to_dict()}", file=sys.stderr)
    return (EXIT_OK if clean else EXIT_VERIFY), result, None, [{"file": str(args.coloring), "clean": clean}]


def cmd_tiles(args):
    config = _config(args)
    system = _system(config)
    tiles = system.h1_tiles()
    degree, _ = degree_tables(tiles, with_pairs=False)
    if args.kind == "graph":
        module = graph_tiles
        classify, formula = graph_tiles.vertex_kind, graph_tiles.h1_degree_formula
    else:
        module = hyper_tiles
        classify = lambda v: hyper_tiles.vertex_shape(v, config)  # noqa: E731
        formula = hyper_tiles.hyper_degree_formula
    vertices = list(module.p_vertices(config)) + list(module.q_vertices(config))
    rows = []
    for kind in sorted({classify(v) for v in vertices}):
        verts = [v for v in vertices if classify(v) == kind]
        values = [degree.get(v, 0) for v in verts]
        rows.append({
            "vertex_kind": kind, "count": len(verts), "min": min(values), "max": max(values),
            "formula": formula(kind, config),
        })
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        limit = len(tiles) if args.dump_limit is None else args.dump_limit
        with open(args.out / "tiles.txt", "w") as fh:
            for tile in tiles[:limit]:
                fh.write(system.dump(tile) + "\n")
    sizes = sorted({t.size for t in tiles})
    result = {"config": config.manifest(), "h1_tiles": len(tiles), "h2_tiles": len(system.h2_tiles()),
              "tile_sizes": sizes, "degrees": rows}
    return EXIT_OK, result, None, rows


def cmd_conditions(args):
    config = _config(args)
    report = condition_report(config) if args.kind == "graph" else hyper_condition_report(config)
    checks = [c.to_dict() for c in report.checks]
    return EXIT_OK, {"params": report.params, "informational": True}, checks, checks


def cmd_conflicts(args):
    config = _config(args)
    seed = _seed(args)
    engine = ConflictEngine(_system(config), max_n=args.max_n)
    conflicts = engine.conflicts()
    signatures = Counter((c.system, c.signature, c.hyper_type or "n/a") for c in conflicts)
    sig_rows = [
        {"system": s, "j1": sig[0], "j2": sig[1], "type": ty, "count": count}
        for (s, sig, ty), count in sorted(signatures.items())
    ]
    stats = engine.codegree_stats()
    claims = engine.check_claims(args.samples, args.maximal, seed)
    checks = [
        {"name": row["quantity"], "measured": row["measured"], "bound": row["bound"],
         "expression": row["expression"], "passed": row["passed"]}
        for row in stats
    ]
    result = {"config": config.manifest(), "signatures": sig_rows, "codegrees": stats, "claims": claims,
              "informational": True}
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        with open(args.out / "conflicts.json", "w") as fh:
            json.dump([c.to_dict(engine.system.dump) for c in conflicts], fh, indent=1)
    code = EXIT_OK if all(c["passed"] for c in claims.values()) else EXIT_VERIFY
    return code, result, checks, sig_rows


def _color_job(job):
    config, seed, restarts, stagnation, budget = job
    return matcher.run(config, seed, restarts, stagnation, budget)


def cmd_color(args):
    config = _config(args)
    base = _seed(args)
    jobs = [(config, base + i, args.restarts, args.stagnation, args.budget) for i in range(args.runs)]
    workers = min(threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_color_job, jobs))
    else:
        results = [_color_job(job) for job in jobs]
    results.sort(key=lambda r: r.seed)
    runs = []
    rows = []
    for res in results:
        entry = res.to_dict()
        entry["residue"] = matcher.residue_report(res, config)
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            path = args.out / f"coloring-seed{res.seed}.txt"
            write_coloring(res.coloring, str(path))
            entry["coloring_file"] = path.name
        runs.append(entry)
        rows.append({k: entry[k] for k in ("seed", "success", "colors_used", "h2_edges", "h2_fraction",
                                            "uncolored", "restarts", "proposals")})
    successes = sum(r.success for r in results)
    result = {"config": config.manifest(), "runs": runs, "successes": successes, "attempted": len(results),
              "palette_size": config.n1 + config.n2}
    timing = {"wall_seconds": [round(r.wall_time, 6) for r in results]}
    return EXIT_OK, result, None, rows, timing


def cmd_exact(args):
    host = _host(args)
    res = exact.r_odd_exact(host, args.qmax, args.pruning, args.budget)
    rows = [
        {"host": exact.host_label(host), "target": exact.target_label(host), "q": q, "result": s.status,
         "nodes": s.nodes, "time": round(s.seconds, 6)}
        for q, s in res.searches
    ]
    if args.out is not None:
        exact.write_table(res, args.out)
    result = {"host": exact.host_label(host), "target": exact.target_label(host), "r_odd": res.describe(),
              "status": res.status, "lower": res.lower, "upper": res.upper, "searches": rows,
              "certificates": {str(q): s.coloring.colors for q, s in res.searches if s.coloring is not None}}
    print(f"r_odd({exact.host_label(host)}, {exact.target_label(host)}) = {res.describe()}", file=sys.stderr)
    return (EXIT_GUARD if res.status == "unknown" else EXIT_OK), result, None, rows


def cmd_lowerbound(args):
    _need_n(args)
    if args.kind != "graph":
        if args.mode != "exhaustive":
            raise UsageError("hypergraph lower bound supports exhaustive mode only")
        res = exact.hypergraph_lower_bound_exhaust(args.n, args.k, args.budget)
    else:
        seed = _seed(args) if args.mode == "sampling" else args.seed
        res = exact.lower_bound_exhaust(args.n, args.t, args.mode, args.samples, seed or 0, args.budget)
    result = res.to_dict()
    print(f"lower bound n={args.n}: {'pass' if res.passed else 'FAIL'} ({res.checked} colorings)", file=sys.stderr)
    return (EXIT_OK if res.passed else EXIT_VERIFY), result, None, [result]


COMMANDS = {
    "verify": cmd_verify,
    "tiles": cmd_tiles,
    "conditions": cmd_conditions,
    "conflicts": cmd_conflicts,
    "color": cmd_color,
    "exact": cmd_exact,
    "lowerbound": cmd_lowerbound,
}


def _csv_text(rows) -> str:
    buf = io.StringIO()
    if rows:
        fields = list(rows[0])
        writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in fields})
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ARGS
    started = now()
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"odd-ramsey: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (GuardExceeded, UncoloredEdge) as exc:
        print(f"odd-ramsey: {exc}", file=sys.stderr)
        return EXIT_GUARD if isinstance(exc, GuardExceeded) else EXIT_ARGS
    code, result, checks, rows = out[:4]
    timing = out[4] if len(out) > 4 else None
    run_manifest = manifest(args.command, _parameters(args), threads(), started)
    report = build_report(args.command, run_manifest, result, checks, timing)
    text = dumps(report) if args.format == "json" else _csv_text(rows)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / f"{args.command}.{args.format}").write_text(text)
        if args.format == "csv":
            (args.out / f"{args.command}.json").write_text(dumps(report))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
