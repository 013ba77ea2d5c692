"""Command line entry point.

Every command prints (or writes with ``--out``) one document holding a
``manifest`` block, the ``result`` and a separate ``timing`` block, so two
runs with the same manifest differ only in ``timing``.

Exit codes: 0 ok, 1 malformed input, 2 undecided at budget, 3 domain
precondition violated.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import platform
import sys
import time
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .families import (FAMILY_KINDS, build_family, enumerate_trees, make_clique_triod, make_cycle,
                       make_cycle_triod, make_complete, make_figure_graphs, make_grid,
                       random_interval_graph, random_tree)
from .formats import InputError, graph_to_json, load_graph, load_walk, to_dot
from .formulas import check_predictions, predict
from .graph import DomainError, Graph, GraphError, validate_walk
from .solver import DEFAULT_BUDGET, BudgetExceeded, best_response, range_of

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED, EXIT_DOMAIN = 0, 1, 2, 3
STRATEGIES = ("tree_dfs", "caterpillar", "interval", "grid_fiber", "cycle_triod", "clique_triod")


class Run:
    """Collects the manifest for one invocation."""

    def __init__(self, args: argparse.Namespace):
        self.command = args.command
        self.args = {k: v for k, v in sorted(vars(args).items())
                     if k not in ("command", "func", "out") and v is not None}
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []
        self.seed = args.seed
        self.budget = args.budget if args.budget is not None else DEFAULT_BUDGET
        self.started = time.perf_counter()

    def add_input(self, path: str) -> None:
        self.inputs[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def manifest(self) -> dict:
        body = {"command": self.command, "args": self.args, "inputs": self.inputs,
                "seed": self.seed, "budget": self.budget, "version": __version__,
                "outputs": self.outputs}
        digest = hashlib.sha256(json.dumps(body, sort_keys=True, default=str).encode()).hexdigest()
        return {**body, "hash": digest}

    def timing(self) -> dict:
        return {"wall_ms": int((time.perf_counter() - self.started) * 1000),
                "host": platform.node(), "python": platform.python_version()}


# -- input helpers -----------------------------------------------------------------

def _params(pairs: Sequence[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"parameter {item!r} must look like key=value")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def _graph(args: argparse.Namespace, run: Run) -> Graph:
    if args.graph and args.family:
        raise InputError("give either --graph or --family, not both")
    if args.graph:
        run.add_input(args.graph)
        return load_graph(args.graph)
    if args.family:
        return build_family(args.family, _params(args.param))
    raise InputError("a graph is required: use --graph FILE or --family KIND")


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph file (.json or edge list)")
    p.add_argument("--family", choices=FAMILY_KINDS, help="build a family instead of reading a file")
    p.add_argument("--param", "-p", action="append", metavar="KEY=VALUE",
                   help="family parameter, repeatable")


# -- commands ------------------------------------------------------------------------

def cmd_solve(args: argparse.Namespace, run: Run):
    g = _graph(args, run)
    value, results = range_of(g, budget=run.budget, max_rho=args.max_rho, prune=args.prune)
    out = {"range": value, "n": g.n, "results": []}
    millis = []
    for res in results:
        d = res.to_dict(timing=False)
        if not args.emit_witness:
            d.pop("witness")
        out["results"].append(d)
        millis.append(res.millis)
    if args.emit_certificate:
        losses = [r for r in results if not r.cop_wins]
        if losses:
            with open(args.emit_certificate, "wb") as fh:
                losses[-1].certificate.write(fh)
            run.outputs.append(args.emit_certificate)
    return out, {"solver_millis": millis}


def cmd_family(args: argparse.Namespace, run: Run):
    g = build_family(args.kind, _params(args.param))
    meta = {k: v for k, v in g.meta.items() if isinstance(v, (int, str, list))}
    return {**graph_to_json(g), "meta": meta}, {}


def cmd_predict(args: argparse.Namespace, run: Run):
    g = _graph(args, run)
    return {"n": g.n, "predictions": [p.to_dict() for p in predict(g)]}, {}


def _plan(g: Graph, strategy: str):
    from .strategies import patrols

    if strategy == "tree_dfs":
        return patrols.tree_dfs_patrol(g)
    if strategy == "caterpillar":
        return patrols.caterpillar_patrol(g)
    if strategy == "interval":
        if "order" not in g.meta:
            raise DomainError("the interval sweep needs a graph built from intervals (--family interval)")
        return patrols.interval_sweep_patrol(g, g.meta["order"])
    if strategy == "grid_fiber":
        if g.meta.get("kind") != "grid":
            raise DomainError("the fiber sweep needs a grid (--family grid)")
        n, m = sorted((g.meta["rows"], g.meta["cols"]))
        if (n, m) != (g.meta["rows"], g.meta["cols"]):
            raise DomainError("the fiber sweep expects rows <= cols")
        return patrols.grid_fiber_patrol(n, m)
    if strategy == "cycle_triod":
        if g.meta.get("kind") != "cycle_triod":
            raise DomainError("the cycle-triod sweep needs --family cycle_triod")
        return patrols.cycle_triod_patrol(g.meta["k"], g.meta["l"])
    if strategy == "clique_triod":
        lengths = {len(leg) - 1 for leg in g.meta.get("branches", [])}
        if g.meta.get("kind") != "clique_triod" or len(lengths) != 1:
            raise DomainError("the clique-triod sweep needs --family clique_triod with equal legs")
        return patrols.clique_triod_patrol(len(g.meta["clique"]), lengths.pop())
    raise DomainError(f"unknown strategy {strategy!r}")


def cmd_patrol(args: argparse.Namespace, run: Run):
    g = _graph(args, run)
    plan = _plan(g, args.strategy)
    out = plan.to_dict()
    if args.check:
        out["captures_best_response"] = best_response(g, plan.walk, plan.rho).captured
    return out, {}


def _automaton_run(g: Graph, walk: list[int], rho: int):
    from .strategies import grid_projection_robber, triod_shadow_robber

    kind = g.meta.get("kind")
    if kind == "grid":
        n, m = g.meta["rows"], g.meta["cols"]
        if n > m:
            raise DomainError("the grid robber expects rows <= cols")
        return grid_projection_robber(n, m, rho, walk)
    if kind in ("triod", "clique_triod"):
        return triod_shadow_robber(g, None, walk, rho)
    raise DomainError(f"no robber automaton for graphs of kind {kind!r}")


def cmd_simulate(args: argparse.Namespace, run: Run):
    g = _graph(args, run)
    run.add_input(args.patrol)
    data = load_walk(args.patrol, g)
    walk = [int(v) for v in data["walk"]]
    rho = args.rho if args.rho is not None else data.get("rho")
    if rho is None:
        raise InputError("no radius: pass --rho or put 'rho' in the walk file")
    if not validate_walk(g, walk):
        raise InputError(f"{args.patrol}: walk steps must be equal or adjacent vertices")
    out: dict[str, Any] = {"rho": rho, "patrol_length": len(walk)}
    if args.robber in ("best", "both"):
        out["best_response"] = best_response(g, walk, rho).to_dict()
    if args.robber in ("automaton", "both"):
        out["automaton"] = _automaton_run(g, walk, rho).to_dict()
    return out, {}


def _corpus(spec: str, seed: int) -> list[Graph]:
    kind, _, rest = spec.partition(":")
    nums = [int(x) for x in rest.split(":") if x] if kind not in ("grids", "cycle_triods",
                                                                   "clique_triods") else []
    pairs = [tuple(int(y) for y in x.split("x")) for x in rest.split(",") if x] if not nums else []
    if kind == "trees":
        return [t for n in range(1, nums[0] + 1) for t in enumerate_trees(n)]
    if kind == "random_trees":
        count, n = nums
        return [random_tree(2 + (seed + i) % (n - 1), seed + i) for i in range(count)]
    if kind == "cycles":
        lo, hi = nums
        return [make_cycle(k) for k in range(lo, hi + 1)]
    if kind == "intervals":
        count, n = nums
        return [random_interval_graph(n, seed + i) for i in range(count)]
    if kind == "grids":
        return [make_grid(a, b) for a, b in pairs]
    if kind == "cycle_triods":
        return [make_cycle_triod(a, b) for a, b in pairs]
    if kind == "clique_triods":
        return [make_clique_triod(q, l, l, l) for q, l in pairs]
    if kind == "figures":
        return list(make_figure_graphs()) + [make_complete(3)]
    raise InputError(f"unknown corpus {spec!r}; try trees:9, random_trees:COUNT:N, cycles:3:12, "
                     "intervals:COUNT:N, grids:3x4,4x6, cycle_triods:2x2, clique_triods:3x2, figures")


def cmd_table(args: argparse.Namespace, run: Run):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["graph-id", "n", "predictions", "solver-range", "agreement"])
    agree = total = 0
    for spec in args.corpus:
        try:
            graphs = _corpus(spec, run.seed)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, (InputError, DomainError)):
                raise
            raise InputError(f"malformed corpus spec {spec!r}") from None
        for g in graphs:
            preds = predict(g)
            value, _ = range_of(g, budget=run.budget)
            ok = check_predictions(preds, value)
            agree += ok
            total += 1
            text = ";".join(f"{p.kind}={p.value}" for p in preds)
            writer.writerow([g.meta.get("name", f"g{total}"), g.n, text, value, ok])
    return {"csv": buf.getvalue(), "rows": total, "agreement": agree / total if total else 1.0}, {}


def cmd_conjecture(args: argparse.Namespace, run: Run):
    from .conjecture import conjecture_check, random_chordal_graph

    reports = []
    for i in range(args.count):
        g = random_chordal_graph(args.n, run.seed + i)
        rep = conjecture_check(g, args.rho, budget=run.budget)
        reports.append({"graph": graph_to_json(g), "seed": run.seed + i, **rep.to_dict()})
    counts: dict[str, int] = {}
    for r in reports:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    return {"reports": reports, "status_counts": counts}, {}


def cmd_export(args: argparse.Namespace, run: Run):
    g = _graph(args, run)
    walk = notes = None
    if args.walk:
        run.add_input(args.walk)
        data = load_walk(args.walk, g)
        walk = [int(v) for v in data["walk"]]
        notes = data.get("annotations")
        if notes is not None and len(notes) != len(walk):
            raise InputError(f"{args.walk}: field 'annotations' needs one entry per walk step")
    return {"dot": to_dot(g, walk, g.meta.get("name", "G"), notes)}, {}


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patrolrange", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--budget", type=int, help="solver state-visit budget "
                        "(default from PATROLRANGE_BUDGET or 2e8)")
    common.add_argument("--out", "-o", help="write the document here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "compute the range of a graph")
    _add_graph_args(p)
    p.add_argument("--max-rho", type=int)
    p.add_argument("--prune", action="store_true", help="subset-dominance pruning")
    p.add_argument("--emit-witness", action="store_true")
    p.add_argument("--emit-certificate", metavar="PATH",
                   help="write the cop-loss certificate at range - 1")

    p = add("family", cmd_family, "build a family graph")
    p.add_argument("kind", choices=FAMILY_KINDS)
    p.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")

    p = add("predict", cmd_predict, "closed-form predictions for a graph")
    _add_graph_args(p)

    p = add("patrol", cmd_patrol, "build a cop patrol")
    _add_graph_args(p)
    p.add_argument("--strategy", choices=STRATEGIES, required=True)
    p.add_argument("--check", action="store_true", help="also run the best-response robber")

    p = add("simulate", cmd_simulate, "play a patrol against a robber")
    _add_graph_args(p)
    p.add_argument("--patrol", required=True, help="walk file")
    p.add_argument("--rho", type=int)
    p.add_argument("--robber", choices=("best", "automaton", "both"), default="both")

    p = add("table", cmd_table, "CSV of predictions against the solver")
    p.add_argument("corpus", nargs="+", help="e.g. trees:9 cycles:3:12 grids:3x4,4x6")

    p = add("conjecture", cmd_conjecture, "explore random chordal graphs")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--rho", type=int, default=2)

    p = add("export", cmd_export, "DOT rendering of a graph or walk")
    _add_graph_args(p)
    p.add_argument("--walk", help="walk file to overlay")
    p.add_argument("--dot", action="store_true", help="DOT output (the only format)")
    return parser


def _emit(args: argparse.Namespace, run: Run, result: dict, timing: dict) -> None:
    if args.out:
        run.outputs.append(args.out)
    manifest = run.manifest()
    timing = {**run.timing(), **timing}
    raw = result.get("dot") if args.command == "export" else (
        result.get("csv") if args.command == "table" else None)
    if raw is not None:
        # plain-text outputs carry the manifest hash in a comment line
        mark = "//" if args.command == "export" else "#"
        text = f"{mark} manifest {manifest['hash']}\n{raw}"
        if args.out:
            Path(args.out + ".manifest.json").write_text(
                json.dumps({"manifest": manifest, "timing": timing}, indent=2, sort_keys=True) + "\n")
    else:
        doc = {"manifest": manifest, "result": result, "timing": timing}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args)
    try:
        result, timing = args.func(args, run)
    except BudgetExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, GraphError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, run, result, timing)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
