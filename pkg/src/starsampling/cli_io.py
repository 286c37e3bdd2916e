"""Edge-list ingestion, result tables and the ``starsampling`` command line.

Subcommands: ``stats``, ``estimate``, ``simulate``, ``sweep`` and ``table``.
Each writes CSV (default) or JSON rows; every row carries the seed, the run
configuration and its hash, so :func:`rerun` can reproduce it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import estimators as est
from .er_model import ErParams
from .graph_core import Graph, build_graph, degree_assortativity, degree_stats
from .montecarlo import (THREADS_ENV, ExperimentSpec, TrialSummary, estimate_interval,
                         run_experiment, sweep, table_experiment)
from .samplers import Variant


RESULT_COLUMNS = ("graph", "variant", "cost_model", "trials", "seed", "mean", "ci_lo", "ci_hi",
                  "estimate_lo", "estimate_hi", "rel_err_pct", "estimate_outside_ci",
                  "config_hash", "config")
STATS_COLUMNS = ("graph", "n", "m", "s", "alpha", "d_max", "config_hash", "config")
ESTIMATE_COLUMNS = ("graph", "n", "n0", "s", "variant", "cost_model", "estimate_lo",
                    "estimate_hi", "config_hash", "config")


class EdgeListError(ValueError):
    pass


def load_edge_list(path: str | os.PathLike, return_labels: bool = False):
    """Read a whitespace-separated edge list into a simple undirected graph.

    Lines starting with ``#`` or ``%`` are comments; in a MatrixMarket
    coordinate file the dimension line is skipped too. Vertex ids may be any
    tokens and are relabeled ``0..n-1`` in order of first appearance. Arcs
    are symmetrized; self-loops and repeated edges are dropped. Columns past
    the second (weights, timestamps) are ignored.

    Raises:
        EdgeListError: on a line with fewer than two fields, or if the file
            holds no edges.
    """
    labels: dict[str, int] = {}
    pairs = []
    matrix_market = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if lineno == 1 and line.lower().startswith("%%matrixmarket"):
                matrix_market = True
            if not line or line[0] in "#%":
                continue
            if matrix_market:  # the first data line holds the matrix dimensions
                matrix_market = False
                continue
            fields = line.split()
            if len(fields) < 2:
                raise EdgeListError(f"{path}:{lineno}: expected two vertex ids, got {line!r}")
            ids = []
            for tok in fields[:2]:
                if tok not in labels:
                    labels[tok] = len(labels)
                ids.append(labels[tok])
            pairs.append(ids)
    if not pairs:
        raise EdgeListError(f"{path}: no edges found")
    graph = build_graph(np.asarray(pairs, dtype=np.int64), len(labels))
    if return_labels:
        return graph, list(labels)
    return graph


def write_edge_list(graph: Graph, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for u, v in graph.edges():
            fh.write(f"{u}\t{v}\n")


def write_labels(labels: list[str], path: str | os.PathLike) -> None:
    """Dump the ``new_id -> original id`` table produced by :func:`load_edge_list`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# vertex\toriginal_id\n")
        for i, lab in enumerate(labels):
            fh.write(f"{i}\t{lab}\n")


def graph_summary(graph: Graph) -> dict:
    """Order, size, density, degree assortativity and maximum degree."""
    stats = degree_stats(graph)
    return {"n": graph.n, "m": graph.m, "s": graph.density,
            "alpha": degree_assortativity(graph), "d_max": stats.d_max}


# ---------------------------------------------------------------- rows


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _stamp(row: dict, config: dict) -> dict:
    row["config_hash"] = config_hash(config)
    row["config"] = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return row


def summary_rows(summary: TrialSummary, graph_name: str, config: dict) -> list[dict]:
    rows = []
    for model in ("unit", "linear"):
        mean = summary.mean_unit if model == "unit" else summary.mean_linear
        ci = summary.ci_unit if model == "unit" else summary.ci_linear
        estimate = summary.estimate_unit if model == "unit" else summary.estimate_linear
        lo, hi = estimate_interval(estimate) if estimate is not None else (None, None)
        rel = summary.rel_err_unit if model == "unit" else summary.rel_err_linear
        rows.append(_stamp({
            "graph": graph_name, "variant": summary.variant.value, "cost_model": model,
            "trials": summary.trials, "seed": summary.master_seed, "mean": mean,
            "ci_lo": ci[0], "ci_hi": ci[1], "estimate_lo": lo, "estimate_hi": hi,
            "rel_err_pct": rel, "estimate_outside_ci": summary.estimate_outside_ci(model),
        }, config))
    return rows


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _fmt(value):
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def format_rows(rows: list[dict], columns, fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps({k: _plain(row.get(k)) for k in columns}) + "\n" for row in rows)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in columns})
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _variants(names):
    return [Variant(v) for v in (names or [v.value for v in Variant])]


def _cmd_stats(cfg, prov):
    if cfg.get("labels_out") and len(cfg["graphs"]) != 1:
        raise ValueError("--labels-out needs exactly one graph")
    rows = []
    for path in cfg["graphs"]:
        graph, labels = load_edge_list(path, return_labels=True)
        if cfg.get("labels_out"):
            write_labels(labels, cfg["labels_out"])
        rows.append(_stamp({"graph": Path(path).stem, **graph_summary(graph)}, prov))
    return rows, STATS_COLUMNS


def _estimate_values(variant, cost_model, inp: est.EstimatorInput, graph_ctx=None):
    if graph_ctx is not None:
        graph, ext = graph_ctx
        n, s = graph.n, graph.density
        if variant is Variant.SSR:
            return (est.ssr_unit_exact(n, ext.n_e_star) if cost_model == "unit"
                    else est.ssr_linear_exact(ext, n))
        if variant is Variant.SSC:
            return (est.ssc_unit_exact(n, ext.n_e_star) if cost_model == "unit"
                    else est.ssc_linear_er(n, ext.n_e_star, s))
        return (est.sss_schedule(inp, ext.n_e_star).c_u_approx if cost_model == "unit"
                else est.sss_linear_er(inp, ext.n_e_star))
    if variant is Variant.SSR:
        return est.ssr_unit_bounds_er(inp) if cost_model == "unit" else est.ssr_linear_er(inp)
    if variant is Variant.SSC:
        return est.ssc_unit_bounds_er(inp) if cost_model == "unit" else est.ssc_linear_er_expected(inp)
    return est.sss_schedule(inp).c_u_approx if cost_model == "unit" else est.sss_linear_er(inp)


def _cmd_estimate(cfg, prov):
    from .graph_core import TargetSet, extended_neighborhood

    graph_ctx = None
    name = "er"
    if cfg.get("graph"):
        graph = load_edge_list(cfg["graph"])
        target = TargetSet.of(cfg["target"], graph)
        graph_ctx = (graph, extended_neighborhood(graph, target))
        inp = est.EstimatorInput(graph.n, target.n0_star, graph.density)
        name = Path(cfg["graph"]).stem
    else:
        inp = est.EstimatorInput(cfg["n"], cfg["n0"], cfg["s"])
    rows = []
    for variant in _variants(cfg["variants"]):
        for model in cfg["cost_models"]:
            lo, hi = estimate_interval(_estimate_values(variant, model, inp, graph_ctx))
            rows.append(_stamp({"graph": name, "n": inp.n, "n0": inp.n0_star, "s": inp.s,
                                "variant": variant.value, "cost_model": model,
                                "estimate_lo": lo, "estimate_hi": hi}, prov))
    return rows, ESTIMATE_COLUMNS


def _cmd_simulate(cfg, prov):
    if cfg.get("er"):
        n, s = cfg["er"]
        source, name = ErParams(int(n), float(s)), f"er(n={int(n)},s={float(s):.6g})"
    else:
        source, name = load_edge_list(cfg["graph"]), Path(cfg["graph"]).stem
    rows = []
    for variant in _variants(cfg["variants"]):
        spec = ExperimentSpec(source, variant, cfg["n0"], cfg["trials"], cfg["seed"],
                              fresh_graph_per_trial=not cfg["fixed_graph"],
                              fresh_target_per_trial=not cfg["fixed_target"])
        rows += summary_rows(run_experiment(spec, cfg["threads"]), name, prov)
    return rows, RESULT_COLUMNS


def _cmd_sweep(cfg, prov):
    s_values = cfg["s_values"] or np.logspace(np.log10(cfg["s_min"]), np.log10(cfg["s_max"]),
                                              cfg["points"]).tolist()
    rows = []
    for variant in _variants(cfg["variants"]):
        template = ExperimentSpec(ErParams(cfg["n"], s_values[0]), variant, cfg["n0"],
                                  cfg["trials"], cfg["seed"],
                                  fresh_graph_per_trial=not cfg["fixed_graph"])
        for s, summary in zip(s_values, sweep(template, s_values, cfg["threads"])):
            for row in summary_rows(summary, f"er(n={cfg['n']},s={s:.6g})", prov):
                row["s"] = s
                rows.append(row)
    return rows, ("s",) + RESULT_COLUMNS


def _cmd_table(cfg, prov):
    graph = load_edge_list(cfg["graph"])
    name = Path(cfg["graph"]).stem
    result = table_experiment(graph, cfg["n0"], cfg["trials"], cfg["seed"], label=name,
                              variants=_variants(cfg["variants"]),
                              fresh_target_per_trial=not cfg["fixed_target"],
                              workers=cfg["threads"])
    rows = []
    for summary in result.values():
        rows += summary_rows(summary, name, prov)
    return rows, RESULT_COLUMNS


COMMANDS = {"stats": _cmd_stats, "estimate": _cmd_estimate, "simulate": _cmd_simulate,
            "sweep": _cmd_sweep, "table": _cmd_table}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starsampling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, simulation=True):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write rows here instead of stdout")
        if simulation:
            p.add_argument("--variant", dest="variants", action="append",
                           choices=[v.value for v in Variant],
                           help="repeatable; default all three")
            p.add_argument("--trials", type=int, default=1000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--threads", type=int, default=None,
                           help=f"worker threads (default ${THREADS_ENV} or 1)")

    p = sub.add_parser("stats", help="order, size, density, assortativity and max degree")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--labels-out", help="write the vertex id remapping table here")
    common(p, simulation=False)

    p = sub.add_parser("estimate", help="closed-form cost estimates")
    p.add_argument("--n", type=int)
    p.add_argument("--n0", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--graph", help="edge list; estimates for a given target")
    p.add_argument("--target", type=int, nargs="+", help="target vertex ids (with --graph)")
    p.add_argument("--variant", dest="variants", action="append", choices=[v.value for v in Variant])
    p.add_argument("--cost-model", dest="cost_models", action="append", choices=("unit", "linear"))
    common(p, simulation=False)

    p = sub.add_parser("simulate", help="Monte Carlo costs on an ER model or a loaded graph")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--er", nargs=2, metavar=("N", "S"), type=float)
    src.add_argument("--graph")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--fixed-graph", action="store_true", help="one ER graph for all trials")
    p.add_argument("--fixed-target", action="store_true", help="one target for all trials")
    common(p)

    p = sub.add_parser("sweep", help="ER simulations over a grid of edge probabilities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--s-values", type=float, nargs="+")
    p.add_argument("--s-min", type=float, default=1e-4)
    p.add_argument("--s-max", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=12)
    p.add_argument("--fixed-graph", action="store_true")
    common(p)

    p = sub.add_parser("table", help="per-variant unit and linear rows for a loaded graph")
    p.add_argument("graph")
    p.add_argument("--n0", type=int, default=4)
    p.add_argument("--fixed-target", action="store_true")
    common(p)
    return parser


def _config_from_args(args) -> dict:
    # thread count never changes results, so it stays out of the provenance config
    cfg = {k: v for k, v in vars(args).items() if k not in ("format", "out", "threads")}
    if args.command == "estimate":
        if args.graph is None and None in (args.n, args.n0, args.s):
            raise SystemExit("estimate: give --n, --n0 and --s, or --graph with --target")
        if args.graph is not None and not args.target:
            raise SystemExit("estimate: --graph needs --target")
        cfg["cost_models"] = args.cost_models or ["unit", "linear"]
    return cfg


def execute(cfg: dict, threads: int | None = None) -> tuple[list[dict], tuple]:
    """Run one configuration (as embedded in output rows) and return ``(rows, columns)``."""
    return COMMANDS[cfg["command"]]({**cfg, "threads": threads}, cfg)


def rerun(config: dict | str, threads: int | None = None) -> list[dict]:
    """Re-execute the configuration embedded in an output row."""
    if isinstance(config, str):
        config = json.loads(config)
    return execute(config, threads)[0]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            parser.print_usage(sys.stderr)
            return 2
        return 2 if exc.code else 0
    try:
        rows, columns = execute(cfg, getattr(args, "threads", None))
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = format_rows(rows, columns, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
