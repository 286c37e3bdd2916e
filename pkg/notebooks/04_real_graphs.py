# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Estimates on real graphs
#
# Point `STARSAMPLING_DATA` at a directory holding `web-google.txt`,
# `power-network.txt` and `tech-routers.txt` (any whitespace-separated edge
# list; MatrixMarket also works). Each graph gets its summary row and then
# 1000 trials per variant, with a fresh uniform target of four vertices per trial.
#
# SSR and SSC estimates use the exact arbitrary-graph formulas with the
# measured extended-target order. SSS has no such formula, so it falls back on
# the ER approximation with the graph's order and density. Large SSS errors
# therefore signal structure an ER graph does not capture.

# %%
import os
from pathlib import Path

from starsampling.cli_io import graph_summary, load_edge_list
from starsampling.montecarlo import table_experiment

DATA = Path(os.environ.get("STARSAMPLING_DATA", "../tests/data"))
NAMES = ("web-google", "power-network", "tech-routers")

# %%
graphs = {}
for name in NAMES:
    hits = sorted(DATA.glob(f"{name}.*"))
    if not hits:
        print(f"{name}: no file under {DATA}, skipped")
        continue
    graphs[name] = load_edge_list(hits[0])
    print(name, graph_summary(graphs[name]))

# %%
for name, g in graphs.items():
    rows = table_experiment(g, 4, 1000, seed=10, label=name)
    for v, r in rows.items():
        flag_u = "*" if r.estimate_outside_ci("unit") else " "
        flag_l = "*" if r.estimate_outside_ci("linear") else " "
        print(f"{name:14s} {v.value}  unit {r.estimate_unit:8.1f}{flag_u} "
              f"[{r.ci_unit[0]:7.1f}, {r.ci_unit[1]:7.1f}] {r.rel_err_unit:5.1f}%   "
              f"linear {r.estimate_linear:8.1f}{flag_l} "
              f"[{r.ci_linear[0]:7.1f}, {r.ci_linear[1]:7.1f}] {r.rel_err_linear:5.1f}%")
