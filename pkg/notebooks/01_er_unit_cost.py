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
# # Unit cost on Erdős–Rényi graphs
#
# We sweep the edge probability `s` on a log grid for `n = 1000` and a target
# of two vertices, and compare simulated mean unit costs with the closed-form
# bounds for SSR and SSC and the approximation for SSS.

# %%
import matplotlib.pyplot as plt
import numpy as np

from starsampling import estimators as est
from starsampling.er_model import ErParams
from starsampling.montecarlo import ExperimentSpec, sweep
from starsampling.samplers import Variant

N, N0, TRIALS, SEED = 1000, 2, 1000, 0
S_GRID = np.logspace(-4, -1, 12)

# %%
results = {v: sweep(ExperimentSpec(ErParams(N, S_GRID[0]), v, N0, TRIALS, SEED), S_GRID)
           for v in Variant}

# %% [markdown]
# The SSR and SSC bounds come from bounding the inverse moment of a shifted
# binomial. The SSS curve uses the ratio-of-means hit probability.

# %%
fig, axes = plt.subplots(1, 3, figsize=(13, 3.8), sharey=True)
for ax, v in zip(axes, Variant):
    means = [r.mean_unit for r in results[v]]
    lo = [r.ci_unit[0] for r in results[v]]
    hi = [r.ci_unit[1] for r in results[v]]
    ax.fill_between(S_GRID, lo, hi, alpha=0.3, label="simulation 95% CI")
    ax.plot(S_GRID, means, "k.", label="simulation mean")
    inputs = [est.EstimatorInput(N, N0, s) for s in S_GRID]
    if v is Variant.SSS:
        ax.plot(S_GRID, [est.sss_schedule(i).c_u_approx for i in inputs], "r-", label="approximation")
    else:
        fn = est.ssr_unit_bounds_er if v is Variant.SSR else est.ssc_unit_bounds_er
        b = [fn(i) for i in inputs]
        ax.plot(S_GRID, [x.lower for x in b], "g--", label="lower bound")
        ax.plot(S_GRID, [x.upper for x in b], "b--", label="upper bound")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_title(v.value.upper())
    ax.set_xlabel("s")
axes[0].set_ylabel("unit cost")
axes[0].legend(fontsize=8)
fig.tight_layout()

# %% [markdown]
# Relative error of the SSS approximation at each grid point. With 1000
# trials the simulation's own relative standard error is about 3%, so single
# points can stray by several percent.

# %%
for s, r in zip(S_GRID, results[Variant.SSS]):
    print(f"s={s:.2e}  sim={r.mean_unit:8.2f}  approx={r.estimate_unit:8.2f}  err={r.rel_err_unit:5.2f}%")
