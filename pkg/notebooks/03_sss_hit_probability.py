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
# # The SSS hit probability and its horizon
#
# After `t` misses the approximate hit probability for the next SSS sample
# grows convexly in `t`. It reaches 1 at the horizon `t1`; the denominator
# vanishes at `t2 > t1`. We also check how the three variants' conditional hit
# probabilities converge when `s = c / n`.

# %%
import matplotlib.pyplot as plt
import numpy as np

from starsampling import estimators as est
from starsampling.er_model import ErParams, asymptotic_star_edge_fraction, star_edge_fraction

# %%
fig, ax = plt.subplots(figsize=(6, 4))
for s in (0.005, 0.01, 0.02, 0.05):
    inp = est.EstimatorInput(1000, 2, s)
    sched = est.sss_schedule(inp)
    ax.plot(np.arange(1, sched.T + 1), sched.p_tilde, label=f"s={s}")
    ax.axvline(sched.t1 + 1, color=ax.lines[-1].get_color(), ls=":", lw=0.8)
ax.set_yscale("log")
ax.set_xlabel("sample t")
ax.set_ylabel("approximate hit probability")
ax.legend()
fig.tight_layout()

# %% [markdown]
# Ratios SSS/SSR, SSR/SSC and SSS/SSC of the conditional hit probabilities for
# `s = 1/n`, at samples 2 and 8.

# %%
ns = np.array([10**2, 10**3, 10**4, 10**5])
fig, ax = plt.subplots(figsize=(6, 4))
for t, style in ((2, "-"), (8, "--")):
    ratios = np.array([est.variant_ratio_check(int(n), 1.0, 2, t) for n in ns])
    for k, name in enumerate(("SSS/SSR", "SSR/SSC", "SSS/SSC")):
        ax.plot(ns, ratios[:, k], style, marker="o", label=f"{name}, t={t}")
ax.set_xscale("log")
ax.set_xlabel("n")
ax.legend(fontsize=8)
fig.tight_layout()

# %% [markdown]
# The share of all edges touching one star tends to `(2 - s) s` as `n` grows.

# %%
s_values = np.linspace(0.01, 1, 50)
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(s_values, [asymptotic_star_edge_fraction(s) for s in s_values], "k-", label="limit")
for n in (5, 20, 100):
    ax.plot(s_values, [star_edge_fraction(ErParams(n, s)) for s in s_values], label=f"n={n}")
ax.set_xlabel("s")
ax.set_ylabel("expected fraction of edges removed")
ax.legend()
fig.tight_layout()
