"""Star sampling with replacement (SSR), without center replacement (SSC) and
without star replacement (SSS).

Each run draws star centers until a star (center plus surviving neighbors)
touches the target set, and reports the unit cost (number of stars) and the
linear cost (sum of extended degrees, i.e. degree + 1, at selection time).

The shared :class:`~starsampling.graph_core.Graph` is never modified. SSC and
SSS keep a per-run alive mask and a compact alive list; uniform selection
over survivors swaps the removed vertex with the list tail, which reorders
the list but leaves the selection law uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np

from .graph_core import Graph, TargetSet


class Variant(str, Enum):
    SSR = "ssr"
    SSC = "ssc"
    SSS = "sss"


@dataclass(frozen=True)
class SampleRecord:
    t: int  # 1-based sample index
    center: int
    ext_degree: int  # extended degree of the center in the surviving graph
    order_before: int  # surviving vertex count when the center was drawn
    hit: bool


@dataclass(frozen=True)
class CostResult:
    unit_cost: int
    linear_cost: int
    terminated: bool = True
    trace: list[SampleRecord] | None = field(default=None, repr=False)


@numba.njit(inline="always")
def _grow(buf, size):
    if size < len(buf):
        return buf
    out = np.empty(2 * len(buf), dtype=buf.dtype)
    out[: len(buf)] = buf
    return out


@numba.njit(nogil=True, cache=True)
def _ssr_kernel(indptr, indices, is_target, cap, rng, keep):
    n = len(indptr) - 1
    size = 16 if keep else 1
    centers = np.empty(size, dtype=np.int64)
    ext = np.empty(size, dtype=np.int64)
    unit = 0
    linear = 0
    while unit < cap:
        c = rng.integers(0, n)
        lo = indptr[c]
        hi = indptr[c + 1]
        hit = is_target[c]
        if not hit:
            for k in range(lo, hi):
                if is_target[indices[k]]:
                    hit = True
                    break
        d_e = hi - lo + 1
        if keep:
            centers = _grow(centers, unit)
            ext = _grow(ext, unit)
            centers[unit] = c
            ext[unit] = d_e
        unit += 1
        linear += d_e
        if hit:
            return unit, linear, True, centers, ext
    return unit, linear, False, centers, ext


@numba.njit(nogil=True, cache=True)
def _wor_kernel(indptr, indices, is_target, remove_star, rng, keep):
    """Sampling without replacement; removes the center (SSC) or the whole star (SSS)."""
    n = len(indptr) - 1
    alive = np.ones(n, dtype=np.bool_)
    pool = np.arange(n)
    pos = np.arange(n)
    size = n
    buf = 16 if keep else 1
    centers = np.empty(buf, dtype=np.int64)
    ext = np.empty(buf, dtype=np.int64)
    orders = np.empty(buf, dtype=np.int64)
    unit = 0
    linear = 0
    while size > 0:
        c = pool[rng.integers(0, size)]
        lo = indptr[c]
        hi = indptr[c + 1]
        hit = is_target[c]
        d = 0
        for k in range(lo, hi):
            u = indices[k]
            if alive[u]:
                d += 1
                if is_target[u]:
                    hit = True
        if keep:
            centers = _grow(centers, unit)
            ext = _grow(ext, unit)
            orders = _grow(orders, unit)
            centers[unit] = c
            ext[unit] = d + 1
            orders[unit] = size
        unit += 1
        linear += d + 1
        if hit:
            return unit, linear, True, centers, ext, orders
        # swap-remove the center
        i = pos[c]
        last = pool[size - 1]
        pool[i] = last
        pos[last] = i
        size -= 1
        alive[c] = False
        if remove_star:
            for k in range(lo, hi):
                u = indices[k]
                if alive[u]:
                    i = pos[u]
                    last = pool[size - 1]
                    pool[i] = last
                    pos[last] = i
                    size -= 1
                    alive[u] = False
    return unit, linear, False, centers, ext, orders


def _prepare(graph: Graph, target: TargetSet) -> np.ndarray:
    if target.n0_star == 0:
        raise ValueError("target set must be non-empty")
    target.validate(graph)
    return target.mask(graph.n)


def default_ssr_cap(n: int, n_e_star: int) -> int:
    """Sample cap for SSR; truncation probability is below exp(-100)."""
    return max(1, int(np.ceil(100 * n / max(1, n_e_star))))


def _ext_order(graph: Graph, is_target: np.ndarray) -> int:
    mask = is_target.copy()
    for v in np.flatnonzero(is_target):
        mask[graph.neighbors(v)] = True
    return int(mask.sum())


def run_ssr(graph: Graph, target: TargetSet, rng: np.random.Generator,
            cap: int | None = None, keep_trace: bool = False) -> CostResult:
    """Star sampling with replacement: centers i.i.d. uniform over all vertices.

    If ``cap`` samples all miss, the result has ``terminated=False``.
    """
    is_target = _prepare(graph, target)
    if cap is None:
        cap = default_ssr_cap(graph.n, _ext_order(graph, is_target))
    if cap < 1:
        raise ValueError("cap must be >= 1")
    unit, linear, hit, centers, ext = _ssr_kernel(
        graph.indptr, graph.indices, is_target, cap, rng, keep_trace)
    trace = None
    if keep_trace:
        trace = [SampleRecord(t + 1, int(centers[t]), int(ext[t]), graph.n, hit and t == unit - 1)
                 for t in range(unit)]
    return CostResult(unit, linear, hit, trace)


def _run_wor(graph, target, rng, remove_star, keep_trace):
    is_target = _prepare(graph, target)
    unit, linear, hit, centers, ext, orders = _wor_kernel(
        graph.indptr, graph.indices, is_target, remove_star, rng, keep_trace)
    # a target vertex survives until some star touches it, so this cannot fail
    assert hit, "sampling exhausted the graph without touching the target"
    trace = None
    if keep_trace:
        trace = [SampleRecord(t + 1, int(centers[t]), int(ext[t]), int(orders[t]), t == unit - 1)
                 for t in range(unit)]
    return CostResult(unit, linear, True, trace)


def run_ssc(graph: Graph, target: TargetSet, rng: np.random.Generator,
            keep_trace: bool = False) -> CostResult:
    """Star sampling without center replacement: each missed center and its edges are removed."""
    return _run_wor(graph, target, rng, False, keep_trace)


def run_sss(graph: Graph, target: TargetSet, rng: np.random.Generator,
            keep_trace: bool = False) -> CostResult:
    """Star sampling without star replacement: each missed star and all edges touching it are removed."""
    return _run_wor(graph, target, rng, True, keep_trace)


def run_variant(variant: Variant | str, graph: Graph, target: TargetSet,
                rng: np.random.Generator, keep_trace: bool = False) -> CostResult:
    variant = Variant(variant)
    if variant is Variant.SSR:
        return run_ssr(graph, target, rng, keep_trace=keep_trace)
    if variant is Variant.SSC:
        return run_ssc(graph, target, rng, keep_trace=keep_trace)
    return run_sss(graph, target, rng, keep_trace=keep_trace)


def sample_costs(variant: Variant | str, indptr: np.ndarray, indices: np.ndarray,
                 is_target: np.ndarray, rng: np.random.Generator,
                 cap: int | None = None) -> tuple[int, int, bool]:
    """Low-overhead entry point for trial loops; returns ``(unit, linear, terminated)``."""
    variant = Variant(variant)
    if variant is Variant.SSR:
        n = len(indptr) - 1
        if cap is None:
            mask = is_target.copy()
            for v in np.flatnonzero(is_target):
                mask[indices[indptr[v]:indptr[v + 1]]] = True
            cap = default_ssr_cap(n, int(mask.sum()))
        unit, linear, hit, _, _ = _ssr_kernel(indptr, indices, is_target, cap, rng, False)
        return unit, linear, hit
    unit, linear, hit, _, _, _ = _wor_kernel(
        indptr, indices, is_target, variant is Variant.SSS, rng, False)
    return unit, linear, hit
