"""Simple undirected graphs stored as CSR arrays, plus target-set machinery.

Vertices are labeled ``0..n-1``. A :class:`Graph` is immutable once built;
samplers express deletions through their own masks and never touch it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class Graph:
    """Immutable simple undirected graph in compressed sparse row form.

    ``indices[indptr[v]:indptr[v + 1]]`` is the sorted neighbor list of ``v``.
    Use :func:`build_graph` to construct one from arbitrary edge pairs.
    """

    __slots__ = ("n", "m", "indptr", "indices", "_degrees")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != len(indices):
            raise ValueError("malformed CSR arrays")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.n = int(n)
        self.m = len(indices) // 2
        self.indptr = indptr
        self.indices = indices
        degrees = np.diff(indptr)
        degrees.setflags(write=False)
        self._degrees = degrees

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self._degrees[v])

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def density(self) -> float:
        """Edge density ``m / C(n, 2)``; zero for graphs with fewer than two vertices."""
        if self.n < 2:
            return 0.0
        return self.m / (self.n * (self.n - 1) / 2)

    def edges(self) -> np.ndarray:
        """Return an ``(m, 2)`` array of edges ``(u, v)`` with ``u < v``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        keep = src < self.indices
        return np.column_stack((src[keep], self.indices[keep]))

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)


def build_graph(edge_pairs: Iterable[tuple[int, int]] | np.ndarray, n: int) -> Graph:
    """Build a simple undirected graph on ``n`` vertices.

    Self-loops are dropped and duplicate or reversed pairs collapse to one
    undirected edge.

    Args:
        edge_pairs: iterable of ``(u, v)`` vertex-id pairs, or an ``(k, 2)`` array.
        n: vertex count; every id must lie in ``[0, n)``.

    Returns:
        The graph, with sorted adjacency lists.

    Raises:
        ValueError: if ``n < 0`` or an id is outside ``[0, n)``.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    if not isinstance(edge_pairs, np.ndarray):
        edge_pairs = list(edge_pairs)
    pairs = np.asarray(edge_pairs, dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("edge_pairs must be a sequence of (u, v) pairs")
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
        bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
        raise ValueError(f"edge {tuple(int(x) for x in bad)} has a vertex id outside [0, {n})")

    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    keys = np.unique(lo * max(n, 1) + hi)
    lo, hi = keys // max(n, 1), keys % max(n, 1)

    src = np.concatenate((lo, hi))
    dst = np.concatenate((hi, lo))
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return Graph(n, indptr, dst)


@dataclass(frozen=True)
class TargetSet:
    """The vertex subset being searched for."""

    members: frozenset[int]

    def __post_init__(self):
        if not self.members:
            raise ValueError("target set must be non-empty")

    @classmethod
    def of(cls, vertices: Iterable[int], graph: Graph | None = None) -> "TargetSet":
        members = frozenset(int(v) for v in vertices)
        ts = cls(members)
        if graph is not None:
            ts.validate(graph)
        return ts

    @property
    def n0_star(self) -> int:
        return len(self.members)

    def validate(self, graph: Graph) -> None:
        if min(self.members) < 0 or max(self.members) >= graph.n:
            raise ValueError(f"target set has vertices outside [0, {graph.n})")

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.bool_)
        out[list(self.members)] = True
        return out


@dataclass(frozen=True)
class ExtendedTarget:
    """The target together with all of its neighbors.

    ``d_in`` and ``d_out`` are average (plain, not extended) degrees over the
    extended target and its complement. ``d_out`` is ``None`` when every vertex
    of the graph is in the extended target.
    """

    vertices: frozenset[int]
    n_e_star: int
    d_in: float
    d_out: float | None
    mask: np.ndarray = field(repr=False, compare=False)


def extended_neighborhood(graph: Graph, target: TargetSet) -> ExtendedTarget:
    """Compute the extended neighborhood of ``target`` in ``graph``."""
    if target.n0_star == 0:
        raise ValueError("target set must be non-empty")
    target.validate(graph)
    mask = target.mask(graph.n)
    for v in target.members:
        mask[graph.neighbors(v)] = True
    mask.setflags(write=False)
    deg = graph.degrees
    inside = deg[mask]
    outside = deg[~mask]
    return ExtendedTarget(
        vertices=frozenset(np.flatnonzero(mask).tolist()),
        n_e_star=int(mask.sum()),
        d_in=float(inside.mean()),
        d_out=float(outside.mean()) if len(outside) else None,
        mask=mask,
    )


@dataclass(frozen=True)
class DegreeStats:
    degree_counts: dict[int, int]
    w: dict[int, float]
    d_avg: float
    d_max: int
    assortativity: float | None  # None when endpoint degrees have zero variance


def degree_assortativity(graph: Graph) -> float | None:
    """Pearson correlation of endpoint degrees over both orientations of every edge."""
    if graph.m == 0:
        return None
    deg = graph.degrees.astype(np.float64)
    src = np.repeat(deg, graph.degrees)
    dst = deg[graph.indices]
    x = src - src.mean()
    y = dst - dst.mean()
    sxx = float(x @ x)
    syy = float(y @ y)
    if sxx == 0.0 or syy == 0.0:
        return None
    return float(x @ y) / float(np.sqrt(sxx * syy))


def degree_stats(graph: Graph) -> DegreeStats:
    if graph.n < 1:
        raise ValueError("degree statistics need at least one vertex")
    values, counts = np.unique(graph.degrees, return_counts=True)
    degree_counts = {int(k): int(c) for k, c in zip(values, counts)}
    return DegreeStats(
        degree_counts=degree_counts,
        w={k: c / graph.n for k, c in degree_counts.items()},
        d_avg=2.0 * graph.m / graph.n,
        d_max=int(values[-1]),
        assortativity=degree_assortativity(graph),
    )
