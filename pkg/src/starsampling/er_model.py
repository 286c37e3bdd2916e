"""Erdős–Rényi graph generation and closed-form ER structural quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .graph_core import Graph


@dataclass(frozen=True)
class ErParams:
    n: int
    s: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ER order must be >= 1, got {self.n}")
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"ER edge probability must lie in [0, 1], got {self.s}")

    @property
    def s_bar(self) -> float:
        return 1.0 - self.s


@dataclass(frozen=True)
class ExtTargetMoments:
    mean: float
    variance: float


@numba.njit(nogil=True, cache=True)
def _er_csr(n, s, rng):
    """Sample ER(n, s) and return ``(indptr, indices)``.

    Edges are enumerated by skipping geometric gaps over the lower-triangle
    pair index (Batagelj–Brandes), so the work is O(n + m).
    """
    cap = 16
    ev = np.empty(cap, dtype=np.int64)
    ew = np.empty(cap, dtype=np.int64)
    m = 0
    if s >= 1.0:
        total = n * (n - 1) // 2
        ev = np.empty(total, dtype=np.int64)
        ew = np.empty(total, dtype=np.int64)
        for v in range(1, n):
            for w in range(v):
                ev[m] = v
                ew[m] = w
                m += 1
    elif s > 0.0:
        log_q = math.log1p(-s)
        pairs = n * (n - 1) / 2.0
        v = 1
        w = -1
        while v < n:
            gap = math.log(1.0 - rng.random()) / log_q
            if gap >= pairs:  # skips past the last pair; also avoids int overflow
                break
            w += 1 + int(gap)
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                if m == cap:
                    cap *= 2
                    ev2 = np.empty(cap, dtype=np.int64)
                    ew2 = np.empty(cap, dtype=np.int64)
                    ev2[:m] = ev[:m]
                    ew2[:m] = ew[:m]
                    ev = ev2
                    ew = ew2
                ev[m] = v
                ew[m] = w
                m += 1

    indptr = np.zeros(n + 1, dtype=np.int64)
    for k in range(m):
        indptr[ev[k] + 1] += 1
        indptr[ew[k] + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
    fill = indptr[:-1].copy()
    indices = np.empty(2 * m, dtype=np.int64)
    # Edges arrive sorted by (v, w) with w < v, so each row is filled in
    # increasing neighbor order: first its lower neighbors, then its upper ones.
    for k in range(m):
        a = ev[k]
        b = ew[k]
        indices[fill[a]] = b
        fill[a] += 1
        indices[fill[b]] = a
        fill[b] += 1
    return indptr, indices


def generate_er(params: ErParams, rng: np.random.Generator) -> Graph:
    """Draw an ER graph: every vertex pair is an edge independently with probability ``s``."""
    indptr, indices = _er_csr(params.n, float(params.s), rng)
    return Graph(params.n, indptr, indices)


def expected_star_edges(params: ErParams) -> float:
    """Expected number of edges touching a uniformly chosen star (its extended edge neighborhood)."""
    n, s = params.n, params.s
    return (n - 1) * s * (1 + (n / 2 - 1) * (2 - s) * s)


def asymptotic_star_edge_fraction(s: float) -> float:
    """Large-n limit of the expected fraction of all edges that touch one star."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    return (2 - s) * s


def star_edge_fraction(params: ErParams) -> float:
    """Finite-n fraction ``E[g] / (C(n, 2) s)``; converges to :func:`asymptotic_star_edge_fraction`."""
    if params.s == 0.0 or params.n < 2:
        raise ValueError("fraction undefined for s = 0 or n < 2")
    return expected_star_edges(params) / (math.comb(params.n, 2) * params.s)


def _check_target_size(n: int, n0_star: int) -> None:
    if not 1 <= n0_star <= n:
        raise ValueError(f"target size must satisfy 1 <= n0* <= n, got n0*={n0_star}, n={n}")


def ext_target_moments(params: ErParams, n0_star: int) -> ExtTargetMoments:
    """Mean and variance of the extended-target order ``n0* + bin(n - n0*, 1 - s̄^n0*)``."""
    _check_target_size(params.n, n0_star)
    reach = 1.0 - params.s_bar ** n0_star
    rest = params.n - n0_star
    return ExtTargetMoments(mean=n0_star + rest * reach, variance=rest * reach * (1.0 - reach))


def ext_target_pmf(params: ErParams, n0_star: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and probabilities of the extended-target order law."""
    from scipy.stats import binom

    _check_target_size(params.n, n0_star)
    rest = params.n - n0_star
    k = np.arange(rest + 1)
    return n0_star + k, binom.pmf(k, rest, 1.0 - params.s_bar ** n0_star)


def sample_ext_target_order(params: ErParams, n0_star: int, rng: np.random.Generator) -> int:
    """One draw of the extended-target order of a random target in ER(n, s)."""
    _check_target_size(params.n, n0_star)
    reach = 1.0 - params.s_bar ** n0_star
    return n0_star + int(rng.binomial(params.n - n0_star, reach))
