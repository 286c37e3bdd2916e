"""Exact, bounded and approximate expected star-sampling costs.

Unit cost counts stars until the first hit; linear cost sums the extended
degrees of the sampled centers. Arbitrary-graph results take the measured
extended-target order ``n_e_star``; Erdős–Rényi results need only the graph
order ``n``, the target size ``n0_star`` and the edge probability ``s``.

Sample indices are 1-based throughout: ``p_tilde[t - 1]`` is the approximate
probability that sample ``t`` hits, given samples ``1..t-1`` missed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .er_model import ErParams, ext_target_moments, ext_target_pmf
from .graph_core import ExtendedTarget


@dataclass(frozen=True)
class EstimatorInput:
    n: int
    n0_star: int
    s: float

    def __post_init__(self):
        if not 1 <= self.n0_star <= self.n:
            raise ValueError(f"need 1 <= n0* <= n, got n0*={self.n0_star}, n={self.n}")
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {self.s}")

    @property
    def er(self) -> ErParams:
        return ErParams(self.n, self.s)

    @property
    def ext_mean(self) -> float:
        return ext_target_moments(self.er, self.n0_star).mean


@dataclass(frozen=True)
class Bounds:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper * (1 + 1e-12):
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def scaled(self, factor: float) -> "Bounds":
        return Bounds(self.lower * factor, self.upper * factor)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack


@dataclass(frozen=True)
class SssSchedule:
    p_tilde: np.ndarray
    q_tilde: np.ndarray
    T: int
    t1: float
    t2: float
    c_u_approx: float

    @property
    def survival(self) -> np.ndarray:
        """``P(cost >= t)`` for ``t = 1..T``."""
        return np.concatenate(([1.0], np.cumprod(1.0 - self.p_tilde[:-1])))


@dataclass(frozen=True)
class WatchDrawMoments:
    mean: float
    variance: float
    case: str


def _check_counts(n, k, name):
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= {name} <= n, got {name}={k}, n={n}")


# ---------------------------------------------------------------- urn, SSR, SSC


def urn_mean_without_replacement(n: int, n_star: int) -> float:
    """Expected draws, without replacement, to find one of ``n_star`` marked balls among ``n``."""
    _check_counts(n, n_star, "n_star")
    return (n + 1) / (n_star + 1)


def ssr_unit_exact(n: int, n_e_star: int) -> float:
    _check_counts(n, n_e_star, "n_e_star")
    return n / n_e_star


def ssc_unit_exact(n: int, n_e_star: int) -> float:
    _check_counts(n, n_e_star, "n_e_star")
    return (n + 1) / (n_e_star + 1)


def inverse_moment_bounds(a: float, m: int, p: float) -> Bounds:
    """Bounds on ``E[1 / (a + x)]`` for ``x ~ bin(m, p)`` and ``a > 0``."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    lower = 1.0 / (a + m * p)
    upper = (a + 1 - p) / (a * (a + 1 + (m - 1) * p))
    return Bounds(lower, upper)


def _reach(inp: EstimatorInput) -> float:
    """Probability that a non-target vertex neighbors the target."""
    return -math.expm1(inp.n0_star * math.log1p(-inp.s)) if inp.s < 1 else 1.0


def ssr_unit_bounds_er(inp: EstimatorInput) -> Bounds:
    b = inverse_moment_bounds(inp.n0_star, inp.n - inp.n0_star, _reach(inp))
    return b.scaled(inp.n)


def ssc_unit_bounds_er(inp: EstimatorInput) -> Bounds:
    b = inverse_moment_bounds(inp.n0_star + 1, inp.n - inp.n0_star, _reach(inp))
    return b.scaled(inp.n + 1)


def expected_over_ext_target(func: Callable[[int], float], inp: EstimatorInput,
                             tail: float = 1e-15) -> float:
    """Average ``func(n_e_star)`` over the ER law of the extended-target order.

    Support points are visited in decreasing probability until the neglected
    mass drops below ``tail``.
    """
    support, pmf = ext_target_pmf(inp.er, inp.n0_star)
    order = np.argsort(pmf)[::-1]
    total = 0.0
    mass = 0.0
    terms = []
    for i in order:
        if 1.0 - mass < tail:
            break
        terms.append(pmf[i] * func(int(support[i])))
        mass += pmf[i]
    total = math.fsum(terms)
    return float(total / mass)


# ---------------------------------------------------------------- SSS, unit cost


def _require_open_s(s: float) -> None:
    if not 0.0 < s < 1.0:
        raise ValueError(f"SSS estimators need 0 < s < 1, got s={s}")


def _pow_sbar(s: float, x) -> np.ndarray | float:
    return np.exp(np.asarray(x, dtype=float) * math.log1p(-s))


def _p_tilde_raw(n: float, n0: float, s: float, ext: float, misses) -> np.ndarray:
    """Ratio-of-means hit probability after ``misses`` missed stars (no clamping)."""
    sb = 1.0 - s
    decay = _pow_sbar(s, misses)
    num = (ext - n0) * decay + n0
    den = n * decay + (sb / s) * np.expm1(np.asarray(misses, dtype=float) * math.log1p(-s))
    with np.errstate(divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)


def sss_horizons(inp: EstimatorInput, n_e_star: float | None = None) -> tuple[float, float]:
    """Return ``(t1, t2)``: miss counts where the SSS hit probability reaches 1 and where
    its denominator vanishes."""
    _require_open_s(inp.s)
    n, n0, s = inp.n, inp.n0_star, inp.s
    ext = inp.ext_mean if n_e_star is None else n_e_star
    sb = 1.0 - s
    log_inv = -math.log1p(-s)
    t1 = (math.log(s * (n - ext + n0) + sb) - math.log(sb + n0 * s)) / log_inv
    t2 = math.log(n * s / sb + 1) / log_inv
    return max(t1, 0.0), t2


def sss_horizon(inp: EstimatorInput, n_e_star: float | None = None) -> int:
    """Last sample index of the SSS approximation.

    Sample ``t`` sees ``t - 1`` prior misses; the horizon is the first sample
    whose approximate hit probability reaches 1, i.e. ``ceil(t1) + 1``.
    """
    t1, _ = sss_horizons(inp, n_e_star)
    return max(1, math.ceil(t1 - 1e-12) + 1)


def _sss_p_sequence(inp: EstimatorInput, n_e_star: float | None) -> np.ndarray:
    T = sss_horizon(inp, n_e_star)
    ext = inp.ext_mean if n_e_star is None else n_e_star
    p = _p_tilde_raw(inp.n, inp.n0_star, inp.s, ext, np.arange(T))
    early = p[:-2] > 1.0 + 1e-9
    if early.any():
        warnings.warn(f"SSS hit probability exceeded 1 before the horizon at t={int(np.argmax(early)) + 1}; "
                      "parameters are outside the approximation's range", RuntimeWarning, stacklevel=3)
    p = np.clip(p, 0.0, 1.0)
    p[-1] = 1.0
    return p


def sss_conditional_hit_prob(inp: EstimatorInput, t: int, n_e_star: float | None = None) -> float:
    """Approximate probability that sample ``t`` hits, given the previous ``t - 1`` missed.

    Equals 1 at the horizon; ``t`` beyond it raises ``IndexError``.
    """
    T = sss_horizon(inp, n_e_star)
    if not 1 <= t <= T:
        raise IndexError(f"sample index {t} outside [1, {T}]")
    if t == T:
        return 1.0
    ext = inp.ext_mean if n_e_star is None else n_e_star
    return float(min(1.0, _p_tilde_raw(inp.n, inp.n0_star, inp.s, ext, t - 1)))


def sss_schedule(inp: EstimatorInput, n_e_star: float | None = None) -> SssSchedule:
    """Conditional and first-hit probabilities of SSS plus the approximate expected unit cost.

    ``n_e_star`` conditions on a known extended-target order; by default the
    ER mean is used.
    """
    p = _sss_p_sequence(inp, n_e_star)
    survival = np.concatenate(([1.0], np.cumprod(1.0 - p[:-1])))
    q = p * survival
    t1, t2 = sss_horizons(inp, n_e_star)
    return SssSchedule(p_tilde=p, q_tilde=q, T=len(p), t1=t1, t2=t2,
                       c_u_approx=math.fsum(survival))


def watch_draw_moments(n_w0: float, n_z0: float, s: float, t: int,
                       case: Literal["i", "ii"]) -> WatchDrawMoments:
    """Mean and variance of the surviving watch-set size after ``t`` SSS draws.

    Case ``"i"``: centers are drawn outside the watch set; ``n_z0`` watch
    vertices have no neighbors in the draw set and are never removed.
    Case ``"ii"``: centers are drawn inside the watch set and there are no
    immune vertices (``n_z0 == 0``).

    The case ``"ii"`` variance is the closed-form solution of
    ``var_t = s̄² var_{t-1} + s mean_t`` with ``var_0 = 0``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    sb = 1.0 - s
    decay = sb ** t
    exposed = n_w0 - n_z0
    mean = exposed * decay + n_z0
    var = exposed * decay * (1.0 - decay)
    if case == "i":
        return WatchDrawMoments(mean, var, "i")
    if case != "ii":
        raise ValueError(f"case must be 'i' or 'ii', got {case!r}")
    if n_z0 != 0:
        raise ValueError("case ii requires an empty immune set (n_z0 == 0)")
    if s <= 0.0:
        raise ValueError("case ii requires s > 0")
    drop = (sb / s) * (1.0 - decay)
    mean -= drop
    var -= drop * (1.0 - decay * sb) / (1.0 + sb)
    return WatchDrawMoments(mean, max(var, 0.0), "ii")


def sss_error_bound(inp: EstimatorInput, t: int, n_e_star: float | None = None) -> float:
    """Second-order bound on the ratio-of-means error after ``t`` missed stars.

    Bounds ``|E[n_e_t / n_t | t misses] - p_tilde_{t+1}|`` by
    ``var(n_t) E[n_e_t] / E[n_t]^3`` (the covariance term is non-negative and dropped).
    """
    _require_open_s(inp.s)
    if t < 0:
        raise ValueError("t must be >= 0")
    t1, _ = sss_horizons(inp, n_e_star)
    if t > t1:
        raise IndexError(f"{t} misses is beyond the horizon t1={t1:.3f}")
    ext = inp.ext_mean if n_e_star is None else n_e_star
    whole = watch_draw_moments(inp.n, 0, inp.s, t, "ii")
    near = watch_draw_moments(ext, inp.n0_star, inp.s, t, "i")
    return whole.variance * near.mean / whole.mean ** 3


def variant_ratio_check(n: int, c: float, n0_star: int, t: int) -> tuple[float, float, float]:
    """Ratios SSS/SSR, SSR/SSC and SSS/SSC of conditional hit probabilities at sample ``t``
    for ER graphs with ``s = c / n``."""
    if not 1 <= t < n:
        raise ValueError(f"need 1 <= t < n, got t={t}, n={n}")
    inp = EstimatorInput(n, n0_star, c / n)
    ext = inp.ext_mean
    p_sss = float(_p_tilde_raw(n, n0_star, inp.s, ext, t - 1))
    p_ssr = ext / n
    p_ssc = ext / (n - t + 1)
    return p_sss / p_ssr, p_ssr / p_ssc, p_sss / p_ssc


# ---------------------------------------------------------------- linear cost


def ssr_linear_exact(ext: ExtendedTarget, n: int) -> float:
    """Exact SSR expected linear cost on an arbitrary graph.

    Misses cost the mean extended degree outside the extended target, the hit
    costs the mean extended degree inside it.
    """
    hit_cost = ext.d_in + 1.0
    if ext.d_out is None:
        return hit_cost
    return (ext.d_out + 1.0) * (n / ext.n_e_star - 1.0) + hit_cost


def ssr_linear_er(inp: EstimatorInput) -> Bounds:
    return ssr_unit_bounds_er(inp).scaled(1.0 + (inp.n - 1) * inp.s)


def ssr_linear_er_conditional(n: int, n_e_star: int, s: float) -> float:
    return (1.0 + (n - 1) * s) * ssr_unit_exact(n, n_e_star)


def ssc_linear_er(n: int, n_e_star: int, s: float) -> float:
    """Approximate SSC expected linear cost on ER(n, s) given the extended-target order."""
    _check_counts(n, n_e_star, "n_e_star")
    last = n - n_e_star + 1
    t = np.arange(1, last + 1)
    miss = 1.0 - n_e_star / (n - t[:-1] + 1.0)
    survival = np.concatenate(([1.0], np.cumprod(miss)))
    return float(np.sum((1.0 + (n - t) * s) * survival))


def ssc_linear_er_expected(inp: EstimatorInput) -> float:
    """:func:`ssc_linear_er` averaged over the ER law of the extended-target order."""
    return expected_over_ext_target(lambda k: ssc_linear_er(inp.n, k, inp.s), inp)


def sss_linear_er(inp: EstimatorInput, n_e_star: float | None = None) -> float:
    """Approximate SSS expected linear cost on ER(n, s).

    The ``t``-th center has expected extended degree ``((n - 1)s + 1) s̄^(t-1)``.
    """
    sched = sss_schedule(inp, n_e_star)
    t = np.arange(sched.T)
    degree = ((inp.n - 1) * inp.s + 1.0) * _pow_sbar(inp.s, t)
    return float(np.sum(degree * sched.survival))


def sss_unit_er_expected(inp: EstimatorInput) -> float:
    """SSS approximate unit cost averaged over the ER law of the extended-target order."""
    return expected_over_ext_target(lambda k: sss_schedule(inp, k).c_u_approx, inp)


def sss_linear_er_expected(inp: EstimatorInput) -> float:
    return expected_over_ext_target(lambda k: sss_linear_er(inp, k), inp)
