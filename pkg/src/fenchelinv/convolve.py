"""Hölder convolution and plain sums of rate functions.

The Hölder convolution of ``L_1, ..., L_n`` is

    (L_1 # ... # L_n)(t) = inf { sum_j a_j L_j(t / a_j) : a in open simplex }.

Two functions are combined by a search over the single weight ``a``: a
coarse grid followed by batched bracket zooms.  The objective is a sum of
perspective functions, hence convex in ``a``.  More than two functions are
folded left to right, ``((L_1 # L_2) # L_3) # ...``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import expit

from ._search import grid_zoom_min
from .errors import InvalidParam, NonConvergence
from .extreal import INF
from .ratefn import RateFn
from .transform import DEFAULT, Estimate, SolverConfig

__all__ = [
    "ConvolvedRateFn",
    "SumRateFn",
    "holder_convolve",
    "holder_convolve_detail",
    "as_ratefn",
    "sum_ratefn",
]

# expit(-_Z) ~ 1e-9: the search never gets closer than that to a simplex face
_Z = math.log((1 - 1e-9) / 1e-9)
# arguments are capped here so parts never see t = inf
_BIG = 1e300


def _harmonic(values: Sequence[float]) -> float:
    """``1 / sum(1/v)`` with ``1/0 = inf`` and ``1/inf = 0``."""
    total = 0.0
    for v in values:
        if v == 0:
            return 0.0
        total += 1.0 / v
    return INF if total == 0 else 1.0 / total


def _safe_div(t: np.ndarray, d: float) -> np.ndarray:
    if d == 0:
        return np.full_like(t, INF)
    return t / d


def _edge_limit(t: np.ndarray, slope: float | None, other: RateFn) -> np.ndarray | None:
    """Limit of the objective as the weight of one part shrinks to zero.

    ``a L(t/a) = t * (L(t/a) / (t/a)) -> t * slope`` while the other part's
    term tends to its value at ``t``.
    """
    if slope is None:
        return None
    with np.errstate(invalid="ignore"):
        head = t * slope
    return head + other.evaluate(t)


def _holder_pair(
    L1: RateFn, L2: RateFn, t: np.ndarray, cfg: SolverConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Values of ``L1 # L2`` at each ``t`` and a mask of edge-attained rows."""
    t = np.asarray(t, dtype=float)
    m = t.shape[0]
    # t/a overflows when an outer fold probes tiny weights; that regime is
    # covered by the outer edge limit, so such rows are simply infeasible
    overflow = ~np.isfinite(t)
    t = np.where(overflow, 1.0, t)
    # weights keeping t/a inside dom L1 and t/(1-a) inside dom L2
    a = np.maximum.reduce(
        [t / L1.t_sup_finite, 1.0 - _safe_div(t, L2.t_inf_finite), np.zeros(m)]
    )
    b = np.minimum.reduce(
        [_safe_div(t, L1.t_inf_finite), 1.0 - t / L2.t_sup_finite, np.ones(m)]
    )
    feasible = (a < b) & ~overflow
    lo = np.where(feasible, -_Z, 0.0)
    hi = np.where(feasible, _Z, 0.0)
    span = np.where(feasible, b - a, 0.0)
    one_minus_b = 1.0 - b

    def objective(Z):
        w1 = a[:, None] + span[:, None] * expit(Z)
        w2 = one_minus_b[:, None] + span[:, None] * expit(-Z)
        w1 = np.maximum(w1, 1e-300)
        w2 = np.maximum(w2, 1e-300)
        tt = t[:, None]
        with np.errstate(over="ignore"):
            s1 = np.minimum(tt / w1, _BIG).ravel()
            s2 = np.minimum(tt / w2, _BIG).ravel()
            v1 = L1.evaluate(s1).reshape(Z.shape)
            v2 = L2.evaluate(s2).reshape(Z.shape)
            return w1 * v1 + w2 * v2

    res = grid_zoom_min(
        objective, lo, hi, n_grid=cfg.n_grid, xtol=cfg.xtol, max_iter=cfg.max_iter
    )
    if not res.converged.all():
        raise NonConvergence("weight search in the Hölder convolution did not converge")
    value = np.where(feasible, res.f, INF)
    edge = np.zeros(m, dtype=bool)

    if L1.t_sup_finite == INF and L2.t_inf_finite == 0:
        lim = _edge_limit(t, L1.slope_inf, L2)
        if lim is not None:
            edge |= feasible & (lim < value)
            value = np.where(feasible, np.minimum(value, lim), value)
    if L2.t_sup_finite == INF and L1.t_inf_finite == 0:
        lim = _edge_limit(t, L2.slope_inf, L1)
        if lim is not None:
            edge |= feasible & (lim < value)
            value = np.where(feasible, np.minimum(value, lim), value)
    edge |= feasible & (res.edge != 0)
    value = np.where(overflow, INF, value)
    return value, edge & ~overflow


class ConvolvedRateFn(RateFn):
    """``L_1 # ... # L_n`` as a rate function (pairwise left fold)."""

    kind = "convolution"

    def __init__(self, parts: Sequence[RateFn], cfg: SolverConfig = DEFAULT):
        parts = list(parts)
        if not parts:
            raise InvalidParam("a convolution needs at least one part")
        self.parts = parts
        self.cfg = cfg
        if len(parts) > 2:
            self._left: RateFn = ConvolvedRateFn(parts[:-1], cfg)
        else:
            self._left = parts[0]
        t_inf = _harmonic([p.t_inf_finite for p in parts])
        t_sup = _harmonic([p.t_sup_finite for p in parts])
        slopes = [p.slope_inf for p in parts]
        if math.isfinite(t_sup):
            slope = INF
        elif any(s is None for s in slopes):
            slope = None
        else:
            slope = float(sum(slopes))
        witness = None
        if len(parts) == 1:
            only = parts[0]
            t_inf, t_sup, slope = only.t_inf_finite, only.t_sup_finite, only.slope_inf
            witness = only.finite_witness
        super().__init__(
            convex=all(p.convex for p in parts),
            t_inf_finite=t_inf,
            t_sup_finite=t_sup,
            slope_inf=slope,
            finite_witness=witness,
        )

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        if len(self.parts) == 1:
            return self.parts[0].evaluate(t)
        flat = t.ravel()
        value, _ = _holder_pair(self._left, self.parts[-1], flat, self.cfg)
        return value.reshape(t.shape)

    def evaluate_detail(self, t: float) -> Estimate:
        if len(self.parts) == 1:
            return Estimate(float(self.parts[0].evaluate(np.array([t]))[0]))
        value, edge = _holder_pair(self._left, self.parts[-1], np.array([t]), self.cfg)
        flags = []
        if edge[0]:
            flags.append("edge:alpha")
        if value[0] == INF:
            flags.append("infeasible")
        return Estimate(float(value[0]), tuple(flags))

    def retuned(self, cfg: SolverConfig) -> "ConvolvedRateFn":
        parts = [p.retuned(cfg.tightened()) if hasattr(p, "retuned") else p for p in self.parts]
        return ConvolvedRateFn(parts, cfg)

    def __repr__(self):
        return "ConvolvedRateFn(" + ", ".join(map(repr, self.parts)) + ")"


class SumRateFn(RateFn):
    """Pointwise sum ``L_1 + ... + L_n``; +inf propagates."""

    kind = "sum"

    def __init__(self, parts: Sequence[RateFn]):
        parts = list(parts)
        if not parts:
            raise InvalidParam("a sum needs at least one part")
        self.parts = parts
        t_inf = max(p.t_inf_finite for p in parts)
        t_sup = min(p.t_sup_finite for p in parts)
        slopes = [p.slope_inf for p in parts]
        if math.isfinite(t_sup):
            slope = INF
        elif any(s is None for s in slopes):
            slope = None
        else:
            slope = float(sum(slopes))
        super().__init__(
            convex=all(p.convex for p in parts),
            t_inf_finite=t_inf,
            t_sup_finite=t_sup,
            slope_inf=slope,
        )

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for p in self.parts:
            total = total + p.evaluate(t)
        return total

    def retuned(self, cfg: SolverConfig) -> "SumRateFn":
        if not any(hasattr(p, "retuned") for p in self.parts):
            return self
        return SumRateFn([p.retuned(cfg) if hasattr(p, "retuned") else p for p in self.parts])

    def __repr__(self):
        return "SumRateFn(" + ", ".join(map(repr, self.parts)) + ")"


def as_ratefn(parts: Sequence[RateFn], cfg: SolverConfig = DEFAULT) -> ConvolvedRateFn:
    """The Hölder convolution of ``parts`` as a rate function."""
    return ConvolvedRateFn(parts, cfg)


def sum_ratefn(parts: Sequence[RateFn]) -> SumRateFn:
    return SumRateFn(parts)


def holder_convolve_detail(
    parts: Sequence[RateFn], t: float, cfg: SolverConfig = DEFAULT
) -> Estimate:
    t = float(t)
    if not t > 0:
        raise InvalidParam(f"t must be positive, got {t!r}")
    return ConvolvedRateFn(parts, cfg).evaluate_detail(t)


def holder_convolve(parts: Sequence[RateFn], t: float, cfg: SolverConfig = DEFAULT) -> float:
    """``(L_1 # ... # L_n)(t)`` for ``t > 0``."""
    return holder_convolve_detail(parts, t, cfg).value
