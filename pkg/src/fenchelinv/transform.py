"""Legendre-Fenchel transform over ``t > 0`` and its generalized inverses.

For a rate function ``L``::

    conjugate(L, x)     = sup_{t>0} [t x - L(t)]
    upper_inverse(L, u) = inf {x : L*(x) > u} = inf_{t>0} (u + L(t)) / t
    lower_inverse(L, u) = inf {x : L*(x) >= u} = upper_inverse(L, u-)

All three are computed by one-dimensional searches in ``s = ln t`` over
``SolverConfig.t_bracket``.  Suprema and infima over the open half-line that
are only reached as ``t -> 0+`` or ``t -> inf`` are resolved from the
function's metadata (its asymptotic slope) or by extrapolation over the last
decade of the bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from ._search import grid_golden_min
from .errors import InconsistentLimit, InvalidParam, NonConvergence
from .extreal import INF, NINF, ExtReal, as_ext
from .ratefn import RateFn, TabulatedFn

__all__ = [
    "SolverConfig",
    "Estimate",
    "ConjugateProfile",
    "conjugate",
    "conjugate_detail",
    "upper_inverse",
    "upper_inverse_detail",
    "lower_inverse",
    "lower_inverse_detail",
    "profile",
    "inverse_oracle",
]


@dataclass(frozen=True)
class SolverConfig:
    """Search settings shared by every transform.

    ``rel_tol`` targets the relative accuracy of optimal *values*; the
    golden-section bracket is shrunk to ``sqrt(rel_tol)`` in the search
    coordinate, which is what a smooth optimum needs for that accuracy.
    """

    t_bracket: tuple[float, float] = (1e-12, 1e12)
    rel_tol: float = 1e-10
    max_iter: int = 200
    left_limit_deltas: tuple[float, ...] = (1e-3, 1e-6, 1e-9)
    n_grid: int = 64

    def __post_init__(self):
        lo, hi = self.t_bracket
        if not (0 < lo < hi < INF):
            raise InvalidParam(f"bad t_bracket {self.t_bracket!r}")
        if not self.rel_tol > 0:
            raise InvalidParam("rel_tol must be positive")
        if self.max_iter < 1 or self.n_grid < 3:
            raise InvalidParam("max_iter >= 1 and n_grid >= 3 required")
        d = self.left_limit_deltas
        if not d or any(x <= 0 for x in d) or any(b >= a for a, b in zip(d, d[1:])):
            raise InvalidParam("left_limit_deltas must be positive and decreasing")

    @property
    def xtol(self) -> float:
        return math.sqrt(self.rel_tol)

    def tightened(self, factor: float = 10.0) -> "SolverConfig":
        return replace(self, rel_tol=self.rel_tol / factor)


DEFAULT = SolverConfig()


@dataclass(frozen=True)
class Estimate:
    """A computed extended real plus annotations about how it was reached."""

    value: ExtReal
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ConjugateProfile:
    x_inf: ExtReal
    u_inf: ExtReal
    u_minus_inf: ExtReal
    dom_case: str  # "open": dom = (-inf, x_inf), "closed": dom = (-inf, x_inf]
    flags: tuple[str, ...] = field(default=())


def _prepare(L: RateFn, cfg: SolverConfig) -> RateFn:
    # nested convolutions get a tighter inner budget than the outer search
    retune = getattr(L, "retuned", None)
    return retune(cfg.tightened()) if retune is not None else L


def _log_bounds(L: RateFn, cfg: SolverConfig) -> tuple[float, float, bool, bool]:
    """Search interval in ``ln t``; flags tell whether each end is the
    artificial bracket (True) or a genuine end of the finite domain."""
    t_lo, t_hi = cfg.t_bracket
    lo_open = L.t_inf_finite <= t_lo
    hi_open = L.t_sup_finite >= t_hi
    lo = t_lo if lo_open else L.t_inf_finite
    hi = t_hi if hi_open else L.t_sup_finite
    if lo >= hi:
        lo = hi = L.finite_witness
    return math.log(lo), math.log(hi), lo_open, hi_open


def _minimize_in_s(
    g: Callable[[np.ndarray], np.ndarray], s_lo: float, s_hi: float, cfg: SolverConfig
):
    res = grid_golden_min(
        g,
        np.array([s_lo]),
        np.array([s_hi]),
        n_grid=cfg.n_grid,
        xtol=cfg.xtol,
        max_iter=cfg.max_iter,
    )
    if not res.converged[0]:
        raise NonConvergence(
            f"golden section did not reach xtol={cfg.xtol:g} in {cfg.max_iter} steps"
        )
    return float(res.x[0]), float(res.f[0]), int(res.edge[0])


def _eval1(L: RateFn, t: float) -> float:
    return float(L.evaluate(np.array([t]))[0])


def conjugate_detail(L: RateFn, x: float, cfg: SolverConfig = DEFAULT) -> Estimate:
    """``sup_{t>0} [t x - L(t)]`` with annotations."""
    x = as_ext(x)
    if not math.isfinite(x):
        raise InvalidParam("conjugate is evaluated at finite x only")
    L = _prepare(L, cfg)
    if isinstance(L, TabulatedFn):
        # piecewise linear: the supremum sits on a node
        return Estimate(float(np.max(L.ts * x - L.vs)))

    slope = L.slope_inf
    unbounded_t = math.isinf(L.t_sup_finite)
    if unbounded_t and slope is not None and x > slope:
        return Estimate(INF, ("diverges:t->inf",))
    dist = getattr(L, "dist", None)
    if dist is not None:
        x_max, p_max = dist.support_summary()
        if x == x_max:
            # sup is the t -> inf limit, exp(-L*(x_max)) = P(X = x_max);
            # evaluating t x - L(t) at t ~ 1e12 would cancel catastrophically
            return Estimate(-math.log(p_max) + 0.0, ("atom:x=x_max",))
        if x <= dist.mean:
            # Jensen: t x - L_X(t) <= t (x - E X) <= 0, with limit 0 as t -> 0
            return Estimate(0.0, ("t->0",))

    s_lo, s_hi, lo_open, hi_open = _log_bounds(L, cfg)

    def neg(S):
        t = np.exp(S)
        return L.evaluate(t) - t * x

    s_star, f_star, edge = _minimize_in_s(neg, s_lo, s_hi, cfg)
    best = -f_star
    flags: list[str] = []

    if edge == 1 and hi_open:
        t_hi = math.exp(s_hi)
        v_hi = t_hi * x - _eval1(L, t_hi)
        v_prev = t_hi / 10 * x - _eval1(L, t_hi / 10)
        growth = v_hi - v_prev
        if (slope is None or x >= slope) and growth > cfg.xtol * (1.0 + abs(v_hi)):
            return Estimate(INF, ("diverges:t->inf",))
        best = max(best, v_hi)
        flags.append("edge:t_hi")
    elif edge == -1 and lo_open:
        t_lo = math.exp(s_lo)
        v_lo = t_lo * x - _eval1(L, t_lo)
        v_next = 10 * t_lo * x - _eval1(L, 10 * t_lo)
        # linear extrapolation of the objective to t = 0; a CGF vanishes there
        limit = 0.0 if dist is not None else v_lo - (v_next - v_lo) / 9.0
        best = max(best, v_lo, limit)
        flags.append("edge:t_lo")

    w = L.finite_witness
    best = max(best, w * x - _eval1(L, w))
    return Estimate(as_ext(best), tuple(flags))


def conjugate(L: RateFn, x: float, cfg: SolverConfig = DEFAULT) -> ExtReal:
    """Legendre-Fenchel transform ``L*(x)``; never ``-inf``."""
    return conjugate_detail(L, x, cfg).value


def _upper_inverse_shortcut(L: RateFn, u: float) -> Estimate | None:
    dist = getattr(L, "dist", None)
    if dist is None:
        return None
    # L* >= 0 for a CGF, and L* <= -ln p_max on (-inf, x_max] with +inf beyond
    if u < 0:
        return Estimate(NINF, ("u<0",))
    x_max, p_max = dist.support_summary()
    if math.isfinite(x_max) and u >= -math.log(p_max):
        return Estimate(float(x_max), ("atom:u>=u_inf",))
    return None


def _upper_inverse_many(L: RateFn, us: Sequence[float], cfg: SolverConfig) -> list[Estimate]:
    """Several levels at once: the searches share every evaluation of ``L``."""
    L = _prepare(L, cfg)
    if isinstance(L, TabulatedFn):
        return [Estimate(float(np.min((u + L.vs) / L.ts))) for u in us]
    out: list[Estimate | None] = [_upper_inverse_shortcut(L, u) for u in us]
    todo = [i for i, e in enumerate(out) if e is None]
    if not todo:
        return out
    U = np.array([us[i] for i in todo])[:, None]
    s_lo, s_hi, lo_open, hi_open = _log_bounds(L, cfg)

    def ratio(S):
        t = np.exp(S)
        return (U + L.evaluate(t)) / t

    m = len(todo)
    res = grid_golden_min(
        ratio, np.full(m, s_lo), np.full(m, s_hi),
        n_grid=cfg.n_grid, xtol=cfg.xtol, max_iter=cfg.max_iter,
    )
    if not res.converged.all():
        raise NonConvergence(
            f"golden section did not reach xtol={cfg.xtol:g} in {cfg.max_iter} steps"
        )
    t_lo, t_hi = math.exp(s_lo), math.exp(s_hi)
    edge_vals: dict[float, float] = {}

    def at(t):
        if t not in edge_vals:
            edge_vals[t] = _eval1(L, t)
        return edge_vals[t]

    for row, i in enumerate(todo):
        u, best, edge = float(U[row, 0]), float(res.f[row]), int(res.edge[row])
        flags: list[str] = []
        if edge == 1 and hi_open:
            slope = L.slope_inf
            if slope is not None and math.isfinite(slope):
                # (u + L(t))/t -> slope as t -> inf and the objective is still falling
                best = min(best, slope)
            else:
                r_hi = (u + at(t_hi)) / t_hi
                r_prev = (u + at(t_hi / 10)) / (t_hi / 10)
                best = min(best, r_hi, r_hi - (r_prev - r_hi) / 9.0)
            flags.append("edge:t_hi")
        elif edge == -1 and lo_open:
            num_lo = u + at(t_lo)
            num_next = u + at(10 * t_lo)
            if num_lo < 0.5 * num_next < 0:
                # numerator settles at a negative value: the ratio behaves like c/t
                out[i] = Estimate(NINF, ("diverges:t->0",))
                continue
            r_lo, r_next = num_lo / t_lo, num_next / (10 * t_lo)
            best = min(best, r_lo, r_lo - (r_next - r_lo) / 9.0)
            flags.append("edge:t_lo")
        out[i] = Estimate(as_ext(best), tuple(flags))
    return out


def upper_inverse_detail(L: RateFn, u: float, cfg: SolverConfig = DEFAULT) -> Estimate:
    """``inf_{t>0} (u + L(t)) / t`` with annotations."""
    u = as_ext(u)
    if not math.isfinite(u):
        raise InvalidParam("inverses are evaluated at finite u only")
    return _upper_inverse_many(L, [u], cfg)[0]


def upper_inverse(L: RateFn, u: float, cfg: SolverConfig = DEFAULT) -> ExtReal:
    """Largest generalized inverse of ``L*``: ``inf {x : L*(x) > u}``."""
    return upper_inverse_detail(L, u, cfg).value


def _atom_override(L: RateFn, u: float) -> Estimate | None:
    """Closed-form values of the smallest inverse at and above ``-ln p_max``."""
    dist = getattr(L, "dist", None)
    if dist is None:
        return None
    x_max, p_max = dist.support_summary()
    if math.isinf(x_max) or p_max <= 0:
        return None
    u_top = -math.log(p_max)
    if u == u_top:
        if p_max < 1:
            return Estimate(float(x_max), ("atom:u=u_inf",))
        return Estimate(NINF, ("atom:u=u_inf", "degenerate"))
    if u > u_top:
        return Estimate(float(x_max), ("atom:u>u_inf",))
    return None


def lower_inverse_detail(L: RateFn, u: float, cfg: SolverConfig = DEFAULT) -> Estimate:
    """``inf {x : L*(x) >= u}`` as the left limit of the upper inverse."""
    u = as_ext(u)
    if not math.isfinite(u):
        raise InvalidParam("inverses are evaluated at finite u only")
    hit = _atom_override(L, u)
    if hit is not None:
        return hit

    deltas = cfg.left_limit_deltas
    ests = _upper_inverse_many(L, [u - d for d in deltas], cfg)
    vals = [e.value for e in ests]
    flags = tuple(sorted({f for e in ests for f in e.flags}))
    last = vals[-1]
    if last == NINF:
        return Estimate(NINF, flags)
    if len(vals) == 1:
        return Estimate(last, flags)

    finite = [(d, v) for d, v in zip(deltas, vals) if math.isfinite(v)]
    if len(finite) < 2:
        return Estimate(last, flags + ("limit:single-point",))
    (d2, v2), (d3, v3) = finite[-2], finite[-1]
    step = v3 - v2
    tol = 10 * cfg.rel_tol * (1.0 + abs(v3))
    # tli is nondecreasing, so the sequence must be too (up to noise)
    if step < -tol:
        raise InconsistentLimit(
            f"left-limit sequence decreases at u={u}: {vals!r}"
        )
    if len(finite) >= 3:
        prev_step = finite[-2][1] - finite[-3][1]
        if step > tol and step > 0.5 * max(prev_step, 0.0):
            raise InconsistentLimit(
                f"left-limit sequence does not stabilize at u={u}: {vals!r}"
            )
    limit = v3 + max(step, 0.0) * d3 / (d2 - d3)
    return Estimate(as_ext(limit), flags)


def lower_inverse(L: RateFn, u: float, cfg: SolverConfig = DEFAULT) -> ExtReal:
    """Smallest generalized inverse of ``L*``: ``inf {x : L*(x) >= u}``."""
    return lower_inverse_detail(L, u, cfg).value


def _domain_top(L: RateFn, cfg: SolverConfig) -> ExtReal:
    """``sup dom(L*)``."""
    dist = getattr(L, "dist", None)
    if dist is not None:
        return dist.support_summary()[0]
    if math.isfinite(L.t_sup_finite):
        # L = +inf beyond a finite point, so L* grows at most linearly
        return INF
    if L.slope_inf is not None:
        return float(L.slope_inf)
    # scan: L* is nondecreasing, so bracket its finiteness boundary
    lo, hi = None, None
    for k in range(-6, 13):
        for x in (-(10.0**k), 10.0**k):
            v = conjugate(L, x, cfg)
            if math.isfinite(v):
                lo = x if lo is None else max(lo, x)
            else:
                hi = x if hi is None else min(hi, x)
    if hi is None:
        return INF
    if lo is None:
        return NINF
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.isfinite(conjugate(L, mid, cfg)):
            lo = mid
        else:
            hi = mid
        if hi - lo <= cfg.rel_tol * (1.0 + abs(lo)):
            break
    return lo


def profile(L: RateFn, cfg: SolverConfig = DEFAULT) -> ConjugateProfile:
    """Landmarks of ``L*``: ``x_inf = sup dom L*``, ``u_inf``, ``u_minus_inf``."""
    flags: list[str] = []
    x_inf = _domain_top(L, cfg)
    if math.isinf(x_inf):
        dom_case, u_inf = "open", INF
    else:
        top = conjugate(L, x_inf, cfg)
        if math.isfinite(top):
            dom_case, u_inf = "closed", top
        else:
            dom_case, u_inf = "open", INF

    prev = conjugate(L, -1.0, cfg)
    u_minus = None
    for k in range(1, 13):
        cur = conjugate(L, -(10.0**k), cfg)
        if abs(cur - prev) <= 10 * cfg.rel_tol * (1.0 + abs(cur)):
            u_minus = cur
            break
        prev = cur
    if u_minus is None:
        # still falling after twelve decades: L* decreases without bound
        u_minus = NINF
        flags.append("u_minus_inf:unbounded")
    u_minus = min(u_minus, u_inf)
    return ConjugateProfile(x_inf, u_inf, u_minus, dom_case, tuple(flags))


def inverse_oracle(
    L: RateFn, u: float, cfg: SolverConfig = DEFAULT, width: float = 1e6
) -> ExtReal:
    """Reference smallest inverse by bisection on the monotone map ``x -> L*(x)``.

    Independent of :func:`lower_inverse`: it never looks at ``(u + L(t))/t``
    and has no closed-form shortcuts.
    """
    def meets(x):
        return conjugate(L, x, cfg) >= u

    lo, hi = -width, width
    if meets(lo):
        return NINF
    while not meets(hi):
        hi *= 10.0
        if hi > 1e12:
            return INF
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if meets(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * (1.0 + abs(hi)):
            break
    return hi
