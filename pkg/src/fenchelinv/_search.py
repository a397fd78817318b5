"""Batched one-dimensional minimization: coarse grid, then golden section.

Every optimization in the package reduces to minimizing a unimodal (or at
least well-behaved) function of one real parameter over a bracket.  The
routine here solves ``m`` such problems at once so that nested searches
(an outer search over ``t`` whose objective is itself an inner search over
a simplex weight) stay vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IndeterminateSum

# 1/phi
_R = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BatchMinimum:
    x: np.ndarray
    f: np.ndarray
    # -1: minimum sits on the low end of the bracket, +1: high end, 0: interior
    edge: np.ndarray
    converged: np.ndarray
    iterations: int


def _check(values: np.ndarray) -> np.ndarray:
    if np.isnan(values).any():
        raise IndeterminateSum("objective produced NaN")
    return values


def grid_golden_min(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    n_grid: int = 64,
    xtol: float = 1e-5,
    max_iter: int = 200,
) -> BatchMinimum:
    """Minimize ``m`` one-dimensional problems over ``[lo[i], hi[i]]``.

    ``f`` receives an array of shape ``(m, k)`` whose row ``i`` holds points
    for problem ``i`` and must return values of the same shape.  The best
    grid cell is refined by golden section inside its bracketing triple
    until the bracket is narrower than ``xtol`` (absolute).  Ties go to the
    smaller abscissa.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    m = lo.shape[0]
    rows = np.arange(m)

    frac = np.linspace(0.0, 1.0, n_grid)
    X = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    X[:, -1] = hi
    F = _check(np.asarray(f(X), dtype=float))
    i = np.argmin(F, axis=1)
    x_best = X[rows, i]
    f_best = F[rows, i]

    a = X[rows, np.maximum(i - 1, 0)]
    b = X[rows, np.minimum(i + 1, n_grid - 1)]
    x1 = b - _R * (b - a)
    x2 = a + _R * (b - a)
    f1 = _check(np.asarray(f(x1[:, None]), dtype=float)[:, 0])
    f2 = _check(np.asarray(f(x2[:, None]), dtype=float)[:, 0])

    it = 0
    active = (b - a) > xtol
    while active.any() and it < max_iter:
        it += 1
        left = f1 <= f2
        # left: minimum in [a, x2]; right: minimum in [x1, b]
        na = np.where(left, a, x1)
        nb = np.where(left, x2, b)
        xn = np.where(left, nb - _R * (nb - na), na + _R * (nb - na))
        fn = _check(np.asarray(f(xn[:, None]), dtype=float)[:, 0])
        n1 = np.where(left, xn, x2)
        g1 = np.where(left, fn, f2)
        n2 = np.where(left, x1, xn)
        g2 = np.where(left, f1, fn)
        a = np.where(active, na, a)
        b = np.where(active, nb, b)
        x1 = np.where(active, n1, x1)
        f1 = np.where(active, g1, f1)
        x2 = np.where(active, n2, x2)
        f2 = np.where(active, g2, f2)
        active = (b - a) > xtol

    use1 = (f1 < f_best) & (f1 <= f2)
    use2 = (f2 < f_best) & ~use1
    x_best = np.where(use1, x1, np.where(use2, x2, x_best))
    f_best = np.where(use1, f1, np.where(use2, f2, f_best))

    near = 4.0 * xtol
    edge = np.zeros(m, dtype=int)
    edge[(i == 0) & (x_best - lo <= near)] = -1
    edge[(i == n_grid - 1) & (hi - x_best <= near)] = 1
    return BatchMinimum(
        x=x_best, f=f_best, edge=edge, converged=~active, iterations=it
    )


def grid_zoom_min(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    n_grid: int = 64,
    n_zoom: int = 15,
    xtol: float = 1e-5,
    max_iter: int = 200,
) -> BatchMinimum:
    """Like :func:`grid_golden_min` but refines with batched bracket zooms.

    Each round evaluates ``n_zoom`` interior points of the current bracket
    at once and keeps the two cells around the best one, shrinking the
    bracket by ``(n_zoom + 1) / 2``.  For nested searches this needs about
    a quarter of the sequential rounds golden section does, at the price
    of more (vectorized) evaluations.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    m = lo.shape[0]
    rows = np.arange(m)

    frac = np.linspace(0.0, 1.0, n_grid)
    X = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    X[:, -1] = hi
    F = _check(np.asarray(f(X), dtype=float))
    i0 = np.argmin(F, axis=1)
    x_best = X[rows, i0]
    f_best = F[rows, i0]
    a = X[rows, np.maximum(i0 - 1, 0)]
    b = X[rows, np.minimum(i0 + 1, n_grid - 1)]

    inner = np.arange(1, n_zoom + 1) / (n_zoom + 1)
    it = 0
    active = (b - a) > xtol
    while active.any() and it < max_iter:
        it += 1
        P = a[:, None] + (b - a)[:, None] * inner[None, :]
        V = _check(np.asarray(f(P), dtype=float))
        # the bracket ends are only known if they were the incumbent
        P = np.concatenate([a[:, None], P, b[:, None]], axis=1)
        V = np.concatenate(
            [np.where(a == x_best, f_best, np.inf)[:, None], V,
             np.where(b == x_best, f_best, np.inf)[:, None]], axis=1
        )
        j = np.argmin(V, axis=1)
        better = V[rows, j] < f_best
        keep = active & better
        x_best = np.where(keep, P[rows, j], x_best)
        f_best = np.where(keep, V[rows, j], f_best)
        # recentre on the incumbent: it is either P[j] or a bracket end
        k = np.where(better, j, np.where(x_best == a, 0, np.where(x_best == b, n_zoom + 1, j)))
        na = P[rows, np.maximum(k - 1, 0)]
        nb = P[rows, np.minimum(k + 1, n_zoom + 1)]
        a = np.where(active, na, a)
        b = np.where(active, nb, b)
        active = (b - a) > xtol

    near = 4.0 * xtol
    edge = np.zeros(m, dtype=int)
    edge[(i0 == 0) & (x_best - lo <= near)] = -1
    edge[(i0 == n_grid - 1) & (hi - x_best <= near)] = 1
    return BatchMinimum(
        x=x_best, f=f_best, edge=edge, converged=~active, iterations=it
    )
