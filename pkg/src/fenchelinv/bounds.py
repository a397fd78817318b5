"""Cramér-Chernoff tail bounds and quantile upper bounds for sums.

For any random variables ``X_1, ..., X_n`` with finite exponential moments
for some ``t > 0`` and any real ``u``::

    P(X_1 + ... + X_n > li L_1(u) + ... + li L_n(u)) <= exp(-u)

where ``li L_j`` is the smallest generalized inverse of the conjugate of the
log-MGF of ``X_j``.  No independence is needed for the bound itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import NonConvergence
from .extreal import INF, NINF, ExtReal, ext_exp, ext_sum
from .ratefn import CGFRateFn, DistributionSpec
from .transform import DEFAULT, SolverConfig, conjugate, lower_inverse_detail

__all__ = [
    "Strictness",
    "BoundReport",
    "sum_quantile_bound",
    "chernoff_tail",
    "strictness_check",
    "sum_support",
]


class Strictness(str, Enum):
    """Whether ``P(X >= li L_X(u)) <= exp(-u)`` holds as well as the strict form."""

    STRICT_AND_WEAK_HOLD = "strict_and_weak_hold"
    STRICT_ONLY = "strict_only"


@dataclass(frozen=True)
class BoundReport:
    u: float
    per_term_quantiles: tuple[ExtReal, ...]
    total_quantile: ExtReal
    probability_cap: float
    strictness: Strictness
    flags: tuple[str, ...] = ()


def _classify(x_max: ExtReal, p_max: float, u: float) -> Strictness:
    if math.isfinite(x_max) and p_max > 0 and u > -math.log(p_max):
        return Strictness.STRICT_ONLY
    return Strictness.STRICT_AND_WEAK_HOLD


def strictness_check(dist: DistributionSpec, u: float) -> Strictness:
    """The weak inequality fails exactly when the top of the support is an
    atom of mass ``p_max > 0`` and ``u > -ln p_max``."""
    x_max, p_max = dist.support_summary()
    return _classify(x_max, p_max, float(u))


def sum_support(dists: Sequence[DistributionSpec]) -> tuple[ExtReal, float]:
    """``(x_max, p_max)`` of the sum of *independent* copies of ``dists``."""
    x_max, p_max = 0.0, 1.0
    for d in dists:
        x, p = d.support_summary()
        x_max += x
        p_max *= p
    if math.isinf(x_max):
        p_max = 0.0
    return x_max, p_max


def chernoff_tail(dist: DistributionSpec, x: float, cfg: SolverConfig = DEFAULT) -> float:
    """Markov/Chernoff bound ``P(X >= x) <= exp(-L_X*(x))``."""
    return ext_exp(-conjugate(CGFRateFn(dist), x, cfg))


def sum_quantile_bound(
    dists: Sequence[DistributionSpec], u: float, cfg: SolverConfig = DEFAULT
) -> BoundReport:
    """Upper bound ``sum_j li L_{X_j}(u)`` on the ``1 - exp(-u)`` quantile of the sum.

    The strictness verdict refers to the sum of independent copies:
    when it reads ``strict_and_weak_hold`` the bound also holds for the
    event ``{S >= total}``.
    """
    u = float(u)
    if not dists:
        raise ValueError("at least one distribution is required")
    quantiles: list[float] = []
    flags: list[str] = []
    for j, d in enumerate(dists):
        try:
            est = lower_inverse_detail(CGFRateFn(d), u, cfg)
        except NonConvergence as exc:
            err = type(exc)(f"term {j} ({d!r}): {exc}")
            err.term_index = j
            raise err from exc
        quantiles.append(est.value)
        flags.extend(f"term{j}:{f}" for f in est.flags)
    total = ext_sum(quantiles)
    cap = ext_exp(-u)
    if total == NINF or cap >= 1.0:
        flags.append("vacuous")
    x_max, p_max = sum_support(dists)
    return BoundReport(
        u=u,
        per_term_quantiles=tuple(quantiles),
        total_quantile=total,
        probability_cap=cap,
        strictness=_classify(x_max, p_max, u),
        flags=tuple(flags),
    )
