"""Seeded Monte Carlo check of the quantile bound for sums.

Samples are drawn in fixed-size chunks.  Chunk ``c`` of term ``j`` uses its
own generator seeded from ``SeedSequence([seed, j, c])``, so the result does
not depend on how many workers draw the chunks or in which order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import Strictness, sum_quantile_bound
from .errors import InvalidParam
from .extreal import NINF, ExtReal
from .ratefn import DistributionSpec
from .transform import DEFAULT, SolverConfig

__all__ = ["VerifyReport", "sample", "sample_sums", "verify_bound"]

CHUNK = 1 << 18
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class VerifyReport:
    u: float
    total_quantile: ExtReal
    cap: float
    n_samples: int
    n_exceed_strict: int
    n_exceed_weak: int
    empirical_strict: float
    empirical_weak: float
    three_sigma: float
    verdict: str  # "pass", "fail" or "vacuous"
    event: str = "strict"
    strictness: Strictness = Strictness.STRICT_AND_WEAK_HOLD
    flags: tuple[str, ...] = ()


def _chunk(dist: DistributionSpec, seed: int, term: int, index: int, size: int) -> np.ndarray:
    ss = np.random.SeedSequence([seed & _MASK, term, index])
    return dist.sample(np.random.default_rng(ss), size)


def _draw(dist, n, seed, term, workers):
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    jobs = [(dist, seed, term, c, s) for c, s in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _chunk(*a), jobs))
    else:
        parts = [_chunk(*a) for a in jobs]
    return np.concatenate(parts)


def sample(dist: DistributionSpec, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """``n`` i.i.d. draws of ``dist``, reproducible for a given ``seed``."""
    if n < 1:
        raise InvalidParam("n must be at least 1")
    return _draw(dist, int(n), int(seed), 0, workers)


def sample_sums(
    dists: Sequence[DistributionSpec], n: int, seed: int, workers: int = 1
) -> np.ndarray:
    """``n`` draws of ``X_1 + ... + X_k`` with independent terms."""
    if n < 1:
        raise InvalidParam("n must be at least 1")
    total = np.zeros(int(n))
    for j, d in enumerate(dists):
        total += _draw(d, int(n), int(seed), j, workers)
    return total


def verify_bound(
    dists: Sequence[DistributionSpec],
    u: float,
    n: int,
    seed: int,
    cfg: SolverConfig = DEFAULT,
    event: str = "strict",
    workers: int = 1,
    sums: np.ndarray | None = None,
) -> VerifyReport:
    """Compare empirical exceedance frequencies of the bound with ``exp(-u)``.

    ``verdict`` is ``pass`` when the frequency of the chosen event
    (``S > total`` for ``strict``, ``S >= total`` for ``weak``) is at most
    ``exp(-u)`` plus three binomial standard deviations.  Pre-drawn ``sums``
    can be passed to reuse one sample across several ``u``.
    """
    if event not in ("strict", "weak"):
        raise InvalidParam(f"event must be 'strict' or 'weak', got {event!r}")
    if n < 1000:
        raise InvalidParam("at least 1000 samples are required")
    report = sum_quantile_bound(dists, u, cfg)
    if sums is None:
        sums = sample_sums(dists, n, seed, workers)
    elif len(sums) != n:
        raise InvalidParam("pre-drawn sums do not match n")
    z = report.total_quantile
    n_strict = int(np.count_nonzero(sums > z))
    n_weak = int(np.count_nonzero(sums >= z))
    cap = report.probability_cap
    three_sigma = 3.0 * math.sqrt(cap * (1.0 - cap) / n) if cap < 1.0 else 0.0
    emp_strict, emp_weak = n_strict / n, n_weak / n
    if cap >= 1.0 or z == NINF:
        verdict = "vacuous"
    else:
        observed = emp_strict if event == "strict" else emp_weak
        verdict = "pass" if observed <= cap + three_sigma else "fail"
    return VerifyReport(
        u=float(u),
        total_quantile=z,
        cap=cap,
        n_samples=int(n),
        n_exceed_strict=n_strict,
        n_exceed_weak=n_weak,
        empirical_strict=emp_strict,
        empirical_weak=emp_weak,
        three_sigma=three_sigma,
        verdict=verdict,
        event=event,
        strictness=report.strictness,
        flags=report.flags,
    )
