"""Rate functions on the half-line (0, inf) and the distribution catalog.

A rate function maps ``t > 0`` into ``(-inf, +inf]`` and is finite somewhere.
The main source of rate functions is the log moment generating function
``L_X(t) = ln E exp(tX)`` of a parametric law; powers ``(a t)**r`` and
piecewise-linear tables are also supported.

Each :class:`RateFn` carries the metadata the solvers rely on:

``t_inf_finite`` / ``t_sup_finite``
    bounds of the interval where the function is finite,
``slope_inf``
    ``lim L(t)/t`` as ``t -> inf`` (``None`` when unknown),
``convex``
    whether golden-section searches are justified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar, Sequence

import numpy as np
from scipy import stats

from .errors import InvalidParam, NeverFinite
from .extreal import INF, NINF, ExtReal

__all__ = [
    "DistributionSpec",
    "Gaussian",
    "Bernoulli",
    "Poisson",
    "Exponential",
    "PointMass",
    "Discrete",
    "RateFn",
    "CGFRateFn",
    "PowerRateFn",
    "TabulatedFn",
    "eval_cgf",
    "make_ratefn",
    "cgf",
    "power",
    "tabulated",
    "support_summary",
    "parse_spec",
    "distribution_from_json",
    "ratefn_from_json",
]


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidParam(f"{name} must be a positive finite number, got {value!r}")
    return value


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParam(f"{name} must be finite, got {value!r}")
    return value


def _atoms_cgf(t: np.ndarray, xs: np.ndarray, ps: np.ndarray, mean: float) -> np.ndarray:
    """``ln sum p_i exp(t x_i)`` without overflow and without cancellation near 0.

    Shifting by the top atom keeps every exponent non-positive; for small
    ``t`` the shift is by the mean so that the second-order term survives.
    """
    t = np.asarray(t, dtype=float)
    x_top = xs.max()
    tt = t[..., None]
    by_top = t * x_top + np.log1p(np.sum(ps * np.expm1(tt * (xs - x_top)), axis=-1))
    spread = float(np.max(np.abs(xs - mean)))
    with np.errstate(over="ignore", invalid="ignore"):
        by_mean = t * mean + np.log1p(np.sum(ps * np.expm1(tt * (xs - mean)), axis=-1))
    small = t * spread <= 1.0
    return np.where(small, by_mean, by_top)


class DistributionSpec:
    """Parametric law of a real random variable.

    Subclasses are frozen dataclasses; :meth:`cgf` is vectorized over ``t``.
    """

    family: ClassVar[str]

    def cgf(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def t_sup(self) -> float:
        """Supremum of ``{t > 0 : E exp(tX) < inf}``."""
        return INF

    def support_summary(self) -> tuple[ExtReal, float]:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def tail(self, x: float, strict: bool = True) -> float:
        """Exact ``P(X > x)`` (``strict``) or ``P(X >= x)``."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Gaussian(DistributionSpec):
    mu: float = 0.0
    sigma: float = 1.0
    family: ClassVar[str] = "gaussian"

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)

    def cgf(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return self.mu * t + 0.5 * (self.sigma * t) ** 2

    def support_summary(self):
        return INF, 0.0

    @property
    def mean(self):
        return float(self.mu)

    def tail(self, x, strict=True):
        return 0.5 * math.erfc((x - self.mu) / (self.sigma * math.sqrt(2.0)))

    def sample(self, rng, n):
        return rng.normal(self.mu, self.sigma, size=n)

    def to_json(self):
        return {"dist": "gaussian", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class Poisson(DistributionSpec):
    lam: float = 1.0
    family: ClassVar[str] = "poisson"

    def __post_init__(self):
        _positive("lambda", self.lam)

    def cgf(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return self.lam * np.expm1(t)

    def support_summary(self):
        return INF, 0.0

    @property
    def mean(self):
        return float(self.lam)

    def tail(self, x, strict=True):
        k = math.floor(x) if strict else math.ceil(x) - 1
        return float(stats.poisson.sf(k, self.lam))

    def sample(self, rng, n):
        return rng.poisson(self.lam, size=n).astype(float)

    def to_json(self):
        return {"dist": "poisson", "lambda": self.lam}


@dataclass(frozen=True)
class Exponential(DistributionSpec):
    rate: float = 1.0
    family: ClassVar[str] = "exponential"

    def __post_init__(self):
        _positive("rate", self.rate)

    def cgf(self, t):
        t = np.asarray(t, dtype=float)
        inside = t < self.rate
        safe = np.where(inside, t, 0.0)
        return np.where(inside, -np.log1p(-safe / self.rate), INF)

    @property
    def t_sup(self):
        return float(self.rate)

    def support_summary(self):
        return INF, 0.0

    @property
    def mean(self):
        return 1.0 / self.rate

    def tail(self, x, strict=True):
        return 1.0 if x <= 0 else math.exp(-self.rate * x)

    def sample(self, rng, n):
        return -np.log1p(-rng.random(n)) / self.rate

    def to_json(self):
        return {"dist": "exponential", "rate": self.rate}


class _Atomic(DistributionSpec):
    """Shared machinery for laws with finitely many atoms."""

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        raise NotImplementedError

    def _arrays(self):
        xs = np.array([a[0] for a in self.atoms], dtype=float)
        ps = np.array([a[1] for a in self.atoms], dtype=float)
        return xs, ps

    def cgf(self, t):
        xs, ps = self._arrays()
        return _atoms_cgf(t, xs, ps, self.mean)

    def support_summary(self):
        top = max(self.atoms)
        return float(top[0]), float(top[1])

    @property
    def mean(self):
        return float(sum(x * p for x, p in self.atoms))

    def tail(self, x, strict=True):
        if strict:
            return float(math.fsum(p for xi, p in self.atoms if xi > x))
        return float(math.fsum(p for xi, p in self.atoms if xi >= x))

    def sample(self, rng, n):
        xs, ps = self._arrays()
        order = np.argsort(xs)
        xs, ps = xs[order], ps[order]
        cdf = np.cumsum(ps)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(n), side="right")
        return xs[np.minimum(idx, len(xs) - 1)]


@dataclass(frozen=True)
class Bernoulli(_Atomic):
    p: float = 0.5
    family: ClassVar[str] = "bernoulli"

    def __post_init__(self):
        if not (0.0 < float(self.p) < 1.0):
            raise InvalidParam(f"bernoulli p must lie in (0, 1), got {self.p!r}")

    @property
    def atoms(self):
        return ((0.0, 1.0 - self.p), (1.0, float(self.p)))

    def sample(self, rng, n):
        return (rng.random(n) >= 1.0 - self.p).astype(float)

    def to_json(self):
        return {"dist": "bernoulli", "p": self.p}


@dataclass(frozen=True)
class PointMass(_Atomic):
    c: float = 0.0
    family: ClassVar[str] = "pointmass"

    def __post_init__(self):
        _finite("c", self.c)

    @property
    def atoms(self):
        return ((float(self.c), 1.0),)

    def cgf(self, t):
        return float(self.c) * np.asarray(t, dtype=float)

    def sample(self, rng, n):
        return np.full(n, float(self.c))

    def to_json(self):
        return {"dist": "pointmass", "c": self.c}


@dataclass(frozen=True)
class Discrete(_Atomic):
    support: tuple[tuple[float, float], ...] = ()
    family: ClassVar[str] = "discrete"

    def __post_init__(self):
        pairs = tuple((float(x), float(p)) for x, p in self.support)
        if not pairs:
            raise InvalidParam("discrete law needs at least one atom")
        xs = [x for x, _ in pairs]
        if any(not math.isfinite(x) for x in xs):
            raise InvalidParam("atom locations must be finite")
        if len(set(xs)) != len(xs):
            raise InvalidParam("atom locations must be distinct")
        if any(not (p > 0) for _, p in pairs):
            raise InvalidParam("atom masses must be positive")
        total = math.fsum(p for _, p in pairs)
        if abs(total - 1.0) > 1e-9:
            raise InvalidParam(f"atom masses sum to {total}, not 1")
        object.__setattr__(self, "support", pairs)

    @property
    def atoms(self):
        return self.support

    def to_json(self):
        return {"dist": "discrete", "atoms": [list(a) for a in self.support]}


def support_summary(dist: DistributionSpec) -> tuple[ExtReal, float]:
    """``(x_max, p_max)``: top of the support and the mass sitting there."""
    return dist.support_summary()


def eval_cgf(dist: DistributionSpec, t: float) -> ExtReal:
    """``ln E exp(tX)`` for ``t > 0`` in closed form."""
    t = float(t)
    if not t > 0:
        raise InvalidParam(f"t must be positive, got {t!r}")
    return float(dist.cgf(np.array([t]))[0])


class RateFn:
    """A function ``(0, inf) -> (-inf, inf]`` that is finite somewhere."""

    kind: str = "abstract"

    def __init__(
        self,
        *,
        convex: bool,
        t_inf_finite: float = 0.0,
        t_sup_finite: float = INF,
        slope_inf: float | None = None,
        finite_witness: float | None = None,
    ):
        self.convex = bool(convex)
        self.t_inf_finite = float(t_inf_finite)
        self.t_sup_finite = float(t_sup_finite)
        self.slope_inf = slope_inf
        if finite_witness is None:
            finite_witness = self._find_witness()
        self.finite_witness = float(finite_witness)
        if not math.isfinite(float(self.evaluate(np.array([self.finite_witness]))[0])):
            raise NeverFinite(f"{self!r} is not finite at its witness")

    dist: DistributionSpec | None = None

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Vectorized evaluation for ``t > 0``; no argument checking."""
        raise NotImplementedError

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(~(arr > 0)):
            raise InvalidParam("rate functions are defined for t > 0 only")
        out = self.evaluate(np.atleast_1d(arr))
        if np.isnan(out).any() or (out == NINF).any():
            raise InvalidParam("rate function returned a value outside (-inf, inf]")
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def _find_witness(self) -> float:
        lo, hi = self.t_inf_finite, self.t_sup_finite
        if math.isinf(hi):
            cands = [max(1.0, 2.0 * lo)]
        elif lo > 0:
            cands = [math.sqrt(lo * hi), lo, hi]
        else:
            cands = [min(1.0, hi / 2.0)]
        cands += list(np.geomspace(1e-6, 1e6, 25))
        for c in cands:
            if c > 0 and math.isfinite(float(self.evaluate(np.array([c]))[0])):
                return float(c)
        raise NeverFinite(f"no t with finite value found for {self!r}")

    def __repr__(self):
        return f"<{type(self).__name__} kind={self.kind}>"


class CGFRateFn(RateFn):
    """Log moment generating function of a catalog law."""

    kind = "cgf"

    def __init__(self, dist: DistributionSpec):
        self.dist = dist
        x_max, _ = dist.support_summary()
        t_sup = dist.t_sup
        super().__init__(
            convex=True,
            t_sup_finite=t_sup,
            slope_inf=x_max if math.isinf(t_sup) else INF,
            finite_witness=1.0 if math.isinf(t_sup) else t_sup / 2.0,
        )

    def evaluate(self, t):
        return self.dist.cgf(t)

    def __repr__(self):
        return f"CGFRateFn({self.dist!r})"


class PowerRateFn(RateFn):
    """``t -> (a t)**r``."""

    kind = "power"

    def __init__(self, r: float, a: float):
        self.r = _positive("r", r)
        self.a = float(a)
        if not (self.a >= 0 and math.isfinite(self.a)):
            raise InvalidParam(f"a must be a finite non-negative number, got {a!r}")
        if self.a == 0 or self.r < 1:
            slope = 0.0
        elif self.r == 1:
            slope = self.a
        else:
            slope = INF
        super().__init__(convex=self.r >= 1, slope_inf=slope, finite_witness=1.0)

    def evaluate(self, t):
        with np.errstate(over="ignore"):
            return (self.a * np.asarray(t, dtype=float)) ** self.r

    def __repr__(self):
        return f"PowerRateFn(r={self.r}, a={self.a})"


class TabulatedFn(RateFn):
    """Linear interpolation between nodes; +inf outside the node range."""

    kind = "tabulated"

    def __init__(self, nodes: Sequence[Sequence[float]]):
        pts = [(float(t), float(v)) for t, v in nodes]
        if len(pts) < 2:
            raise InvalidParam("a table needs at least two nodes")
        ts = np.array([p[0] for p in pts])
        vs = np.array([p[1] for p in pts])
        if np.any(~(ts > 0)) or np.any(~np.isfinite(ts)):
            raise InvalidParam("table abscissae must be positive and finite")
        if np.any(np.diff(ts) <= 0):
            raise InvalidParam("table abscissae must be strictly increasing")
        if np.any(np.isnan(vs)) or np.any(vs == NINF):
            raise InvalidParam("table values must lie in (-inf, inf]")
        if np.all(vs == INF):
            raise NeverFinite("every tabulated value is +inf")
        if np.any(vs == INF):
            raise InvalidParam("table values must be finite apart from the all-inf case")
        self.ts, self.vs = ts, vs
        slopes = np.diff(vs) / np.diff(ts)
        scale = 1e-12 * (1.0 + np.max(np.abs(slopes)))
        convex = bool(np.all(np.diff(slopes) >= -scale))
        super().__init__(
            convex=convex,
            t_inf_finite=ts[0],
            t_sup_finite=ts[-1],
            slope_inf=INF,
            finite_witness=ts[0],
        )

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.ts[0]) & (t <= self.ts[-1])
        return np.where(inside, np.interp(t, self.ts, self.vs), INF)

    def __repr__(self):
        return f"TabulatedFn({len(self.ts)} nodes on [{self.ts[0]}, {self.ts[-1]}])"


def cgf(dist: DistributionSpec) -> CGFRateFn:
    return CGFRateFn(dist)


def power(r: float, a: float) -> PowerRateFn:
    return PowerRateFn(r, a)


def tabulated(nodes: Sequence[Sequence[float]]) -> TabulatedFn:
    return TabulatedFn(nodes)


def make_ratefn(spec: Any) -> RateFn:
    """Build a rate function from a law, a JSON-style dict, or a RateFn."""
    if isinstance(spec, RateFn):
        return spec
    if isinstance(spec, DistributionSpec):
        return CGFRateFn(spec)
    if isinstance(spec, dict):
        return ratefn_from_json(spec)
    raise InvalidParam(f"cannot build a rate function from {spec!r}")


_SCHEMA: dict[str, tuple[str, ...]] = {
    "gaussian": ("mu", "sigma"),
    "bernoulli": ("p",),
    "poisson": ("lambda",),
    "exponential": ("rate",),
    "pointmass": ("c",),
    "discrete": ("atoms",),
    "power": ("r", "a"),
    "tabulated": ("nodes",),
}


def _number(obj: dict, key: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidParam(f"{key!r} must be a number, got {v!r}")
    return float(v)


def _pairs(obj: dict, key: str) -> list[tuple[float, float]]:
    v = obj[key]
    if not isinstance(v, list):
        raise InvalidParam(f"{key!r} must be a list of [x, y] pairs")
    out = []
    for item in v:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise InvalidParam(f"{key!r} entries must be [x, y] pairs, got {item!r}")
        x, y = item
        if isinstance(y, str):
            try:
                y = float(y)
            except ValueError as exc:
                raise InvalidParam(f"bad value in {key!r}: {y!r}") from exc
        out.append((float(x), float(y)))
    return out


def parse_spec(obj: Any) -> DistributionSpec | RateFn:
    """Parse one JSON object; laws become :class:`DistributionSpec`."""
    if not isinstance(obj, dict):
        raise InvalidParam(f"a spec must be a JSON object, got {obj!r}")
    family = obj.get("dist")
    if family not in _SCHEMA:
        raise InvalidParam(f"unknown dist {family!r}; expected one of {sorted(_SCHEMA)}")
    expected = set(_SCHEMA[family])
    given = set(obj) - {"dist"}
    if given - expected:
        raise InvalidParam(f"unknown keys for {family}: {sorted(given - expected)}")
    if expected - given:
        raise InvalidParam(f"missing keys for {family}: {sorted(expected - given)}")
    try:
        if family == "gaussian":
            return Gaussian(_number(obj, "mu"), _number(obj, "sigma"))
        if family == "bernoulli":
            return Bernoulli(_number(obj, "p"))
        if family == "poisson":
            return Poisson(_number(obj, "lambda"))
        if family == "exponential":
            return Exponential(_number(obj, "rate"))
        if family == "pointmass":
            return PointMass(_number(obj, "c"))
        if family == "discrete":
            return Discrete(tuple(_pairs(obj, "atoms")))
        if family == "power":
            return PowerRateFn(_number(obj, "r"), _number(obj, "a"))
        return TabulatedFn(_pairs(obj, "nodes"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParam):
            raise
        raise InvalidParam(str(exc)) from exc


def distribution_from_json(obj: Any) -> DistributionSpec:
    spec = parse_spec(obj)
    if not isinstance(spec, DistributionSpec):
        raise InvalidParam(f"{obj.get('dist')!r} is a rate function, not a distribution")
    return spec


def ratefn_from_json(obj: Any) -> RateFn:
    return make_ratefn(parse_spec(obj))
