import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import CATALOG, cgf_reference
from fenchelinv import (
    INF,
    Bernoulli,
    Discrete,
    Exponential,
    Gaussian,
    InvalidParam,
    NeverFinite,
    PointMass,
    Poisson,
    cgf,
    eval_cgf,
    make_ratefn,
    parse_spec,
    power,
    support_summary,
    tabulated,
)
from fenchelinv.ratefn import distribution_from_json, ratefn_from_json


def test_cgf_examples():
    assert eval_cgf(Gaussian(0, 1), 2.0) == pytest.approx(2.0, rel=1e-15)
    assert eval_cgf(Exponential(1.0), 1.0) == INF
    assert eval_cgf(Bernoulli(0.5), math.log(3)) == pytest.approx(math.log(2), rel=1e-15)
    assert eval_cgf(PointMass(-2.0), 3.0) == -6.0


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_cgf_rejects_nonpositive_t(t):
    with pytest.raises(InvalidParam):
        eval_cgf(Gaussian(0, 1), t)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_cgf_against_reference(name):
    dist = CATALOG[name]
    top = min(dist.t_sup, 20.0)
    for t in np.geomspace(1e-4, top, 25)[:-1]:
        got = eval_cgf(dist, float(t))
        ref = cgf_reference(dist, float(t))
        assert got == pytest.approx(ref, rel=1e-8, abs=1e-300), (name, t)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_cgf_midpoint_convex(name):
    L = cgf(CATALOG[name])
    rng = np.random.default_rng(7)
    top = min(L.t_sup_finite, 30.0)
    s, t = rng.uniform(1e-3, top * 0.999, size=(2, 200))
    mid = L((s + t) / 2)
    assert np.all(mid <= (L(s) + L(t)) / 2 + 1e-12 * (1 + np.abs(mid)))


def test_cgf_large_t_no_overflow():
    d = Discrete(((-1.0, 0.25), (0.0, 0.25), (3.0, 0.5)))
    v = eval_cgf(d, 500.0)
    assert v == pytest.approx(1500.0 + math.log(0.5), rel=1e-14)
    assert eval_cgf(Poisson(1.0), 700.0) == INF or eval_cgf(Poisson(1.0), 700.0) > 1e300
    assert eval_cgf(Bernoulli(0.2), 1e4) == pytest.approx(1e4 + math.log(0.2), rel=1e-14)


def test_support_summary():
    assert support_summary(Bernoulli(0.3)) == (1.0, 0.3)
    assert support_summary(Gaussian(0, 1)) == (INF, 0.0)
    assert support_summary(PointMass(5)) == (5.0, 1.0)
    assert support_summary(Poisson(2)) == (INF, 0.0)
    assert support_summary(Discrete(((0, 0.4), (2, 0.6)))) == (2.0, 0.6)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: Gaussian(0, 0),
        lambda: Gaussian(0, -1),
        lambda: Bernoulli(0.0),
        lambda: Bernoulli(1.0),
        lambda: Poisson(0),
        lambda: Exponential(-1),
        lambda: Discrete(((0, 0.5), (0, 0.5))),
        lambda: Discrete(((0, 0.5), (1, 0.4))),
        lambda: Discrete(((0, 1.1), (1, -0.1))),
        lambda: PointMass(math.inf),
    ],
)
def test_invalid_parameters(factory):
    with pytest.raises(InvalidParam):
        factory()


def test_power_and_witness():
    L = power(2, 3)
    assert L(2.0) == 36.0
    assert L.finite_witness == 1.0
    assert L.convex
    assert not power(0.5, 1).convex


def test_exponential_domain():
    L = make_ratefn(Exponential(2.0))
    assert L.t_sup_finite == 2.0
    assert L(3.0) == INF
    assert L.finite_witness < 2.0


def test_tabulated():
    L = tabulated([[0.5, 0.0], [1.0, 1.0], [2.0, 4.0]])
    assert L(0.75) == pytest.approx(0.5)
    assert L(0.1) == INF and L(3.0) == INF
    assert L.convex
    assert not tabulated([[0.5, 0.0], [1.0, 2.0], [2.0, 2.5]]).convex
    with pytest.raises(NeverFinite):
        tabulated([[1.0, INF], [2.0, INF]])
    with pytest.raises(InvalidParam):
        tabulated([[1.0, 0.0]])
    with pytest.raises(InvalidParam):
        tabulated([[2.0, 0.0], [1.0, 1.0]])


def test_ratefn_rejects_nonpositive_t():
    with pytest.raises(InvalidParam):
        cgf(Gaussian(0, 1))(0.0)


def test_json_round_trip():
    for dist in CATALOG.values():
        again = distribution_from_json(dist.to_json())
        assert again == dist
    assert parse_spec({"dist": "discrete", "atoms": [[0, 0.5], [1, 0.5]]}) == Discrete(
        ((0.0, 0.5), (1.0, 0.5))
    )
    L = ratefn_from_json({"dist": "power", "r": 2, "a": 1})
    assert L(3.0) == 9.0


@pytest.mark.parametrize(
    "obj",
    [
        {"dist": "gaussian", "mu": 0},
        {"dist": "gaussian", "mu": 0, "sigma": 1, "extra": 2},
        {"dist": "cauchy"},
        [1, 2],
        {"dist": "bernoulli", "p": "x"},
        {"dist": "tabulated", "nodes": [[1, "inf"], [2, "inf"]]},
    ],
)
def test_json_rejects(obj):
    with pytest.raises(InvalidParam):
        make_ratefn(parse_spec(obj))


def test_distribution_from_json_rejects_ratefn():
    with pytest.raises(InvalidParam):
        distribution_from_json({"dist": "power", "r": 2, "a": 1})


@given(st.floats(0.01, 0.99), st.floats(1e-3, 50.0))
def test_bernoulli_cgf_bounds(p, t):
    # max(t * E X, ln p + t) <= L(t) <= t
    v = eval_cgf(Bernoulli(p), t)
    assert v <= t * (1 + 1e-15)
    assert v >= max(t * p, math.log(p) + t) - 1e-12 * (1 + t)
