import math

import numpy as np
import pytest

from _oracles import (
    CATALOG,
    conjugate_closed,
    conjugate_grid,
    lower_inverse_closed,
    rel_close,
    upper_inverse_closed,
)
from fenchelinv import (
    INF,
    NINF,
    Bernoulli,
    Gaussian,
    InvalidParam,
    NonConvergence,
    PointMass,
    SolverConfig,
    cgf,
    conjugate,
    inverse_oracle,
    lower_inverse,
    power,
    profile,
    tabulated,
    upper_inverse,
)
from fenchelinv.transform import conjugate_detail, lower_inverse_detail

CLOSED = [k for k in CATALOG if k != "discrete"]
G = cgf(Gaussian(0, 1))


def test_conjugate_examples():
    assert conjugate(G, 1.0) == pytest.approx(0.5, rel=1e-9)
    assert conjugate(cgf(PointMass(0)), 1.0) == INF
    assert conjugate(G, -2.0) == 0.0


def test_upper_inverse_examples():
    assert upper_inverse(G, 2.0) == pytest.approx(2.0, rel=1e-9)
    assert upper_inverse(cgf(PointMass(3)), 0.0) == pytest.approx(3.0, rel=1e-12)
    assert upper_inverse(G, -1.0) == NINF


def test_lower_inverse_examples():
    pm = cgf(PointMass(3))
    assert lower_inverse(pm, 0.0) == NINF
    assert lower_inverse(pm, 0.1) == 3.0
    assert lower_inverse(G, 2.0) == pytest.approx(2.0, rel=1e-9)


@pytest.mark.parametrize("name", CLOSED)
def test_conjugate_closed_forms(name):
    dist = CATALOG[name]
    L = cgf(dist)
    x_max, _ = dist.support_summary()
    hi = x_max + 1.0 if math.isfinite(x_max) else dist.mean + 6.0
    grid = list(np.linspace(dist.mean - 3.0, hi, 37))
    if math.isfinite(x_max):
        grid.append(x_max)
    for x in grid:
        got, ref = conjugate(L, x), conjugate_closed(dist, x)
        assert rel_close(got, ref, 1e-6, 1e-9), (name, x, got, ref)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_conjugate_dominates_grid_sup(name):
    # a dense grid gives a lower bound that should be nearly attained
    dist = CATALOG[name]
    L = cgf(dist)
    x_max, _ = dist.support_summary()
    top = x_max - 0.05 if math.isfinite(x_max) else dist.mean + 3.0
    for x in np.linspace(dist.mean - 1.0, top, 9):
        got, ref = conjugate(L, x), conjugate_grid(dist, x)
        assert got >= ref - 1e-9
        assert got == pytest.approx(ref, rel=1e-4, abs=1e-6)


def test_conjugate_tabulated_is_exact():
    nodes = [[0.5, -0.2], [1.0, 0.1], [2.0, 1.5], [4.0, 6.0]]
    L = tabulated(nodes)
    for x in [-1.0, 0.3, 1.0, 2.7, 10.0]:
        expected = max(t * x - v for t, v in nodes)
        assert conjugate(L, x) == pytest.approx(expected, rel=1e-15)


def test_conjugate_power():
    # p_{2,a}(t) = (a t)^2 has conjugate x^2 / (4 a^2) for x > 0
    L = power(2, 1.5)
    for x in [0.5, 1.0, 3.0]:
        assert conjugate(L, x) == pytest.approx(x * x / 9.0, rel=1e-8)
    # p_{1,a} is linear: conjugate 0 below a, +inf above
    assert conjugate(power(1, 2.0), 1.0) == pytest.approx(0.0, abs=1e-9)
    assert conjugate(power(1, 2.0), 3.0) == INF


def test_conjugate_rejects_infinite_x():
    with pytest.raises(InvalidParam):
        conjugate(G, INF)


def test_conjugate_reports_edge_flags():
    est = conjugate_detail(power(2, 1), -1.0)
    assert est.value == pytest.approx(0.0, abs=1e-9)
    assert "edge:t_lo" in est.flags
    assert "diverges:t->inf" in conjugate_detail(cgf(PointMass(0)), 1.0).flags


@pytest.mark.parametrize("name", CLOSED)
def test_inverses_match_closed_forms(name):
    dist = CATALOG[name]
    L = cgf(dist)
    for u in [-0.5, 0.0, 0.01, 0.25, 0.5, 1.0, 1.7, 2.0, 4.0, 9.0]:
        li, ref = lower_inverse(L, u), lower_inverse_closed(dist, u)
        assert rel_close(li, ref, 1e-7, 1e-9), (name, u, li, ref)
        tli, ref = upper_inverse(L, u), upper_inverse_closed(dist, u)
        assert rel_close(tli, ref, 1e-7, 1e-7), (name, u, tli, ref)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_lower_inverse_matches_bisection_oracle(name):
    L = cgf(CATALOG[name])
    rng = np.random.default_rng(11)
    for u in rng.uniform(-1.0, 5.0, 20):
        got, ref = lower_inverse(L, u), inverse_oracle(L, u)
        assert rel_close(got, ref, 1e-5, 1e-5), (name, u, got, ref)


def test_inverse_oracle_examples():
    assert inverse_oracle(G, 2.0) == pytest.approx(2.0, abs=1e-6)
    assert inverse_oracle(cgf(PointMass(3)), 0.5) == pytest.approx(3.0, abs=1e-6)
    # L*(x) = max(x, 2x) here, so no x inside the scan range reaches 1e20
    flat = tabulated([[1.0, 0.0], [2.0, 0.0]])
    assert inverse_oracle(flat, 1e20) == INF


def test_lemma_overrides():
    for p in [0.1, 0.5, 0.9]:
        L = cgf(Bernoulli(p))
        top = -math.log(p)
        assert lower_inverse(L, top) == 1.0
        assert lower_inverse(L, top + 1e-12) == 1.0
        assert lower_inverse(L, top + 3.0) == 1.0
        assert lower_inverse(L, top - 1e-3) < 1.0
    assert "degenerate" in lower_inverse_detail(cgf(PointMass(2)), 0.0).flags


@pytest.mark.parametrize(
    "dist, x_inf, u_inf, dom_case",
    [
        (Bernoulli(0.5), 1.0, math.log(2), "closed"),
        (Gaussian(0, 1), INF, INF, "open"),
        (PointMass(0), 0.0, 0.0, "closed"),
        (CATALOG["poisson"], INF, INF, "open"),
        (CATALOG["discrete"], 2.0, -math.log(0.3), "closed"),
    ],
)
def test_profile(dist, x_inf, u_inf, dom_case):
    prof = profile(cgf(dist))
    assert prof.x_inf == x_inf
    assert rel_close(prof.u_inf, u_inf, 1e-10)
    assert prof.dom_case == dom_case
    assert prof.u_minus_inf == pytest.approx(0.0, abs=1e-9)
    assert prof.u_minus_inf <= prof.u_inf


def test_profile_of_power_scans_domain():
    # p_{1,2} is linear with slope 2: dom L* = (-inf, 2], L*(2) = 0
    prof = profile(power(1, 2.0))
    assert prof.x_inf == pytest.approx(2.0, rel=1e-9)
    assert prof.dom_case == "closed"


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_markov_consistency(name):
    dist = CATALOG[name]
    L = cgf(dist)
    for x in np.linspace(dist.mean - 2.0, dist.mean + 4.0, 25):
        bound = math.exp(-conjugate(L, x)) if conjugate(L, x) < INF else 0.0
        assert bound >= dist.tail(x, strict=False) - 1e-12, (name, x)


def test_nonconvergence_is_raised():
    cfg = SolverConfig(max_iter=1)
    with pytest.raises(NonConvergence):
        conjugate(G, 1.0, cfg)


def test_solver_config_validation():
    with pytest.raises(InvalidParam):
        SolverConfig(t_bracket=(1.0, 0.5))
    with pytest.raises(InvalidParam):
        SolverConfig(rel_tol=0.0)
    with pytest.raises(InvalidParam):
        SolverConfig(left_limit_deltas=(1e-6, 1e-3))
    assert SolverConfig(rel_tol=1e-8).xtol == pytest.approx(1e-4)
