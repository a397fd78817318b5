import math

import numpy as np
import pytest

from fenchelinv import (
    Bernoulli,
    Discrete,
    Exponential,
    Gaussian,
    InvalidParam,
    PointMass,
    Poisson,
    sample,
    sample_sums,
    verify_bound,
)


def test_pointmass_samples_are_constant():
    assert sample(PointMass(3), 5, seed=123).tolist() == [3.0] * 5


@pytest.mark.parametrize(
    "dist, tol",
    [(Bernoulli(0.5), 0.002), (Gaussian(0, 1), 0.003), (Poisson(3.0), 0.006),
     (Exponential(2.0), 0.0016), (Discrete(((0, 0.25), (4, 0.75))), 0.006)],
)
def test_sample_means(dist, tol):
    x = sample(dist, 10**6, seed=5)
    assert abs(x.mean() - dist.mean) < tol


def test_samples_reproducible_and_worker_independent():
    a = sample_sums([Gaussian(0, 1), Poisson(2)], 600_000, seed=9)
    b = sample_sums([Gaussian(0, 1), Poisson(2)], 600_000, seed=9, workers=4)
    assert np.array_equal(a, b)
    c = sample_sums([Gaussian(0, 1), Poisson(2)], 600_000, seed=10)
    assert not np.array_equal(a, c)


def test_discrete_inverse_cdf_frequencies():
    d = Discrete(((2.0, 0.1), (-1.0, 0.6), (0.5, 0.3)))
    x = sample(d, 200_000, seed=1)
    for atom, p in d.atoms:
        assert abs(np.mean(x == atom) - p) < 4 * math.sqrt(p * (1 - p) / x.size)


def test_verify_examples():
    rep = verify_bound([Gaussian(0, 1), Gaussian(0, 1)], 2.0, 10**6, seed=0)
    # exact tail of N(0, 2) at 4
    exact = 0.5 * math.erfc(4 / 2)
    assert abs(rep.empirical_strict - exact) < 5 * math.sqrt(exact / 10**6)
    assert rep.verdict == "pass"
    pm = verify_bound([PointMass(1), PointMass(1)], 1.0, 10**4, seed=0)
    assert pm.n_exceed_strict == 0 and pm.verdict == "pass"
    assert pm.n_exceed_weak == 10**4
    weak = verify_bound([Bernoulli(0.5)], 1.0, 10**6, seed=3, event="weak")
    assert weak.verdict == "fail"
    assert abs(weak.empirical_weak - 0.5) < 3 * math.sqrt(0.25 / 10**6)
    assert weak.empirical_strict == 0.0


def test_verify_reports_are_deterministic():
    args = ([Gaussian(0, 1), Bernoulli(0.3)], 1.0, 20_000, 77)
    assert verify_bound(*args) == verify_bound(*args, workers=3)


def test_verify_vacuous_and_invariants():
    rep = verify_bound([Gaussian(0, 1)], -0.5, 5000, seed=1)
    assert rep.verdict == "vacuous" and rep.three_sigma == 0.0
    rep = verify_bound([PointMass(0), Gaussian(0, 1)], 0.0, 5000, seed=1)
    assert rep.verdict == "vacuous"
    assert rep.n_exceed_weak >= rep.n_exceed_strict


def test_verify_validation():
    with pytest.raises(InvalidParam):
        verify_bound([Gaussian(0, 1)], 1.0, 999, seed=0)
    with pytest.raises(InvalidParam):
        verify_bound([Gaussian(0, 1)], 1.0, 5000, seed=0, event="both")
    with pytest.raises(InvalidParam):
        sample(Gaussian(0, 1), 0, seed=0)
