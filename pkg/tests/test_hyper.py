import math

import numpy as np
import pytest
from scipy import special

from jackmoments.hyper import hyper_0F1, hyper_pFq, stiefel_log_volume
from jackmoments.jack import PoleError, TableTooSmallError, build_jack_table, rising_factorial
from jackmoments.partitions import partitions_of

BETAS = (1, 2, 4, 8)


@pytest.fixture(scope="module")
def tables():
    return {b: build_jack_table(12, b) for b in BETAS}


def scalar_series(a, b, x, deg):
    total = 0.0
    for k in range(deg + 1):
        num = math.prod(rising_factorial(ai, k) for ai in a)
        den = math.prod(rising_factorial(bj, k) for bj in b)
        total += num / den * x**k / math.factorial(k)
    return total


def binom(top, k):
    """Generalized binomial coefficient as a falling-factorial product."""
    return math.prod((top - j) / (j + 1) for j in range(k))


@pytest.mark.parametrize("beta", BETAS)
def test_zero_argument(tables, beta):
    for a, b in [((), ()), ((1.3,), (12.2,)), ((0.5, 2.0), (13.0,))]:
        assert hyper_pFq(a, b, [0.0, 0.0, 0.0], beta, tables[beta], 12).value == 1.0


def test_0F0_is_exponential(tables):
    for deg in range(13):
        expected = math.fsum(0.7**k / math.factorial(k) for k in range(deg + 1))
        assert hyper_pFq((), (), [0.7], 1, tables[1], deg).value == pytest.approx(expected, rel=1e-15)


def test_0F0_is_etr(tables):
    # sum_kappa C_kappa = tr^k so 0F0(X) = etr(X) for any number of variables
    x = [0.2, -0.1, 0.3]
    assert hyper_pFq((), (), x, 2, tables[2], 12).value == pytest.approx(math.exp(sum(x)), rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.7])
def test_1F0_binomial_partial_sums(tables, a):
    x = 0.3
    for deg in (3, 8, 12):
        oracle = math.fsum(binom(-a, k) * (-x) ** k for k in range(deg + 1))
        assert hyper_pFq((a,), (), [x], 4, tables[4], deg).value == pytest.approx(oracle, rel=1e-13)


def test_0F1_bessel(tables):
    for beta in (1, 2, 4, 8):
        res = hyper_0F1(1.0, [0.25], beta, tables[beta], 12)
        assert res.value == pytest.approx(1.26606587775, abs=1e-11)
        assert abs(res.value - special.i0(1.0)) <= 1e-12


def test_0F1_leading_behaviour(tables):
    x = [0.4, 0.1]
    b = 1e4
    res = hyper_0F1(b, x, 1, tables[1], 1)
    assert res.value == pytest.approx(1 + sum(x) / b, rel=1e-15)
    assert res.terms_evaluated == 2


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("params", [((), (2.5,)), ((1.5,), ()), ((0.5, 1.25), (3.5,)), ((2.0,), (4.0, 1.5))])
def test_scalar_reduction(tables, beta, params):
    a, b = params
    x = 0.35
    got = hyper_pFq(a, b, [x], beta, tables[beta], 12).value
    assert got == pytest.approx(scalar_series(a, b, x, 12), rel=1e-12)


@pytest.mark.parametrize("beta", [1, 2, 4])
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_1F0_determinant_identity(tables, beta, m, a):
    rng = np.random.default_rng(100 * beta + 10 * m)
    x = rng.uniform(-0.2, 0.2, size=m)
    res = hyper_pFq((a,), (), x, beta, tables[beta], 12)
    exact = math.prod((1 - xi) ** (-a) for xi in x)
    assert abs(res.value - exact) <= 10 * res.last_shell


def test_last_shell_eventually_decreases(tables):
    rng = np.random.default_rng(1)
    for beta in (1, 2, 4):
        for m in (1, 2, 3):
            x = rng.uniform(0, 1, size=m)
            x /= max(1.0, np.sqrt(np.sum(x**2)))
            shells = [hyper_0F1(beta * 3 / 2, x, beta, tables[beta], d).last_shell for d in range(4, 13)]
            assert all(s1 < s0 for s0, s1 in zip(shells, shells[1:]))


def test_terms_evaluated_counts_partitions(tables):
    res = hyper_0F1(2.0, [0.1, 0.2], 1, tables[1], 6)
    assert res.terms_evaluated == sum(len(partitions_of(k, 2)) for k in range(7))


def test_pole_and_table_errors(tables):
    with pytest.raises(PoleError):
        hyper_0F1(0.0, [0.5], 1, tables[1], 3)
    with pytest.raises(PoleError):
        hyper_0F1(0.2, [0.5, 0.1, 0.3], 2, tables[2], 3)
    with pytest.raises(TableTooSmallError):
        hyper_0F1(1.0, [0.5], 1, build_jack_table(4, 1), 5)


def test_stiefel_volume_examples():
    assert stiefel_log_volume(1, 2, 1) == pytest.approx(math.log(2 * math.pi), abs=1e-12)
    assert stiefel_log_volume(1, 3, 1) == pytest.approx(math.log(4 * math.pi), abs=1e-12)
    assert stiefel_log_volume(1, 1, 2) == pytest.approx(math.log(2 * math.pi), abs=1e-12)


@pytest.mark.parametrize("beta", [1, 2, 4, 8])
@pytest.mark.parametrize("n", [1, 2, 3, 7, 50])
def test_stiefel_volume_m1_is_sphere_area(beta, n):
    d = n * beta  # V_{1,n} is the unit sphere in R^d
    expected = math.log(2) + d / 2 * math.log(math.pi) - math.lgamma(d / 2)
    assert stiefel_log_volume(1, n, beta) == pytest.approx(expected, abs=1e-12)


def test_stiefel_volume_orthogonal_group():
    # V_{2,2} over R is O(2): two circles, total 2 * 2pi times the sphere S^0 factor
    assert math.exp(stiefel_log_volume(2, 2, 1)) == pytest.approx(2 * math.pi * 2, rel=1e-13)


def test_stiefel_volume_large_n_is_finite():
    v = stiefel_log_volume(3, 300, 4)
    assert math.isfinite(v) and v < 0
    with pytest.raises(ValueError):
        stiefel_log_volume(3, 2, 1)
