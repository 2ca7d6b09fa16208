import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from jackmoments.algebra import AlgebraTag, MatrixF, conj_transpose
from jackmoments.jack import build_jack_table, gen_pochhammer, jack_C, rising_factorial
from jackmoments.montecarlo import RandomStream, haar_sample
from jackmoments.partitions import partitions_of
from jackmoments.verify import (
    TruncationError,
    bessel_consistency,
    odd_moment_check,
    sphere_moment,
    theorem_rhs,
    theorem_rhs_from_eigenvalues,
    verify_moment_identity,
    xx_star_eigenvalues,
)

from conftest import random_matrix


def unit_x(beta, n=1):
    e = np.zeros((1, n, beta))
    e[0, 0, 0] = 1.0
    return MatrixF(e, AlgebraTag(beta))


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_rhs_low_orders(rng, beta):
    x = random_matrix(rng, 2, 3, beta)
    assert theorem_rhs(x, 0) == 1.0
    tr = float(np.sum(x.entries**2))
    assert theorem_rhs(x, 1) == pytest.approx(tr / (beta * 3), rel=1e-13)


def test_rhs_sphere_cell_is_one_fifth():
    assert theorem_rhs(unit_x(1, 3), 2) == pytest.approx(0.2, rel=1e-15)
    exact = theorem_rhs_from_eigenvalues([Fraction(1)], 3, 2, 1, exact=True)
    assert exact == Fraction(1, 5)


@pytest.mark.parametrize("beta", [1, 2, 4, 8])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_rhs_matches_sphere_closed_form(rng, beta, n):
    x = random_matrix(rng, 1, n, beta)
    r2 = float(np.sum(x.entries**2))
    for k in range(7):
        assert theorem_rhs(x, k) == pytest.approx(sphere_moment(r2, n, k, beta), rel=1e-12)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_rhs_scaling(rng, beta):
    x = random_matrix(rng, 2, 4, beta)
    for k in range(5):
        assert theorem_rhs(x.scale(1.7), k) == pytest.approx(1.7 ** (2 * k) * theorem_rhs(x, k), rel=1e-12)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_rhs_isometry_invariance(rng, beta):
    x = random_matrix(rng, 2, 3, beta)
    u = haar_sample(2, 2, beta, RandomStream(1))
    v = haar_sample(3, 3, beta, RandomStream(2))
    y = u @ x @ conj_transpose(v)
    for k in range(5):
        assert theorem_rhs(y, k) == pytest.approx(theorem_rhs(x, k), rel=1e-10)


@pytest.mark.parametrize("beta", [1, 2, 4, 8])
def test_moment_sum_matches_0F1_shell_exactly(beta):
    # degree-k shell of 0F1(beta n/2; B/4) equals the 2k-th moment sum over (2k)!
    eigs = [Fraction(3, 2), Fraction(2, 7), Fraction(1, 5)]
    n = 4
    table = build_jack_table(6, beta)
    b = Fraction(beta * n, 2)
    quarter = [e / 4 for e in eigs]
    for k in range(7):
        shell = sum(
            (jack_C(table, kappa, quarter, exact=True) / gen_pochhammer(b, kappa, beta) / math.factorial(k)
             for kappa in partitions_of(k, 3)),
            Fraction(0),
        )
        moment = theorem_rhs_from_eigenvalues(eigs, n, k, beta, table, exact=True)
        assert shell == moment / math.factorial(2 * k)
        assert 4**k * rising_factorial(Fraction(1, 2), k) / math.factorial(2 * k) == Fraction(1, math.factorial(k))


def test_octonion_rhs_for_single_row(rng):
    x = MatrixF(rng.standard_normal((1, 2, 8)), AlgebraTag(8))
    r2 = float(np.sum(x.entries**2))
    assert xx_star_eigenvalues(x)[0] == pytest.approx(r2)
    assert theorem_rhs(x, 3) == pytest.approx(sphere_moment(r2, 2, 3, 8), rel=1e-12)


def test_verify_k0_is_exact(rng):
    r = verify_moment_identity(random_matrix(rng, 2, 3, 4), 0, samples=10_000, seed=1)
    assert r.lhs_mean == r.rhs_exact == 1.0 and r.z_score == 0.0 and r.passed


def test_verify_circle_cell():
    r = verify_moment_identity(MatrixF.from_real([[1.0, 0.0]]), 1, samples=200_000, seed=2)
    assert r.rhs_exact == pytest.approx(0.5, rel=1e-15)
    assert r.passed and abs(r.lhs_mean - 0.5) < 0.01


def test_verify_unitary_cell():
    r = verify_moment_identity(unit_x(2), 1, samples=200_000, seed=3)
    assert r.rhs_exact == pytest.approx(0.5, rel=1e-15)
    assert r.passed


@pytest.mark.parametrize("beta,m,n,power", [(1, 1, 2, 1), (1, 2, 3, 3), (4, 1, 1, 5)])
def test_odd_moment_examples(rng, beta, m, n, power):
    r = odd_moment_check(random_matrix(rng, m, n, beta), power, samples=200_000, seed=power)
    assert r.rhs_exact == 0.0 and r.passed
    assert abs(r.lhs_mean) <= 4 * r.lhs_stderr


def test_odd_moment_rejects_even_power(rng):
    with pytest.raises(ValueError):
        odd_moment_check(random_matrix(rng, 1, 2, 1), 2, samples=10)


def test_bessel_examples():
    zero = bessel_consistency(MatrixF(np.zeros((1, 2, 1)), AlgebraTag(1)), samples=1000, seed=0)
    assert zero.lhs_mean == zero.rhs_exact == 1.0 and zero.passed
    i0 = bessel_consistency(unit_x(2), samples=200_000, seed=1)
    assert i0.rhs_exact == pytest.approx(special.i0(1.0), abs=1e-12)
    assert i0.passed
    sh = bessel_consistency(unit_x(1, 3), samples=200_000, seed=2)
    assert sh.rhs_exact == pytest.approx(math.sinh(1.0), abs=1e-12)
    assert sh.passed


def test_bessel_refuses_coarse_truncation(rng):
    with pytest.raises(TruncationError):
        bessel_consistency(random_matrix(rng, 2, 3, 1).scale(5.0), max_degree=6, samples=100)


def test_report_serialization(rng):
    r = verify_moment_identity(random_matrix(rng, 1, 2, 1), 1, samples=1000, seed=1)
    d = r.to_dict(timing=False)
    assert "runtime_ms" not in d and d["pass"] is r.passed
    assert set(r.to_dict()) >= {"beta", "m", "n", "k", "samples", "seed", "lhs_mean", "lhs_stderr",
                                 "rhs_exact", "z_score", "pass", "runtime_ms"}
