from fractions import Fraction
from math import comb, factorial, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qclust.errors import NumericError
from qclust.known_quantum import (
    average_success_known,
    gauss_legendre_adaptive,
    helstrom_simulate,
    overlap_density,
    success_known_clustering,
    success_known_pure,
    unambiguous_average,
    verify_known_mixed_povm,
)


# exact Beta-integral oracles (substitute v = sqrt(1-u) and expand)
def average_pure_exact(N: int, d: int) -> Fraction:
    return 2 * (d - 1) * Fraction(1, 2**N) * sum(
        Fraction(comb(N, k), k + 2 * d - 2) for k in range(N + 1)
    )


def average_clustering_exact(N: int, d: int) -> Fraction:
    extra = 2 * (d - 1) * Fraction(
        factorial(2 * d - 3) * factorial(N), 2**N * factorial(N + 2 * d - 2)
    )
    return average_pure_exact(N, d) + extra


def unambiguous_exact(N: int, d: int) -> Fraction:
    total = Fraction(0)
    for j in range(d - 1):
        total += comb(d - 2, j) * Fraction(
            factorial(j + 1) * factorial(N + d - 2), factorial(N + d + j + 1 - 1)
        )
    return 2 * (d - 1) * total


def test_success_known_pure_endpoints():
    assert success_known_pure(0.0, 5) == 1.0
    assert success_known_pure(1.0, 5) == pytest.approx(2.0**-5)
    # single copy reduces to the two-state Helstrom bound
    for c in (0.1, 0.5, 0.9):
        assert success_known_pure(c, 1) == pytest.approx((1 + sqrt(1 - c * c)) / 2)


def test_success_known_clustering_endpoints():
    assert success_known_clustering(1.0, 4) == pytest.approx(2.0 ** (1 - 4))
    assert success_known_clustering(0.0, 4) == 1.0
    for c in (0.2, 0.7):
        assert success_known_clustering(c, 1) == pytest.approx(1.0)


@given(st.floats(min_value=0, max_value=1), st.integers(min_value=1, max_value=40))
def test_clustering_dominates_pure(c, N):
    # gap is ((1-sqrt(1-c^2))/2)^N up to absorption against the large term
    q = (1 - sqrt(1 - c * c)) / 2
    gap = success_known_clustering(c, N) - success_known_pure(c, N)
    assert gap == pytest.approx(q**N, rel=1e-6, abs=1e-12)
    assert gap >= 0


def test_overlap_density_normalized():
    for d in range(2, 7):
        val = gauss_legendre_adaptive(lambda u: overlap_density(u, d), 0, 1)
        assert val == pytest.approx(1.0, abs=1e-12)
    assert overlap_density(0.3, 2) == 1.0
    assert overlap_density(0.25, 3) == pytest.approx(2 * 0.75)


def test_quadrature_failure_path():
    rng = np.random.default_rng(0)
    with pytest.raises(NumericError):
        gauss_legendre_adaptive(
            lambda x: rng.random(x.shape), 0, 1, rtol=1e-15, max_panels=4
        )


@pytest.mark.parametrize("N", [1, 2, 5, 10, 25])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_average_pure_matches_beta_oracle(N, d):
    res = average_success_known(N, d, "pure")
    assert res.value == pytest.approx(float(average_pure_exact(N, d)), abs=1e-10)


@pytest.mark.parametrize("N,d", [(1, 2), (4, 2), (7, 3), (12, 4)])
def test_average_clustering_matches_beta_oracle(N, d):
    res = average_success_known(N, d, "clustering")
    assert res.value == pytest.approx(float(average_clustering_exact(N, d)), abs=1e-10)


def test_average_pure_simple_value():
    # d=2, N=1: int (1+sqrt(1-u))/2 du = 5/6
    assert average_pure_exact(1, 2) == Fraction(5, 6)
    assert average_success_known(1, 2, "pure").value == pytest.approx(5 / 6, abs=1e-12)


def test_average_known_asymptote():
    for d in (2, 3):
        res = average_success_known(200, d, "pure")
        assert res.asymptote == pytest.approx(4 * (d - 1) / 200)
        assert 0.9 <= res.value * 200 / (4 * (d - 1)) <= 1.1
    res100 = average_success_known(100, 2, "pure")
    assert abs(res100.value / (4 / 100) - 1) < 0.1


def test_variants_converge_for_large_N():
    a = average_success_known(50, 2, "pure").value
    b = average_success_known(50, 2, "clustering").value
    assert abs(b - a) < 1e-6


@pytest.mark.parametrize("N,d", [(2, 2), (5, 2), (8, 3), (3, 4)])
def test_unambiguous_matches_beta_oracle(N, d):
    res = unambiguous_average(N, d)
    assert res.value == pytest.approx(float(unambiguous_exact(N, d)), abs=1e-10)
    assert res.asymptote == pytest.approx(2 * (d - 1) / N**2)


def test_unambiguous_example_value():
    assert unambiguous_exact(2, 2) == Fraction(1, 6)
    assert unambiguous_average(2, 2).value == pytest.approx(1 / 6, abs=1e-12)


def test_unambiguous_tail():
    res = unambiguous_average(400, 2)
    assert abs(res.value / res.asymptote - 1) < 0.05


def test_unambiguous_rejects_bad_args():
    with pytest.raises(ValueError):
        unambiguous_average(0, 2)
    with pytest.raises(ValueError):
        average_success_known(3, 1)


def test_helstrom_certain_when_orthogonal():
    res = helstrom_simulate(0.0, 4, trials=2000, seed=1)
    assert res.estimate == 1.0


def test_helstrom_within_four_sigma():
    c, N, trials = 0.5, 4, 100_000
    res = helstrom_simulate(c, N, trials=trials, seed=7)
    target = success_known_pure(c, N)
    sigma = sqrt(target * (1 - target) / trials)
    assert abs(res.estimate - target) < 4 * sigma
    resc = helstrom_simulate(c, N, trials=trials, seed=7, mode="clustering")
    targetc = success_known_clustering(c, N)
    sigc = sqrt(targetc * (1 - targetc) / trials)
    assert abs(resc.estimate - targetc) < 4 * sigc


def test_helstrom_seed_reproducibility():
    a = helstrom_simulate(0.3, 5, trials=50_000, seed=11)
    b = helstrom_simulate(0.3, 5, trials=50_000, seed=11)
    assert a.estimate == b.estimate
    c = helstrom_simulate(0.3, 5, trials=50_000, seed=11, threads=4)
    assert c.estimate == a.estimate  # worker count must not matter
    d = helstrom_simulate(0.3, 5, trials=50_000, seed=12)
    assert d.estimate != a.estimate


@pytest.mark.parametrize("c", [0.0, 0.5])
def test_known_mixed_povm_passes(c):
    report = verify_known_mixed_povm(c, 3)
    assert report.passed
    assert report.min_eigenvalue > -1e-9
    assert report.null_eigenvalues >= 2


def test_known_mixed_povm_rejects_degenerate_overlap():
    with pytest.raises(ValueError):
        verify_known_mixed_povm(1.0, 3)
