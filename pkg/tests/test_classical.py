from fractions import Fraction
from itertools import product
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from qclust.classical import (
    average_known_classical,
    average_known_classical_exact,
    joint_probability,
    mc_unknown_success,
    min_count_difference,
    optimal_guess_unknown,
    overlap_marginal,
    sample_haar_induced,
    sample_simplex_uniform,
    simplex_moment,
    solve_balanced_partition,
    success_asymptotic_unknown,
    success_exact_unknown,
    success_known_classical,
    weak_compositions,
    xi0_asymptotic,
    xi0_exact,
)
from qclust.clusterings import canonical_string
from qclust.errors import GuardError


# ---------------------------------------------------------------------------
# priors and moments

def test_simplex_sampler_normalization():
    rng = np.random.default_rng(0)
    p = sample_simplex_uniform(3, rng, size=1000)
    assert np.allclose(p.sum(axis=1), 1, atol=1e-12)
    assert (p >= 0).all()


def test_haar_sampler_normalization():
    rng = np.random.default_rng(0)
    p = sample_haar_induced(4, rng, size=1000)
    assert np.allclose(p.sum(axis=1), 1, atol=1e-12)
    assert (p >= 0).all()


def test_simplex_moment_formula():
    assert simplex_moment((1, 0), 2) == Fraction(1, 2)
    assert simplex_moment((1, 1, 0), 3) == Fraction(1, 12)
    assert simplex_moment((2, 0), 2) == Fraction(1, 3)


def _moment_vectors(d, max_degree):
    out = []
    for v in product(range(max_degree + 1), repeat=d):
        if 1 <= sum(v) <= max_degree:
            out.append(v)
    return out


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("sampler", [sample_simplex_uniform, sample_haar_induced])
def test_sampler_moments_match_formula(d, sampler):
    rng = np.random.default_rng(42)
    M = 200_000
    p = sampler(d, rng, size=M)
    for nvec in _moment_vectors(d, 3):
        vals = np.ones(M)
        for s, n in enumerate(nvec):
            if n:
                vals = vals * p[:, s] ** n
        target = float(simplex_moment(nvec, d))
        sigma = vals.std(ddof=1) / sqrt(M)
        assert abs(vals.mean() - target) < 4 * sigma + 1e-12, nvec


def test_samplers_statistically_identical():
    rng = np.random.default_rng(7)
    a = sample_simplex_uniform(3, rng, size=100_000)[:, 0]
    b = sample_haar_induced(3, rng, size=100_000)[:, 0]
    assert stats.ks_2samp(a, b).pvalue > 0.001


def test_overlap_marginal():
    assert overlap_marginal(0.4, 2) == 1.0
    assert overlap_marginal(0.25, 3) == pytest.approx(1.5)
    for d in range(2, 7):
        grid = np.linspace(0, 1, 20001)
        val = np.trapezoid(overlap_marginal(grid, d), grid)
        assert val == pytest.approx(1.0, abs=1e-6)


# ---------------------------------------------------------------------------
# balanced partition

def brute_force_partition(counts):
    total = sum(counts)
    best = total
    for mask in range(2 ** len(counts)):
        s = sum(c for i, c in enumerate(counts) if mask >> i & 1)
        best = min(best, abs(2 * s - total))
    return best


def test_partition_examples():
    assert solve_balanced_partition([5, 5, 2]).bias == 1
    assert solve_balanced_partition([7]).bias == Fraction(7, 2)
    assert solve_balanced_partition([3, 3]).bias == 0
    assert solve_balanced_partition([3, 3]).subset == (0,)


def test_partition_guard():
    with pytest.raises(GuardError):
        solve_balanced_partition([1] * 31)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=12))
def test_partition_solver_matches_brute_force(counts):
    sol = solve_balanced_partition(counts)
    expected = brute_force_partition(counts)
    assert sol.difference == expected
    assert min_count_difference(counts) == expected
    in_subset = sum(counts[i] for i in sol.subset)
    assert abs(2 * in_subset - sum(counts)) == expected


def test_partition_solver_random_vectors_bulk():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        d = int(rng.integers(1, 13))
        counts = rng.integers(0, 30, size=d).tolist()
        assert solve_balanced_partition(counts).difference == brute_force_partition(counts)


# ---------------------------------------------------------------------------
# unknown-distribution protocol

def test_guess_rule_footnote_example():
    r = (1, 1, 2, 3, 2, 1, 2, 2, 3, 1, 1, 2)
    guess = optimal_guess_unknown(r)
    cluster_positions = {i for i, b in enumerate(guess.string) if guess.string[i] != guess.string[2]}
    # the five occurrences of symbol 1 form one cluster (positions 0-indexed)
    expected = {0, 1, 5, 9, 10}
    got_a = {i for i, b in enumerate(guess.string) if b == 0}
    got_b = {i for i, b in enumerate(guess.string) if b == 1}
    assert expected in (got_a, got_b)


def test_guess_rule_trivial_cases():
    assert optimal_guess_unknown((2, 2, 2, 2)).n == 0
    alternating = optimal_guess_unknown((1, 2, 1, 2, 1, 2))
    assert alternating.string in (canonical_string((0, 1, 0, 1, 0, 1)),)


def test_joint_probability_single_site():
    assert joint_probability((1,), (0,), 2) == Fraction(1, 4)
    assert joint_probability((2,), (1,), 2) == Fraction(1, 4)


@pytest.mark.parametrize("N,d", [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_joint_probability_normalization(N, d):
    total = sum(
        joint_probability(r, x, d)
        for r in product(range(1, d + 1), repeat=N)
        for x in product((0, 1), repeat=N)
    )
    assert total == 1


@pytest.mark.parametrize("N,d", [(4, 2), (6, 2), (4, 3)])
def test_maximizer_groups_symbols(N, d):
    # the best roulette sequence never splits a symbol group
    rng = np.random.default_rng(2)
    for _ in range(12):
        r = tuple(int(v) for v in rng.integers(1, d + 1, size=N))
        best = max(
            product((0, 1), repeat=N), key=lambda x: joint_probability(r, x, d)
        )
        for sym in set(r):
            labels = {best[i] for i in range(N) if r[i] == sym}
            assert len(labels) == 1


def bruteforce_success_unknown(N, d):
    total = Fraction(0)
    for r in product(range(1, d + 1), repeat=N):
        total += max(
            joint_probability(r, x, d) for x in product((0, 1), repeat=N)
        )
    return 2 * total


@pytest.mark.parametrize("N,d", [(1, 2), (2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3)])
def test_success_exact_matches_bruteforce(N, d):
    assert success_exact_unknown(N, d) == bruteforce_success_unknown(N, d)


def test_success_exact_table_values():
    assert success_exact_unknown(2, 2) == Fraction(7, 12)
    assert success_exact_unknown(2, 3) == Fraction(7, 12)
    assert success_exact_unknown(3, 3) == Fraction(11, 30)
    assert success_exact_unknown(4, 3) == Fraction(1, 4)
    assert f"{float(success_exact_unknown(5, 3)):.3f}" == "0.176"
    assert f"{float(success_exact_unknown(6, 3)):.3f}" == "0.130"


def test_success_exact_d2_closed_form():
    for N in range(1, 13):
        expected = (Fraction(8) - Fraction(4, 2**N)) / ((N + 2) * (N + 1))
        assert success_exact_unknown(N, 2) == expected


def test_success_exact_guard():
    with pytest.raises(GuardError):
        success_exact_unknown(2000, 4, guard=1000)


def test_asymptote_values():
    assert success_asymptotic_unknown(100, 2) == pytest.approx(8 / 100**2)
    assert success_asymptotic_unknown(50, 3) == pytest.approx((2 / 50) ** 3 * 24)


def test_asymptote_convergence_d2():
    exact = success_exact_unknown(200, 2)
    assert abs(float(exact) / success_asymptotic_unknown(200, 2) - 1) < 0.15


def test_xi0():
    assert xi0_exact(4, 2) == 1
    # (2,2),(1,2,1)... d=3, N=4: enumerated by hand via the solver
    assert xi0_exact(4, 3) == sum(
        1 for c in weak_compositions(4, 3) if min_count_difference(c) == 0
    )
    with pytest.raises(ValueError):
        xi0_exact(5, 2)


def test_xi0_ratio_tends_to_one():
    # at d=3 the tail formula is exact for every even N (xi0 = 3N/2)
    for N in (8, 40, 200):
        assert xi0_exact(N, 3) == 3 * N // 2 == round(xi0_asymptotic(N, 3))
    devs = [abs(xi0_exact(N, 4) / xi0_asymptotic(N, 4) - 1) for N in (20, 40, 80)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[-1] < 0.02


# ---------------------------------------------------------------------------
# known distributions

def test_known_classical_identical_distributions():
    p = [0.2, 0.5, 0.3]
    for N in (1, 3, 6):
        assert success_known_classical(p, p, N) == pytest.approx(2.0 ** (1 - N))


def test_known_classical_orthogonal_supports():
    assert success_known_classical([1, 0], [0, 1], 7) == pytest.approx(1.0)


def test_average_known_exact_values():
    assert average_known_classical_exact(2, 3) == Fraction(3, 5)
    assert average_known_classical_exact(3, 3) == Fraction(2, 5)
    assert average_known_classical_exact(3, 2) == Fraction(3, 8)
    assert average_known_classical_exact(4, 3) == Fraction(159, 560)


def test_average_known_d2_equals_unknown():
    for N in range(1, 10):
        assert average_known_classical_exact(N, 2) == success_exact_unknown(N, 2)


def test_average_known_exceeds_unknown_for_d3():
    for N in range(2, 7):
        assert average_known_classical_exact(N, 3) > success_exact_unknown(N, 3)


def test_average_known_montecarlo_agrees_with_formula():
    # d=3 has a closed form; force the MC path by calling the sampler branch
    res = average_known_classical(3, 4, trials=150_000, seed=3)
    assert res.exact is None and res.stderr is not None
    # cross-check the MC machinery at d=3 against the exact value
    rng = np.random.default_rng(11)
    P = sample_simplex_uniform(3, rng, size=200_000)
    Q = sample_simplex_uniform(3, rng, size=200_000)
    a = np.maximum(P, Q).sum(axis=1)
    vals = (a**3 + (2 - a) ** 3) / 8
    target = float(average_known_classical_exact(3, 3))
    assert abs(vals.mean() - target) < 4 * vals.std(ddof=1) / sqrt(len(vals))


def test_average_known_asymptote_matches_unknown_tail():
    res = average_known_classical(30, 3)
    assert res.asymptote == pytest.approx(success_asymptotic_unknown(30, 3))


def test_known_average_tail_convergence():
    for d in (2, 3):
        exact = float(average_known_classical_exact(400, d))
        assert abs(exact / success_asymptotic_unknown(400, d) - 1) < 0.08


# ---------------------------------------------------------------------------
# Monte Carlo protocol validation

@pytest.mark.parametrize("N,d", [(4, 2), (4, 3)])
def test_protocol_simulation_matches_exact(N, d):
    trials = 100_000
    res = mc_unknown_success(N, d, trials=trials, seed=13)
    target = float(success_exact_unknown(N, d))
    sigma = sqrt(target * (1 - target) / trials)
    assert abs(res.estimate - target) < 4 * sigma


def test_protocol_simulation_reproducible():
    a = mc_unknown_success(3, 2, trials=20_000, seed=5)
    b = mc_unknown_success(3, 2, trials=20_000, seed=5, threads=3)
    assert a.estimate == b.estimate
