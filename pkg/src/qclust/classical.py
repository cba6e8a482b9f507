"""Optimal clustering of classical data drawn from two unknown (or known)
categorical distributions.

The unknown-distribution protocol groups equal symbols and solves an exact
balanced-partition instance over the occurrence counts; its success
probability is an exact rational sum over weak compositions.  Known
distributions admit closed forms for d = 2, 3 and Monte Carlo above that.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, sqrt

import numpy as np

from .clusterings import Clustering, canonical_string, string_to_clustering
from .errors import GuardError

PARTITION_SOLVER_GUARD = 30
COMPOSITION_GUARD = 10**6
MC_CHUNK = 1 << 13


# ---------------------------------------------------------------------------
# priors on the simplex

def sample_simplex_uniform(d: int, rng: np.random.Generator, size: int | None = None):
    """Flat samples on the probability simplex via normalized exponential
    spacings."""
    if d < 2:
        raise ValueError("d must be >= 2")
    shape = (d,) if size is None else (size, d)
    g = -np.log(rng.random(shape))
    return g / g.sum(axis=-1, keepdims=True)


def sample_haar_induced(d: int, rng: np.random.Generator, size: int | None = None):
    """Outcome distributions of a fixed basis measurement on Haar-random
    pure states: squared moduli of a normalized complex Gaussian vector."""
    if d < 2:
        raise ValueError("d must be >= 2")
    shape = (d,) if size is None else (size, d)
    z = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    p = np.abs(z) ** 2
    return p / p.sum(axis=-1, keepdims=True)


def overlap_marginal(u, d: int):
    """Density (d-1)(1-u)^(d-2) of u = |<psi|phi>|^2 under the flat prior."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return (d - 1) * (1 - u) ** (d - 2)


def simplex_moment(nvec, d: int) -> Fraction:
    """E[prod p_s^(n_s)] under the flat simplex prior."""
    nvec = tuple(int(n) for n in nvec)
    if len(nvec) != d:
        raise ValueError("moment vector length must equal d")
    total = sum(nvec)
    num = factorial(d - 1)
    for n in nvec:
        num *= factorial(n)
    return Fraction(num, factorial(d - 1 + total))


# ---------------------------------------------------------------------------
# balanced partition of occurrence counts

@dataclass(frozen=True)
class PartitionSolution:
    """Symbol subset with the most balanced total count."""

    subset: tuple[int, ...]      # 0-based symbol indices
    bias: Fraction               # half the minimal count difference

    @property
    def difference(self) -> int:
        return int(2 * self.bias)


def min_count_difference(counts) -> int:
    """Minimal |sum(Q) - sum(complement)| over symbol subsets Q, by a
    bitset subset-sum sweep."""
    total = int(sum(counts))
    bits = 1
    for m in counts:
        bits |= bits << int(m)
    best = total
    for s in range(total // 2, -1, -1):
        if bits >> s & 1:
            best = total - 2 * s
            break
    return best


def solve_balanced_partition(counts, guard: int = PARTITION_SOLVER_GUARD) -> PartitionSolution:
    """Exact balanced partition via subset-sum DP over achievable sums.

    Among all optimally balanced subsets the one with the smallest bitmask
    (symbol 0 = least significant bit) is returned, which makes downstream
    guesses deterministic.
    """
    counts = [int(m) for m in counts]
    if any(m < 0 for m in counts):
        raise ValueError("counts must be nonnegative")
    if len(counts) > guard:
        raise GuardError(f"partition solver guard is d <= {guard}")
    total = sum(counts)
    # per achievable sum, the minimal mask reaching it
    best_mask: dict[int, int] = {0: 0}
    for idx, m in enumerate(counts):
        bit = 1 << idx
        updates = {}
        for s, mask in best_mask.items():
            cand = mask | bit
            t = s + m
            prev = best_mask.get(t)
            cur = updates.get(t)
            if (prev is None or cand < prev) and (cur is None or cand < cur):
                updates[t] = cand
        for t, mask in updates.items():
            prev = best_mask.get(t)
            if prev is None or mask < prev:
                best_mask[t] = mask
    diff = min(abs(2 * s - total) for s in best_mask)
    candidates = [mask for s, mask in best_mask.items() if abs(2 * s - total) == diff]
    mask = min(candidates)
    subset = tuple(i for i in range(len(counts)) if mask >> i & 1)
    return PartitionSolution(subset=subset, bias=Fraction(diff, 2))


# ---------------------------------------------------------------------------
# unknown distributions: guess rule, joint probability, success probability

def optimal_guess_unknown(r) -> Clustering:
    """Group equal symbols, then merge the symbol groups into two clusters
    as evenly as possible; returns the resulting binary clustering."""
    r = tuple(r)
    symbols = sorted(set(r))
    counts = [sum(1 for s in r if s == sym) for sym in symbols]
    sol = solve_balanced_partition(counts)
    chosen = {symbols[i] for i in sol.subset}
    bits = tuple(1 if s in chosen else 0 for s in r)
    return string_to_clustering(bits)


def joint_probability(r, x, d: int) -> Fraction:
    """Pr(r, x): the chance that roulette sequence x produced data string r,
    averaged over flat priors for both distributions.

    x is a 0/1 tuple (0 = first roulette); symbols in r are 1..d.
    """
    r, x = tuple(r), tuple(x)
    if len(r) != len(x):
        raise ValueError("data string and roulette sequence lengths differ")
    N = len(r)
    db = d - 1
    n_counts = [0] * d
    m_counts = [0] * d
    for sym, lab in zip(r, x):
        if not 1 <= sym <= d:
            raise ValueError(f"symbol {sym} outside 1..{d}")
        if lab == 0:
            n_counts[sym - 1] += 1
        else:
            m_counts[sym - 1] += 1
    num = factorial(db) ** 2
    for c in n_counts:
        num *= factorial(c)
    for c in m_counts:
        num *= factorial(c)
    den = 2**N * factorial(db + sum(m_counts)) * factorial(db + sum(n_counts))
    return Fraction(num, den)


def weak_compositions(n: int, k: int):
    """Ordered tuples of k nonnegative integers summing to n."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in weak_compositions(n - first, k - 1):
            yield (first,) + rest


def composition_count(N: int, d: int) -> int:
    return comb(N + d - 1, d - 1)


def success_exact_unknown(N: int, d: int, guard: int = COMPOSITION_GUARD) -> Fraction:
    """Exact optimal success probability for unknown distributions:
    a bias-weighted sum over weak compositions of N into d parts."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    if composition_count(N, d) > guard:
        raise GuardError(
            f"{composition_count(N, d)} compositions exceed the guard {guard}"
        )
    db = d - 1
    base = 2 * factorial(db) ** 2 * factorial(N)
    total = Fraction(0)
    for counts in weak_compositions(N, d):
        diff = min_count_difference(counts)  # = 2*Delta
        a1 = db + (N + diff) // 2
        a2 = db + (N - diff) // 2
        total += Fraction(base, 2**N * factorial(a1) * factorial(a2))
    return total


def success_asymptotic_unknown(N: int, d: int) -> float:
    """Large-N tail (2/N)^d (2d-2)!/(d-2)!."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return (2 / N) ** d * factorial(2 * d - 2) / factorial(d - 2)


def xi0_exact(N: int, d: int, guard: int = COMPOSITION_GUARD) -> int:
    """Number of ordered compositions of N into d parts that admit a subset
    summing to exactly N/2."""
    if N % 2:
        raise ValueError("xi0 is defined for even N")
    if composition_count(N, d) > guard:
        raise GuardError("composition guard exceeded")
    return sum(1 for c in weak_compositions(N, d) if min_count_difference(c) == 0)


def xi0_asymptotic(N: int, d: int) -> float:
    return 0.5 * (N / 2) ** (d - 2) * factorial(2 * d - 2) / (
        factorial(d - 2) * factorial(d - 1) ** 2
    )


# ---------------------------------------------------------------------------
# known distributions

def success_known_classical(P, Q, N: int) -> float:
    """Per-symbol maximum-likelihood labeling: ((sum max)^N + (sum min)^N)/2^N."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise ValueError("distributions must share an alphabet")
    a = np.maximum(P, Q).sum()
    b = np.minimum(P, Q).sum()
    return float((a**N + b**N) / 2**N)


def average_known_classical_exact(N: int, d: int) -> Fraction:
    """Exact prior-averaged success for known distributions, d = 2 or 3.

    Both reduce to even moments of the total-variation distance V between
    two flat simplex points: E[V^k] = 2/((k+1)(k+2)) for d = 2 and
    24/((k+2)(k+3)(k+4)) for d = 3; the d = 2 sum telescopes to
    (8 - 2^(2-N)) / ((N+2)(N+1)).
    """
    if d == 2:
        return (Fraction(8) - Fraction(4, 2**N)) / ((N + 2) * (N + 1))
    if d == 3:
        total = Fraction(0)
        for k in range(0, N + 1, 2):
            total += comb(N, k) * Fraction(24, (k + 2) * (k + 3) * (k + 4))
        return Fraction(2, 2**N) * total
    raise ValueError("closed forms exist only for d = 2, 3")


@dataclass
class KnownClassicalAverage:
    value: float
    exact: Fraction | None
    stderr: float | None
    asymptote: float


def average_known_classical(N: int, d: int, trials: int = 200_000,
                            seed: int = 0) -> KnownClassicalAverage:
    """Prior-averaged known-distribution success: exact for d <= 3,
    Monte Carlo over flat simplex pairs for larger alphabets."""
    asym = success_asymptotic_unknown(N, d)
    if d in (2, 3):
        exact = average_known_classical_exact(N, d)
        return KnownClassicalAverage(value=float(exact), exact=exact, stderr=None, asymptote=asym)
    rng = np.random.default_rng(seed)
    P = sample_simplex_uniform(d, rng, size=trials)
    Q = sample_simplex_uniform(d, rng, size=trials)
    a = np.maximum(P, Q).sum(axis=1)
    b = 2.0 - a
    vals = (a**N + b**N) / 2**N
    est = float(vals.mean())
    return KnownClassicalAverage(
        value=est, exact=None, stderr=float(vals.std(ddof=1) / sqrt(trials)), asymptote=asym
    )


# ---------------------------------------------------------------------------
# Monte Carlo validation of the unknown-distribution protocol

@dataclass
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int


def mc_unknown_success(N: int, d: int, trials: int, seed: int,
                       threads: int | None = None) -> MonteCarloEstimate:
    """Sample (P, Q), a roulette sequence, and a data string; score the
    exact protocol's guess against the true clustering.

    Chunked RNG streams keyed by (seed, chunk) keep the result independent
    of the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    chunks = [(i, min(MC_CHUNK, trials - i * MC_CHUNK)) for i in range((trials + MC_CHUNK - 1) // MC_CHUNK)]

    def run_chunk(args):
        idx, size = args
        rng = np.random.default_rng([seed, idx])
        wins = 0
        for _ in range(size):
            cum = np.stack([
                sample_simplex_uniform(d, rng).cumsum(),
                sample_simplex_uniform(d, rng).cumsum(),
            ])
            labels = rng.integers(0, 2, size=N)
            u = rng.random(N)
            r = tuple(
                int(min(np.searchsorted(cum[lab], uu), d - 1)) + 1
                for lab, uu in zip(labels, u)
            )
            guess = optimal_guess_unknown(r)
            truth = canonical_string(tuple(int(v) for v in labels))
            wins += guess.string == truth
        return wins

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            wins = sum(pool.map(run_chunk, chunks))
    else:
        wins = sum(map(run_chunk, chunks))
    p = wins / trials
    return MonteCarloEstimate(estimate=p, stderr=sqrt(max(p * (1 - p), 1e-300) / trials), trials=trials)
