"""Clustering with known quantum states: square-root-measurement success
probabilities, prior-averaged performance, an unambiguous variant, a local
Helstrom Monte Carlo, and the optimality check for the mixed-state POVM.

The two possible states span a two-dimensional subspace whatever the qudit
dimension, so all state work happens in that plane; d enters only through
the overlap prior (d-1)(1-c^2)^(d-2).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import sqrt

import numpy as np

from .errors import GuardError, NumericError

MC_CHUNK = 1 << 14


def _check_overlap(c: float) -> float:
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    return c


def success_known_pure(c: float, N: int) -> float:
    """((1 + sqrt(1-c^2))/2)^N: all N labels guessed correctly."""
    c = _check_overlap(c)
    if N < 1:
        raise ValueError("N must be >= 1")
    return ((1 + sqrt(1 - c * c)) / 2) ** N


def success_known_clustering(c: float, N: int) -> float:
    """Pure-string success plus the all-labels-flipped term, which also
    yields the right clustering."""
    c = _check_overlap(c)
    if N < 1:
        raise ValueError("N must be >= 1")
    q = (1 + sqrt(1 - c * c)) / 2
    return q**N + (1 - q) ** N


def overlap_density(u: float, d: int) -> float:
    """Prior density of u = c^2 for Haar-random pure state pairs."""
    return (d - 1) * (1 - u) ** (d - 2)


# ---------------------------------------------------------------------------
# quadrature

def gauss_legendre_adaptive(f, a: float, b: float, rtol: float = 1e-12,
                            order: int = 24, max_panels: int = 1 << 14) -> float:
    """Composite Gauss-Legendre with panel doubling until two successive
    estimates agree to rtol (relative on max(1, |value|))."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    last = None
    panels = 1
    while panels <= max_panels:
        edges = np.linspace(a, b, panels + 1)
        mid = (edges[1:] + edges[:-1]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        x = (mid[:, None] + half[:, None] * nodes[None, :]).reshape(-1)
        w = (half[:, None] * weights[None, :]).reshape(-1)
        val = float(np.dot(w, f(x)))
        if last is not None and abs(val - last) <= rtol * max(1.0, abs(val)):
            return val
        last = val
        panels *= 2
    raise NumericError(
        f"quadrature failed to converge to rtol={rtol} within {max_panels} panels"
    )


@dataclass
class AverageResult:
    value: float
    asymptote: float


def average_success_known(N: int, d: int, variant: str = "pure") -> AverageResult:
    """Average success over the Haar-induced overlap prior, with the
    4(d-1)/N asymptote."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    if variant not in ("pure", "clustering"):
        raise ValueError(f"unknown variant {variant!r}")

    # substituting v = sqrt(1 - u) makes the integrand polynomial, which the
    # u-form is not (sqrt kink at u = 1 stalls panel doubling)
    def integrand(v):
        ps = ((1 + v) / 2) ** N
        if variant == "clustering":
            ps = ps + ((1 - v) / 2) ** N
        return 2 * (d - 1) * v ** (2 * d - 3) * ps

    value = gauss_legendre_adaptive(integrand, 0.0, 1.0)
    return AverageResult(value=value, asymptote=4 * (d - 1) / N)


def unambiguous_average(N: int, d: int) -> AverageResult:
    """Average probability that unambiguous per-copy identification labels
    the whole string, 2 int c mu(c^2) (1-c)^N dc, with its 2(d-1)/N^2 tail."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")

    def integrand(c):
        return 2 * c * overlap_density(c * c, d) * (1 - c) ** N

    value = gauss_legendre_adaptive(integrand, 0.0, 1.0)
    return AverageResult(value=value, asymptote=2 * (d - 1) / N**2)


# ---------------------------------------------------------------------------
# Monte Carlo with the local Helstrom measurement

@dataclass
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int


def helstrom_simulate(c: float, N: int, trials: int, seed: int,
                      mode: str = "pure", threads: int | None = None) -> MonteCarloEstimate:
    """Simulate per-site measurement in the +/- basis on random input
    strings and score exact string recovery (or recovery up to complement).

    Trials are split into fixed-size chunks with RNG streams seeded by
    (seed, chunk), so results do not depend on the worker count.
    """
    c = _check_overlap(c)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if mode not in ("pure", "clustering"):
        raise ValueError(f"unknown mode {mode!r}")
    # |<psi_b | phi_x>|^2 = (1 +/- sqrt(1-c^2))/2, independent of the site label
    p_correct = (1 + sqrt(1 - c * c)) / 2

    chunks = [(i, min(MC_CHUNK, trials - i * MC_CHUNK)) for i in range((trials + MC_CHUNK - 1) // MC_CHUNK)]

    def run_chunk(args):
        idx, size = args
        rng = np.random.default_rng([seed, idx])
        labels = rng.integers(0, 2, size=(size, N))
        outcome_correct = rng.random((size, N)) < p_correct
        guessed = np.where(outcome_correct, labels, 1 - labels)
        exact = (guessed == labels).all(axis=1)
        if mode == "pure":
            return int(exact.sum())
        flipped = (guessed == 1 - labels).all(axis=1)
        return int((exact | flipped).sum())

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            wins = sum(pool.map(run_chunk, chunks))
    else:
        wins = sum(map(run_chunk, chunks))
    p = wins / trials
    stderr = sqrt(max(p * (1 - p), 1e-300) / trials)
    return MonteCarloEstimate(estimate=p, stderr=stderr, trials=trials)


# ---------------------------------------------------------------------------
# mixed-state (complement-identified) POVM optimality

@dataclass
class MixedPovmReport:
    passed: bool
    min_eigenvalue: float
    null_eigenvalues: int


def verify_known_mixed_povm(c: float, N: int, tol: float = 1e-9,
                            guard: int = 4096) -> MixedPovmReport:
    """Check the optimality conditions for the complement-identified
    known-state measurement inside the 2^N-dimensional product span:
    Gamma is symmetric and Gamma - rho_x is PSD with two null directions."""
    c = _check_overlap(c)
    if not c < 1.0:
        raise ValueError("c = 1 is the degenerate case; require c < 1")
    if 2**N > guard:
        raise GuardError(f"2^N = {2**N} exceeds guard {guard}")
    alpha = sqrt((1 + c) / 2)
    beta = sqrt((1 - c) / 2)
    phi = {0: np.array([alpha, beta]), 1: np.array([alpha, -beta])}
    psi = {0: np.array([1, 1]) / sqrt(2), 1: np.array([1, -1]) / sqrt(2)}

    def product_state(table, bits):
        v = table[bits[0]]
        for b in bits[1:]:
            v = np.kron(v, table[b])
        return v

    dim = 2**N
    strings = [bits for bits in product((0, 1), repeat=N) if bits <= tuple(1 - b for b in bits)]
    gamma = np.zeros((dim, dim))
    rhos, povms = [], []
    for bits in strings:
        comp = tuple(1 - b for b in bits)
        big_phi = product_state(phi, bits)
        big_phi_c = product_state(phi, comp)
        rho = (np.outer(big_phi, big_phi) + np.outer(big_phi_c, big_phi_c)) / 2
        big_psi = product_state(psi, bits)
        big_psi_c = product_state(psi, comp)
        elem = np.outer(big_psi, big_psi) + np.outer(big_psi_c, big_psi_c)
        rhos.append(rho)
        povms.append(elem)
        gamma += rho @ elem
    completeness = np.allclose(sum(povms), np.eye(dim), atol=1e-12)
    symmetric = np.allclose(gamma, gamma.T, atol=1e-10)
    min_eig = np.inf
    nulls = 0
    for rho in rhos:
        diff = gamma - rho
        w = np.linalg.eigvalsh((diff + diff.T) / 2)
        min_eig = min(min_eig, float(w[0]))
        nulls = max(nulls, int((np.abs(w) <= 1e-8).sum()))
    passed = completeness and symmetric and min_eig >= -tol
    return MixedPovmReport(passed=passed, min_eigenvalue=float(min_eig), null_eigenvalues=nulls)
