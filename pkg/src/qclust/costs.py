"""Cost functions over clustering pairs and the induced optimal guess rules.

Four costs are supported: the 0/1 cost, the complement-identified Hamming
distance, and the trace distance / infidelity between the averaged states.
The first two are exact rationals; the last two are double precision.  Risk
operators, per-irrep block spectra, guess tables, minimum average costs, and
the support-containment condition for POVM optimality under general costs
all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .clusterings import (
    Clustering,
    complement_string,
    effective_state,
    enumerate_clusterings,
    reference_clustering,
    state_normalization,
    string_to_clustering,
)
from .errors import GuardError, StructureError
from .exact import RationalMatrix
from .partitions import (
    dim_symgroup_irrep,
    dim_unitary_irrep,
    enumerate_two_row_irreps,
    normalize_partition,
    partitions_of,
)
from .permutations import Permutation
from .rep_ops import (
    OPERATOR_GUARD,
    check_operator_guard,
    isotypic_orthobasis,
    isotypic_projector_float,
    perm_action,
)

COST_KINDS = ("zero_one", "hamming", "trace_distance", "infidelity")
RATIONAL_COSTS = ("zero_one", "hamming")
EIGENVALUE_RTOL = 1e-8


def _uniform_prior(N: int) -> Fraction:
    return Fraction(2, 2**N)


@lru_cache(maxsize=512)
def _state_float(string: tuple, d: int) -> np.ndarray:
    return effective_state(string_to_clustering(string), d).to_float_dense()


def hamming_cost(x: Clustering, y: Clustering) -> int:
    """min Hamming weight over the complement identification."""
    if x.N != y.N:
        raise ValueError("clusterings must have equal length")
    a, b = x.string, y.string
    direct = sum(p != q for p, q in zip(a, b))
    flipped = sum(p != q for p, q in zip(a, complement_string(b)))
    return min(direct, flipped)


def cost_value(kind: str, x: Clustering, y: Clustering, d: int | None = None):
    """Evaluate a cost function on a pair of clusterings.

    zero_one and hamming return exact integers; trace_distance and
    infidelity return floats and need the local dimension d.
    """
    if kind == "zero_one":
        return 0 if x == y else 1
    if kind == "hamming":
        return hamming_cost(x, y)
    if kind in ("trace_distance", "infidelity"):
        if d is None:
            raise ValueError(f"{kind} needs the local dimension d")
        check_operator_guard(x.N, d)
        rx = _state_float(x.string, d)
        ry = _state_float(y.string, d)
        if kind == "trace_distance":
            w = np.linalg.eigvalsh(rx - ry)
            return float(np.abs(w).sum())
        vals, vecs = np.linalg.eigh(rx)
        sqrt_rx = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.T
        w = np.linalg.eigvalsh(sqrt_rx @ ry @ sqrt_rx)
        fidelity_root = np.sqrt(np.clip(w, 0, None)).sum()
        return float(1 - fidelity_root**2)
    raise ValueError(f"unknown cost kind {kind!r}")


def _cost_fn(cost, d):
    if callable(cost):
        return cost
    if cost not in COST_KINDS:
        raise ValueError(f"unknown cost kind {cost!r}")
    return lambda x, y: cost_value(cost, x, y, d)


def check_cost_covariant(cost, N: int, d: int, samples: int = 12, seed: int = 0) -> bool:
    """Sampled covariance test: f(tau x, tau y) == f(x, y)."""
    fn = _cost_fn(cost, d)
    clusterings = enumerate_clusterings(N)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = clusterings[rng.integers(len(clusterings))]
        y = clusterings[rng.integers(len(clusterings))]
        tau = Permutation(tuple(int(v) for v in rng.permutation(N)))
        fx = fn(x, y)
        ftx = fn(
            string_to_clustering(tau.apply_to_string(x.string)),
            string_to_clustering(tau.apply_to_string(y.string)),
        )
        if isinstance(fx, float) or isinstance(ftx, float):
            # clamped spectral square roots leave ~1e-8 noise; a genuine
            # covariance violation shows up at O(1)
            if abs(fx - ftx) > 1e-7 * max(1.0, abs(fx)):
                return False
        elif fx != ftx:
            return False
    return True


def rescale_factor(cost, N: int, d: int):
    """Smallest off-diagonal cost value; dividing by it makes the cost
    dominate the 0/1 cost pointwise."""
    fn = _cost_fn(cost, d)
    clusterings = enumerate_clusterings(N)
    best = None
    for i, x in enumerate(clusterings):
        for y in clusterings[i + 1:]:
            v = fn(x, y)
            if best is None or v < best:
                best = v
    if best is None or best <= 0:
        raise ValueError("cost has no positive off-diagonal values")
    return best


# ---------------------------------------------------------------------------
# risk operators

def risk_operator_exact(x: Clustering, cost, N: int, d: int,
                        guard: int = OPERATOR_GUARD) -> RationalMatrix:
    """W_x = sum_x' f(x, x') eta rho_x' with exact rational weights."""
    check_operator_guard(N, d, guard)
    fn = _cost_fn(cost, d)
    eta = _uniform_prior(N)
    clusterings = enumerate_clusterings(N)
    states = [effective_state(c, d, guard) for c in clusterings]
    weights = []
    for c in clusterings:
        f = fn(x, c)
        if isinstance(f, float):
            raise ValueError("exact risk operators need a rational-valued cost")
        weights.append(eta * Fraction(f))
    den = 1
    for rho, w in zip(states, weights):
        if w:
            den = lcm(den, rho.den * w.denominator)
    acc = np.zeros((d**N, d**N), dtype=object)
    for rho, w in zip(states, weights):
        if w:
            rho.add_into(acc, den, w)
    return RationalMatrix(acc, den).reduce()


def risk_operator_float(x: Clustering, cost, N: int, d: int,
                        guard: int = OPERATOR_GUARD) -> np.ndarray:
    check_operator_guard(N, d, guard)
    fn = _cost_fn(cost, d)
    eta = float(_uniform_prior(N))
    acc = np.zeros((d**N, d**N))
    for c in enumerate_clusterings(N):
        f = float(fn(x, c))
        if f:
            acc += (eta * f) * _state_float(c.string, d)
    return acc


def risk_operator(n: int, cost, N: int, d: int, guard: int = OPERATOR_GUARD):
    """Risk operator for the reference clustering (n, e): exact for rational
    costs, float array otherwise."""
    ref = reference_clustering(n, N)
    if not callable(cost) and cost in ("trace_distance", "infidelity"):
        return risk_operator_float(ref, cost, N, d, guard)
    return risk_operator_exact(ref, cost, N, d, guard)


_risk_cache: dict = {}


def _risk_float_cached(cost_kind: str, n: int, N: int, d: int) -> np.ndarray:
    key = (cost_kind, n, N, d)
    if key not in _risk_cache:
        _risk_cache[key] = risk_operator_float(reference_clustering(n, N), cost_kind, N, d)
    return _risk_cache[key]


# ---------------------------------------------------------------------------
# block spectra

def block_eigenvalues(W, lam, N: int, d: int, rtol: float = EIGENVALUE_RTOL) -> list[float]:
    """Eigenvalues of the lam-block of a risk operator, ascending, with the
    s_lam computational-basis multiplicity divided out.

    Any mixture of the averaged states acts as identity x omega on each
    isotypic component, so every block eigenvalue must appear in an s_lam
    multiple; a cluster that is not raises StructureError.  Note a single
    W_x need not commute with the permutation unitaries (only the family
    {W_x} is covariant).
    """
    lam = normalize_partition(lam)
    s = dim_unitary_irrep(lam, d)
    if s == 0:
        return []
    Wf = W.to_float() if isinstance(W, RationalMatrix) else W
    basis = isotypic_orthobasis(lam, d, N)
    block = basis.T @ Wf @ basis
    w = np.linalg.eigvalsh((block + block.T) / 2)
    scale = max(1.0, float(np.abs(w).max()))
    groups: list[list[float]] = [[w[0]]] if len(w) else []
    for v in w[1:]:
        if v - groups[-1][-1] <= rtol * scale:
            groups[-1].append(v)
        else:
            groups.append([v])
    out: list[float] = []
    for g in groups:
        if len(g) % s:
            raise StructureError(
                f"eigenvalue multiplicity {len(g)} in block {lam} is not a multiple of s={s}"
            )
        out.extend([float(np.mean(g))] * (len(g) // s))
    return out


# ---------------------------------------------------------------------------
# guess rules and minimum cost

@dataclass
class GuessTable:
    """Optimal small-cluster guesses per irrep for a given cost."""

    N: int
    d: int
    cost: str
    guesses: dict  # lam -> tuple of optimal n (ties ascending)
    thetas: dict   # (lam, n) -> minimum block eigenvalue of W_n

    def guess(self, lam) -> tuple:
        return self.guesses[normalize_partition(lam)]


def _risk_for(cost, n: int, N: int, d: int):
    if not callable(cost) and cost in ("trace_distance", "infidelity"):
        return _risk_float_cached(cost, n, N, d)
    return risk_operator(n, cost, N, d)


_covariance_verified: set = set()


def _require_covariant(cost, N: int, d: int) -> None:
    key = (cost if isinstance(cost, str) else id(cost), N, d)
    if key in _covariance_verified:
        return
    if not check_cost_covariant(cost, N, d):
        raise StructureError("cost function is not covariant under the symmetric group")
    _covariance_verified.add(key)


def guess_rule_general(cost, N: int, d: int, rtol: float = EIGENVALUE_RTOL) -> GuessTable:
    """argmin_n of the minimum lam-block eigenvalue of W_n, with ties kept."""
    check_operator_guard(N, d)
    _require_covariant(cost, N, d)
    lams = [lam for lam in partitions_of(N) if dim_unitary_irrep(lam, d) > 0]
    risks = {n: _risk_for(cost, n, N, d) for n in range(N // 2 + 1)}
    thetas = {}
    for lam in lams:
        for n, W in risks.items():
            vals = block_eigenvalues(W, lam, N, d, rtol)
            thetas[(lam, n)] = vals[0]
    guesses = {}
    for lam in lams:
        per_n = [thetas[(lam, n)] for n in range(N // 2 + 1)]
        best = min(per_n)
        scale = max(1.0, abs(best))
        ties = tuple(n for n, v in enumerate(per_n) if v - best <= rtol * scale)
        guesses[lam] = ties
    cost_name = cost if isinstance(cost, str) else getattr(cost, "__name__", "custom")
    return GuessTable(N=N, d=d, cost=cost_name, guesses=guesses, thetas=thetas)


def min_average_cost(cost, N: int, d: int) -> float:
    """Minimum achievable average cost, sum_lam s nu theta_min(lam, n(lam))."""
    table = guess_rule_general(cost, N, d)
    total = 0.0
    for lam, ties in table.guesses.items():
        s = dim_unitary_irrep(lam, d)
        nu = dim_symgroup_irrep(lam)
        total += s * nu * table.thetas[(lam, ties[0])]
    return total


def zero_one_min_cost_exact(N: int, d: int, guard: int = OPERATOR_GUARD) -> Fraction:
    """Exact minimum average 0/1 cost from explicit operators.

    The 0/1 risk W_n acts on H_lam as mu_lam - eta c_n on the supported
    block; mu_lam is read off the exact average state sum_x rho_x.
    """
    check_operator_guard(N, d, guard)
    from .rep_ops import isotypic_projector

    eta = _uniform_prior(N)
    clusterings = enumerate_clusterings(N)
    states = [effective_state(c, d, guard) for c in clusterings]
    den = lcm(*[rho.den for rho in states])
    acc = np.zeros((d**N, d**N), dtype=object)
    for rho in states:
        rho.add_into(acc, den, Fraction(1))
    total_state = RationalMatrix(acc, den)
    total = Fraction(0)
    for lam in partitions_of(N):
        s = dim_unitary_irrep(lam, d)
        if s == 0:
            continue
        nu = dim_symgroup_irrep(lam)
        proj = isotypic_projector(lam, d, N, guard)
        mu = eta * proj.mul_trace(total_state) / (s * nu)
        if len(lam) <= 2:
            n_guess = lam[1] if len(lam) == 2 else 0
            theta = mu - eta * state_normalization(n_guess, N, d)
        else:
            theta = mu  # no state support: block is zero
        total += s * nu * theta
    return total


# ---------------------------------------------------------------------------
# optimality conjecture for general costs

def _omega_float(n: int, lam, N: int, d: int) -> np.ndarray:
    rho = _state_float(reference_clustering(n, N).string, d)
    proj = isotypic_projector_float(normalize_partition(lam), d, N)
    return proj @ rho / float(state_normalization(n, N, d))


def check_conjecture(cost, N: int, d: int, tol: float = EIGENVALUE_RTOL) -> dict:
    """For each two-row irrep and each optimal guess n, test that the state
    support inside the block lies in the minimum eigenspace of the block
    risk operator.  Eigenspaces are invariant under positive cost rescaling,
    so the raw cost is used directly.
    """
    table = guess_rule_general(cost, N, d, rtol=tol)
    results = {}
    for lam in enumerate_two_row_irreps(N):
        key = normalize_partition(lam)
        s = dim_unitary_irrep(key, d)
        if s == 0:
            continue
        basis = isotypic_orthobasis(key, d, N)
        for n in table.guesses[key]:
            omega = _omega_float(n, key, N, d)
            support_dim = int(round(np.trace(omega)))
            if support_dim == 0:
                results[(lam, n)] = False
                continue
            wv, vecs = np.linalg.eigh((omega + omega.T) / 2)
            support = vecs[:, wv > 0.5]
            W = _risk_for(cost, n, N, d)
            Wf = W.to_float() if isinstance(W, RationalMatrix) else W
            block = basis.T @ Wf @ basis
            bw, bv = np.linalg.eigh((block + block.T) / 2)
            scale = max(1.0, float(np.abs(bw).max()))
            v1 = bv[:, bw - bw[0] <= tol * scale]
            # express the support in the block's coordinates, then test
            # containment in the minimum eigenspace
            coords = basis.T @ support
            residual = coords - v1 @ (v1.T @ coords)
            inside = np.linalg.norm(basis @ coords - support) <= tol
            results[(lam, n)] = bool(
                inside and np.linalg.norm(residual) <= tol * max(1.0, np.linalg.norm(coords))
            )
    return results


# ---------------------------------------------------------------------------
# Hamming heat map

def hamming_heatmap(N: int, guard: int = 12):
    """Pairwise complement-identified Hamming distances over all canonical
    clusterings, grouped by n then ordered by canonical string.

    Returns (labels, matrix) with labels the canonical strings.
    """
    if N > guard:
        raise GuardError(f"heat map guard is N <= {guard}")
    clusterings = enumerate_clusterings(N)
    labels = ["".join(map(str, c.string)) for c in clusterings]
    m = len(clusterings)
    mat = np.zeros((m, m), dtype=np.int64)
    for i, x in enumerate(clusterings):
        for j in range(i + 1, m):
            v = hamming_cost(x, clusterings[j])
            mat[i, j] = mat[j, i] = v
    return labels, mat


# ---------------------------------------------------------------------------
# POVM for general guess rules

def build_cost_povm(cost, N: int, d: int, guard: int = OPERATOR_GUARD):
    """Optimal-form POVM for an arbitrary covariant cost: each two-row irrep
    is routed to its smallest optimal guess n(lam); unsupported irreps ride
    along with the n = 0 outcome."""
    from .clusterings import omega_projector
    from .povm import Povm, povm_coefficient
    from .rep_ops import isotypic_projector

    check_operator_guard(N, d, guard)
    table = guess_rule_general(cost, N, d)
    assigned: dict[int, list] = {n: [] for n in range(N // 2 + 1)}
    for lam in enumerate_two_row_irreps(N):
        key = normalize_partition(lam)
        if dim_unitary_irrep(key, d) == 0:
            continue
        n = table.guesses[key][0]
        lam2 = key[1] if len(key) == 2 else 0
        if n < lam2:
            raise StructureError(
                f"guess {n} for irrep {lam} precedes its support; no covariant seed exists"
            )
        assigned[n].append(key)
    base: dict[int, RationalMatrix] = {}
    for n, lams in assigned.items():
        total = RationalMatrix.zeros(d**N)
        for key in lams:
            omega = omega_projector(reference_clustering(n, N), key, d, guard)
            total = total + omega.scale(povm_coefficient(key, n, N))
        base[n] = total.reduce()
    remainder = None
    if d > 2:
        extra = RationalMatrix.zeros(d**N)
        for lam in partitions_of(N):
            if len(lam) <= 2 or len(lam) > d:
                continue
            extra = extra + isotypic_projector(lam, d, N, guard)
        if not extra.is_zero():
            remainder = extra
    povm = Povm(N=N, d=d)
    for c in enumerate_clusterings(N):
        elem = base[c.n].permuted(perm_action(c.sigma, d))
        if c.n == 0 and remainder is not None:
            elem = elem + remainder
        povm.elements[c] = elem
    return povm
