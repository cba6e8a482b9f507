"""Binary clusterings of N systems and their averaged quantum states.

A clustering is a 0/1 labeling up to global label swap, canonically
represented by the string with the fewer zeros (lexicographically smaller on
ties) together with (n, sigma): the small-cluster size and a permutation
taking the reference string 0^n 1^(N-n) to the canonical string.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .errors import GuardError
from .exact import RationalMatrix, SparseRational, kron_sparse
from .partitions import normalize_partition, sym_subspace_dim
from .permutations import Permutation
from .rep_ops import (
    OPERATOR_GUARD,
    check_operator_guard,
    isotypic_projector,
    perm_action,
    symmetric_projector_sparse,
)

ENUMERATION_GUARD = 20


def complement_string(x) -> tuple[int, ...]:
    return tuple(1 - b for b in x)


def canonical_string(x) -> tuple[int, ...]:
    """Representative with count(0) <= count(1); ties broken lexicographically."""
    x = tuple(int(b) for b in x)
    if any(b not in (0, 1) for b in x):
        raise ValueError("cluster strings are over {0, 1}")
    xb = complement_string(x)
    zeros = x.count(0)
    if 2 * zeros < len(x):
        return x
    if 2 * zeros > len(x):
        return xb
    return min(x, xb)


def cluster_class_size(n: int, N: int) -> int:
    """Number of permutations mapping the reference string into a fixed
    clustering with small-cluster size n."""
    nb = N - n
    if n == nb:
        return 2 * factorial(n) ** 2
    return factorial(n) * factorial(nb)


@dataclass(frozen=True)
class Clustering:
    """Canonical form (n, sigma) of a binary clustering of N systems."""

    n: int
    sigma: Permutation
    string: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.string)

    @property
    def class_size(self) -> int:
        return cluster_class_size(self.n, self.N)

    def __repr__(self):
        return f"Clustering(n={self.n}, string={''.join(map(str, self.string))})"


def string_to_clustering(x) -> Clustering:
    """Canonicalize a 0/1 string into its (n, sigma) clustering.

    sigma is the minimal-image permutation sending 0^n 1^(N-n) to the
    canonical string: the first n slots go to the sorted zero positions,
    the rest to the sorted one positions.
    """
    cx = canonical_string(x)
    zeros = [i for i, b in enumerate(cx) if b == 0]
    ones = [i for i, b in enumerate(cx) if b == 1]
    sigma = Permutation(tuple(zeros + ones))
    return Clustering(n=len(zeros), sigma=sigma, string=cx)


def reference_clustering(n: int, N: int) -> Clustering:
    return string_to_clustering((0,) * n + (1,) * (N - n))


def enumerate_clusterings(N: int, guard: int = ENUMERATION_GUARD) -> list[Clustering]:
    """All 2^(N-1) clusterings, grouped by n and ordered by canonical string."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > guard:
        raise GuardError(f"clustering enumeration requested for N={N}, guard is {guard}")
    out = []
    for n in range(N // 2 + 1):
        strings = []
        for zeros in combinations(range(N), n):
            x = [1] * N
            for p in zeros:
                x[p] = 0
            x = tuple(x)
            if 2 * n == N and x > complement_string(x):
                continue
            strings.append(x)
        for x in sorted(strings):
            out.append(string_to_clustering(x))
    return out


# ---------------------------------------------------------------------------
# averaged states

def state_normalization(n: int, N: int, d: int) -> Fraction:
    """c_n = 1/(D^sym_n * D^sym_(N-n))."""
    return Fraction(1, sym_subspace_dim(n, d) * sym_subspace_dim(N - n, d))


def state_from_string(x, d: int, guard: int = OPERATOR_GUARD) -> SparseRational:
    """Averaged product state for an arbitrary 0/1 string (no canonicalization):
    independent symmetrizers over the 0-positions and the 1-positions,
    normalized to unit trace."""
    x = tuple(int(b) for b in x)
    N = len(x)
    check_operator_guard(N, d, guard)
    zeros = [i for i, b in enumerate(x) if b == 0]
    ones = [i for i, b in enumerate(x) if b == 1]
    k = len(zeros)
    base = kron_sparse(
        symmetric_projector_sparse(k, d, guard),
        symmetric_projector_sparse(N - k, d, guard),
    )
    sigma = Permutation(tuple(zeros + ones))
    c = Fraction(1, sym_subspace_dim(k, d) * sym_subspace_dim(N - k, d))
    return base.permuted(perm_action(sigma, d)).scale(c)


def effective_state(c: Clustering, d: int, guard: int = OPERATOR_GUARD) -> SparseRational:
    """rho_(n,sigma) = c_n U_sigma (sym_n x sym_(N-n)) U_sigma^dag, exact."""
    return state_from_string(c.string, d, guard)


def omega_projector(c: Clustering, lam, d: int, guard: int = OPERATOR_GUARD) -> RationalMatrix:
    """Exact projector onto supp(rho_(n,sigma)) intersected with H_lam.

    rho/c_n is itself a projector and commutes with the central isotypic
    projector, so P_lam (rho/c_n) is the wanted projector; its rank is
    s_lam exactly when lam_2 <= n (and the shape fits in d rows).
    """
    lam = normalize_partition(lam)
    N = c.N
    rho = effective_state(c, d, guard)
    proj = isotypic_projector(lam, d, N, guard)
    scaled = rho.scale(1 / state_normalization(c.n, N, d))
    return scaled.matmul_dense(proj).reduce()
