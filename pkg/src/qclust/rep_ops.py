"""Operators on (C^d)^(x N) in the computational basis: permutation unitaries,
symmetrizers, and exact isotypic projectors for the symmetric-group action.

Basis states are product strings indexed big-endian, so tensor position 0 is
the most significant base-d digit.  Permutation operators never need dense
matrices internally: U_sigma is the basis relabeling j -> action(sigma)[j].
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from itertools import permutations as iter_permutations
from math import factorial

import numpy as np

from .errors import GuardError
from .exact import RationalMatrix, SparseRational
from .partitions import (
    character,
    dim_symgroup_irrep,
    normalize_partition,
    partitions_of,
)
from .permutations import Permutation

OPERATOR_GUARD = 4096


def check_operator_guard(N: int, d: int, guard: int = OPERATOR_GUARD) -> int:
    dim = d**N
    if dim > guard:
        raise GuardError(f"d^N = {dim} exceeds the dense-operator guard {guard}")
    return dim


@lru_cache(maxsize=64)
def basis_digits(N: int, d: int) -> np.ndarray:
    """(d^N, N) array of base-d digits of every basis index."""
    dim = d**N
    idx = np.arange(dim)
    return np.stack([(idx // d ** (N - 1 - k)) % d for k in range(N)], axis=1)


@lru_cache(maxsize=64)
def _digit_powers(N: int, d: int) -> np.ndarray:
    return np.array([d ** (N - 1 - k) for k in range(N)], dtype=np.int64)


def perm_action(sigma: Permutation, d: int) -> np.ndarray:
    """Basis relabeling of U_sigma: maps index j to the index of the string
    with digit sigma^-1(k) moved into slot k."""
    N = sigma.n
    digits = basis_digits(N, d)
    inv = np.argsort(np.asarray(sigma.image))
    return digits[:, inv] @ _digit_powers(N, d)


def permutation_matrix(sigma: Permutation, d: int, N: int | None = None,
                       guard: int = OPERATOR_GUARD) -> RationalMatrix:
    """The 0/1 unitary permuting tensor factors by sigma."""
    if N is not None and N != sigma.n:
        raise ValueError("N disagrees with the permutation size")
    N = sigma.n
    dim = check_operator_guard(N, d, guard)
    action = perm_action(sigma, d)
    num = np.zeros((dim, dim), dtype=object)
    num[action, np.arange(dim)] = 1
    return RationalMatrix(num, 1)


def symmetric_projector_sparse(k: int, d: int, guard: int = OPERATOR_GUARD) -> SparseRational:
    """Projector onto the completely symmetric subspace of k qudits,
    (1/k!) sum of all permutation unitaries, in COO form.

    Entry (i, j) is (prod of digit multiplicities)/k! when the strings i and
    j have the same digit multiset, else zero.
    """
    if k == 0:
        return SparseRational([0], [0], [1], 1, 1)
    dim = check_operator_guard(k, d, guard)
    digits = basis_digits(k, d)
    groups: dict[tuple, list[int]] = defaultdict(list)
    for v in range(dim):
        groups[tuple(sorted(digits[v]))].append(v)
    rows, cols, vals = [], [], []
    for key, members in groups.items():
        w = 1
        for s in set(key):
            w *= factorial(key.count(s))
        for i in members:
            for j in members:
                rows.append(i)
                cols.append(j)
                vals.append(w)
    return SparseRational(rows, cols, vals, factorial(k), dim)


def symmetric_projector(k: int, d: int, guard: int = OPERATOR_GUARD) -> RationalMatrix:
    return symmetric_projector_sparse(k, d, guard).to_dense()


@lru_cache(maxsize=16)
def class_sums(N: int, d: int, guard: int = OPERATOR_GUARD) -> dict:
    """Sum of U_sigma over each conjugacy class, as integer matrices keyed
    by cycle type.  One pass over S_N with vectorized basis actions."""
    dim = check_operator_guard(N, d, guard)
    digits = basis_digits(N, d)
    powers = _digit_powers(N, d)
    col = np.arange(dim)
    sums: dict[tuple, np.ndarray] = {
        ct: np.zeros((dim, dim), dtype=np.int64) for ct in partitions_of(N)
    }
    for img in iter_permutations(range(N)):
        ct = Permutation(img).cycle_type()
        inv = np.argsort(img)
        action = digits[:, inv] @ powers
        sums[ct][action, col] += 1
    return sums


def isotypic_projector(lam, d: int, N: int, guard: int = OPERATOR_GUARD) -> RationalMatrix:
    """Exact central projector onto the isotypic component H_lam,
    (nu_lam/N!) sum_sigma chi_lam(sigma) U_sigma."""
    lam = normalize_partition(lam)
    if sum(lam) != N:
        raise ValueError(f"partition {lam} does not have weight {N}")
    dim = check_operator_guard(N, d, guard)
    sums = class_sums(N, d, guard)
    num = np.zeros((dim, dim), dtype=object)
    for ct, mat in sums.items():
        chi = character(lam, ct)
        if chi:
            num += chi * mat.astype(object)
    num *= dim_symgroup_irrep(lam)
    return RationalMatrix(num, factorial(N)).reduce()


@lru_cache(maxsize=64)
def isotypic_projector_float(lam, d: int, N: int) -> np.ndarray:
    return isotypic_projector(lam, d, N).to_float()


@lru_cache(maxsize=64)
def isotypic_orthobasis(lam, d: int, N: int) -> np.ndarray:
    """Orthonormal columns spanning H_lam, from the exact projector's
    spectral decomposition (eigenvalues are exactly 0 or 1)."""
    proj = isotypic_projector_float(lam, d, N)
    w, v = np.linalg.eigh(proj)
    return np.ascontiguousarray(v[:, w > 0.5])
