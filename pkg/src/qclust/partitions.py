"""Integer partitions, Young-diagram dimension formulas, and symmetric-group
character tables.

Partitions are plain tuples of nonincreasing positive integers; trailing
zeros are stripped on normalization, so ``(4, 0)`` and ``(4,)`` label the
same diagram.  Two-row labels ``(l1, l2)`` keep an explicit second entry for
readability; every function normalizes on entry.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import GuardError

CHARACTER_TABLE_GUARD = 10


def normalize_partition(parts) -> tuple[int, ...]:
    """Validate nonincreasing nonnegative parts and strip trailing zeros."""
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in partition {parts}")
    for a, b in zip(parts, parts[1:]):
        if b > a:
            raise ValueError(f"partition {parts} is not nonincreasing")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def weight(parts) -> int:
    return sum(normalize_partition(parts))


def length(parts) -> int:
    """Number of nonzero parts."""
    return len(normalize_partition(parts))


def partitions_of(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """All partitions of ``n`` in inverse lexicographic (descending) order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


def inverse_lex_greater(lam, mu) -> bool:
    """True if ``lam > mu`` in inverse lexicographic order."""
    lam, mu = normalize_partition(lam), normalize_partition(mu)
    for a, b in zip(lam, mu):
        if a != b:
            return a > b
    return len(lam) > len(mu)


def enumerate_two_row_irreps(N: int) -> list[tuple[int, int]]:
    """All two-row labels (l1, l2) with l1 + l2 = N, ordered by l2 ascending."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [(N - i, i) for i in range(N // 2 + 1)]


def hook_lengths(lam) -> list[int]:
    lam = normalize_partition(lam)
    hooks = []
    for i, row in enumerate(lam):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in lam[i + 1:] if r > j)
            hooks.append(arm + leg + 1)
    return hooks


def dim_symgroup_irrep(lam) -> int:
    """Number of standard Young tableaux of shape ``lam`` (hook-length formula)."""
    lam = normalize_partition(lam)
    n = sum(lam)
    prod = 1
    for h in hook_lengths(lam):
        prod *= h
    return factorial(n) // prod


def dim_symgroup_irrep_two_row(lam) -> int:
    """Closed form for two-row shapes: N!(l1-l2+1)/((l1+1)! l2!)."""
    lam = normalize_partition(lam)
    if len(lam) > 2:
        raise ValueError(f"{lam} is not a two-row partition")
    l1 = lam[0] if lam else 0
    l2 = lam[1] if len(lam) == 2 else 0
    N = l1 + l2
    val = Fraction(factorial(N) * (l1 - l2 + 1), factorial(l1 + 1) * factorial(l2))
    assert val.denominator == 1
    return int(val)


def dim_unitary_irrep(lam, d: int) -> int:
    """Number of semistandard Young tableaux of shape ``lam`` with ``d`` entries.

    Evaluated as a ratio of Vandermonde determinants; returns 0 when the
    shape has more than ``d`` rows.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    lam = normalize_partition(lam)
    if len(lam) > d:
        return 0
    padded = lam + (0,) * (d - len(lam))
    x = [padded[i] + d - 1 - i for i in range(d)]
    num, den = 1, 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= x[i] - x[j]
            den *= j - i
    assert num % den == 0
    return num // den


def dim_unitary_irrep_two_row(lam, d: int) -> int:
    """Two-row closed form: (l1-l2+1)/(l1+1) * C(l1+d-1,d-1) * C(l2+d-2,d-2)."""
    lam = normalize_partition(lam)
    if len(lam) > 2:
        raise ValueError(f"{lam} is not a two-row partition")
    l1 = lam[0] if lam else 0
    l2 = lam[1] if len(lam) == 2 else 0
    if d < 2:
        # C(l2+d-2, d-2) degenerates; fall back to the determinant form
        return dim_unitary_irrep(lam, d)
    val = Fraction(l1 - l2 + 1, l1 + 1) * comb(l1 + d - 1, d - 1) * comb(l2 + d - 2, d - 2)
    assert val.denominator == 1
    return int(val)


def sym_subspace_dim(k: int, d: int) -> int:
    """Dimension of the completely symmetric subspace of k qudits."""
    return comb(k + d - 1, d - 1)


# ---------------------------------------------------------------------------
# conjugacy classes and characters

def conjugacy_classes(N: int) -> list[tuple[int, ...]]:
    """Cycle types of S_N in inverse lexicographic (descending) order."""
    return partitions_of(N)


def class_size(cycle_type) -> int:
    """Number of permutations with the given cycle type."""
    cycle_type = normalize_partition(cycle_type)
    N = sum(cycle_type)
    z = 1
    mult: dict[int, int] = {}
    for c in cycle_type:
        mult[c] = mult.get(c, 0) + 1
    for c, m in mult.items():
        z *= c**m * factorial(m)
    return factorial(N) // z


@lru_cache(maxsize=None)
def character(lam: tuple[int, ...], cycle_type: tuple[int, ...]) -> int:
    """Irreducible S_N character chi_lam at a conjugacy class, by the
    Murnaghan-Nakayama border-strip recursion."""
    lam = normalize_partition(lam)
    cycle_type = normalize_partition(cycle_type)
    if sum(lam) != sum(cycle_type):
        raise ValueError("partition and cycle type must have equal weight")
    if not lam:
        return 1
    k, rest = cycle_type[0], cycle_type[1:]
    r = len(lam)
    beta = [lam[i] + (r - 1 - i) for i in range(r)]
    total = 0
    for i in range(r):
        b = beta[i] - k
        if b < 0 or b in beta:
            continue
        height = sum(1 for x in beta if b < x < beta[i])
        new_beta = sorted((x for x in beta if x != beta[i]), reverse=True)
        new_beta.append(b)
        new_beta.sort(reverse=True)
        new_lam = tuple(new_beta[j] - (r - 1 - j) for j in range(r))
        total += (-1) ** height * character(new_lam, rest)
    return total


def character_table(N: int, guard: int = CHARACTER_TABLE_GUARD) -> dict:
    """Full integer character table of S_N as {(lam, cycle_type): chi}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > guard:
        raise GuardError(f"character table requested for N={N}, guard is {guard}")
    lams = partitions_of(N)
    return {(lam, ct): character(lam, ct) for lam in lams for ct in lams}


# ---------------------------------------------------------------------------
# partition counting

@lru_cache(maxsize=None)
def _count_max_len(n: int, r: int) -> int:
    # partitions of n into at most r parts == partitions with parts <= r
    # (conjugation); recurrence on (n, largest part allowed)
    if n == 0:
        return 1
    if r == 0:
        return 0
    if r == 1:
        return 1
    return _count_max_len(n, r - 1) + _count_max_len(n - r, r) if n >= r else _count_max_len(n, n)


def count_partitions_max_len(N: int, r: int) -> tuple[int, float]:
    """Exact number of partitions of N with at most r parts, and the
    large-N asymptotic N^(r-1)/(r!(r-1)!)."""
    if N < 1 or r < 1:
        raise ValueError("N and r must be >= 1")
    exact = _count_max_len(N, r)
    asym = N ** (r - 1) / (factorial(r) * factorial(r - 1))
    return exact, asym
