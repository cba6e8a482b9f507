"""The optimal universal clustering measurement and its success probability.

The measurement first projects onto a two-row isotypic component (l1, l2),
guesses the small-cluster size n = l2, then resolves the permutation with a
covariant rank-s projector family.  Everything here is exact: elements are
rational matrices, completeness is verified by equality, and the closed-form
success probability is cross-checked against explicit traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .clusterings import (
    Clustering,
    cluster_class_size,
    effective_state,
    enumerate_clusterings,
    omega_projector,
    reference_clustering,
)
from .errors import StructureError
from .exact import RationalMatrix
from .partitions import dim_symgroup_irrep, normalize_partition, partitions_of
from .rep_ops import OPERATOR_GUARD, check_operator_guard, isotypic_projector, perm_action


def guess_rule_success(lam) -> int:
    """Optimal small-cluster guess for the 0/1 cost: n(l1, l2) = l2."""
    lam = normalize_partition(lam)
    if len(lam) > 2:
        raise ValueError(f"{lam} is not a two-row partition")
    return lam[1] if len(lam) == 2 else 0


def povm_coefficient(lam, n: int, N: int, min_eigenspace_dim: int = 1) -> Fraction:
    """xi = nu_lam * b_n / (D * N!) with D the guessed-eigenspace dimension
    (1 for the rank-one seed used throughout)."""
    return Fraction(
        dim_symgroup_irrep(lam) * cluster_class_size(n, N),
        min_eigenspace_dim * factorial(N),
    )


@dataclass
class Povm:
    """A clustering POVM: one exact element per canonical clustering."""

    N: int
    d: int
    elements: dict[Clustering, RationalMatrix] = field(default_factory=dict)

    def element_sum(self) -> RationalMatrix:
        total = RationalMatrix.zeros(self.d**self.N)
        for e in self.elements.values():
            total = total + e
            total.reduce()
        return total

    def is_complete(self) -> bool:
        return self.element_sum() == RationalMatrix.identity(self.d**self.N)


def build_povm(N: int, d: int, guard: int = OPERATOR_GUARD) -> Povm:
    """Construct the optimal universal clustering POVM exactly.

    Each element is xi * (the rank-s projector onto the guessed irrep block
    of the matching effective state).  For d > 2, the isotypic components
    with more than two rows carry no state weight; the completeness
    constraint is satisfied by assigning their full projector to the unique
    n = 0 outcome, which leaves every optimality condition untouched.
    """
    dim = check_operator_guard(N, d, guard)
    povm = Povm(N=N, d=d)
    base: dict[int, RationalMatrix] = {}
    for n in range(N // 2 + 1):
        lam_star = (N - n, n)
        omega = omega_projector(reference_clustering(n, N), lam_star, d, guard)
        xi = povm_coefficient(lam_star, n, N)
        base[n] = omega.scale(xi).reduce()
    remainder = None
    if d > 2:
        total = RationalMatrix.zeros(dim)
        for lam in partitions_of(N):
            if len(lam) <= 2 or len(lam) > d:
                continue
            total = total + isotypic_projector(lam, d, N, guard)
        if not total.is_zero():
            remainder = total
    for c in enumerate_clusterings(N):
        elem = base[c.n].permuted(perm_action(c.sigma, d))
        if c.n == 0 and remainder is not None:
            elem = elem + remainder
        povm.elements[c] = elem
    return povm


# ---------------------------------------------------------------------------
# success probabilities

def success_probability_exact(N: int, d: int) -> Fraction:
    """Closed-form optimal success probability,
    2^(1-N) sum_i C(N,i) (d-1)(N-2i+1)^2 / ((d+i-1)(N-i+1)^2)."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    total = Fraction(0)
    for i in range(N // 2 + 1):
        total += comb(N, i) * Fraction(
            (d - 1) * (N - 2 * i + 1) ** 2, (d + i - 1) * (N - i + 1) ** 2
        )
    return Fraction(2, 2**N) * total


def success_probability_bruteforce(N: int, d: int, guard: int = OPERATOR_GUARD) -> Fraction:
    """Independent oracle: eta * sum of tr(rho_x E_x) over explicit operators."""
    check_operator_guard(N, d, guard)
    povm = build_povm(N, d, guard)
    eta = Fraction(2, 2**N)
    total = Fraction(0)
    for c, elem in povm.elements.items():
        rho = effective_state(c, d, guard)
        total += rho.trace_mul_dense(elem)
    return eta * total


def success_probability_asymptotic(N: int, d: int, regime: str = "combined") -> float:
    """Large-N scaling of the optimal success probability.

    regimes: 'combined' 8(d-1)/((2d+N)N); 'sublinear' 8(d-1)/N^2;
    'linear' 8s/((2s+1)N) with s = d/N; 'superlinear' 4/N.
    """
    if N < 2:
        raise ValueError("asymptotics need N >= 2")
    if regime == "combined":
        return 8 * (d - 1) / ((2 * d + N) * N)
    if regime == "sublinear":
        return 8 * (d - 1) / N**2
    if regime == "linear":
        s = d / N
        return 8 * s / ((2 * s + 1) * N)
    if regime == "superlinear":
        return 4 / N
    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# Holevo-Yuen-Kennedy-Lax verification

@dataclass
class HolevoReport:
    passed: bool
    equality_ok: bool
    psd_ok: bool
    min_eigenvalue: float
    detail: str = ""


def verify_holevo(povm: Povm, cost: str = "zero_one", tol: float = 1e-9) -> HolevoReport:
    """Check the optimality conditions for a clustering POVM under a
    covariant cost: (W_x - Gamma) E_x = 0 exactly and W_x - Gamma >= 0 up to
    a relative float tolerance on eigenvalues.
    """
    from .costs import check_cost_covariant, risk_operator_exact

    N, d = povm.N, povm.d
    if not check_cost_covariant(cost, N, d):
        raise StructureError(f"cost {cost!r} is not covariant under the symmetric group")
    clusterings = list(povm.elements)
    risks = {c: risk_operator_exact(c, cost, N, d) for c in clusterings}
    gamma = RationalMatrix.zeros(d**N)
    for c in clusterings:
        gamma = gamma + (risks[c] @ povm.elements[c])
        gamma.reduce()

    equality_ok = gamma.is_symmetric()
    for c in clusterings:
        diff = risks[c] - gamma
        left = diff @ povm.elements[c]
        if not left.is_zero():
            equality_ok = False
            break
        if not (povm.elements[c] @ diff).is_zero():
            equality_ok = False
            break

    min_eig = np.inf
    psd_ok = True
    for c in clusterings:
        diff = (risks[c] - gamma).to_float()
        diff = (diff + diff.T) / 2
        w = np.linalg.eigvalsh(diff)
        scale = max(1.0, float(np.abs(w).max()))
        min_eig = min(min_eig, float(w[0]))
        if w[0] < -tol * scale:
            psd_ok = False
    passed = equality_ok and psd_ok
    detail = f"equality={'exact' if equality_ok else 'violated'}, min eigenvalue={min_eig:.3e}"
    return HolevoReport(passed, equality_ok, psd_ok, float(min_eig), detail)


def perturbed_povm(povm: Povm) -> Povm:
    """Negative control: halve the n=1 elements and dump the slack into the
    n=0 outcome so completeness still holds exactly."""
    if povm.N < 2:
        raise ValueError("need N >= 2 for a nontrivial perturbation")
    out = Povm(N=povm.N, d=povm.d)
    slack = RationalMatrix.zeros(povm.d**povm.N)
    for c, e in povm.elements.items():
        if c.n == 1:
            halved = e.scale(Fraction(1, 2))
            out.elements[c] = halved
            slack = slack + halved
        else:
            out.elements[c] = e.copy()
    for c in out.elements:
        if c.n == 0:
            out.elements[c] = out.elements[c] + slack
            break
    return out
