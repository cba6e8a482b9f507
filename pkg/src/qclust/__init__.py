"""Optimal single-shot clustering of quantum and classical data."""

from .classical import (
    average_known_classical,
    optimal_guess_unknown,
    sample_haar_induced,
    sample_simplex_uniform,
    solve_balanced_partition,
    success_asymptotic_unknown,
    success_exact_unknown,
)
from .clusterings import (
    Clustering,
    effective_state,
    enumerate_clusterings,
    omega_projector,
    string_to_clustering,
)
from .costs import (
    block_eigenvalues,
    check_conjecture,
    cost_value,
    guess_rule_general,
    hamming_heatmap,
    min_average_cost,
    risk_operator,
)
from .errors import GuardError, NumericError, StructureError
from .known_quantum import (
    average_success_known,
    helstrom_simulate,
    success_known_clustering,
    success_known_pure,
    unambiguous_average,
    verify_known_mixed_povm,
)
from .partitions import (
    character_table,
    count_partitions_max_len,
    dim_symgroup_irrep,
    dim_unitary_irrep,
    enumerate_two_row_irreps,
)
from .povm import (
    Povm,
    build_povm,
    guess_rule_success,
    success_probability_asymptotic,
    success_probability_bruteforce,
    success_probability_exact,
    verify_holevo,
)
from .rep_ops import isotypic_projector, permutation_matrix, symmetric_projector

__version__ = "0.1.0"
