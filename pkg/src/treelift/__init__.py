"""Hamiltonian and long cycles in lifts of reflexive voltage trees over Z_n."""

from .billiard import (
    BilliardParams,
    PathFamily,
    Permutation,
    compute_c,
    extended_billiard,
    is_odd_shifting,
    is_order_preserving_pair,
    is_order_preserving_path,
    join_order_preserving_paths,
    smooth_pair,
    step_permutation,
)
from .core import (
    CyclicGroup,
    GroupElement,
    LiftGraph,
    LiftVertex,
    VoltageTree,
    build_lift,
    cut_edge_offsets,
    fiber_cycles,
    normalize_cut_edges,
    rescale_by_unit,
)
from .errors import HypothesisViolated, InternalInvariantBroken, ParseError, VoltageError
from .long_cycle import check_circumference_params, long_cycle, near_zero_multiple, orient_tree
from .oracle import (
    ValidationReport,
    brute_force_decomposition_search,
    brute_force_hamiltonian,
    is_hamiltonian_cycle,
    is_simple_cycle,
    is_two_factor,
    longest_cycle_brute,
    validate_path_family,
)
from .path_ham import CycleCertificate, ham_cycle_odd_shifting, two_factor_of_path
from .prime_ham import (
    IntegerLabeledTree,
    anchored_two_factor,
    ham_cycle_adjacent_ones,
    ham_cycle_leaf_condition,
    ham_cycle_prime,
    matching_Mv,
    random_label_experiment,
    reduce_mod_prime,
    sufficient_prime,
)
from .tree_ham import OddShiftingDecomposition, ham_cycle_from_decomposition, verify_decomposition

__version__ = "0.1.0"
