"""Unitary unfoldings of Bose-Hubbard exceptional points.

Construction and certification of the non-Hermitian two-mode Bose-Hubbard
matrices and their Jordan structure at the exceptional point, admissible
(reality-preserving) perturbation families and their fundamental matrices,
sector-coupling generalizations, and localization of stability boundaries.
"""

from .hamiltonian import (
    BoseHubbardParams,
    build_block_hamiltonian,
    build_sub_hamiltonian,
    exact_energies,
    number_operator_matrix,
    sub_hamiltonian_spectrum,
)
from .jordan import (
    ChainSolveError,
    JordanDecomposition,
    JordanSpec,
    bh_transition_matrix,
    ep_order_estimate,
    jordan_matrix,
    verify_similarity,
)
from .perturbation import (
    FundamentalMatrix,
    NonRealFundamentalSpectrum,
    PerturbationFamily,
    ScalingParams,
    admissible_family_from_fundamental,
    check_admissibility,
    convergence_study,
    leading_order,
    realize_fundamental,
    rescale_perturbation,
    scaling_matrix,
    unfold_energies,
)
from .partitioned import (
    MaskViolation,
    PartitionLayout,
    PartitionedFundamental,
    dominant_positions,
    leading_order_partitioned,
    partitioned_convergence_study,
    partitioned_jordan,
    realize_partitioned_fundamental,
    rescale_partitioned,
    sparse_template,
    truncated_dimension,
    unfolding_harness,
)
from .boundary import (
    BoundaryPoint,
    Quintic23Params,
    SingularTransition,
    degeneracy_breaking_search,
    domain_scan,
    exact_poly,
    quintic_roots_closed_form,
    secular_poly_23,
    slice_crossings,
    solution_A,
    solution_B,
    solution_B_deep_limit,
    spectrum_via_secular,
)
from .spectral import (
    Classification,
    EigensolverError,
    SpectrumReport,
    ToleranceConfig,
    classify_spectrum,
    eigenvalues,
    in_physical_domain,
)

__version__ = "0.1.0"
