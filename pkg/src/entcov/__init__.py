"""Bipartite entanglement detection from covariance and commutation matrices
of an arbitrary, freely chosen set of observables."""

from .criterion import (
    ENTANGLED,
    UNDETECTED,
    CorrelationData,
    CriterionEvaluator,
    CriterionReport,
    DataValidationError,
    commutation_matrix,
    correlation_data_from_state,
    covariance_commutation,
    covariance_matrix,
    criterion_matrix,
    criterion_matrix_from_data,
    criterion_matrix_pt_state,
    detect,
    uncertainty_matrix,
)
from .linalg import (
    HermiticityError,
    hermitian_determinant,
    hermitian_eigenvalues,
    kron,
    partial_transpose,
    psd_project,
)
from .observables import (
    Observable,
    ObservableSet,
    collective_spin_matrices,
    collective_spin_set,
    hp_quadrature_set,
    pauli_product_set,
    rotate_so3,
)
from .reference import (
    AnnealParams,
    WitnessResult,
    decomposable_split,
    duan_simon_report,
    ppt_min_eigenvalue,
    witness_operator,
    witness_optimize,
)
from .states import (
    DensityMatrix,
    PureState,
    bell_state,
    product_state,
    spin_coherent_x,
    spin_ensemble_state,
    szsz_evolve,
    werner_mix,
)
from .uncertainty import (
    UncertaintyReport,
    invariant_decomposition,
    schrodinger_I2,
    schrodinger_I3,
    uncertainty_report,
    variance,
)

__all__ = [
    "ENTANGLED",
    "UNDETECTED",
    "AnnealParams",
    "CorrelationData",
    "CriterionEvaluator",
    "CriterionReport",
    "DataValidationError",
    "DensityMatrix",
    "HermiticityError",
    "Observable",
    "ObservableSet",
    "PureState",
    "UncertaintyReport",
    "WitnessResult",
    "bell_state",
    "collective_spin_matrices",
    "collective_spin_set",
    "commutation_matrix",
    "correlation_data_from_state",
    "covariance_commutation",
    "covariance_matrix",
    "criterion_matrix",
    "criterion_matrix_from_data",
    "criterion_matrix_pt_state",
    "decomposable_split",
    "detect",
    "duan_simon_report",
    "hermitian_determinant",
    "hermitian_eigenvalues",
    "hp_quadrature_set",
    "invariant_decomposition",
    "kron",
    "partial_transpose",
    "pauli_product_set",
    "ppt_min_eigenvalue",
    "product_state",
    "psd_project",
    "rotate_so3",
    "schrodinger_I2",
    "schrodinger_I3",
    "spin_coherent_x",
    "spin_ensemble_state",
    "szsz_evolve",
    "uncertainty_matrix",
    "uncertainty_report",
    "variance",
    "werner_mix",
    "witness_operator",
    "witness_optimize",
]

__version__ = "0.1.0"
