"""Post-selected von Neumann measurement of squeezed-vacuum pointer states.

Closed-form results and a truncated Fock-space oracle for the same
quantities, plus an audit that pairs and flags them.
"""

from .exceptions import (
    ConfigError,
    DegenerateSelectionError,
    DimensionMismatchError,
    DomainError,
    InvalidTruncationError,
    OrthogonalSelectionError,
    TruncationRiskError,
    TruncationWarning,
    WeakmeasError,
)
from .fock import (
    DEFAULT_N_SINGLE,
    DEFAULT_N_TWO,
    StateVector,
    annihilation_matrix,
    coherent_state,
    creation_matrix,
    displacement_matrix,
    embed_mode_a,
    embed_mode_b,
    expectation,
    expectation_two,
    inner_product,
    laguerre_assoc,
    normalize,
    number_matrix,
    squeeze_single_matrix,
    squeeze_two_matrix,
    tensor,
    vacuum,
)
from .husimi import (
    PhaseGrid,
    q_single,
    q_single_grid,
    q_two,
    q_two_slice,
    split_detector,
)
from .measurement import (
    CouplingConfig,
    PrePostSelection,
    WeakValue,
    abl_conditional,
    final_pointer_spssv,
    final_pointer_tmsv,
    normalizer_spssv,
    normalizer_tmsv,
    overlap_K,
    overlap_P,
    success_prob_spssv,
    success_prob_tmsv,
    transition_value_spssv,
    transition_value_tmsv,
    weak_value,
)
from .nonclassicality import (
    SingleModeExpectations,
    TwoModeExpectations,
    as_closed_s0,
    as_oracle,
    as_squeezing,
    expectations_closed_spssv,
    expectations_closed_tmsv,
    expectations_oracle_spssv,
    expectations_oracle_tmsv,
    photon_dist_closed,
    photon_dist_oracle,
    skew_closed_spssv,
    skew_information,
    sum_closed,
    sum_squeezing,
)
from .report import MetricReport, compare
from .shifts import ShiftReport, lambda12, pointer_shifts_spssv, pointer_shifts_tmsv, transition_sweep
from .states import (
    SqueezeParams,
    TwoModeSqueezeParams,
    spssv,
    spssv_coefficients,
    squeezed_vacuum,
    squeezed_vacuum_coefficients,
    tmsv,
    tmsv_coefficients,
)

__version__ = "0.1.0"
