"""Correlation measures for bipartite qudit states under weak measurement:
state families with maximally mixed marginals, weak-measurement operator
families, discord upper bounds, and channel dynamics."""

from .qmat import (
    DensityOperator,
    DimensionError,
    ValidationError,
    hermitian_spectrum,
    partial_trace,
    tensor,
    validate_density,
    von_neumann_entropy,
)
from .sud_basis import (
    BlockCorrelationSpec,
    DiagCorrelationSpec,
    GeneratorId,
    build_block_state,
    build_diag_state,
    closed_form_spectrum_diag3,
    generator,
    pauli_sigmas,
    su_generator_ids,
)
from .weakmeas import (
    Orientation,
    WeakMeasurementFamily,
    ZVector,
    build_general_family,
    build_special_family,
    entropic_H,
    family_axiom_violations,
    orientation_from_z,
    post_measurement,
    z_from_orientation,
)
from .sqd import (
    CorrelationReport,
    DistributionResult,
    StateCorrelations,
    classical_correlation_search,
    classical_correlation_special,
    classical_state_correlations,
    correlation_difference_D,
    distribution_experiment,
    measured_mutual_information,
    mutual_information,
    pure_state_correlations,
    sqd_upper_bound_block,
    sqd_upper_bound_diag,
    theta_bar_max,
    theta_diag,
)
from .channels import (
    KrausChannel,
    apply_channel_local_A,
    bitflip01_kraus,
    channel_gap_general,
    evolved_diag_coeffs,
    phase_damping_kraus,
    sqd_bound_after_channel,
    werner_gap_T,
)

__version__ = "0.1.0"
