"""Simulation and verification of disentanglement by teleportation through
separable Bell-mixture channels."""

from telesep.channels import (
    AffineBlochMap,
    BellMixture,
    DilationParams,
    EquatorialMachineParams,
    PauliDiagonalMap,
    apply_one_side,
    channel_to_map,
    choi_matrix,
    dilation_params,
    equatorial_map,
    equatorial_map_from_overlaps,
    general_map_lmn,
    is_physical,
    map_to_channel,
    pauli_map,
)
from telesep.disentangle import (
    a14_physical_conditions,
    a15_disentangling_conditions,
    check_both_sides_claim,
    conditions_vs_oracle,
    optimize_equatorial,
    run_scenario,
    verify_theorem,
)
from telesep.qstate import (
    BlochVector,
    CorrelationDecomposition,
    DensityMatrix,
    bloch_to_density,
    density_to_bloch,
    hermitian_eigenvalues,
    is_separable_2x2,
    measure_projective,
    partial_trace,
    partial_transpose,
    tensor,
)
from telesep.teleport import bell_protocol_output, run_classical_protocol, teleport_party_of_bipartite

__version__ = "0.1.0"
