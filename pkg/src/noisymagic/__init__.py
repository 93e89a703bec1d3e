"""Density-matrix simulator and magic-measurement toolkit for studying how
incoherent noise creates, transports, and destroys nonstabilizerness in
random encoding-decoding circuits (desk scale, N <= 6 qubits).
"""

from .analytic import (
    CodeParams,
    alpha_boundary,
    fidelity_ad,
    fidelity_mixed,
    lambda_ad,
    p_critical,
    purity_mean,
    replica_transfer_trace,
    tau_effective,
    transfer_factor_mixed,
)
from .channels import (
    KrausChannel,
    amplitude_damping,
    apply_local,
    compose,
    depolarizing_global,
    depolarizing_local,
    gadc,
    mixed_error,
    selective_apply,
    z_rotation,
)
from .clifford import (
    CLIFFORD_WORDS,
    EncoderSpec,
    encoder_unitary,
    is_stabilizer_state,
    sample_encoder,
    single_qubit_clifford,
    xx_rotation,
)
from .magic import (
    LpProblem,
    RomResult,
    rom_column_generation,
    rom_exact,
    rom_single_qubit_oracle,
    sre,
    sre_depolarizing_analytic,
    witness_w2,
    write_lp,
)
from .protocol import (
    ChannelSpec,
    EnsembleSummary,
    ProtocolConfig,
    TrajectoryRecord,
    decompose_alpha_beta_xi,
    ensemble_run,
    master_inequality_check,
    no_click_distill,
    post_error_layer_rom,
    run_trajectory,
)
from .qstate import (
    BlochVector,
    DensityMatrix,
    PauliString,
    bloch_vector,
    fidelity_with_pure,
    from_bloch,
    hs_distance,
    pauli_expectations,
    pauli_matrix,
    postselect_ancillas,
    purity,
    trace_distance,
)
from .stabilizers import (
    StabilizerTable,
    enumerate_stabilizer_states,
    get_table,
    load_or_build,
    load_table,
    save_table,
    stabilizer_count,
)

__version__ = "0.1.0"
