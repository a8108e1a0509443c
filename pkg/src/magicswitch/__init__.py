"""magicswitch: coherent-order channel composition and magic monotones.

The package builds the composite channel obtained when a control qubit puts
a target system through two channels in a superposition of both orders,
and quantifies the non-stabilizerness of the resulting states and channels:
robustness monotones via exact linear programs over stabilizer atoms for
qubits, and discrete-Wigner mana for odd prime dimensions.
"""

__version__ = "0.1.0"

from .channels import (
    ChoiState,
    DensityOperator,
    KrausChannel,
    apply_channel,
    channel_from_choi,
    choi_of_channel,
    compose_channels,
    depolarizing_channel,
    extend_with_reference,
    identity_channel,
    measure_control,
    noisy_th_channel,
    orthogonal_unitary_basis,
    qutrit_k2_variant_report,
    qutrit_noisy_th_channel,
    unitary_channel,
)
from .config import DEFAULT_TOL, Tolerances
from .experiments import (
    SweepConfig,
    SweepRow,
    ThresholdResult,
    default_config,
    find_threshold,
    run_appendix_c,
    run_fig2,
    run_fig3,
    run_figs1,
)
from .linalg import dagger, partial_trace, pauli_strings, tensor
from .lp import (
    AffineL1Problem,
    ExtraEquality,
    L1Solution,
    channel_robustness,
    problem_to_lp_text,
    rom_state,
    solve_l1,
)
from .phasespace import (
    PhaseSpaceFrame,
    build_frame,
    is_cpwp,
    mana_channel,
    mana_state,
    wigner_of_channel,
    wigner_of_state,
)
from .qswitch import (
    EffectiveDepolarizingSwitch,
    SwitchedChannel,
    WeightedChannel,
    build_switch,
    conditional_outputs,
    depolarizing_switch_closed_form,
    effective_t_channels,
)
from .stabilizers import (
    ChoiAtom,
    StabilizerDictionary,
    cspo_choi_atoms,
    dictionary_from_json,
    dictionary_to_json,
    enumerate_stabilizer_states,
    is_stabilizer_state,
)

__all__ = [
    "AffineL1Problem",
    "ChoiAtom",
    "ChoiState",
    "DEFAULT_TOL",
    "DensityOperator",
    "EffectiveDepolarizingSwitch",
    "ExtraEquality",
    "KrausChannel",
    "L1Solution",
    "PhaseSpaceFrame",
    "StabilizerDictionary",
    "SweepConfig",
    "SweepRow",
    "SwitchedChannel",
    "ThresholdResult",
    "Tolerances",
    "WeightedChannel",
    "apply_channel",
    "build_frame",
    "build_switch",
    "channel_from_choi",
    "channel_robustness",
    "choi_of_channel",
    "compose_channels",
    "conditional_outputs",
    "cspo_choi_atoms",
    "dagger",
    "default_config",
    "depolarizing_channel",
    "depolarizing_switch_closed_form",
    "dictionary_from_json",
    "dictionary_to_json",
    "effective_t_channels",
    "enumerate_stabilizer_states",
    "extend_with_reference",
    "find_threshold",
    "identity_channel",
    "is_cpwp",
    "is_stabilizer_state",
    "mana_channel",
    "mana_state",
    "measure_control",
    "noisy_th_channel",
    "orthogonal_unitary_basis",
    "partial_trace",
    "pauli_strings",
    "problem_to_lp_text",
    "qutrit_k2_variant_report",
    "qutrit_noisy_th_channel",
    "rom_state",
    "run_appendix_c",
    "run_fig2",
    "run_fig3",
    "run_figs1",
    "solve_l1",
    "tensor",
    "unitary_channel",
    "wigner_of_state",
    "wigner_of_channel",
]
