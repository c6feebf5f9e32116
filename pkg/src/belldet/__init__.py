"""Bell tests with a small number of efficient detectors.

Simulates the project-then-test construction for multiqubit states: a few
parties keep efficient detectors and run a standard Bell test while the
rest only apply single projectors, whose detectors may be almost blind.
Provides critical detection efficiencies, visibility thresholds,
experiment-duration trade-offs, and lost-detector tolerances.
"""

from .analysis import (
    DickeLossSpec,
    TrialStats,
    bernoulli_pmf,
    damaged_state,
    dicke_loss_mixture,
    pascal_expected_trials,
    psi_plus_fraction,
    psi_plus_weight,
    success_probability,
    trial_ratio,
    trial_stats,
)
from .bell import (
    BellExpression,
    BellForm,
    BellTerm,
    OptimizeOptions,
    lhv_bound,
    optimize_settings,
    preset,
    quantum_value,
)
from .detmodel import (
    Convention,
    ConventionError,
    MeasurementSetting,
    X_PLUS,
    Z_ONE,
    Z_ZERO,
    click_probabilities,
    dressed_effects,
    dressed_observable,
)
from .protocol import (
    ScenarioConfig,
    SolveResult,
    composite_lhs,
    composite_parts,
    critical_eta_high,
    critical_visibility,
    default_projectors,
    projected_state,
    symmetric_critical_eta,
)
from .qstate import (
    DensityMatrix,
    Effect,
    PureState,
    QubitCapacityError,
    ZeroProjectionError,
    basis_state,
    embed_operator,
    expectation,
    partial_trace,
    project,
    tensor,
)
from .states import (
    StateSpec,
    add_white_noise,
    bell_phi_plus,
    bell_psi_plus,
    cluster4,
    dicke,
    ghz,
    make_state,
    partial_pair,
    w_state,
)

__all__ = [
    "BellExpression",
    "BellForm",
    "BellTerm",
    "Convention",
    "ConventionError",
    "DensityMatrix",
    "DickeLossSpec",
    "Effect",
    "MeasurementSetting",
    "OptimizeOptions",
    "PureState",
    "QubitCapacityError",
    "ScenarioConfig",
    "SolveResult",
    "StateSpec",
    "TrialStats",
    "ZeroProjectionError",
    "X_PLUS",
    "Z_ONE",
    "Z_ZERO",
    "add_white_noise",
    "basis_state",
    "bell_phi_plus",
    "bell_psi_plus",
    "bernoulli_pmf",
    "click_probabilities",
    "cluster4",
    "composite_lhs",
    "composite_parts",
    "critical_eta_high",
    "critical_visibility",
    "damaged_state",
    "default_projectors",
    "dicke",
    "dicke_loss_mixture",
    "dressed_effects",
    "dressed_observable",
    "embed_operator",
    "expectation",
    "ghz",
    "lhv_bound",
    "make_state",
    "optimize_settings",
    "partial_pair",
    "partial_trace",
    "pascal_expected_trials",
    "preset",
    "project",
    "projected_state",
    "psi_plus_fraction",
    "psi_plus_weight",
    "quantum_value",
    "success_probability",
    "symmetric_critical_eta",
    "tensor",
    "trial_ratio",
    "trial_stats",
    "w_state",
]

__version__ = "0.1.0"
