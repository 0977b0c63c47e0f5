"""Spin-selective radical-pair recombination kinetics.

A small simulator for the reaction kinetics of a radical pair whose
singlet channel recombines at rate k_S while the triplet channel is
closed. Includes the measurement-type master equation, its renormalized
nonlinear form for the surviving pairs, the conventional Haberkorn
equation, closed-form solutions and decompositions in an expanded basis
that tracks the reaction product, an RK4 propagator, and a CLI.
"""

from .analytic import (
    DecompositionWeights,
    KominisSplit,
    decomposition_weights,
    hk_expanded_solution,
    independent_entry_distance,
    kominis_claimed_state,
    kominis_decomposition,
    normalized_evolution_residual,
    qm_expanded_solution,
    reconstruct_from_weights,
    unrecombined_state,
)
from .errors import (
    BasisError,
    ConfigError,
    DimensionError,
    DomainError,
    ImproperStateError,
    InvariantViolationError,
    NormalizationError,
    NotHermitianError,
    RPKineticsError,
    UnsupportedModelError,
    VanishingTraceError,
    WeightError,
)
from .integrate import (
    IntegratorConfig,
    Trajectory,
    TrajectoryPoint,
    propagate,
    rk4_step,
    step_doubling_error,
    time_grid,
)
from .models import (
    ModelKind,
    RateParams,
    expanded_rhs,
    haberkorn_rhs,
    normalized_rhs,
    qm_rhs,
    rhs_function,
)
from .spinsys import (
    PST,
    ST,
    BasisKind,
    DensityMatrix,
    InitialState,
    Observables,
    Projectors,
    SpinBasis,
    embed_st_in_pst,
    initial_density,
    make_basis,
    make_projectors,
    observables,
    renormalize,
    restrict_pst_to_rp,
)
from .verify import VerifyCheck, VerifyReport, run_all_checks

__version__ = "0.1.0"
