"""Exact uncertainty relations: classical/nonclassical decompositions and their numerical verification."""

from .checks import STATUSES, RelationCheck
from .decomp import (
    ClassicalField,
    DecompStats,
    classical_momentum_field,
    classical_position_field,
    momentum_decomposition_stats,
    number_classical_field,
    position_decomposition_stats,
    vector_classical_momentum,
)
from .finite_dim import (
    FiniteObservable,
    FiniteState,
    MubSet,
    classical_component,
    generalized_ur,
    ivanovic_check,
    mub_bases,
)
from .fisher import (
    FisherResult,
    collision_length,
    diffusion_entropy_rate_check,
    entropy,
    fisher_covariance,
    fisher_length,
    fisher_length_state,
)
from .grid import (
    EPR,
    HBAR,
    Box,
    Gaussian,
    Grid1D,
    Grid2D,
    GridDensity,
    GridDistribution,
    GridState,
    HarmonicEigenstate,
    NumberMixture,
    NumberState,
    Product,
    Superposition,
    build_state,
    condition_on_momentum,
    condition_on_position,
    momentum_representation,
)
from .kernels import BACKEND
from .relations import (
    correlation_relation_check,
    covariance_product_check,
    energy_decomposition,
    entropic_bound_estimates,
    exact_ur_conjugate,
    exact_ur_phase_number,
    exact_ur_position,
    matrix_ur_check,
    mixed_ur_check,
)
from .report import Report, emit_report
from .scenarios import REGISTRY, ScenarioSpec, run_scenario
from .wigner import WignerGrid, wigner_classical_momentum, wigner_covariance, wigner_function

__version__ = "0.1.0"
