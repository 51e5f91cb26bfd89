"""Quench dynamics in the extended Dicke model by exact diagonalization."""

__version__ = "0.1.0"

from .model import (
    Basis,
    BasisSpec,
    BasisState,
    FullParity,
    HamiltonianSplit,
    ModelParams,
    MSubspace,
    TruncationError,
    assemble,
    build_basis,
    interaction_dispersion_analytic,
    interaction_dispersion_numeric,
    operator_diagonal,
    operator_matrix,
    suggest_n_max,
)
from .spectral import (
    CriticalStructure,
    EigenSystem,
    diagonalize,
    diagonalize_split,
    esqpt_lines,
    ground_state_energy_analytic,
    lambda_bar_critical,
    lambda_critical,
    lambda_zero,
    level_dynamics,
    phase_label,
)
from .quench import (
    EigenstateIndex,
    ExplicitBasisState,
    QuenchResult,
    QuenchScalars,
    QuenchSpec,
    TimeSeries,
    autocorrelation,
    gaussian_reference,
    observable_evolution,
    run_quench,
    scalars,
    survival_probability,
    survival_via_fourier,
    sweep_scalars,
)
