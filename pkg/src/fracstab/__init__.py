"""Caputo time-fractional diffusion on (0, 1): modal simulation, stability
diagnostics and feedback stabilization."""

from .errors import (
    ConfigError,
    DegenerateDataError,
    DomainError,
    FracstabError,
    GridError,
    NotStabilizableError,
    NumericError,
    PairingError,
    ParameterError,
    PreconditionError,
    RangeError,
    ResolutionError,
    UnsupportedStructureError,
)
from .solution_engine import (
    ForcingDescriptor,
    SolutionTrace,
    evolve_forced_constant,
    evolve_forced_general,
    evolve_homogeneous,
    evolve_trace,
    subordination_kernel_scalar,
    subordination_scalar,
)
from .special_functions import (
    FractionalOrder,
    MlParameters,
    density_moment,
    mainardi_density,
    mittag_leffler,
    ml_asymptotic_bound_check,
    ml_evaluate,
    ml_one,
    ml_two,
)
from .spectral_model import (
    ModalOperator,
    ModalState,
    SpectrumSplit,
    dirichlet_laplacian,
    project,
    split_spectrum,
    synthesize,
)
from .stability import (
    StabilityReport,
    analyze,
    check_semigroup_conditions,
    classify_strong,
    energy_integral,
    fit_decay_exponent,
    matignon_test,
)
from .stabilization import (
    DecompositionPlan,
    FeedbackLaw,
    closed_loop,
    decompose_and_stabilize,
    simulate_closed_loop,
    stabilization_error,
)

__version__ = "0.1.0"
