"""Collisional decoherence of an N-atom two-mode interferometer."""

from .model import (
    BranchLabel,
    DecoherenceParams,
    EnvironmentSpec,
    ExperimentSpec,
    Noon,
    Product,
    Segment,
    SpecError,
    Tabulated,
    Yukawa,
    validate_spec,
)
from .kernels import (
    coeffs_decoherence,
    coeffs_unitary,
    kernel_D,
    kernel_D_positions,
    kernel_U,
    kernel_U_positions,
)
from .rates import (
    ConvergenceError,
    QuadratureSettings,
    RateDensities,
    RateReport,
    compute_gamma,
    compute_s,
    compute_tau,
    potential_fourier,
    rate_densities,
    rates_report,
    rates_to_params,
)
from .evolution import (
    DensityBlock,
    early_time_O_plus,
    element_factor,
    full_rho,
    noon_coherence,
    partial_trace,
    reduced_element,
)
from .observables import (
    ConjugationError,
    MomentCoefficients,
    PortProjector,
    SampleReport,
    counting_distribution,
    expect_O_plus,
    moment,
    moment_coefficients,
    noon_fringe,
    sample_runs,
    variance_closed_form,
    visibility_phase,
)

__version__ = "0.1.0"
