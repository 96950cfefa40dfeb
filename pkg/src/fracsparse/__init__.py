"""Sparse sampling, time-domain recovery and Cramér-Rao bounds in the fractional Fourier domain."""
from .crb import (
    CrbReport,
    FimMatrix,
    crb_analytic_k1,
    crb_numeric,
    dz_dc,
    dz_dt,
    fim_analytic_k1,
    fim_numeric,
    phi_infinity,
    phi_sum,
    s_sum_closed,
)
from .errors import (
    CaptureFormatError,
    ConfigError,
    DegenerateConfigurationError,
    FracSparseError,
    InsufficientSamplesError,
    InvalidArgumentError,
    NoisyRootsError,
    PoleError,
    UnsupportedBranchError,
)
from .frft import (
    FrftOrder,
    Kernel,
    SampleSet,
    SparseSignal,
    chirp_down,
    chirp_factor,
    chirp_up,
    frac_convolve_on_grid,
    frft_interpolate,
    kernel_eval,
    sinc,
)
from .recovery import (
    AnnihilationConfig,
    IllPosedWarning,
    RecoveryResult,
    build_D,
    build_ycirc,
    estimate_amplitudes,
    finite_diff,
    nullspace_q,
    recover,
    roots_to_locations,
)
from .synthesis import (
    NoiseModel,
    QuantizerModel,
    add_noise,
    quantize,
    sample_uniform,
    synthesize_measurement,
)

__version__ = "0.1.0"

__all__ = [
    "AnnihilationConfig",
    "CaptureFormatError",
    "ConfigError",
    "CrbReport",
    "DegenerateConfigurationError",
    "FimMatrix",
    "FracSparseError",
    "FrftOrder",
    "IllPosedWarning",
    "InsufficientSamplesError",
    "InvalidArgumentError",
    "Kernel",
    "NoiseModel",
    "NoisyRootsError",
    "PoleError",
    "QuantizerModel",
    "RecoveryResult",
    "SampleSet",
    "SparseSignal",
    "UnsupportedBranchError",
    "add_noise",
    "build_D",
    "build_ycirc",
    "chirp_down",
    "chirp_factor",
    "chirp_up",
    "crb_analytic_k1",
    "crb_numeric",
    "dz_dc",
    "dz_dt",
    "estimate_amplitudes",
    "fim_analytic_k1",
    "fim_numeric",
    "finite_diff",
    "frac_convolve_on_grid",
    "frft_interpolate",
    "kernel_eval",
    "nullspace_q",
    "phi_infinity",
    "phi_sum",
    "quantize",
    "recover",
    "roots_to_locations",
    "s_sum_closed",
    "sample_uniform",
    "sinc",
    "synthesize_measurement",
]
