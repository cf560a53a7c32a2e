"""sijc: shape-invariant two-channel ladder systems.

Exact spectra, mixing amplitudes, closed-form time evolution and the
population-inversion dynamics of a two-level system coupled to a
shape-invariant ladder, with every closed form checked against independent
brute-force references on exact finite matrix representations.
"""

from .models import (
    LadderSpectrum,
    ModelValidityError,
    ShapeInvariantModel,
    ValidityReport,
    build_ladder,
    harmonic,
    max_level_count,
    morse_class,
    remainder,
    scaling_class,
    validate_model,
)
from .twochannel import (
    PHASE_MINUS_I,
    PHASE_PLUS_I,
    HamiltonianParts,
    ShiftOperator,
    TwoChannelOperator,
    build_cd,
    build_hamiltonian,
    build_shift,
    identity_suite,
    op_function,
    sigma3_operator,
)
from .spectrum import (
    SpectrumTable,
    StandardJCCoefficients,
    analytic_spectrum,
    oracle_comparison,
    resonant_limits,
    standard_jc_spectrum,
)
from .evolution import (
    ModeFrequencies,
    PropagatorSample,
    full_propagator,
    mode_frequencies,
    paper_propagator,
    propagator_diagnostics,
)
from .inversion import (
    InversionSeries,
    ParticularBlocks,
    RabiFrequencies,
    f_matrix,
    fxy_series,
    g_aux,
    inversion_expectation,
    inversion_series,
    kernel_cos,
    kernel_sin,
    particular_solution,
    rabi_frequencies,
    sigma3,
    standard_jc_particular,
)

__version__ = "0.1.0"

__all__ = [
    "LadderSpectrum",
    "ModelValidityError",
    "ShapeInvariantModel",
    "ValidityReport",
    "build_ladder",
    "harmonic",
    "max_level_count",
    "morse_class",
    "remainder",
    "scaling_class",
    "validate_model",
    "PHASE_MINUS_I",
    "PHASE_PLUS_I",
    "HamiltonianParts",
    "ShiftOperator",
    "TwoChannelOperator",
    "build_cd",
    "build_hamiltonian",
    "build_shift",
    "identity_suite",
    "op_function",
    "sigma3_operator",
    "SpectrumTable",
    "StandardJCCoefficients",
    "analytic_spectrum",
    "oracle_comparison",
    "resonant_limits",
    "standard_jc_spectrum",
    "ModeFrequencies",
    "PropagatorSample",
    "full_propagator",
    "mode_frequencies",
    "paper_propagator",
    "propagator_diagnostics",
    "InversionSeries",
    "ParticularBlocks",
    "RabiFrequencies",
    "f_matrix",
    "fxy_series",
    "g_aux",
    "inversion_expectation",
    "inversion_series",
    "kernel_cos",
    "kernel_sin",
    "particular_solution",
    "rabi_frequencies",
    "sigma3",
    "standard_jc_particular",
    "__version__",
]
