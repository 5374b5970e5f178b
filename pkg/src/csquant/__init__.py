"""Coherent-state quantization of phase-space observables in a truncated Fock basis."""

from . import distrib, expr, fock, linalg, ncplane, quadrature, quantize, specfun, spectra, symbols
from .distrib import (
    DiracDerivativeCombo,
    dequantize,
    dirac_delta,
    oblique_projector_symbol,
    projector_symbol,
    quantize_dirac_combo,
    star_product,
)
from .errors import (
    ConvergenceError,
    CSQuantError,
    DomainError,
    QuadratureError,
    SupportError,
    TruncationError,
)
from .fock import CoherentVector, FockOperator, TruncationPolicy, coherent_vector
from .ncplane import ExpSymbol, momentum_symbol, star_delta_check, voros_star
from .quantize import (
    Angular,
    AngularFourierCoeffs,
    Builtin,
    General,
    Isotropic,
    Monomial,
    QuadratureSpec,
    build_angle_operator,
    build_free_hamiltonian,
    build_harmonic_hamiltonian,
    build_time_operator,
    fourier_coeffs_pv,
    quantize_angular,
    quantize_general,
    quantize_isotropic,
)
from .quantize import quantize as quantize_observable
from .spectra import StudyReport, angle_number_commutator_study, time_commutator_study
from .symbols import (
    SymbolGrid,
    angle_symbol_series,
    gaussian_convolution_oracle,
    lower_symbol,
    lower_symbol_grid,
    time_symbol_series,
)

__version__ = "0.1.0"
