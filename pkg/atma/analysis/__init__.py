"""
Closed-form analysis of aliased time-modulated arrays.
"""

from .modwave import (
    ModConfig,
    HarmonicSpectrum,
    state_phase,
    fourier_coeff,
    harmonic_coef,
    held_harmonic_coef,
    harmonic_exists,
    delay_phase,
    delayed_coef,
    waveform_samples,
)
from .alias import (
    Precoder,
    AliasedSpectrum,
    alternating_precoder,
    identity_precoder,
    make_precoder,
    extended_precoder,
    aliased_coef,
    block_spectrum,
)
from .metrics import (
    SystemReport,
    Violation,
    ConstraintViolationError,
    aclr,
    passband_ripple,
    evm,
    symbol_rate,
    normalized_capacity,
    check_constraints,
    system_report,
)
from .beam import ArrayConfig, element_phase, array_factor, beam_angle

__all__ = [
    "ModConfig",
    "HarmonicSpectrum",
    "state_phase",
    "fourier_coeff",
    "harmonic_coef",
    "held_harmonic_coef",
    "harmonic_exists",
    "delay_phase",
    "delayed_coef",
    "waveform_samples",
    "Precoder",
    "AliasedSpectrum",
    "alternating_precoder",
    "identity_precoder",
    "make_precoder",
    "extended_precoder",
    "aliased_coef",
    "block_spectrum",
    "SystemReport",
    "Violation",
    "ConstraintViolationError",
    "aclr",
    "passband_ripple",
    "evm",
    "symbol_rate",
    "normalized_capacity",
    "check_constraints",
    "system_report",
    "ArrayConfig",
    "element_phase",
    "array_factor",
    "beam_angle",
]
