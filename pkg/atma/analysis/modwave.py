"""
Modulating Waveform
Harmonic analysis of the N-state phase switch: Fourier coefficients,
cyclic-delay phase shifts and the sampled (held) modulating sequence.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Union

import numpy as np

IndexLike = Union[int, np.ndarray]


def sinc(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True)
class ModConfig:
    """
    Modulation tuple of an aliased time-modulated array.

    Attributes:
        n_states: Number of switch phase states N.
        alias_factor: Aliasing factor A (pulse stretching and block count).
        oversampling: Switch timing oversampling factor O_tau.
        sample_rate: Baseband sampling frequency f_s in Hz.
    """

    n_states: int
    alias_factor: int
    oversampling: int = 1
    sample_rate: float = 1.0

    def __post_init__(self) -> None:
        if self.n_states < 2:
            raise ValueError("n_states must be at least 2.")
        if self.alias_factor < 1:
            raise ValueError("alias_factor must be at least 1.")
        if self.oversampling < 1:
            raise ValueError("oversampling must be at least 1.")
        if self.oversampling > self.alias_factor:
            raise ValueError(
                f"oversampling ({self.oversampling}) must not exceed "
                f"alias_factor ({self.alias_factor})."
            )
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive.")

    @property
    def sample_period(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def pulse_duration(self) -> float:
        return self.alias_factor * self.sample_period

    @property
    def pulse_frequency(self) -> float:
        return self.sample_rate / self.alias_factor

    @property
    def switch_frequency(self) -> float:
        return self.sample_rate * self.oversampling / self.alias_factor

    @property
    def switch_ratio(self) -> Fraction:
        """Switching frequency as an exact fraction of the sampling rate."""
        return Fraction(self.oversampling, self.alias_factor)

    @property
    def switch_period(self) -> float:
        return self.pulse_duration / self.oversampling

    @property
    def delay_count(self) -> int:
        return self.n_states * self.oversampling

    @property
    def modulating_frequency(self) -> float:
        # offset of the 0-th harmonic, f_p / N
        return self.pulse_frequency / self.n_states

    @property
    def block_offset(self) -> int:
        """floor((A - 1) / 2), the passband index offset after aliasing."""
        return (self.alias_factor - 1) // 2

    @property
    def default_window(self) -> int:
        return 8 * self.alias_factor * self.n_states

    def min_upsample(self) -> int:
        """Smallest L that places every switching instant on the sample grid."""
        return self.oversampling // gcd(self.alias_factor, self.oversampling)

    def default_upsample(self, base: int = 64) -> int:
        return base * self.min_upsample()

    def check_upsample(self, upsample: int) -> None:
        if not isinstance(upsample, (int, np.integer)) or isinstance(upsample, bool):
            raise ValueError(f"upsample must be an integer, got {upsample!r}.")
        if upsample < 1:
            raise ValueError("upsample must be at least 1.")
        if (upsample * self.alias_factor) % self.oversampling:
            raise ValueError(
                f"upsample {upsample} puts switching instants off the sample grid "
                f"(L*A/O_tau = {upsample * self.alias_factor}/{self.oversampling})."
            )

    def check_delay(self, delay: int) -> None:
        if not 0 <= delay < self.delay_count:
            raise ValueError(
                f"delay {delay} out of range [0, {self.delay_count - 1}]."
            )

    def period_samples(self, upsample: int) -> int:
        """Samples in one modulating period N*T_p at rate L*f_s."""
        return self.n_states * self.alias_factor * upsample


@dataclass
class HarmonicSpectrum:
    """Complex coefficients over the inclusive harmonic range [i_min, i_max]."""

    i_min: int
    i_max: int
    coefficients: np.ndarray
    leakage: float = 0.0
    upsample: Optional[int] = field(default=None)

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.i_max - self.i_min + 1:
            raise ValueError("coefficient count does not match index range.")

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.i_min, self.i_max + 1)

    def __getitem__(self, i: int) -> complex:
        if not self.i_min <= i <= self.i_max:
            raise IndexError(f"harmonic {i} outside [{self.i_min}, {self.i_max}]")
        return complex(self.coefficients[i - self.i_min])

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)


def state_phase(n: int, n_states: int) -> float:
    if not 0 <= n < n_states:
        raise ValueError(f"state index {n} out of range [0, {n_states - 1}].")
    return 2 * np.pi * n / n_states


def fourier_coeff(n: int, k: IndexLike, n_states: int) -> Union[complex, np.ndarray]:
    """Coefficient of the k-th harmonic of the rectangular pulse of state n."""
    phase = state_phase(n, n_states)
    x = np.asarray(k) / n_states
    coef = np.exp(1j * phase) * sinc(np.pi * x) * np.exp(-1j * np.pi * x)
    return complex(coef) if np.ndim(coef) == 0 else coef


def harmonic_coef(i: IndexLike, n_states: int) -> Union[complex, np.ndarray]:
    """Continuous-time harmonic coefficient alpha(i)."""
    x = np.asarray(i) + 1.0 / n_states
    coef = sinc(np.pi * x) * np.exp(-1j * np.pi * x)
    return complex(coef) if np.ndim(coef) == 0 else coef


def held_harmonic_coef(
    i: IndexLike, cfg: ModConfig, upsample: int
) -> Union[complex, np.ndarray]:
    """
    Harmonic coefficient of the modulating sequence held over samples at
    rate L*f_s. Periodic in i with period A*L; tends to alpha(i) as L grows.
    """
    cfg.check_upsample(upsample)
    n = cfg.n_states
    period = cfg.period_samples(upsample)
    k = 1 + np.asarray(i) * n
    # k mod P keeps the angle small; the expression is P-periodic in k
    x = np.pi * np.mod(k, period) / period
    coef = (
        np.sin(np.pi / n)
        * np.exp(-1j * np.pi / n)
        * np.exp(1j * x)
        / (cfg.alias_factor * upsample * np.sin(x))
    )
    return complex(coef) if np.ndim(coef) == 0 else coef


def harmonic_exists(k: int, n_states: int) -> bool:
    return k % n_states == 1 % n_states


def delay_phase(i: IndexLike, d: int, cfg: ModConfig) -> Union[float, np.ndarray]:
    cfg.check_delay(d)
    phase = -2 * np.pi * d / cfg.delay_count - 2 * np.pi * (
        d / cfg.oversampling
    ) * np.asarray(i)
    return float(phase) if np.ndim(phase) == 0 else phase


def delay_factor(i: IndexLike, d: int, cfg: ModConfig) -> np.ndarray:
    """exp(j*delay_phase) with the angle reduced exactly over integers."""
    cfg.check_delay(d)
    turns = np.mod(d * (1 + np.asarray(i) * cfg.n_states), cfg.delay_count)
    return np.exp(-2j * np.pi * turns / cfg.delay_count)


def delayed_coef(
    i: IndexLike, d: int, cfg: ModConfig, upsample: Optional[int] = None
) -> Union[complex, np.ndarray]:
    if upsample is None:
        base = harmonic_coef(i, cfg.n_states)
    else:
        base = held_harmonic_coef(i, cfg, upsample)
    coef = np.asarray(base) * delay_factor(i, d, cfg)
    return complex(coef) if np.ndim(coef) == 0 else coef


def switch_states(cfg: ModConfig, d: int, sample_count: int, upsample: int) -> np.ndarray:
    """Active state index per sample of the delayed sequence at rate L*f_s."""
    cfg.check_upsample(upsample)
    cfg.check_delay(d)
    period = cfg.period_samples(upsample)
    if sample_count <= 0 or sample_count % period:
        raise ValueError(
            f"sample_count {sample_count} is not a positive multiple of the "
            f"waveform period ({period} samples)."
        )
    hold = cfg.alias_factor * upsample
    shift = d * hold // cfg.oversampling
    n = np.arange(sample_count)
    return np.floor_divide(n - shift, hold) % cfg.n_states


def waveform_samples(
    cfg: ModConfig, d: int, sample_count: int, upsample: int
) -> np.ndarray:
    """
    Piecewise-constant unit-modulus modulating sequence c(t - d*T_sw).

    The value over [t, t + 1/(L*f_s)) is the state active at t.
    """
    states = switch_states(cfg, d, sample_count, upsample)
    return np.exp(2j * np.pi * states / cfg.n_states)
