"""
Block Aliasing
Precoders for the repeated-block baseband signal and the aliased harmonic
coefficients that result when A precoded replicas overlap.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import digamma, zeta

from .modwave import (
    IndexLike,
    ModConfig,
    delay_factor,
    harmonic_coef,
    held_harmonic_coef,
)

UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Precoder:
    """Phase-only per-block precoder v(a)."""

    base: Tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.base:
            raise ValueError("precoder must have at least one block.")
        if np.any(np.abs(np.abs(np.asarray(self.base)) - 1) > UNIT_TOLERANCE):
            raise ValueError("precoder entries must have unit modulus.")

    @property
    def size(self) -> int:
        return len(self.base)

    def vector(self) -> np.ndarray:
        return np.asarray(self.base, dtype=complex)

    def extended(self, a: int, d: int, oversampling: int) -> complex:
        return extended_precoder(self, a, d, oversampling)

    def extended_vector(self, d: int, oversampling: int) -> np.ndarray:
        a = np.arange(self.size)
        turns = np.mod(a * d, oversampling)
        return self.vector() * np.exp(-2j * np.pi * turns / oversampling)


def alternating_precoder(alias_factor: int) -> Precoder:
    if alias_factor < 1:
        raise ValueError("alias_factor must be at least 1.")
    return Precoder(tuple(complex((-1) ** a) for a in range(alias_factor)))


def identity_precoder(alias_factor: int) -> Precoder:
    if alias_factor < 1:
        raise ValueError("alias_factor must be at least 1.")
    return Precoder(tuple(1 + 0j for _ in range(alias_factor)))


PRECODERS = {
    "alternating": alternating_precoder,
    "identity": identity_precoder,
}


def make_precoder(name: str, alias_factor: int) -> Precoder:
    try:
        return PRECODERS[name](alias_factor)
    except KeyError:
        raise ValueError(
            f"unknown precoder '{name}', expected one of {sorted(PRECODERS)}"
        ) from None


def extended_precoder(p: Precoder, a: int, d: int, oversampling: int) -> complex:
    """v(a, d) = v(a) * exp(-j*2*pi*a*d / O_tau)."""
    if not 0 <= a < p.size:
        raise ValueError(f"block index {a} out of range [0, {p.size - 1}].")
    turns = (a * d) % oversampling
    return complex(p.base[a] * np.exp(-2j * np.pi * turns / oversampling))


def _check_precoder(cfg: ModConfig, p: Precoder) -> None:
    if p.size != cfg.alias_factor:
        raise ValueError(
            f"precoder length {p.size} does not match alias_factor "
            f"{cfg.alias_factor}."
        )


def _base_coef(i: np.ndarray, cfg: ModConfig, upsample: Optional[int]) -> np.ndarray:
    if upsample is None:
        return np.asarray(harmonic_coef(i, cfg.n_states))
    return np.asarray(held_harmonic_coef(i, cfg, upsample))


def aliased_coef(
    i: IndexLike,
    d: int,
    cfg: ModConfig,
    p: Precoder,
    upsample: Optional[int] = None,
) -> np.ndarray:
    """
    Aliased coefficient alpha_A(i, d): the common delay phase times the
    precoded sum of the A harmonics that fold onto block position i.
    """
    _check_precoder(cfg, p)
    idx = np.asarray(i)
    shift = cfg.block_offset
    acc = np.zeros(idx.shape, dtype=complex)
    for a, v in enumerate(p.vector()):
        acc = acc + v * _base_coef(idx - a + shift, cfg, upsample)
    coef = delay_factor(idx + shift, d, cfg) * acc
    return coef


def aliased_coef_direct(
    i: IndexLike,
    d: int,
    cfg: ModConfig,
    p: Precoder,
    upsample: Optional[int] = None,
) -> np.ndarray:
    """Same quantity built term by term from delayed harmonics and v(a, d)."""
    _check_precoder(cfg, p)
    idx = np.asarray(i)
    shift = cfg.block_offset
    acc = np.zeros(idx.shape, dtype=complex)
    for a, v in enumerate(p.extended_vector(d, cfg.oversampling)):
        m = idx - a + shift
        acc = acc + v * _base_coef(m, cfg, upsample) * delay_factor(m, d, cfg)
    return acc


def term_phases(i: int, cfg: ModConfig) -> np.ndarray:
    """Angles of the individual harmonics alpha(i - a + F) entering block i."""
    m = i - np.arange(cfg.alias_factor) + cfg.block_offset
    return np.angle(np.asarray(harmonic_coef(m, cfg.n_states)))


def sideband_of(i: int, cfg: ModConfig) -> Optional[str]:
    """'upper' or 'lower' when every folded term sits on one phase branch."""
    shift = cfg.block_offset
    if i > shift and i - (cfg.alias_factor - 1) + shift >= 0:
        return "upper"
    if i < -(cfg.alias_factor - 1) + shift:
        return "lower"
    return None


@dataclass
class AliasedSpectrum:
    """Aliased block coefficients over the window [-W, W]."""

    cfg: ModConfig
    delay: int
    precoder: Precoder
    window: int
    coefficients: np.ndarray
    upsample: Optional[int] = None

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.window, self.window + 1)

    @property
    def passband_indices(self) -> np.ndarray:
        shift = self.cfg.block_offset
        return np.arange(-shift, self.cfg.alias_factor - shift)

    @property
    def pre_alias_passband(self) -> np.ndarray:
        shift = self.cfg.block_offset
        return np.arange(-(self.cfg.alias_factor - 1) + shift, shift + 1)

    @property
    def frac_shift(self) -> float:
        a = self.cfg.alias_factor
        return self.cfg.block_offset - (a - 1) / 2 + 1 / self.cfg.n_states

    def covers(self, indices: np.ndarray) -> bool:
        return bool(
            np.all(indices >= -self.window) and np.all(indices <= self.window)
        )

    def coef(self, indices: IndexLike) -> np.ndarray:
        idx = np.asarray(indices)
        if not self.covers(idx):
            raise ValueError(
                f"indices outside the spectrum window [-{self.window}, "
                f"{self.window}]."
            )
        return self.coefficients[idx + self.window]

    def power(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def power_at(self, indices: IndexLike) -> np.ndarray:
        return np.abs(self.coef(indices)) ** 2

    def normalized_power_db(self) -> np.ndarray:
        power = self.power()
        return 10 * np.log10(np.maximum(power / power.max(), 1e-300))

    def block_centers(self) -> np.ndarray:
        """Block centre frequencies in Hz, fractional shift included."""
        return (self.frac_shift + self.indices) * self.cfg.pulse_frequency

    def tail_power(self) -> float:
        """Exact power of all blocks outside the window."""
        if self.upsample is not None:
            raise ValueError("tail power is defined for the continuous model only.")
        return _tail_power(self.cfg, self.precoder, self.window)

    def total_power(self, include_tail: bool = False) -> float:
        total = float(self.power().sum())
        if include_tail:
            total += self.tail_power()
        return total


def _pair_tail(q_a: float, q_b: float, start: float) -> float:
    """sum_{j >= 0} 1 / ((j + start + q_a) * (j + start + q_b))"""
    if abs(q_a - q_b) < 1e-15:
        return float(zeta(2, start + q_a))
    return float((digamma(start + q_b) - digamma(start + q_a)) / (q_b - q_a))


def _tail_power(cfg: ModConfig, p: Precoder, window: int) -> float:
    # alpha_A(i) has modulus |c * sum_a v(a) / (i + q_a)|
    c = np.sin(np.pi / cfg.n_states) / np.pi
    v = p.vector()
    q = np.array(
        [cfg.block_offset - a + 1 / cfg.n_states for a in range(p.size)]
    )
    total = 0.0
    for side in (1.0, -1.0):
        for a in range(p.size):
            for b in range(p.size):
                weight = (v[a] * np.conj(v[b])).real
                if weight == 0:
                    continue
                total += weight * _pair_tail(side * q[a], side * q[b], window + 1)
    return float(c**2 * total)


def block_spectrum(
    cfg: ModConfig,
    d: int,
    p: Precoder,
    window: Optional[int] = None,
    upsample: Optional[int] = None,
) -> AliasedSpectrum:
    if window is None:
        window = cfg.default_window
    if window < cfg.alias_factor:
        raise ValueError(
            f"window {window} must be at least alias_factor {cfg.alias_factor}."
        )
    cfg.check_delay(d)
    indices = np.arange(-window, window + 1)
    coefficients = aliased_coef(indices, d, cfg, p, upsample=upsample)
    return AliasedSpectrum(
        cfg=cfg,
        delay=d,
        precoder=p,
        window=window,
        coefficients=coefficients,
        upsample=upsample,
    )


def distinct_extended_vectors(p: Precoder, oversampling: int) -> List[np.ndarray]:
    """The O_tau precoder vectors needed across all delays."""
    vectors: List[np.ndarray] = []
    for d in range(oversampling):
        vec = p.extended_vector(d, oversampling)
        if not any(np.allclose(vec, seen) for seen in vectors):
            vectors.append(vec)
    return vectors
