"""
Beam Steering
Array factor of a uniform linear TMA per harmonic and delay, closed-form
beam directions and the blocks that steer coherently.
"""

from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Union

import numpy as np

from .modwave import ModConfig, harmonic_coef

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class ArrayConfig:
    """
    Uniform linear array.

    Attributes:
        elements: Element count M.
        spacing: Element spacing d_lambda in wavelengths.
        carrier: Carrier frequency f_c in Hz.
    """

    elements: int
    spacing: float = 0.5
    carrier: float = 2.5e9

    def __post_init__(self) -> None:
        if self.elements < 1:
            raise ValueError("elements must be at least 1.")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive.")
        if self.carrier <= 0:
            raise ValueError("carrier must be positive.")


def _steering_cycles(i: int, d: int, cfg: ModConfig) -> float:
    """Per-element electrical phase in cycles, d*(1/D + (i+F)/O_tau)."""
    return d * (1 + (i + cfg.block_offset) * cfg.n_states) / cfg.delay_count


def element_phase(m: int, i: int, d: int, cfg: ModConfig) -> float:
    return -2 * np.pi * m * _steering_cycles(i, d, cfg)


def array_factor(
    theta: np.ndarray,
    i: int,
    d: int,
    acfg: ArrayConfig,
    cfg: ModConfig,
    simplified: bool = True,
) -> np.ndarray:
    """
    Complex array factor over the angle grid theta (radians).

    The full form scales the propagation phase by the harmonic frequency
    f_c + (1/N + i) f_p; the simplified form keeps only f_c.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.size == 0:
        raise ValueError("angle grid must not be empty.")
    frequency = acfg.carrier
    if not simplified:
        frequency += (1 / cfg.n_states + i) * cfg.pulse_frequency

    m = np.arange(acfg.elements)[:, None]
    phase = element_phase(1, i, d, cfg) * m
    # path difference m*d_lambda*(c/f_c)*sin(theta) at the harmonic frequency
    path = m * acfg.spacing * (SPEED_OF_LIGHT / acfg.carrier) * np.sin(theta)[None, :]
    propagation = -2 * np.pi * path / SPEED_OF_LIGHT * frequency
    total = np.exp(1j * (phase + propagation)).sum(axis=0)
    return harmonic_coef(i, cfg.n_states) * total / np.sqrt(acfg.elements)


def beam_angle(
    i: int, d: int, cfg: ModConfig, spacing: float, wrap: bool = True
) -> Optional[float]:
    """
    Main-beam direction in radians, or None when it falls outside visible
    space. With wrap the electrical phase is first reduced to [-1/2, 1/2)
    cycles, which selects the lobe nearest broadside.
    """
    cycles = _steering_cycles(i, d, cfg)
    if wrap:
        cycles = (cycles + 0.5) % 1.0 - 0.5
    arg = cycles / spacing
    if abs(arg) > 1 + 1e-12:
        return None
    return float(-np.arcsin(np.clip(arg, -1.0, 1.0)))


def block_angles(
    d: int, cfg: ModConfig, spacing: float, wrap: bool = True
) -> List[Optional[float]]:
    """Beam direction for every passband block i."""
    shift = cfg.block_offset
    return [
        beam_angle(i, d, cfg, spacing, wrap)
        for i in range(-shift, cfg.alias_factor - shift)
    ]


def coherent_blocks(cfg: ModConfig, d: int) -> List[int]:
    """
    Passband indices i that steer to the common direction of delay d, i.e.
    d*(i + F) is a multiple of O_tau. Their count is A*gcd(d, O_tau)/O_tau.
    """
    cfg.check_delay(d)
    shift = cfg.block_offset
    return [
        i
        for i in range(-shift, cfg.alias_factor - shift)
        if (d * (i + shift)) % cfg.oversampling == 0
    ]


def coherent_count(cfg: ModConfig, d: int) -> int:
    o = cfg.oversampling
    return cfg.alias_factor * gcd(d, o) // o


def radiated_power(
    i: int,
    d: int,
    acfg: ArrayConfig,
    cfg: ModConfig,
    step_deg: float = 0.01,
    simplified: bool = True,
) -> float:
    """Integral of |AF|^2 cos(theta) over visible space."""
    theta = angle_grid(step_deg)
    af = array_factor(theta, i, d, acfg, cfg, simplified)
    return float(np.trapezoid(np.abs(af) ** 2 * np.cos(theta), theta))


def angle_grid(step_deg: float = 0.01) -> np.ndarray:
    if step_deg <= 0:
        raise ValueError("step_deg must be positive.")
    return np.deg2rad(np.arange(-90.0, 90.0 + step_deg / 2, step_deg))


def to_degrees(angle: Union[float, None]) -> Optional[float]:
    return None if angle is None else float(np.rad2deg(angle))
