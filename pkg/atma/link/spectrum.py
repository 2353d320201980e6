"""
Spectrum Measurement
Averaged periodogram of modulated sample streams and the sideband levels
read off it, for the constant-bandwidth and constant-switching scenarios.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import welch

from ..analysis.alias import Precoder, alternating_precoder
from ..analysis.modwave import ModConfig
from .frame import frame_for
from .simulator import Impairment, modulate_time

MIN_RESOLUTION_BINS = 256
SCENARIOS = ("constant-bandwidth", "constant-switching")


@dataclass
class SidebandLevels:
    """Sideband summary relative to the spectrum peak, in dB."""

    shelf_db: float
    worst_db: float
    lower_aclr_db: float
    bins: int


def measure_spectrum(
    samples: np.ndarray, resolution_bins: int, sample_rate: float = 1.0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Averaged periodogram over non-overlapping rectangular windows of
    resolution_bins samples, centred frequency axis, peak at 0 dB.
    """
    if resolution_bins < MIN_RESOLUTION_BINS:
        raise ValueError(
            f"resolution_bins must be at least {MIN_RESOLUTION_BINS}, "
            f"got {resolution_bins}."
        )
    samples = np.asarray(samples, dtype=complex)
    if len(samples) < resolution_bins:
        raise ValueError(
            f"need at least {resolution_bins} samples, got {len(samples)}."
        )
    freqs, power = welch(
        samples,
        fs=sample_rate,
        window="boxcar",
        nperseg=resolution_bins,
        noverlap=0,
        detrend=False,
        return_onesided=False,
        scaling="spectrum",
    )
    freqs = np.fft.fftshift(freqs)
    power = np.fft.fftshift(power)
    power_db = 10 * np.log10(np.maximum(power / power.max(), 1e-300))
    return freqs, power_db


def sideband_levels(
    freqs: np.ndarray,
    power_db: np.ndarray,
    bandwidth: float,
    center: float = 0.0,
    transition: float = 0.1,
) -> SidebandLevels:
    """
    Mean (shelf) and worst sideband level outside the passband
    [center - B/2, center + B/2), skipping transition*B on each side.
    """
    offset = (np.asarray(freqs) - center) / bandwidth
    eps = 1e-9
    lower = offset < -0.5 - transition - eps
    upper = offset >= 0.5 + transition - eps
    sideband = lower | upper
    if not sideband.any():
        raise ValueError("no sideband bins outside the transition region.")

    linear = 10 ** (np.asarray(power_db) / 10)
    passband = (offset >= -0.5 - eps) & (offset < 0.5 - eps)
    adjacent = (offset >= -1.5 - eps) & (offset < -0.5 - eps)
    lower_aclr = (
        float(10 * np.log10(linear[passband].sum() / linear[adjacent].sum()))
        if adjacent.any()
        else float("nan")
    )
    return SidebandLevels(
        shelf_db=float(10 * np.log10(linear[sideband].mean())),
        worst_db=float(np.max(np.asarray(power_db)[sideband])),
        lower_aclr_db=lower_aclr,
        bins=int(sideband.sum()),
    )


def scenario_config(
    n_states: int,
    alias_factor: int,
    scenario: str,
    rate: float = 1.0,
    oversampling: int = 1,
) -> ModConfig:
    """
    constant-bandwidth keeps f_s = rate for every A; constant-switching
    keeps f_sw = rate, so the bandwidth grows as A*f_sw/O_tau.
    """
    if scenario == "constant-bandwidth":
        sample_rate = rate
    elif scenario == "constant-switching":
        sample_rate = rate * alias_factor / oversampling
    else:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got '{scenario}'.")
    return ModConfig(
        n_states=n_states,
        alias_factor=alias_factor,
        oversampling=oversampling,
        sample_rate=sample_rate,
    )


def simulate_spectrum(
    cfg: ModConfig,
    subcarriers: int,
    upsample: int,
    frames: int = 2,
    d: int = 0,
    precoder: Optional[Precoder] = None,
    cp_length: int = 0,
    impairment: Optional[Impairment] = None,
    seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Spectrum of `frames` consecutive modulated symbols, one window each."""
    if subcarriers % cfg.alias_factor:
        raise ValueError(
            f"subcarriers {subcarriers} not divisible by alias_factor "
            f"{cfg.alias_factor}."
        )
    rng = np.random.default_rng(seed)
    p = precoder or alternating_precoder(cfg.alias_factor)
    block_size = subcarriers // cfg.alias_factor
    stream = []
    for _ in range(frames):
        frame = frame_for(cfg, d, p, block_size, cp_length, rng)
        stream.append(
            modulate_time(
                frame.time_samples(), cfg, d, upsample, cp_length, impairment
            )
        )
    samples = np.concatenate(stream)
    return measure_spectrum(
        samples,
        resolution_bins=(subcarriers + cp_length) * upsample,
        sample_rate=cfg.sample_rate * upsample,
    )
