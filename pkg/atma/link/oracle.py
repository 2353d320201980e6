"""
DFT Oracle
Brute-force harmonic coefficients of the sampled switch waveform, used to
cross-check every closed-form coefficient.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..analysis.modwave import HarmonicSpectrum, ModConfig, delayed_coef
from .simulator import Impairment, modulating_sequence


def dft_oracle(
    cfg: ModConfig,
    d: int,
    upsample: int,
    impairment: Optional[Impairment] = None,
) -> HarmonicSpectrum:
    """
    DFT of exactly one waveform period at rate L*f_s. Bin k = 1 + i*N maps
    to harmonic i; one spectrum period covers A*L harmonics. The largest
    magnitude among the remaining bins is reported as leakage.
    """
    wave = modulating_sequence(cfg, d, upsample, impairment)
    period = len(wave)
    bins = np.fft.fft(wave) / period

    n = cfg.n_states
    span = cfg.alias_factor * upsample
    i_min = -(span // 2)
    indices = np.arange(i_min, i_min + span)
    k = np.mod(1 + indices * n, period)

    allowed = np.zeros(period, dtype=bool)
    allowed[k] = True
    leakage = float(np.abs(bins[~allowed]).max()) if (~allowed).any() else 0.0

    return HarmonicSpectrum(
        i_min=i_min,
        i_max=i_min + span - 1,
        coefficients=bins[k],
        leakage=leakage,
        upsample=upsample,
    )


@dataclass
class OracleCheck:
    """Worst deviations of the closed form from the DFT at one grid point."""

    max_rel_error: float
    max_rel_error_continuous: float
    leakage: float

    def passed(self, tolerance: float = 1e-10, leakage_tol: float = 1e-12) -> bool:
        return self.max_rel_error <= tolerance and self.leakage <= leakage_tol


def check_against_oracle(cfg: ModConfig, d: int, upsample: int) -> OracleCheck:
    oracle = dft_oracle(cfg, d, upsample)
    held = np.asarray(delayed_coef(oracle.indices, d, cfg, upsample=upsample))
    continuous = np.asarray(delayed_coef(oracle.indices, d, cfg))
    ref = oracle.coefficients
    return OracleCheck(
        max_rel_error=float(np.max(np.abs(ref - held) / np.abs(held))),
        max_rel_error_continuous=float(
            np.max(np.abs(ref - continuous) / np.abs(continuous))
        ),
        leakage=oracle.leakage,
    )
