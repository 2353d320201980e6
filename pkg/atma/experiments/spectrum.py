"""
Spectrum Experiment
Simulated transmit spectra of the modulated OFDM stream and the sideband
shelf read off each one.
"""

from fractions import Fraction
from typing import Any, Dict, List, Union

import numpy as np

from ..analysis.modwave import ModConfig
from ..link.simulator import Impairment
from ..link.spectrum import scenario_config, sideband_levels, simulate_spectrum
from .base import Experiment, Row, SweepPoint


class SpectrumExperiment(Experiment):
    name = "spectrum"

    @property
    def columns(self) -> List[str]:  # type: ignore[override]
        if self.config.detail == "full":
            return ["L", "freq_hz", "power_db"]
        return ["L", "shelf_db", "worst_db", "measured_aclr_db", "sideband_bins"]

    def block_size_for(self, n_states: int, alias_factor: int) -> int:
        return self.config.subcarriers // alias_factor

    def cp_length_for(self, alias_factor: int, block_size: int) -> Union[int, Fraction]:
        return self.config.cp_length or 0

    def mod_config(self, point: SweepPoint) -> ModConfig:
        return scenario_config(
            point.n_states,
            point.alias_factor,
            self.config.scenario,
            rate=self.config.sample_rate,
            oversampling=point.oversampling,
        )

    def upsample_for(self, cfg: ModConfig) -> int:
        if self.config.upsample is not None:
            return self.config.upsample
        return self.config.spectrum_upsample * cfg.min_upsample()

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        if point.subcarriers != self.config.subcarriers:
            raise ValueError(
                f"subcarriers {self.config.subcarriers} not divisible by "
                f"A={cfg.alias_factor}."
            )
        upsample = self.upsample_for(cfg)
        freqs, power_db = simulate_spectrum(
            cfg,
            self.config.subcarriers,
            upsample,
            frames=self.config.spectrum_frames,
            d=point.delay,
            precoder=self.precoder(cfg.alias_factor),
            cp_length=int(point.cp_length),
            impairment=Impairment(self.config.imbalance_db, self.config.phase_error_deg),
            seed=int(rng.integers(2**32)),
        )
        if self.config.detail == "full":
            return [
                {"L": upsample, "freq_hz": float(f), "power_db": float(p)}
                for f, p in zip(freqs, power_db)
            ]

        levels = sideband_levels(
            freqs,
            power_db,
            bandwidth=cfg.sample_rate,
            center=cfg.modulating_frequency,
            transition=self.config.transition,
        )
        return [
            {
                "L": upsample,
                "shelf_db": levels.shelf_db,
                "worst_db": levels.worst_db,
                "measured_aclr_db": levels.lower_aclr_db,
                "sideband_bins": levels.bins,
            }
        ]

    def extras(self) -> Dict[str, Any]:
        return {
            "scenario": self.config.scenario,
            "subcarriers": self.config.subcarriers,
            "transition": self.config.transition,
        }
