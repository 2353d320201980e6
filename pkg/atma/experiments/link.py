"""
Link Experiments
Sample-level runs: link simulation, the DFT oracle grid and waveform export.
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..analysis.alias import aliased_coef, aliased_coef_direct, block_spectrum
from ..analysis.metrics import evm
from ..analysis.modwave import ModConfig
from ..link.export import write_samples
from ..link.frame import frame_for
from ..link.oracle import check_against_oracle
from ..link.simulator import Impairment, add_noise, modulate_time, simulate_link
from .base import Experiment, Row, SweepPoint


# folded and term-by-term aliased coefficients agree to rounding
ALIAS_FORM_TOLERANCE = 1e-12


class SampleLevelExperiment(Experiment):
    def upsample_for(self, cfg: ModConfig) -> int:
        if self.config.upsample is not None:
            return self.config.upsample
        return cfg.default_upsample(self.config.upsample_base)

    def impairment(self) -> Impairment:
        return Impairment(self.config.imbalance_db, self.config.phase_error_deg)


class LinkSimExperiment(SampleLevelExperiment):
    name = "link-sim"
    columns = [
        "L",
        "measured_evm",
        "analytic_evm",
        "evm_error",
        "held_evm",
        "max_gain_error",
        "flipped_blocks",
    ]

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        upsample = self.upsample_for(cfg)
        p = self.precoder(cfg.alias_factor)
        results = [
            simulate_link(
                cfg,
                point.delay,
                point.block_size,
                cp_length=int(point.cp_length),
                upsample=upsample,
                precoder=p,
                snr_db=self.config.snr_db,
                impairment=self.impairment(),
                seed=int(rng.integers(2**32)),
                equalize_amplitude=self.config.equalize,
                reverse_precoder=self.config.reverse_precoder,
                constellation=self.config.constellation,
            )
            for _ in range(self.config.frames)
        ]
        measured = float(np.sqrt(np.mean([r.measured_evm**2 for r in results])))

        window = cfg.alias_factor
        continuous = block_spectrum(cfg, point.delay, p, window=window)
        analytic = evm(continuous)
        held = block_spectrum(cfg, point.delay, p, window=window, upsample=upsample)
        expected = held.coef(held.passband_indices)
        gain_error = max(
            float(np.max(np.abs(r.per_block_gain - expected) / np.abs(expected)))
            for r in results
        )
        return [
            {
                "L": upsample,
                "measured_evm": measured,
                "analytic_evm": analytic,
                "evm_error": abs(measured - analytic),
                "held_evm": evm(held),
                "max_gain_error": gain_error,
                "flipped_blocks": len(results[0].flipped_blocks()),
            }
        ]

    def extras(self) -> Dict[str, Any]:
        return {
            "snr_db": self.config.snr_db,
            "equalize": self.config.equalize,
            "reverse_precoder": self.config.reverse_precoder,
            "imbalance_db": self.config.imbalance_db,
            "phase_error_deg": self.config.phase_error_deg,
        }


class OracleCheckExperiment(SampleLevelExperiment):
    name = "oracle-check"
    columns = [
        "L",
        "max_rel_error",
        "max_rel_error_continuous",
        "leakage",
        "alias_form_error",
        "passed",
    ]
    check_cp = False

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        upsample = self.upsample_for(cfg)
        check = check_against_oracle(cfg, point.delay, upsample)

        p = self.precoder(cfg.alias_factor)
        indices = np.arange(-2 * cfg.alias_factor, 2 * cfg.alias_factor + 1)
        folded = aliased_coef(indices, point.delay, cfg, p)
        direct = aliased_coef_direct(indices, point.delay, cfg, p)
        form_error = float(np.max(np.abs(folded - direct) / np.abs(folded)))

        return [
            {
                "L": upsample,
                "max_rel_error": check.max_rel_error,
                "max_rel_error_continuous": check.max_rel_error_continuous,
                "leakage": check.leakage,
                "alias_form_error": form_error,
                "passed": check.passed() and form_error <= ALIAS_FORM_TOLERANCE,
            }
        ]


class ExportWaveformExperiment(SampleLevelExperiment):
    """Writes the modulated stream of each point as a binary sample file."""

    name = "export-waveform"
    columns = ["L", "file", "samples", "sample_rate", "bytes"]

    def file_name(self, point: SweepPoint) -> str:
        return (
            f"{self.config.name}_N{point.n_states}_A{point.alias_factor}"
            f"_O{point.oversampling}_d{point.delay}.bin"
        )

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        upsample = self.upsample_for(cfg)
        p = self.precoder(cfg.alias_factor)
        cp = int(point.cp_length)
        stream = []
        for _ in range(self.config.frames):
            frame = frame_for(
                cfg,
                point.delay,
                p,
                point.block_size,
                cp,
                rng,
                self.config.constellation,
            )
            stream.append(
                modulate_time(
                    frame.time_samples(),
                    cfg,
                    point.delay,
                    upsample,
                    cp,
                    self.impairment(),
                )
            )
        samples = np.concatenate(stream)
        if self.config.snr_db is not None:
            samples = add_noise(samples, self.config.snr_db, rng, upsample)

        rate = cfg.sample_rate * upsample
        name = self.file_name(point)
        written = write_samples(Path(self.config.output_dir) / name, samples, rate)
        return [
            {
                "L": upsample,
                "file": name,
                "samples": len(samples),
                "sample_rate": rate,
                "bytes": written,
            }
        ]
