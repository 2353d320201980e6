"""
Closed-Form Sweeps
Allocation table and the ACLR, ripple, EVM and capacity sweeps, all
evaluated on the aliased block spectrum without sample-level simulation.
"""

from typing import Any, Dict, List

import numpy as np

from ..analysis.alias import AliasedSpectrum, block_spectrum, distinct_extended_vectors
from ..analysis.metrics import (
    ACLR_THRESHOLD_DB,
    aclr,
    block_gains,
    capacity_from_gains,
    evm,
    passband_ripple,
    system_report,
)
from ..analysis.modwave import ModConfig
from .base import Experiment, Row, SweepPoint


def snr_linear(snr_db: float) -> float:
    return float(10 ** (snr_db / 10))


class AllocationTableExperiment(Experiment):
    """Symbol rate, switching frequency, delays and figures of merit per allocation."""

    name = "allocation-table"
    columns = [
        "symbol_rate",
        "switch_freq",
        "D",
        "aclr_db",
        "ripple_db",
        "evm",
        "capacity",
        "precoder_vectors",
    ]

    def violations_for(self, cfg: ModConfig, point: SweepPoint) -> List[Any]:
        # system_report runs the constraint check itself
        return []

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        p = self.precoder(cfg.alias_factor)
        report = system_report(
            cfg,
            point.subcarriers,
            point.block_size,
            point.cp_length,
            delay=point.delay,
            precoder=p,
            snr_ref=snr_linear(self.config.snr_ref_db),
        )
        return [
            {
                "symbol_rate": report.symbol_rate,
                "switch_freq": report.switch_freq,
                "D": report.delay_count,
                "aclr_db": report.aclr_db,
                "ripple_db": report.ripple_db,
                "evm": report.evm,
                "capacity": report.capacity,
                "precoder_vectors": len(distinct_extended_vectors(p, cfg.oversampling)),
            }
        ]


class MetricSweep(Experiment):
    """One closed-form metric per sweep point."""

    check_cp = False

    def spectrum(self, cfg: ModConfig, point: SweepPoint) -> AliasedSpectrum:
        window = max(self.config.window or 0, 2 * cfg.alias_factor)
        return block_spectrum(
            cfg, point.delay, self.precoder(cfg.alias_factor), window=window
        )

    def metric(self, spec: AliasedSpectrum) -> Row:
        raise NotImplementedError

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        return [self.metric(self.spectrum(cfg, point))]


class AclrSweepExperiment(MetricSweep):
    name = "aclr-sweep"
    columns = ["aclr_db", "meets_threshold"]

    def metric(self, spec: AliasedSpectrum) -> Row:
        value = aclr(spec, side=self.config.aclr_side)
        return {"aclr_db": value, "meets_threshold": value >= ACLR_THRESHOLD_DB}

    def extras(self) -> Dict[str, Any]:
        return {"aclr_side": self.config.aclr_side, "threshold_db": ACLR_THRESHOLD_DB}


class AclrHeatmapExperiment(AclrSweepExperiment):
    """ACLR over the full N x A grid; rows of the 45 dB contour are flagged."""

    name = "aclr-heatmap"


class RippleSweepExperiment(MetricSweep):
    name = "ripple-sweep"
    columns = ["ripple_db"]

    def metric(self, spec: AliasedSpectrum) -> Row:
        return {"ripple_db": passband_ripple(spec)}


class EvmSweepExperiment(MetricSweep):
    name = "evm-sweep"
    columns = ["evm", "evm_db"]

    def metric(self, spec: AliasedSpectrum) -> Row:
        value = evm(spec)
        return {
            "evm": value,
            "evm_db": float(20 * np.log10(value)) if value > 0 else None,
        }


class CapacitySweepExperiment(MetricSweep):
    name = "capacity-sweep"
    columns = ["capacity", "min_block_gain_db"]

    def metric(self, spec: AliasedSpectrum) -> Row:
        gains = block_gains(spec)
        return {
            "capacity": capacity_from_gains(gains, snr_linear(self.config.snr_ref_db)),
            "min_block_gain_db": float(20 * np.log10(np.abs(gains).min())),
        }

    def extras(self) -> Dict[str, Any]:
        return {"snr_ref_db": self.config.snr_ref_db}
