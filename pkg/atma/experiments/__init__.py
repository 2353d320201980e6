"""
Experiment types, keyed by the name used in configs and on the command line.
"""

from typing import Dict, Type

from ..config.loader import ConfigError, ExperimentConfig, canonical_experiment
from .base import PARAM_COLUMNS, Experiment, PointResult, SweepPoint, run_experiment
from .beampattern import BeampatternExperiment
from .golden import GoldenCheckEngine
from .link import ExportWaveformExperiment, LinkSimExperiment, OracleCheckExperiment
from .spectrum import SpectrumExperiment
from .sweeps import (
    AclrHeatmapExperiment,
    AclrSweepExperiment,
    AllocationTableExperiment,
    CapacitySweepExperiment,
    EvmSweepExperiment,
    RippleSweepExperiment,
)

EXPERIMENTS: Dict[str, Type[Experiment]] = {
    cls.name: cls
    for cls in (
        AllocationTableExperiment,
        AclrHeatmapExperiment,
        SpectrumExperiment,
        AclrSweepExperiment,
        RippleSweepExperiment,
        EvmSweepExperiment,
        CapacitySweepExperiment,
        BeampatternExperiment,
        LinkSimExperiment,
        OracleCheckExperiment,
        ExportWaveformExperiment,
    )
}


def create_experiment(config: ExperimentConfig) -> Experiment:
    try:
        cls = EXPERIMENTS[canonical_experiment(config.experiment)]
    except KeyError:
        raise ConfigError(
            f"unknown experiment '{config.experiment}', expected one of "
            f"{sorted(EXPERIMENTS)}",
            field="experiment",
        ) from None
    return cls(config)


__all__ = [
    "EXPERIMENTS",
    "PARAM_COLUMNS",
    "Experiment",
    "PointResult",
    "SweepPoint",
    "GoldenCheckEngine",
    "create_experiment",
    "run_experiment",
]
