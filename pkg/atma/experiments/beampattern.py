"""
Beampattern Experiment
Array factor cuts per harmonic and delay, with the closed-form beam
direction checked against the numeric maximum.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..analysis.beam import (
    ArrayConfig,
    angle_grid,
    array_factor,
    beam_angle,
    block_angles,
    coherent_blocks,
    to_degrees,
)
from ..analysis.modwave import ModConfig
from .base import Experiment, Row, SweepPoint


def distinct_beams(angles: List[Optional[float]]) -> int:
    """Number of separate directions the passband blocks steer to."""
    return len({round(float(np.rad2deg(a)), 6) for a in angles if a is not None})


class BeampatternExperiment(Experiment):
    name = "beampattern"
    check_cp = False

    @property
    def columns(self) -> List[str]:  # type: ignore[override]
        if self.config.detail == "full":
            return ["i", "theta_deg", "af_db"]
        return ["i", "beam_deg", "argmax_deg", "peak", "coherent", "block_beams"]

    def cp_length_for(self, alias_factor: int, block_size: int) -> Union[int, Fraction]:
        return self.config.cp_length or 0

    def array(self) -> ArrayConfig:
        return ArrayConfig(
            elements=self.config.elements,
            spacing=self.config.spacing,
            carrier=self.config.carrier,
        )

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        acfg = self.array()
        theta = angle_grid(self.config.theta_step_deg)
        coherent = set(coherent_blocks(cfg, point.delay))
        block_beams = distinct_beams(block_angles(point.delay, cfg, acfg.spacing))
        rows: List[Row] = []
        for i in sorted(set(self.config.harmonic)):
            magnitude = np.abs(
                array_factor(
                    theta, i, point.delay, acfg, cfg, simplified=self.config.simplified
                )
            )
            if self.config.detail == "full":
                peak = magnitude.max()
                rows.extend(
                    {
                        "i": i,
                        "theta_deg": float(t),
                        "af_db": float(20 * np.log10(max(m / peak, 1e-15))),
                    }
                    for t, m in zip(np.rad2deg(theta), magnitude)
                )
                continue
            best = int(np.argmax(magnitude))
            rows.append(
                {
                    "i": i,
                    "beam_deg": to_degrees(
                        beam_angle(i, point.delay, cfg, acfg.spacing)
                    ),
                    "argmax_deg": float(np.rad2deg(theta[best])),
                    "peak": float(magnitude[best]),
                    "coherent": i in coherent,
                    "block_beams": block_beams,
                }
            )
        return rows

    def extras(self) -> Dict[str, Any]:
        return {
            "elements": self.config.elements,
            "spacing": self.config.spacing,
            "carrier": self.config.carrier,
            "simplified": self.config.simplified,
            "theta_step_deg": self.config.theta_step_deg,
        }
