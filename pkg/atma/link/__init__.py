"""
Sample-level OFDM link simulation and verification oracles.
"""

from .frame import OfdmFrame, build_frame, demodulate, random_payload
from .simulator import (
    Impairment,
    LinkResult,
    modulate_time,
    receive,
    add_noise,
    simulate_link,
)
from .spectrum import measure_spectrum, sideband_levels, simulate_spectrum
from .oracle import dft_oracle, check_against_oracle
from .export import write_samples, read_samples

__all__ = [
    "OfdmFrame",
    "build_frame",
    "demodulate",
    "random_payload",
    "Impairment",
    "LinkResult",
    "modulate_time",
    "receive",
    "add_noise",
    "simulate_link",
    "measure_spectrum",
    "sideband_levels",
    "simulate_spectrum",
    "dft_oracle",
    "check_against_oracle",
    "write_samples",
    "read_samples",
]
