"""
OFDM Frame
Transmit frame construction: constellation mapping, A precoded copies of
the payload block, inverse transform and cyclic prefix.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..analysis.alias import Precoder
from ..analysis.metrics import ConstraintViolationError, check_constraints
from ..analysis.modwave import ModConfig

# Gray-mapped, unit average energy
MAPPING_TABLES: Dict[str, Dict[Tuple[int, ...], complex]] = {
    "qpsk": {
        (0, 0): (1 + 1j) / np.sqrt(2),
        (1, 0): (1 - 1j) / np.sqrt(2),
        (1, 1): (-1 - 1j) / np.sqrt(2),
        (0, 1): (-1 + 1j) / np.sqrt(2),
    },
    "bpsk": {
        (0,): 1 + 0j,
        (1,): -1 + 0j,
    },
}


def constellation(name: str) -> np.ndarray:
    try:
        return np.array(list(MAPPING_TABLES[name].values()))
    except KeyError:
        raise ValueError(
            f"unknown constellation '{name}', expected one of "
            f"{sorted(MAPPING_TABLES)}"
        ) from None


def random_payload(
    count: int, rng: np.random.Generator, name: str = "qpsk"
) -> np.ndarray:
    """Uniformly drawn constellation symbols."""
    points = constellation(name)
    return points[rng.integers(0, len(points), size=count)]


@dataclass
class OfdmFrame:
    """
    One OFDM symbol carrying A precoded copies of a K_b-symbol payload.

    Subcarriers are stored in centred order, -K/2 .. K/2 - 1.
    """

    subcarriers: np.ndarray
    cp_length: int
    block_size: int
    payload: np.ndarray
    delay: int = 0

    @property
    def size(self) -> int:
        return len(self.subcarriers)

    @property
    def block_count(self) -> int:
        return self.size // self.block_size

    def block(self, a: int) -> np.ndarray:
        if not 0 <= a < self.block_count:
            raise ValueError(f"block index {a} out of range.")
        return self.subcarriers[a * self.block_size : (a + 1) * self.block_size]

    def body(self) -> np.ndarray:
        """K time samples at rate f_s, unit average power."""
        return np.fft.ifft(np.fft.ifftshift(self.subcarriers)) * np.sqrt(self.size)

    def time_samples(self) -> np.ndarray:
        body = self.body()
        if self.cp_length == 0:
            return body
        return np.concatenate([body[-self.cp_length :], body])


def build_frame(
    payload: np.ndarray,
    cfg: ModConfig,
    d: int,
    p: Precoder,
    cp_length: int,
) -> OfdmFrame:
    """
    Lay out block a as v(a, d) * payload for a = 0 .. A-1.

    Raises:
        ConstraintViolationError: if K_b or N_cp break the design constraints.
    """
    payload = np.asarray(payload, dtype=complex)
    violations = check_constraints(cfg, len(payload), cp_length)
    if violations:
        raise ConstraintViolationError(violations)
    if p.size != cfg.alias_factor:
        raise ValueError(
            f"precoder length {p.size} does not match alias_factor "
            f"{cfg.alias_factor}."
        )
    cfg.check_delay(d)

    weights = p.extended_vector(d, cfg.oversampling)
    subcarriers = np.concatenate([w * payload for w in weights])
    return OfdmFrame(
        subcarriers=subcarriers,
        cp_length=cp_length,
        block_size=len(payload),
        payload=payload,
        delay=d,
    )


def demodulate(
    samples: np.ndarray, size: int, cp_length: int = 0
) -> np.ndarray:
    """Inverse of OfdmFrame.time_samples for an unmodulated frame."""
    samples = np.asarray(samples)
    if len(samples) != size + cp_length:
        raise ValueError(
            f"expected {size + cp_length} samples, got {len(samples)}."
        )
    body = samples[cp_length:]
    return np.fft.fftshift(np.fft.fft(body)) / np.sqrt(size)


def frame_for(
    cfg: ModConfig,
    d: int,
    p: Precoder,
    block_size: int,
    cp_length: int,
    rng: np.random.Generator,
    constellation_name: str = "qpsk",
    payload: Optional[np.ndarray] = None,
) -> OfdmFrame:
    if payload is None:
        payload = random_payload(block_size, rng, constellation_name)
    return build_frame(payload, cfg, d, p, cp_length)
