"""
Sample Stream Files
Little-endian binary container for complex sample streams:
magic b"ATMA", format version (uint32), sample rate (float64),
sample count (uint64), then interleaved complex float64 samples.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np

MAGIC = b"ATMA"
FORMAT_VERSION = 1
HEADER_DTYPE = np.dtype(
    [("magic", "S4"), ("version", "<u4"), ("sample_rate", "<f8"), ("count", "<u8")]
)
SAMPLE_DTYPE = np.dtype("<c16")


def write_samples(
    path: Union[str, Path], samples: np.ndarray, sample_rate: float
) -> int:
    """Write samples to path and return the number of bytes written."""
    samples = np.asarray(samples, dtype=complex)
    header = np.array(
        [(MAGIC, FORMAT_VERSION, sample_rate, len(samples))], dtype=HEADER_DTYPE
    )
    payload = header.tobytes() + samples.astype(SAMPLE_DTYPE).tobytes()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(payload)
    return len(payload)


def read_samples(path: Union[str, Path]) -> Tuple[np.ndarray, float]:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise ValueError(f"{path}: file too short for a sample stream header.")
    header = np.frombuffer(raw[: HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if header["magic"] != MAGIC:
        raise ValueError(f"{path}: not a sample stream file (bad magic).")
    if header["version"] != FORMAT_VERSION:
        raise ValueError(
            f"{path}: unsupported format version {int(header['version'])}."
        )
    count = int(header["count"])
    body = raw[HEADER_DTYPE.itemsize :]
    if len(body) != count * SAMPLE_DTYPE.itemsize:
        raise ValueError(
            f"{path}: header announces {count} samples, file holds "
            f"{len(body) // SAMPLE_DTYPE.itemsize}."
        )
    samples = np.frombuffer(body, dtype=SAMPLE_DTYPE).astype(complex)
    return samples, float(header["sample_rate"])
