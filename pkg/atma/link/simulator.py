"""
Link Simulator
Sample-level ATMA chain: upsampling, time modulation with the switch
waveform, optional impairments and noise, and the receiver that folds the
aliased spectrum back onto the K subcarriers.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..analysis.alias import Precoder, alternating_precoder
from ..analysis.metrics import compensation
from ..analysis.modwave import ModConfig, switch_states, waveform_samples
from .frame import OfdmFrame, frame_for


@dataclass(frozen=True)
class Impairment:
    """
    Mismatch of the odd switch arm: amplitude imbalance in dB and phase
    error in degrees. Zero values give the ideal switch.
    """

    imbalance_db: float = 0.0
    phase_error_deg: float = 0.0

    @property
    def is_ideal(self) -> bool:
        return self.imbalance_db == 0.0 and self.phase_error_deg == 0.0

    def state_weights(self, n_states: int) -> np.ndarray:
        weights = np.ones(n_states, dtype=complex)
        weights[1::2] = 10 ** (-self.imbalance_db / 20) * np.exp(
            1j * np.deg2rad(self.phase_error_deg)
        )
        return weights


@dataclass
class LinkResult:
    """
    Receiver output for one frame.

    per_block_gain holds the raw complex gain of each passband block, which
    is the aliased coefficient of the held waveform at the simulation rate.
    """

    per_block_gain: np.ndarray
    compensated_gain: np.ndarray
    measured_evm: float
    measured_spectrum: np.ndarray
    demodulated: np.ndarray
    payload: np.ndarray = field(repr=False)

    @property
    def block_count(self) -> int:
        return len(self.per_block_gain)

    def flipped_blocks(self) -> List[int]:
        """Blocks whose symbols come out with inverted sign."""
        symbols = self.demodulated.reshape(self.block_count, -1)
        corr = np.mean(symbols * np.conj(self.payload)[None, :], axis=1)
        return [int(b) for b in np.flatnonzero(corr.real < 0)]


def modulating_sequence(
    cfg: ModConfig,
    d: int,
    upsample: int,
    impairment: Optional[Impairment] = None,
) -> np.ndarray:
    """One period of the (optionally impaired) switch waveform at L*f_s."""
    period = cfg.period_samples(upsample)
    wave = waveform_samples(cfg, d, period, upsample)
    if impairment is not None and not impairment.is_ideal:
        states = switch_states(cfg, d, period, upsample)
        wave = wave * impairment.state_weights(cfg.n_states)[states]
    return wave


def upsample_symbol(body: np.ndarray, upsample: int) -> np.ndarray:
    """Band-limited interpolation by zero-padding the spectrum."""
    k = len(body)
    spectrum = np.fft.fft(body)
    bins = np.fft.fftfreq(k, d=1.0 / k).astype(int)
    padded = np.zeros(k * upsample, dtype=complex)
    padded[np.mod(bins, k * upsample)] = spectrum
    return np.fft.ifft(padded) * upsample


def modulate_time(
    frame_samples: np.ndarray,
    cfg: ModConfig,
    d: int,
    upsample: int,
    cp_length: int = 0,
    impairment: Optional[Impairment] = None,
) -> np.ndarray:
    """
    Upsample one CP-prefixed symbol by L and multiply it by the switch
    waveform. The waveform's time origin is the first body sample, so the
    modulated prefix stays a cyclic extension of the modulated body.
    """
    cfg.check_upsample(upsample)
    cfg.check_delay(d)
    samples = np.asarray(frame_samples, dtype=complex)
    body = samples[cp_length:]
    cycle = cfg.n_states * cfg.alias_factor
    if len(body) == 0 or len(body) % cycle:
        raise ValueError(
            f"symbol of {len(body)} samples does not hold an integer number "
            f"of modulation cycles ({cycle} samples each)."
        )

    fine = upsample_symbol(body, upsample)
    prefix = cp_length * upsample
    if prefix:
        fine = np.concatenate([fine[-prefix:], fine])

    wave = modulating_sequence(cfg, d, upsample, impairment)
    n = np.arange(len(fine))
    return fine * wave[np.mod(n - prefix, len(wave))]


def add_noise(
    samples: np.ndarray, snr_db: float, rng: np.random.Generator, upsample: int = 1
) -> np.ndarray:
    """AWGN giving snr_db within the band B of the L-times oversampled signal."""
    power = float(np.mean(np.abs(samples) ** 2))
    sigma2 = upsample * power / 10 ** (snr_db / 10)
    noise = rng.standard_normal(len(samples)) + 1j * rng.standard_normal(len(samples))
    return samples + np.sqrt(sigma2 / 2) * noise


def receive(
    samples: np.ndarray,
    cfg: ModConfig,
    d: int,
    p: Precoder,
    reference: OfdmFrame,
    upsample: int,
    equalize_amplitude: bool = True,
    reverse_precoder: bool = True,
) -> LinkResult:
    """
    Strip the prefix, transform, keep the K bins of the passband shifted by
    f_mod (band-limit, offset removal and decimation in one step), then undo
    the delay phase and the precoder per block.
    """
    k = reference.size
    kb = reference.block_size
    prefix = reference.cp_length * upsample
    samples = np.asarray(samples, dtype=complex)
    if len(samples) != (k + reference.cp_length) * upsample:
        raise ValueError(
            f"expected {(k + reference.cp_length) * upsample} samples, "
            f"got {len(samples)}."
        )

    spectrum = np.fft.fft(samples[prefix:])
    offset = kb // cfg.n_states
    centred = np.arange(k) - k // 2
    rx = spectrum[np.mod(centred + offset, k * upsample)] / (upsample * np.sqrt(k))
    rx_blocks = rx.reshape(cfg.alias_factor, kb)

    payload = reference.payload
    raw_gain = np.mean(rx_blocks / payload[None, :], axis=1)
    comp = compensation(cfg, d, p if reverse_precoder else None)
    compensated = rx_blocks / comp[:, None]
    gains = raw_gain / comp
    if equalize_amplitude:
        # zero-forcing on the gain measured against the precoder-reversed
        # reference, so a skipped reversal still shows as a sign flip
        reference_gain = raw_gain / compensation(cfg, d, p)
        compensated = compensated / reference_gain[:, None]

    error = compensated - payload[None, :]
    measured_evm = float(
        np.sqrt(np.mean(np.abs(error) ** 2) / np.mean(np.abs(payload) ** 2))
    )
    power = np.abs(np.fft.fftshift(spectrum)) ** 2
    measured_spectrum = 10 * np.log10(np.maximum(power / power.max(), 1e-300))

    return LinkResult(
        per_block_gain=raw_gain,
        compensated_gain=gains,
        measured_evm=measured_evm,
        measured_spectrum=measured_spectrum,
        demodulated=compensated.ravel(),
        payload=payload,
    )


def simulate_link(
    cfg: ModConfig,
    d: int,
    block_size: int,
    cp_length: int = 0,
    upsample: Optional[int] = None,
    precoder: Optional[Precoder] = None,
    snr_db: Optional[float] = None,
    impairment: Optional[Impairment] = None,
    seed: int = 0,
    equalize_amplitude: bool = True,
    reverse_precoder: bool = True,
    constellation: str = "qpsk",
) -> LinkResult:
    """Run build_frame -> modulate_time -> [noise] -> receive for one frame."""
    rng = np.random.default_rng(seed)
    p = precoder or alternating_precoder(cfg.alias_factor)
    L = upsample or cfg.default_upsample()
    frame = frame_for(cfg, d, p, block_size, cp_length, rng, constellation)
    tx = modulate_time(frame.time_samples(), cfg, d, L, cp_length, impairment)
    if snr_db is not None:
        tx = add_noise(tx, snr_db, rng, L)
    return receive(
        tx,
        cfg,
        d,
        p,
        frame,
        L,
        equalize_amplitude=equalize_amplitude,
        reverse_precoder=reverse_precoder,
    )
