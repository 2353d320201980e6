"""
Figures of Merit
ACLR, passband ripple, EVM, capacity, symbol rate and the design
constraints that tie N, A and O_tau to the OFDM numerology.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Union

import numpy as np

from .alias import AliasedSpectrum, Precoder, alternating_precoder, block_spectrum
from .modwave import ModConfig, delay_factor

ACLR_THRESHOLD_DB = 45.0
DEFAULT_SNR_REF = 10.0  # linear, 10 dB
ACLR_SIDES = ("lower", "upper", "worst")

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Violation:
    """One broken design constraint."""

    rule: str
    message: str
    block: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


class ConstraintViolationError(ValueError):
    def __init__(self, violations: List[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass
class SystemReport:
    symbol_rate: Fraction
    switch_freq: Fraction
    delay_count: int
    aclr_db: float
    ripple_db: float
    evm: float
    capacity: Optional[float] = None
    violations: List[Violation] = field(default_factory=list)


def _db(ratio: float) -> float:
    return float(10 * np.log10(ratio))


def aclr(spec: AliasedSpectrum, side: str = "lower") -> float:
    """
    Adjacent channel leakage ratio in dB.

    Args:
        spec: Aliased block spectrum; its window must hold the passband and
              the adjacent channel(s) requested.
        side: "lower" uses the channel directly below the passband, "upper"
              the one above, "worst" the larger leakage of the two.

    Returns:
        float: Passband power over adjacent-channel power in dB.
    """
    if side not in ACLR_SIDES:
        raise ValueError(f"side must be one of {ACLR_SIDES}, got '{side}'.")
    a = spec.cfg.alias_factor
    passband = spec.passband_indices
    needed = [passband]
    if side in ("lower", "worst"):
        needed.append(passband - a)
    if side in ("upper", "worst"):
        needed.append(passband + a)
    for indices in needed:
        if not spec.covers(indices):
            raise ValueError(
                f"window {spec.window} too small for ACLR with A={a}; "
                f"need at least {int(np.max(np.abs(np.concatenate(needed))))}."
            )

    p_pass = float(spec.power_at(passband).sum())
    if side == "lower":
        leak = float(spec.power_at(passband - a).sum())
    elif side == "upper":
        leak = float(spec.power_at(passband + a).sum())
    else:
        leak = max(
            float(spec.power_at(passband - a).sum()),
            float(spec.power_at(passband + a).sum()),
        )
    return _db(p_pass / leak)


def passband_ripple(spec: AliasedSpectrum) -> float:
    if spec.cfg.alias_factor == 1:
        return 0.0
    power = spec.power_at(spec.passband_indices)
    return _db(float(power.max() / power.min()))


def compensation(cfg: ModConfig, d: int, p: Optional[Precoder]) -> np.ndarray:
    """
    Per passband block factor the receiver divides out: the common delay
    phase, the -pi/N harmonic phase and the dominant block's precoder entry.
    """
    blocks = np.arange(cfg.alias_factor)
    factor = delay_factor(blocks, d, cfg) * np.exp(-1j * np.pi / cfg.n_states)
    if p is not None:
        factor = factor * p.vector()
    return factor


def block_gains(spec: AliasedSpectrum, d: Optional[int] = None) -> np.ndarray:
    """Phase-compensated per-block gains of the passband, ideal value 1."""
    if d is None:
        d = spec.delay
    raw = spec.coef(spec.passband_indices)
    return raw / compensation(spec.cfg, d, spec.precoder)


def evm(spec: AliasedSpectrum, d: Optional[int] = None) -> float:
    gains = block_gains(spec, d)
    return float(np.sqrt(np.mean(np.abs(gains - 1) ** 2)))


def symbol_rate(k: int, n_cp: Number, alias_factor: int, bandwidth: Number = 1) -> Fraction:
    if k <= 0:
        raise ValueError("subcarrier count K must be positive.")
    if n_cp < 0:
        raise ValueError("cyclic prefix length must not be negative.")
    if alias_factor < 1:
        raise ValueError("alias_factor must be at least 1.")
    return Fraction(bandwidth) / alias_factor * Fraction(k) / (k + Fraction(n_cp))


def switch_frequency(cfg: ModConfig, bandwidth: Number = 1) -> Fraction:
    return Fraction(bandwidth) * cfg.switch_ratio


def capacity_from_gains(gains: Iterable[float], snr_ref: float = DEFAULT_SNR_REF) -> float:
    if snr_ref <= 0:
        raise ValueError("snr_ref must be positive.")
    g = np.abs(np.asarray(list(gains), dtype=complex))
    return float(np.mean(np.log2(1 + snr_ref * g**2)) / np.log2(1 + snr_ref))


def normalized_capacity(
    n_states: int,
    alias_factor: int,
    snr_ref: float = DEFAULT_SNR_REF,
    precoder: Optional[Precoder] = None,
) -> float:
    """Mean per-block capacity relative to a block with unit gain."""
    cfg = ModConfig(n_states=n_states, alias_factor=alias_factor)
    p = precoder or alternating_precoder(alias_factor)
    spec = block_spectrum(cfg, 0, p, window=2 * alias_factor)
    return capacity_from_gains(block_gains(spec), snr_ref)


def check_constraints(
    cfg: ModConfig, block_size: int, cp_length: Optional[int] = None
) -> List[Violation]:
    """
    Collect every broken design constraint; an empty list means valid.

    With O_tau = 1 every delay lands on a pulse boundary, so the harmonic
    checks only apply for O_tau >= 2.
    """
    violations: List[Violation] = []
    n, o = cfg.n_states, cfg.oversampling
    if o > 1:
        for a in range(cfg.alias_factor):
            k = 1 + a * n
            if k % o == 0:
                violations.append(
                    Violation(
                        rule="harmonic_on_switch_grid",
                        message=f"1+{a}*{n} = {k} is a multiple of O_tau={o}",
                        block=a,
                    )
                )
            elif gcd(k, o) != 1:
                violations.append(
                    Violation(
                        rule="harmonic_shares_factor",
                        message=f"gcd(1+{a}*{n}, {o}) = {gcd(k, o)}",
                        block=a,
                    )
                )
    if block_size <= 0 or block_size % n:
        violations.append(
            Violation(
                rule="block_size_not_multiple",
                message=f"K_b={block_size} is not a positive multiple of N={n}",
            )
        )
    if cp_length is not None and (cp_length < 0 or cp_length % n):
        violations.append(
            Violation(
                rule="cp_length_not_multiple",
                message=f"N_cp={cp_length} is not a multiple of N={n}",
            )
        )
    return violations


def system_report(
    cfg: ModConfig,
    k: int,
    block_size: int,
    cp_length: Number,
    delay: int = 0,
    precoder: Optional[Precoder] = None,
    snr_ref: float = DEFAULT_SNR_REF,
) -> SystemReport:
    """
    Rate, switching frequency, delay count and figures of merit of one
    allocation. Rates are exact fractions of the bandwidth B = f_s.
    """
    if k != cfg.alias_factor * block_size:
        raise ValueError(
            f"K={k} must equal A*K_b = {cfg.alias_factor * block_size}."
        )
    cp_check = int(cp_length) if Fraction(cp_length).denominator == 1 else None
    violations = check_constraints(cfg, block_size, cp_check)
    if violations:
        raise ConstraintViolationError(violations)

    p = precoder or alternating_precoder(cfg.alias_factor)
    spec = block_spectrum(cfg, delay, p, window=2 * cfg.alias_factor)
    return SystemReport(
        symbol_rate=symbol_rate(k, cp_length, cfg.alias_factor),
        switch_freq=switch_frequency(cfg),
        delay_count=cfg.delay_count,
        aclr_db=aclr(spec),
        ripple_db=passband_ripple(spec),
        evm=evm(spec),
        capacity=capacity_from_gains(block_gains(spec), snr_ref),
    )


def allocations(
    n_states: int,
    max_switch_fraction: Number,
    alias_factors: Iterable[int],
) -> List[ModConfig]:
    """
    Admissible (A, O_tau) pairs for a switch limited to max_switch_fraction*B:
    A_min = B / f_sw,max and O_tau <= A / A_min.
    """
    limit = Fraction(max_switch_fraction)
    if limit <= 0:
        raise ValueError("max_switch_fraction must be positive.")
    a_min = 1 / limit
    found: List[ModConfig] = []
    for a in sorted(set(alias_factors)):
        if a < a_min:
            continue
        o_max = int(a / a_min)
        for o in range(1, min(o_max, a) + 1):
            cfg = ModConfig(n_states=n_states, alias_factor=a, oversampling=o)
            if not any(
                v.rule.startswith("harmonic") for v in check_constraints(cfg, n_states)
            ):
                found.append(cfg)
    return found
