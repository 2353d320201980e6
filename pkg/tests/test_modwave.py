"""
Tests for the modulating-waveform harmonic model
"""

from fractions import Fraction

import numpy as np
import pytest

from atma.analysis.modwave import (
    ModConfig,
    delay_factor,
    delay_phase,
    delayed_coef,
    fourier_coeff,
    harmonic_coef,
    harmonic_exists,
    held_harmonic_coef,
    state_phase,
    switch_states,
    waveform_samples,
)


class TestModConfig:
    """Validation and derived quantities of the modulation tuple"""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_states": 1, "alias_factor": 4},
            {"n_states": 4, "alias_factor": 0},
            {"n_states": 4, "alias_factor": 4, "oversampling": 0},
            {"n_states": 4, "alias_factor": 2, "oversampling": 4},
            {"n_states": 4, "alias_factor": 4, "sample_rate": 0.0},
        ],
    )
    def test_invalid_tuples_rejected(self, kwargs):
        """Test invalid modulation tuples are rejected"""
        with pytest.raises(ValueError):
            ModConfig(**kwargs)

    def test_derived_rates(self):
        """Test derived rates and period lengths"""
        cfg = ModConfig(n_states=4, alias_factor=8, oversampling=2, sample_rate=1.0)
        assert cfg.delay_count == 8
        assert cfg.switch_ratio == Fraction(1, 4)
        assert cfg.block_offset == 3
        assert cfg.pulse_frequency == pytest.approx(1 / 8)
        assert cfg.modulating_frequency == pytest.approx(1 / 32)
        assert cfg.switch_frequency == pytest.approx(1 / 4)
        assert cfg.period_samples(2) == 64

    def test_upsample_grid(self):
        """Test minimum and default upsampling"""
        cfg = ModConfig(n_states=4, alias_factor=6, oversampling=4)
        assert cfg.min_upsample() == 2
        assert cfg.default_upsample() == 128
        assert cfg.default_upsample(8) == 16
        cfg.check_upsample(2)
        with pytest.raises(ValueError):
            cfg.check_upsample(1)
        with pytest.raises(ValueError):
            cfg.check_upsample(0)

    def test_delay_range(self):
        """Test delay range checks"""
        cfg = ModConfig(n_states=4, alias_factor=4, oversampling=2)
        cfg.check_delay(7)
        with pytest.raises(ValueError):
            cfg.check_delay(8)
        with pytest.raises(ValueError):
            cfg.check_delay(-1)


class TestHarmonics:
    def test_state_phase(self):
        """Test switch state phases"""
        assert state_phase(1, 4) == pytest.approx(np.pi / 2)
        assert state_phase(0, 8) == 0.0
        with pytest.raises(ValueError):
            state_phase(4, 4)

    def test_fourier_coeff_dc_and_nulls(self):
        """Test Fourier coefficient at DC and at sinc nulls"""
        assert abs(fourier_coeff(2, 0, 4)) == pytest.approx(1.0)
        assert abs(fourier_coeff(0, 4, 4)) == pytest.approx(0.0, abs=1e-15)

    def test_fundamental_magnitude(self):
        """Test fundamental harmonic magnitude and phase"""
        # sinc(pi/4) for a four-state switch
        alpha = harmonic_coef(0, 4)
        assert abs(alpha) == pytest.approx(np.sin(np.pi / 4) / (np.pi / 4))
        assert np.angle(alpha) == pytest.approx(-np.pi / 4)

    @pytest.mark.parametrize("n_states", [2, 3, 4, 8, 16])
    def test_phase_follows_two_branch_rule(self, n_states):
        """Test harmonic phase is -pi/N for i >= 0 and -pi/N - pi below"""
        i = np.arange(-64, 65)
        alpha = np.asarray(harmonic_coef(i, n_states))
        expected = np.where(i >= 0, -np.pi / n_states, -np.pi / n_states - np.pi)
        np.testing.assert_allclose(
            alpha / np.abs(alpha), np.exp(1j * expected), atol=1e-12
        )

    @pytest.mark.parametrize("n_states", [2, 3, 4, 8])
    def test_unit_modulus_waveform_has_unit_power(self, n_states):
        """Test harmonic powers sum to one"""
        i = np.arange(-20000, 20001)
        power = np.sum(np.abs(harmonic_coef(i, n_states)) ** 2)
        assert power == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize(
        "k,n_states,expected",
        [(1, 4, True), (5, 4, True), (-3, 4, True), (2, 4, False), (0, 2, False)],
    )
    def test_harmonic_exists(self, k, n_states, expected):
        """Test which harmonics exist"""
        assert harmonic_exists(k, n_states) is expected


class TestHeldModel:
    def test_periodic_in_alias_span(self):
        """Test held coefficients repeat every A*L harmonics"""
        cfg = ModConfig(n_states=4, alias_factor=4)
        i = np.arange(-6, 7)
        span = cfg.alias_factor * 8
        np.testing.assert_allclose(
            held_harmonic_coef(i, cfg, 8),
            held_harmonic_coef(i + span, cfg, 8),
            rtol=1e-12,
        )

    def test_converges_to_continuous(self):
        """Test held coefficients approach the continuous ones"""
        cfg = ModConfig(n_states=4, alias_factor=4)
        i = np.arange(-3, 4)
        continuous = harmonic_coef(i, 4)
        coarse = np.abs(held_harmonic_coef(i, cfg, 4) - continuous)
        fine = np.abs(held_harmonic_coef(i, cfg, 64) - continuous)
        assert np.all(fine < coarse)
        assert np.max(fine / np.abs(continuous)) < 5e-2


class TestDelay:
    @pytest.mark.parametrize("d", range(8))
    def test_factor_matches_phase(self, d):
        """Test delay factor against the delay phase"""
        cfg = ModConfig(n_states=4, alias_factor=4, oversampling=2)
        i = np.arange(-5, 6)
        np.testing.assert_allclose(
            delay_factor(i, d, cfg), np.exp(1j * delay_phase(i, d, cfg)), atol=1e-12
        )

    def test_zero_delay_is_identity(self):
        """Test zero delay leaves coefficients unchanged"""
        cfg = ModConfig(n_states=4, alias_factor=4)
        assert delay_phase(3, 0, cfg) == 0.0
        assert delayed_coef(3, 0, cfg) == pytest.approx(harmonic_coef(3, 4))

    def test_delay_out_of_range(self):
        """Test out-of-range delays are rejected"""
        cfg = ModConfig(n_states=4, alias_factor=4)
        with pytest.raises(ValueError):
            delayed_coef(0, 4, cfg)


class TestWaveform:
    def test_unit_modulus_and_first_state(self):
        """Test sampled waveform is unit modulus"""
        cfg = ModConfig(n_states=4, alias_factor=2)
        wave = waveform_samples(cfg, 0, cfg.period_samples(4), 4)
        np.testing.assert_allclose(np.abs(wave), 1.0)
        np.testing.assert_allclose(wave[: 2 * 4], 1.0)

    def test_delay_shifts_by_whole_pulse(self):
        """Test delays shift by whole pulses"""
        cfg = ModConfig(n_states=4, alias_factor=2)
        states = switch_states(cfg, 1, cfg.period_samples(4), 4)
        assert np.all(states[:8] == 3)
        assert np.all(states[8:16] == 0)

    def test_oversampled_delay_shifts_by_switch_period(self):
        """Test oversampled delays shift by switch periods"""
        cfg = ModConfig(n_states=2, alias_factor=4, oversampling=2)
        states = switch_states(cfg, 1, cfg.period_samples(2), 2)
        # pulse of 8 samples, switch period of 4
        assert np.all(states[:4] == 1)
        assert np.all(states[4:12] == 0)

    def test_sample_count_must_cover_periods(self):
        """Test sample count must cover whole periods"""
        cfg = ModConfig(n_states=4, alias_factor=2)
        with pytest.raises(ValueError):
            waveform_samples(cfg, 0, 10, 4)
