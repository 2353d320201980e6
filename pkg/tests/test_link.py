"""
Tests for the sample-level link: frames, modulation, receiver, oracle and
spectrum measurement
"""

import numpy as np
import pytest

from atma.analysis.alias import alternating_precoder, block_spectrum
from atma.analysis.beam import coherent_blocks
from atma.analysis.metrics import ConstraintViolationError, evm
from atma.analysis.modwave import ModConfig
from atma.link.frame import (
    build_frame,
    constellation,
    demodulate,
    frame_for,
    random_payload,
)
from atma.link.export import read_samples, write_samples
from atma.link.oracle import check_against_oracle, dft_oracle
from atma.link.simulator import Impairment, modulate_time, simulate_link
from atma.link.spectrum import (
    measure_spectrum,
    scenario_config,
    sideband_levels,
    simulate_spectrum,
)

LINK_GRID = [
    (n, a, o, d)
    for n in (2, 4)
    for a in (2, 4, 8)
    for o in (1, 2)
    for d in (0, 1)
]


class TestFrame:
    def test_blocks_carry_precoded_payload(self):
        """Test frame blocks carry the precoded payload"""
        cfg = ModConfig(4, 4, 2)
        p = alternating_precoder(4)
        payload = random_payload(8, np.random.default_rng(1))
        frame = build_frame(payload, cfg, 1, p, 4)
        weights = p.extended_vector(1, 2)
        for a in range(4):
            np.testing.assert_allclose(frame.block(a), weights[a] * payload)
        assert frame.size == 32
        assert frame.block_count == 4

    def test_prefix_is_cyclic_and_demodulates(self):
        """Test cyclic prefix and demodulation"""
        cfg = ModConfig(4, 2)
        frame = frame_for(cfg, 0, alternating_precoder(2), 8, 4, np.random.default_rng(2))
        samples = frame.time_samples()
        assert len(samples) == 20
        np.testing.assert_allclose(samples[:4], samples[-4:])
        np.testing.assert_allclose(demodulate(samples, 16, 4), frame.subcarriers, atol=1e-12)
        assert np.mean(np.abs(frame.body()) ** 2) == pytest.approx(1.0)

    def test_constraint_violations(self):
        """Test frame construction rejects bad sizes"""
        cfg = ModConfig(4, 2)
        with pytest.raises(ConstraintViolationError):
            build_frame(np.ones(6), cfg, 0, alternating_precoder(2), 0)
        with pytest.raises(ConstraintViolationError):
            build_frame(np.ones(8), cfg, 0, alternating_precoder(2), 2)

    def test_constellations(self):
        """Test constellation tables"""
        np.testing.assert_allclose(np.mean(np.abs(constellation("qpsk")) ** 2), 1.0)
        assert len(constellation("bpsk")) == 2
        with pytest.raises(ValueError):
            constellation("qam64")


class TestReceiver:
    @pytest.mark.parametrize("n_states,alias_factor,oversampling,d", LINK_GRID)
    def test_block_gains_match_held_coefficients(
        self, n_states, alias_factor, oversampling, d
    ):
        """Test measured block gains against the held coefficients"""
        cfg = ModConfig(n_states, alias_factor, oversampling)
        p = alternating_precoder(alias_factor)
        result = simulate_link(cfg, d, block_size=8, cp_length=4, precoder=p, seed=3)
        upsample = cfg.default_upsample()
        held = block_spectrum(cfg, d, p, window=alias_factor, upsample=upsample)
        expected = held.coef(held.passband_indices)
        np.testing.assert_allclose(result.per_block_gain, expected, rtol=1e-6)
        assert result.measured_evm < 1e-9
        assert result.flipped_blocks() == []

    @pytest.mark.parametrize("alias_factor", [2, 4, 8])
    def test_skipping_precoder_reversal_flips_half_the_blocks(self, alias_factor):
        """Test skipped precoder reversal flips A//2 blocks"""
        cfg = ModConfig(4, alias_factor)
        result = simulate_link(
            cfg,
            0,
            block_size=8,
            equalize_amplitude=False,
            reverse_precoder=False,
            seed=4,
        )
        assert len(result.flipped_blocks()) == alias_factor // 2

    @pytest.mark.parametrize("alias_factor", [2, 4, 8])
    def test_equalizer_keeps_skipped_reversal_visible(self, alias_factor):
        """Test equalization does not hide a skipped precoder reversal"""
        cfg = ModConfig(4, alias_factor)
        result = simulate_link(cfg, 0, block_size=8, reverse_precoder=False, seed=4)
        assert len(result.flipped_blocks()) == alias_factor // 2
        assert result.measured_evm > 1.0

    @pytest.mark.parametrize(
        "n_states,alias_factor,oversampling,d",
        [
            (n, a, o, d)
            for n in (2, 4)
            for a in (2, 4)
            for o in (1, 2)
            for d in (0, 1)
        ],
    )
    def test_unequalized_evm_at_default_upsampling(
        self, n_states, alias_factor, oversampling, d
    ):
        """Test unequalized EVM within 1e-3 of the closed form at default L"""
        cfg = ModConfig(n_states, alias_factor, oversampling)
        p = alternating_precoder(alias_factor)
        result = simulate_link(
            cfg, d, block_size=8, precoder=p, equalize_amplitude=False, seed=8
        )
        analytic = evm(block_spectrum(cfg, d, p, window=alias_factor))
        assert result.measured_evm == pytest.approx(analytic, abs=1e-3)

    @pytest.mark.parametrize("n_states,alias_factor", [(2, 4), (4, 4), (4, 8)])
    def test_odd_delay_splits_block_phases(self, n_states, alias_factor):
        """Test odd delays split block phases into coherent and flipped sets"""
        cfg = ModConfig(n_states, alias_factor, 2)
        shift = cfg.block_offset
        passband = np.arange(-shift, alias_factor - shift)
        reference = simulate_link(cfg, 0, block_size=8, seed=7).per_block_gain
        for d in range(1, cfg.delay_count, 2):
            gains = simulate_link(cfg, d, block_size=8, seed=7).per_block_gain
            relative = gains / reference * np.exp(2j * np.pi * d / cfg.delay_count)
            coherent = np.isin(passband, coherent_blocks(cfg, d))
            assert coherent.sum() == alias_factor // 2
            np.testing.assert_allclose(relative[coherent], 1.0, atol=1e-5)
            np.testing.assert_allclose(relative[~coherent], -1.0, atol=1e-5)

    def test_unequalized_evm_matches_analytic(self):
        """Test unequalized EVM against held and continuous models"""
        cfg = ModConfig(4, 4)
        p = alternating_precoder(4)
        result = simulate_link(
            cfg, 0, block_size=16, upsample=64, precoder=p, equalize_amplitude=False
        )
        continuous = evm(block_spectrum(cfg, 0, p, window=8))
        held = evm(block_spectrum(cfg, 0, p, window=8, upsample=64))
        assert result.measured_evm == pytest.approx(held, abs=1e-7)
        assert result.measured_evm == pytest.approx(continuous, abs=1e-3)

    def test_noise_raises_evm(self):
        """Test AWGN raises EVM to the expected range"""
        cfg = ModConfig(4, 4)
        result = simulate_link(cfg, 0, block_size=64, snr_db=20.0, seed=5)
        assert 0.05 < result.measured_evm < 0.2

    def test_impaired_switch_leaks(self):
        """Test a mismatched switch leaks off-grid power"""
        cfg = ModConfig(4, 4)
        impairment = Impairment(imbalance_db=1.0, phase_error_deg=5.0)
        assert dft_oracle(cfg, 0, 8, impairment).leakage > 1e-3
        ideal = simulate_link(cfg, 0, block_size=16, seed=6)
        impaired = simulate_link(cfg, 0, block_size=16, impairment=impairment, seed=6)
        assert ideal.measured_evm < 1e-9
        assert impaired.measured_evm > 1e-4

    def test_zero_impairment_is_the_ideal_chain(self):
        """Test zero impairment reproduces the ideal chain"""
        cfg = ModConfig(4, 4, 2)
        ideal = simulate_link(cfg, 1, block_size=8, seed=9)
        zero = simulate_link(cfg, 1, block_size=8, impairment=Impairment(), seed=9)
        np.testing.assert_array_equal(zero.per_block_gain, ideal.per_block_gain)
        np.testing.assert_array_equal(zero.demodulated, ideal.demodulated)

    @pytest.mark.parametrize("n_states", [2, 4, 8])
    def test_rig_level_mismatch_raises_floor(self, n_states):
        """Test 0.1 dB and 1 degree mismatch raises the floor"""
        cfg = ModConfig(n_states, 4)
        small = Impairment(imbalance_db=0.1, phase_error_deg=1.0)
        assert dft_oracle(cfg, 0, 8).leakage <= 1e-12
        assert dft_oracle(cfg, 0, 8, small).leakage > 1e-3
        impaired = simulate_link(cfg, 0, block_size=8, impairment=small, seed=6)
        assert impaired.measured_evm > 1e-5

    def test_state_weights(self):
        """Test impairment state weights"""
        weights = Impairment(imbalance_db=20.0).state_weights(4)
        np.testing.assert_allclose(weights, [1, 0.1, 1, 0.1])
        assert Impairment().is_ideal

    def test_symbol_must_hold_whole_cycles(self):
        """Test symbols must hold whole modulation cycles"""
        cfg = ModConfig(4, 4)
        with pytest.raises(ValueError):
            modulate_time(np.ones(24, dtype=complex), cfg, 0, 8)


class TestOracle:
    @pytest.mark.parametrize(
        "n_states,alias_factor,oversampling,d",
        [(2, 1, 1, 1), (4, 4, 1, 3), (4, 4, 2, 5), (8, 8, 2, 9), (3, 6, 1, 2)],
    )
    def test_closed_form_matches_dft(self, n_states, alias_factor, oversampling, d):
        """Test closed form against the DFT of the waveform"""
        cfg = ModConfig(n_states, alias_factor, oversampling)
        check = check_against_oracle(cfg, d, cfg.default_upsample())
        assert check.max_rel_error < 1e-10
        assert check.leakage < 1e-12
        assert check.passed()

    def test_continuous_error_shrinks_with_upsampling(self):
        """Test continuous-model error shrinks with L"""
        cfg = ModConfig(4, 4)
        coarse = check_against_oracle(cfg, 0, 8).max_rel_error_continuous
        fine = check_against_oracle(cfg, 0, 64).max_rel_error_continuous
        assert fine < coarse

    def test_oracle_span(self):
        """Test oracle index span"""
        oracle = dft_oracle(ModConfig(4, 2), 0, 4)
        assert len(oracle.coefficients) == 8
        assert oracle.i_min == -4


class TestSpectrum:
    def test_resolution_floor(self):
        """Test spectrum resolution checks"""
        with pytest.raises(ValueError):
            measure_spectrum(np.ones(1024), 128)
        with pytest.raises(ValueError):
            measure_spectrum(np.ones(100), 256)

    def test_tone_peaks_at_its_bin(self):
        """Test a tone peaks at its own bin"""
        n = np.arange(1024)
        tone = np.exp(2j * np.pi * 32 * n / 256)
        freqs, power_db = measure_spectrum(tone, 256)
        assert freqs[np.argmax(power_db)] == pytest.approx(0.125)
        assert power_db.max() == 0.0

    def test_sideband_levels_of_synthetic_spectrum(self):
        """Test sideband levels of a synthetic spectrum"""
        freqs = np.arange(-200, 200) / 100
        power_db = np.where((freqs >= -0.5) & (freqs < 0.5), 0.0, -40.0)
        levels = sideband_levels(freqs, power_db, bandwidth=1.0)
        assert levels.shelf_db == pytest.approx(-40.0)
        assert levels.worst_db == pytest.approx(-40.0)
        assert levels.lower_aclr_db == pytest.approx(40.0)

    def test_scenarios(self):
        """Test scenario configurations"""
        bandwidth = scenario_config(2, 8, "constant-bandwidth", rate=10.0)
        switching = scenario_config(2, 8, "constant-switching", rate=10.0)
        assert bandwidth.sample_rate == 10.0
        assert switching.switch_frequency == pytest.approx(10.0)
        with pytest.raises(ValueError):
            scenario_config(2, 8, "constant-power")

    def test_shelf_falls_with_alias_factor(self):
        """Test sideband shelf falls as A grows"""
        shelves = []
        worst = None
        for alias_factor in (2, 8, 32, 128):
            cfg = scenario_config(2, alias_factor, "constant-bandwidth")
            freqs, power_db = simulate_spectrum(cfg, 1024, 8, frames=2, seed=7)
            levels = sideband_levels(
                freqs, power_db, cfg.sample_rate, cfg.modulating_frequency, 0.1
            )
            shelves.append(levels.shelf_db)
            worst = levels.worst_db
        assert all(b < a for a, b in zip(shelves, shelves[1:]))
        assert worst <= -36.0


class TestExport:
    def test_written_stream_reads_back(self, tmp_path):
        """Test sample files read back"""
        samples = np.exp(2j * np.pi * np.arange(16) / 16)
        path = tmp_path / "stream.bin"
        written = write_samples(path, samples, 8.0)
        assert written == 24 + 16 * len(samples)
        loaded, rate = read_samples(path)
        np.testing.assert_array_equal(loaded, samples)
        assert rate == 8.0

    def test_bad_magic(self, tmp_path):
        """Test bad magic is rejected"""
        path = tmp_path / "stream.bin"
        write_samples(path, np.ones(4), 1.0)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="bad magic"):
            read_samples(path)

    def test_truncated_stream(self, tmp_path):
        """Test truncated files are rejected"""
        path = tmp_path / "stream.bin"
        write_samples(path, np.ones(4), 1.0)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError, match="announces 4 samples"):
            read_samples(path)
        path.write_bytes(b"ATMA")
        with pytest.raises(ValueError, match="too short"):
            read_samples(path)
