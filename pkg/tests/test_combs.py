import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import find_peaks

from tfsdc.combs import (
    CombSpec,
    EnvelopeSpec,
    GridTooCoarseError,
    SampledDensity,
    SpikeComb,
    biphoton_overlap,
    biphoton_time_representation,
    make_biphoton_comb,
    make_single_photon_comb,
    overlap,
    physical_spectrum,
    physical_temporal_correlation,
    time_rep_overlap,
    to_freq_basis,
    to_time_basis,
    translate_time,
)
from tfsdc.gkp import D_f, D_t, apply_displacement, displace_photon


def random_comb(spec, seed):
    r = np.random.default_rng(seed)
    m = np.arange(-spec.truncation, spec.truncation + 1)
    a = r.normal(size=m.size) + 1j * r.normal(size=m.size)
    return SpikeComb(spec, m, a / np.linalg.norm(a))


class TestCombSpec:
    def test_period_and_fsr(self):
        spec = CombSpec.from_fsr(20e9)
        assert spec.fsr_hz == pytest.approx(20e9)
        assert spec.time_period == pytest.approx(50e-12)
        assert spec.n_teeth == 65

    @pytest.mark.parametrize("kw", [dict(spacing=0.0), dict(spacing=-1.0), dict(truncation=-1)])
    def test_rejects_bad_geometry(self, kw):
        args = dict(center_frequency=0.0, spacing=1.0) | kw
        with pytest.raises(ValueError):
            CombSpec(**args)

    def test_single_photon_comb_is_normalized(self, unit_spec):
        comb = make_single_photon_comb(unit_spec)
        assert comb.norm() == pytest.approx(1.0, abs=1e-15)
        assert comb.indices.size == unit_spec.n_teeth

    def test_indices_must_increase(self, unit_spec):
        with pytest.raises(ValueError):
            SpikeComb(unit_spec, [0, 0], [1, 0])


class TestFourier:
    def test_matches_inverse_fft(self, unit_spec):
        comb = random_comb(unit_spec, 0)
        P = 23
        t = to_time_basis(comb, samples=P)
        dense = np.zeros(P, dtype=complex)
        dense[comb.indices % P] = comb.amplitudes
        ref = np.fft.ifft(dense) * math.sqrt(P)
        assert np.allclose(t.amplitudes, ref, atol=1e-13)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000), extra=st.integers(0, 9), trunc=st.integers(0, 12))
    def test_round_trip_and_norm(self, seed, extra, trunc):
        spec = CombSpec(0.0, 1.0, truncation=trunc)
        comb = random_comb(spec, seed)
        t = to_time_basis(comb, samples=spec.n_teeth + extra)
        assert t.norm() == pytest.approx(1.0, abs=1e-12)
        back = to_freq_basis(t)
        assert abs(overlap(comb, back)) == pytest.approx(1.0, abs=1e-12)

    def test_too_few_samples(self, unit_spec):
        with pytest.raises(ValueError, match="samples"):
            to_time_basis(make_single_photon_comb(unit_spec), samples=3)

    def test_uniform_comb_is_a_spike_train(self, unit_spec):
        # equal amplitudes give one spike at t = 0 of each period
        t = to_time_basis(make_single_photon_comb(unit_spec))
        assert abs(t.amplitudes[0]) == pytest.approx(1.0)
        assert np.allclose(t.amplitudes[1:], 0, atol=1e-12)

    @pytest.mark.parametrize("j", range(5))
    def test_time_shift_is_phase_ramp(self, j):
        spec = CombSpec(0.0, 1.0, truncation=7)
        comb = random_comb(spec, j)
        dt = j / 5 * spec.time_period
        left = to_time_basis(apply_displacement(comb, D_t(dt)), samples=15)
        right = translate_time(to_time_basis(comb, samples=15), dt)
        assert abs(overlap(left, right)) == pytest.approx(1.0, abs=1e-12)

    def test_translate_requires_whole_samples(self, unit_spec):
        t = to_time_basis(make_single_photon_comb(unit_spec))
        with pytest.raises(ValueError):
            translate_time(t, 0.3 * t.step)


class TestBiphoton:
    def test_pair_frequencies_anticorrelated(self, biphoton):
        spec = biphoton.spec
        for m in (-3, 0, 5):
            wh, wv = biphoton.pair_frequencies(m)
            assert wh + wv == pytest.approx(spec.center_frequency)
            assert wh - wv == pytest.approx(2 * m * spec.spacing)

    @pytest.mark.parametrize("photon", "HV")
    @pytest.mark.parametrize("periods", [1, 2, -3])
    def test_period_shift_invariance(self, biphoton, photon, periods):
        shifted = displace_photon(biphoton, D_t(periods * biphoton.spec.time_period), photon)
        assert abs(biphoton_overlap(biphoton, shifted)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("frac", [1 / 7, 1 / 2, 3.0])
    def test_frequency_shift_orthogonal(self, biphoton, frac):
        shifted = displace_photon(biphoton, D_f(frac * biphoton.spec.spacing), "H")
        assert abs(biphoton_overlap(biphoton, shifted)) < 1e-12

    def test_fractional_time_shift_is_not_invariant(self, biphoton):
        shifted = displace_photon(biphoton, D_t(0.5 * biphoton.spec.time_period), "H")
        assert abs(biphoton_overlap(biphoton, shifted)) < 0.99

    def test_time_representation_sits_on_period_lattice(self, biphoton):
        rep = biphoton_time_representation(biphoton)
        dT = biphoton.spec.time_period
        support = rep.support()
        assert support.size == biphoton.spec.n_teeth
        assert np.allclose(support / dT, np.round(support / dT), atol=1e-9)
        assert np.sum(np.abs(rep.amplitudes) ** 2) == pytest.approx(1.0)

    def test_time_representation_preserves_overlaps(self, biphoton):
        dT = biphoton.spec.time_period
        a = displace_photon(biphoton, D_t(0.25 * dT), "H")
        ref = biphoton_overlap(biphoton, a)
        got = time_rep_overlap(biphoton_time_representation(biphoton), biphoton_time_representation(a))
        assert got == pytest.approx(ref, abs=1e-12)

    def test_time_representation_carrier_orthogonality(self, biphoton):
        a = displace_photon(biphoton, D_f(biphoton.spec.spacing), "H")
        assert time_rep_overlap(biphoton_time_representation(biphoton),
                                biphoton_time_representation(a)) == 0


class TestPhysicalComb:
    def env(self, b_pm=250e9):
        return EnvelopeSpec(b_pm, 2e9, 20e9)

    def test_sinc_envelope_has_b_pm_fwhm(self):
        env = self.env()
        nu = np.linspace(0, env.phase_matching_fwhm, 200_001)
        g2 = np.sinc(env.A * nu) ** 2
        half = nu[np.argmin(np.abs(g2 - 0.5))]
        # 2.78 rounds the exact half-power product 2.7831
        assert 2 * half == pytest.approx(env.phase_matching_fwhm, rel=2e-3)

    def test_spectrum_line_spacing_and_width(self):
        env = self.env()
        dens = physical_spectrum(env)
        peaks, _ = find_peaks(dens.density, height=0.05 * dens.density.max())
        spacing = np.diff(dens.coordinates[peaks])
        assert np.all(np.abs(spacing - 20e9) <= dens.step)
        # FWHM of the central line from a dense local grid
        local = physical_spectrum(env, span=(-5e9, 5e9), points=20_001)
        above = local.coordinates[local.density >= local.density.max() / 2]
        assert above.max() - above.min() == pytest.approx(2e9, rel=0.1)

    def test_spectrum_follows_sinc_envelope(self):
        env = self.env()
        dens = physical_spectrum(env)
        peaks, _ = find_peaks(dens.density, height=1e-3 * dens.density.max())
        nu = dens.coordinates[peaks]
        ref = np.sinc(env.A * nu) ** 2
        got = dens.density[peaks] / dens.density[peaks].max()
        strong = ref > 0.2
        assert np.allclose(got[strong], ref[strong] / ref.max(), atol=0.05)

    def test_grid_guard(self):
        with pytest.raises(GridTooCoarseError):
            physical_spectrum(self.env(), points=100)

    def test_correlation_peak_spacing(self):
        env = self.env()
        dens = physical_temporal_correlation(env, 20e-12)
        peaks, _ = find_peaks(dens.density, height=0.02 * dens.density.max())
        assert np.all(np.abs(np.diff(dens.coordinates[peaks]) - 50e-12) <= dens.step)

    def test_correlation_decays_with_cavity_lifetime(self):
        env = self.env()
        dens = physical_temporal_correlation(env, 0.0, span=(0.0, 200e-12), points=20_001)
        on_lattice = np.arange(0, 20_001, 5000)
        slope = np.polyfit(dens.coordinates[on_lattice], np.log(dens.density[on_lattice]), 1)[0]
        assert slope == pytest.approx(-2 * env.half_linewidth, rel=0.02)

    def test_density_normalizes(self):
        dens = physical_temporal_correlation(self.env(), 20e-12).normalized()
        assert dens.integral() == pytest.approx(1.0)

    def test_negative_density_rejected(self):
        with pytest.raises(ValueError):
            SampledDensity("delay", np.arange(3.0), np.array([0.0, -1.0, 0.0]))

    def test_overlapping_lines_warn(self):
        with pytest.warns(UserWarning):
            EnvelopeSpec(250e9, 10e9, 20e9)


def test_biphoton_norm(optical_spec):
    assert make_biphoton_comb(optical_spec).norm() == pytest.approx(1.0)
