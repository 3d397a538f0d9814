import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwdoppler.config import DomainError, RadarConfig
from cwdoppler.dsp import (VelocityMap, VelocitySpectrum, count_transitions, detect_peak,
                           detection_gaps, max_detectable_velocity, remove_dc, sign_groups,
                           spectrum, velocity_axis, velocity_map, velocity_spectrum, window)
from cwdoppler.kinematics import ConstantRadialParams, ShuttleParams, constant_radial_trajectory, radial_shuttle_trajectory
from cwdoppler.synth import quantize, synthesize_if

from helpers import direct_dft

N = 128
FS = 3000.0


def tone(freq, n=N, fs=FS):
    return np.exp(2j * np.pi * freq * np.arange(n) / fs)


def detect_constant(v0, config, noise=False, seed=0, interpolation="parabolic"):
    traj = constant_radial_trajectory(ConstantRadialParams(v0, 8.0, 0.1))
    frames = quantize(synthesize_if(traj, config, seed, noise, n_samples=N), config)
    return velocity_map(frames, config, interpolation=interpolation).peaks[0]


# -- DC removal and windows ------------------------------------------------

def test_remove_dc_constant():
    assert np.all(remove_dc(np.full(N, 3 - 2j)) == 0)


def test_remove_dc_zero_mean_unchanged():
    x = tone(4 * FS / N)
    np.testing.assert_allclose(remove_dc(x), x, atol=1e-12)


def test_remove_dc_linearity():
    s = tone(7 * FS / N)
    np.testing.assert_allclose(remove_dc(s + (0.7 - 0.1j)), s, atol=1e-12)


@given(st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=64))
def test_remove_dc_mean_zero(values):
    out = remove_dc(values)
    scale = max(1.0, np.max(np.abs(values)))
    assert abs(out.mean()) <= 1e-12 * scale


def test_remove_dc_empty():
    with pytest.raises(DomainError):
        remove_dc([])


def test_rectangular_identity():
    x = np.random.default_rng(1).standard_normal(N) + 0j
    np.testing.assert_array_equal(window(x, "rectangular"), x)


def test_hann_endpoints_and_midpoint():
    w = window(np.ones(N), "hann").real
    assert w[0] == 0.0
    assert w[N // 2] == 1.0
    # periodic form: the sample after the last one would be zero again
    assert 0.5 * (1 - np.cos(2 * np.pi * N / N)) == 0.0


def test_unknown_window():
    with pytest.raises(DomainError):
        window(np.ones(N), "kaiser")


# -- spectrum ----------------------------------------------------------------

def test_spectrum_tone_bin():
    mags = np.abs(spectrum(tone(99.52), N))
    assert np.argmax(mags) - N // 2 == round(99.52 * N / FS) == 4


def test_spectrum_zeros_and_impulse():
    assert np.all(spectrum(np.zeros(N)) == 0)
    impulse = np.zeros(N)
    impulse[0] = 1
    np.testing.assert_allclose(np.abs(spectrum(impulse)), 1.0, atol=1e-15)


def test_spectrum_wrong_length():
    with pytest.raises(DomainError):
        spectrum(np.ones(64), N)
    with pytest.raises(DomainError):
        spectrum(np.ones(100))


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_spectrum_matches_direct_dft(seed):
    rng = np.random.default_rng(seed)
    x = np.exp(2j * np.pi * rng.random(N))
    np.testing.assert_allclose(spectrum(x, N), direct_dft(x), rtol=0, atol=1e-9)


def test_parseval():
    x = np.random.default_rng(3).standard_normal(N) + 1j * np.random.default_rng(4).standard_normal(N)
    assert np.sum(np.abs(x) ** 2) == pytest.approx(np.sum(np.abs(spectrum(x)) ** 2) / N, rel=1e-9)


# -- velocity axis -----------------------------------------------------------

def test_max_detectable_velocity(config):
    assert max_detectable_velocity(config) == pytest.approx(9.38, rel=0.005)
    assert max_detectable_velocity(config) == pytest.approx(9.368514, abs=1e-6)
    assert max_detectable_velocity(config.replace(adc_rate_sps=6000)) == pytest.approx(
        2 * max_detectable_velocity(config), rel=1e-15)
    exact = RadarConfig(carrier_freq=299792458.0 / 0.0125)
    assert max_detectable_velocity(exact) == pytest.approx(9.375, rel=1e-12)


def test_velocity_axis(config):
    axis = velocity_axis(config)
    step = config.wavelength * FS / (2 * N)
    vmax = max_detectable_velocity(config)
    np.testing.assert_allclose(np.diff(axis), step, rtol=1e-12)
    assert axis[0] == pytest.approx(-vmax, rel=1e-12)
    assert axis[-1] == pytest.approx(vmax - step, rel=1e-12)
    assert axis[N // 2] == 0.0


def test_velocity_spectrum_sign_and_value(config):
    spec = spectrum(window(tone(99.52), "hann"), N)
    vs = velocity_spectrum(spec, config)
    peak = vs.velocities[np.argmax(vs.magnitudes)]
    assert peak < 0
    assert peak == pytest.approx(-99.52 * config.wavelength / 2, abs=vs.step / 2)


def test_velocity_spectrum_matches_frequency_bins(config):
    # every bin's velocity is -f * lambda / 2 (Nyquist labelled -v_max)
    spec = spectrum(np.random.default_rng(0).standard_normal(N) + 0j, N)
    vs = velocity_spectrum(spec, config)
    freqs = (np.arange(N) - N // 2) * FS / N
    for f, mag in zip(freqs, np.abs(spec)):
        v = -f * config.wavelength / 2
        if f == -FS / 2:
            v = -max_detectable_velocity(config)
        idx = np.argmin(np.abs(vs.velocities - v))
        assert vs.velocities[idx] == pytest.approx(v, abs=1e-12)
        assert vs.magnitudes[idx] == mag


def test_velocity_spectrum_length_check(config):
    with pytest.raises(DomainError):
        velocity_spectrum(np.ones(64), config)


# -- peak detection ------------------------------------------------------------

def _vs(mags):
    mags = np.asarray(mags, float)
    return VelocitySpectrum(np.arange(len(mags)) - len(mags) // 2 + 0.0, mags)


def test_dominant_peak():
    mags = np.ones(16)
    mags[11] = 100.0
    assert detect_peak(_vs(mags), 8.0).velocity_mps == 3.0


def test_flat_spectrum_no_peak():
    assert detect_peak(_vs(np.ones(16)), 1.5) is None
    assert detect_peak(_vs(np.zeros(16)), 1.0) is None


def test_tie_break():
    mags = np.ones(16)
    mags[8 - 3] = mags[8 + 3] = 50.0
    mags[8 + 5] = 50.0
    assert detect_peak(_vs(mags), 8.0).velocity_mps == -3.0


def test_threshold_must_be_positive():
    with pytest.raises(DomainError):
        detect_peak(_vs(np.ones(8)), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-9.0, 9.0), st.floats(0.01, 100.0))
def test_scale_invariance(v0, k):
    config = RadarConfig()
    if abs(v0) < velocity_axis(config)[N // 2 + 1]:
        return  # an unquantized stationary frame leaves only round-off after DC removal
    traj = constant_radial_trajectory(ConstantRadialParams(v0, 8.0, 0.1))
    x = synthesize_if(traj, config, include_noise=False, n_samples=N).samples
    vs1 = velocity_spectrum(spectrum(window(remove_dc(x))), config)
    vs2 = velocity_spectrum(spectrum(window(remove_dc(k * x))), config)
    p1, p2 = detect_peak(vs1), detect_peak(vs2)
    assert (p1 is None) == (p2 is None)
    if p1 is not None:
        assert p1.bin_index == p2.bin_index


# -- end to end --------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.floats(-9.0, 9.0))
def test_loop_closure(v0):
    config = RadarConfig()
    step = config.wavelength * FS / (2 * N)
    vmax = max_detectable_velocity(config)
    if abs(v0) > vmax - step or abs(v0) < step:
        return
    for interp in ("none", "parabolic"):
        peak = detect_constant(v0, config, interpolation=interp)
        assert abs(peak.velocity_mps - v0) <= step / 2


@pytest.mark.parametrize("delta", [0.2, 0.5, 1.0])
def test_aliasing(config, delta):
    vmax = max_detectable_velocity(config)
    v0 = vmax + delta
    peak = detect_constant(v0, config)
    step = config.wavelength * FS / (2 * N)
    assert peak.velocity_mps == pytest.approx(v0 - 2 * vmax, abs=step / 2)


def test_detection_under_noise(config):
    hits = 0
    step = config.wavelength * FS / (2 * N)
    for seed in range(200):
        peak = detect_constant(-1.3, config.replace(), noise=True, seed=seed)
        hits += peak is not None and abs(peak.velocity_mps + 1.3) <= step / 2
    assert hits >= 198


def test_shuttle_map_structure(config):
    traj = radial_shuttle_trajectory(ShuttleParams(0.5, 4.0, 2.0, 0.5, 1))
    frames = quantize(synthesize_if(traj, config, include_noise=False), config)
    vmap = velocity_map(frames, config)
    track = vmap.track()
    assert sign_groups(track) == [-1, 1]
    gaps = detection_gaps(track)
    assert len(gaps) == 2
    # negative plateau, gap, positive plateau, gap
    first_neg = np.flatnonzero(track < 0)
    first_pos = np.flatnonzero(track > 0)
    assert first_neg[-1] < gaps[0][0] <= gaps[0][1] < first_pos[0]
    assert first_pos[-1] < gaps[1][0]
    assert gaps[1][1] == len(track) - 1


def test_velocity_map_rows(config):
    traj = constant_radial_trajectory(ConstantRadialParams(-1.0, 5.0, 1.0))
    frames = quantize(synthesize_if(traj, config, include_noise=False), config)
    vmap = velocity_map(frames, config)
    assert len(vmap.rows) == frames.n_frames == len(vmap.peaks)
    assert [r.frame_index for r in vmap.rows] == list(range(frames.n_frames))
    assert vmap.magnitudes.shape == (frames.n_frames, N)


def test_velocity_map_rejects_mismatched_axes():
    a = VelocitySpectrum(np.arange(4.0), np.ones(4), 0)
    b = VelocitySpectrum(np.arange(4.0) + 1, np.ones(4), 1)
    with pytest.raises(DomainError):
        VelocityMap([a, b])
    with pytest.raises(DomainError):
        VelocityMap([a, VelocitySpectrum(np.arange(4.0), np.ones(4), 0)])


def test_sign_group_helpers():
    track = [np.nan, -1.0, -2.0, np.nan, 0.01, 1.0, np.nan, -1.0, 2.0]
    assert sign_groups(track) == [-1, 1, -1, 1]
    assert sign_groups(track, min_speed=0.5) == [-1, 1, -1, 1]
    assert count_transitions([-1, 1, -1, 1]) == 2
    assert detection_gaps(track) == [(0, 0), (3, 3), (6, 6)]


def test_concurrent_rows_match_sequential(config):
    from concurrent.futures import ThreadPoolExecutor

    traj = radial_shuttle_trajectory(ShuttleParams(0.5, 4.0, 2.5, 0.3, 1))
    frames = quantize(synthesize_if(traj, config, noise_seed=3), config)
    sequential = velocity_map(frames, config).magnitudes
    x = frames.dequantize()
    with ThreadPoolExecutor(4) as pool:
        from cwdoppler.dsp import process_frames
        parts = list(pool.map(lambda chunk: process_frames(chunk, config), np.array_split(x, 7)))
    np.testing.assert_array_equal(np.vstack(parts), sequential)
