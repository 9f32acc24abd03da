import numpy as np
import pytest

from src.cgan.imaging import (
    MAX_TARGET_CREST,
    check_image_geometry,
    condition_scale,
    image_to_trace,
    pair_to_images,
    target_scale,
    trace_to_image,
)
from src.core.trace import TraceKind
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_trapezoid
from src.dsp.spectral import SpectrogramGeometry, istft, stft
from src.dsp.stats import rms
from src.util.errors import GeometryError

GEOMETRY = SpectrogramGeometry()
SEISMIC_BAND = TrapezoidBand(3, 6, 60, 80)
# whole cycles over 512 samples at 2 ms, so the band-pass leaves them exact
IN_BAND_HZ = 31 / 1.024
OUT_OF_BAND_HZ = 154 / 1.024


def test_trace_to_image_shape_and_scale(noise_trace):
    trace = noise_trace(seed=1).with_samples(noise_trace(seed=1).samples * 40.0)
    image, template, scale = trace_to_image(trace, GEOMETRY)
    assert image.shape == (2, 32, 32)
    assert template.shape == (33, 32)
    assert scale == pytest.approx(rms(trace.samples))
    # unit-RMS input: pixels stay far from tanh saturation whatever the trace amplitude
    assert 0.01 < np.sqrt(np.mean(image**2)) < 0.2
    assert np.max(np.abs(image)) < 0.6


def test_band_limited_image_is_not_vanishingly_small(sine):
    """Test that a narrow-band trace gives pixels of order 0.1 to 1"""
    image, _, _ = trace_to_image(sine(IN_BAND_HZ), GEOMETRY)
    assert 0.2 < np.max(np.abs(image)) < 1.0


def test_zero_trace_image(sine):
    trace = sine(30.0).with_samples(np.zeros(512))
    image, _, scale = trace_to_image(trace, GEOMETRY)
    assert scale == 1.0 == condition_scale(trace) == target_scale(trace)
    assert not image.any()


def test_explicit_scale_is_used(noise_trace):
    trace = noise_trace(seed=3)
    image, _, scale = trace_to_image(trace, GEOMETRY, scale=2.0)
    unit, _, _ = trace_to_image(trace, GEOMETRY, scale=1.0)
    assert scale == 2.0
    np.testing.assert_allclose(image, unit / 2.0, atol=1e-15)


def test_target_scale_uses_the_in_band_rms(sine):
    in_band = sine(IN_BAND_HZ, kind=TraceKind.LOG)
    assert target_scale(in_band, SEISMIC_BAND) == pytest.approx(rms(in_band.samples), rel=1e-9)

    # no in-band energy: the floor keeps the broadband RMS at MAX_TARGET_CREST
    out_of_band = sine(OUT_OF_BAND_HZ, kind=TraceKind.LOG)
    assert target_scale(out_of_band, SEISMIC_BAND) == pytest.approx(rms(out_of_band.samples) / MAX_TARGET_CREST)

    # total RMS 1.0, so the floor 0.4 stays below the in-band 0.707
    mixed = in_band.with_samples(in_band.samples + out_of_band.samples)
    assert target_scale(mixed, SEISMIC_BAND) == pytest.approx(rms(in_band.samples), rel=1e-9)


def test_image_round_trip_drops_only_the_nyquist_row(noise_trace):
    """Test the inverse path against a direct stft/istft with a zeroed Nyquist row"""
    trace = noise_trace(seed=2).with_samples(noise_trace(seed=2).samples * 7.0)
    image, template, scale = trace_to_image(trace, GEOMETRY)
    out = image_to_trace(image, template, scale, trace_id="rt")
    assert out.id == "rt"
    assert out.kind == TraceKind.BROADBAND

    spec = stft(trace.with_samples(trace.samples / scale))
    real, imag = spec.real_plane.copy(), spec.imag_plane.copy()
    real[-1] = 0.0
    imag[-1] = 0.0
    expected = istft(spec.with_planes(real, imag)).samples * scale
    np.testing.assert_allclose(out.samples, expected, atol=1e-9)


def test_band_limited_trace_survives_the_image_path(sine):
    trace = sine(30.0)
    image, template, scale = trace_to_image(trace, GEOMETRY)
    out = image_to_trace(image, template, scale).samples
    # frames touching the padded ends see a truncated sinusoid
    np.testing.assert_allclose(out[64:448], trace.samples[64:448], atol=1e-4)


def test_image_shape_mismatch(noise_trace):
    _, template, _ = trace_to_image(noise_trace(), GEOMETRY)
    with pytest.raises(GeometryError):
        image_to_trace(np.zeros((2, 33, 32)), template)


def test_pair_to_images(dataset):
    """Test that the target is on the unit in-band scale and the condition on unit RMS"""
    _, _, pairs = dataset
    pair = pairs[0]
    x, y = pair_to_images(pair, GEOMETRY)
    assert x.shape == y.shape == (2, 32, 32)
    assert not np.array_equal(x, y)

    scaled_log = pair.log.with_samples(pair.log.samples / target_scale(pair.log, SEISMIC_BAND))
    assert rms(bandpass_trapezoid(scaled_log, SEISMIC_BAND).samples) <= 1.0 + 1e-9
    assert rms(scaled_log.samples) <= MAX_TARGET_CREST + 1e-9
    expected_y, _, _ = trace_to_image(scaled_log, GEOMETRY, scale=1.0)
    np.testing.assert_allclose(y, expected_y, atol=1e-12)
    expected_x, _, _ = trace_to_image(pair.seismic, GEOMETRY, scale=rms(pair.seismic.samples))
    np.testing.assert_allclose(x, expected_x, atol=1e-12)
    # both images are of comparable magnitude
    assert 0.2 < np.abs(y).mean() / np.abs(x).mean() < 5.0


def test_check_image_geometry():
    check_image_geometry(512, GEOMETRY, 32)
    with pytest.raises(GeometryError):
        check_image_geometry(256, GEOMETRY, 32)
    with pytest.raises(GeometryError):
        check_image_geometry(512, SpectrogramGeometry(window_len=32, hop=16, n_fft=32), 32)
