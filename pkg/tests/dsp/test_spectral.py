import numpy as np
import pytest

from src.core.trace import Trace, TraceKind
from src.dsp.spectral import (
    SpectrogramGeometry,
    amplitude_spectrum,
    hann_window,
    istft,
    stft,
    window_energy,
)
from src.util.errors import ReconstructionError, SpectrogramError


def _trace(samples, dt_ms=2.0):
    return Trace(id="x", kind=TraceKind.SEISMIC, dt_ms=dt_ms, samples=samples)


def test_default_geometry_gives_33_by_32():
    """Test frame arithmetic for a 512-sample trace padded to 560"""
    geometry = SpectrogramGeometry()
    assert geometry.n_freqs == 33
    assert geometry.n_frames(512) == 32
    assert geometry.padding(512) == (24, 24)

    spec = stft(_trace(np.ones(512)))
    assert spec.shape == (33, 32)
    assert (spec.pad_left, spec.pad_right, spec.original_len) == (24, 24, 512)
    assert spec.freqs_hz[-1] == pytest.approx(250.0)


@pytest.mark.parametrize("window_len,hop,n_fft", [(64, 0, 64), (64, 80, 64), (64, 16, 32)])
def test_invalid_geometry(window_len, hop, n_fft):
    with pytest.raises(SpectrogramError):
        SpectrogramGeometry(window_len=window_len, hop=hop, n_fft=n_fft)


def test_periodic_hann_window():
    window = hann_window(64)
    assert window[0] == 0.0
    assert window[32] == pytest.approx(1.0)
    assert window.sum() == pytest.approx(32.0)


def test_zero_trace_gives_zero_planes():
    spec = stft(_trace(np.zeros(512)))
    assert not spec.real_plane.any()
    assert not spec.imag_plane.any()
    assert not istft(spec).samples.any()


def test_stft_is_linear():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal(512), rng.standard_normal(512)
    combined = stft(_trace(3.0 * a + 0.25 * b)).complex()
    separate = 3.0 * stft(_trace(a)).complex() + 0.25 * stft(_trace(b)).complex()
    np.testing.assert_allclose(combined, separate, atol=1e-9)


def test_round_trip_random_traces():
    """Test istft(stft(x)) == x for random traces"""
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.standard_normal(512) * rng.uniform(0.1, 10.0)
        out = istft(stft(_trace(x)), trace_id="rt", kind=TraceKind.BROADBAND)
        assert len(out) == 512
        assert out.kind == TraceKind.BROADBAND
        assert np.max(np.abs(out.samples - x)) <= 1e-6 * np.max(np.abs(x))


@pytest.mark.parametrize("window_len,hop,n_fft,n", [(32, 8, 32, 200), (64, 32, 128, 333), (48, 12, 64, 512)])
def test_round_trip_other_geometries(window_len, hop, n_fft, n):
    x = np.random.default_rng(n).standard_normal(n)
    out = istft(stft(_trace(x), window_len, hop, n_fft))
    np.testing.assert_allclose(out.samples, x, atol=1e-9)


def test_parseval_with_window_weighting():
    """Test spectrogram energy against window-energy-weighted trace energy"""
    x = np.random.default_rng(2).standard_normal(512)
    spec = stft(_trace(x))

    # one-sided spectrum: interior bins count twice
    weights = np.full(spec.shape[0], 2.0)
    weights[0] = weights[-1] = 1.0
    power = spec.real_plane**2 + spec.imag_plane**2
    spectral_energy = float((weights[:, None] * power).sum()) / spec.n_fft

    energy = window_energy(spec.window_len, spec.hop, spec.shape[1])[spec.pad_left : spec.pad_left + 512]
    direct = float(np.sum(x**2 * energy))
    assert spectral_energy == pytest.approx(direct, rel=1e-6)


def test_istft_rejects_uncovered_samples():
    """Test that hop == window_len leaves zero window energy at frame edges"""
    spec = stft(_trace(np.ones(64)), window_len=16, hop=16, n_fft=16)
    with pytest.raises(ReconstructionError):
        istft(spec)


def test_amplitude_spectrum_basics():
    """Test zero trace, impulse and sinusoid peak"""
    zero = amplitude_spectrum(_trace(np.zeros(512)))
    assert len(zero) == 257
    assert not zero.amplitude.any()
    assert zero.freqs[0] == 0.0 and zero.freqs[-1] == pytest.approx(250.0)
    assert np.all(np.diff(zero.freqs) > 0)

    impulse = np.zeros(512)
    impulse[100] = 1.0
    np.testing.assert_allclose(amplitude_spectrum(_trace(impulse)).amplitude, 1.0, atol=1e-12)

    t = np.arange(512) * 0.002
    spectrum = amplitude_spectrum(_trace(np.sin(2 * np.pi * 30.0 * t)))
    nearest = int(np.argmin(np.abs(spectrum.freqs - 30.0)))
    assert int(np.argmax(spectrum.amplitude)) == nearest


def test_amplitude_spectrum_is_time_reversal_invariant():
    x = np.random.default_rng(4).standard_normal(512)
    forward = amplitude_spectrum(_trace(x)).amplitude
    backward = amplitude_spectrum(_trace(x[::-1])).amplitude
    np.testing.assert_allclose(forward, backward, atol=1e-9)
