"""Convolutional forward model and tie degradation"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.core.trace import TieClass, Trace, TraceKind, TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_samples
from src.dsp.stats import rms
from src.dsp.wavelets import ricker
from src.synth.earth import FaciesKind
from src.util.errors import ConfigError, DataError

WAVELET_HALF_LEN = 64

# Extra white noise added to Fair pairs, as a fraction of trace RMS
FAIR_WHITE_NOISE = 0.10
FAIR_SHIFT_MS = (6.0, 12.0)
POOR_SHIFT_MS = (16.0, 30.0)


@dataclass(frozen=True)
class SynthConfig:
    n_pairs: int = 12
    tie_mix: Tuple[int, int, int] = (9, 2, 1)
    facies_mix: Tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    noise_rms_fraction: float = 0.05
    fair_noise_fraction: float = 1.0
    wavelet_peak_hz: float = 25.0
    seismic_band: TrapezoidBand = field(default_factory=lambda: TrapezoidBand(3, 6, 60, 80))
    broadband_band: TrapezoidBand = field(default_factory=lambda: TrapezoidBand(0, 1, 160, 200))
    seed: int = 1234
    n_samples: int = 512
    dt_ms: float = 2.0
    description: str = "Synthetic seismic/log pairs"

    def __post_init__(self):
        object.__setattr__(self, "tie_mix", tuple(int(c) for c in self.tie_mix))
        object.__setattr__(self, "facies_mix", tuple(float(p) for p in self.facies_mix))
        object.__setattr__(self, "seismic_band", TrapezoidBand.parse(self.seismic_band))
        object.__setattr__(self, "broadband_band", TrapezoidBand.parse(self.broadband_band))
        if self.n_pairs < 1:
            raise ConfigError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if len(self.tie_mix) != 3 or any(c < 0 for c in self.tie_mix) or sum(self.tie_mix) != self.n_pairs:
            raise ConfigError(f"tie_mix {self.tie_mix} must be three non-negative counts summing to n_pairs={self.n_pairs}")
        proportions_ok = len(self.facies_mix) == 3 and all(p >= 0 for p in self.facies_mix)
        if not proportions_ok or not math.isclose(sum(self.facies_mix), 1.0, abs_tol=1e-6):
            raise ConfigError(f"facies_mix {self.facies_mix} must be three proportions summing to 1")
        if not 0 <= self.noise_rms_fraction < 1:
            raise ConfigError(f"noise_rms_fraction must lie in [0, 1), got {self.noise_rms_fraction}")
        if self.fair_noise_fraction < 0:
            raise ConfigError(f"fair_noise_fraction must be >= 0, got {self.fair_noise_fraction}")
        nyquist = 500.0 / self.dt_ms
        self.seismic_band.check_nyquist(nyquist)
        self.broadband_band.check_nyquist(nyquist)

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "SynthConfig":
        """Build from a full configuration dict (synth, bands, trace and seed sections)"""
        synth = config.get("synth", {})
        bands = config.get("bands", {})
        trace = config.get("trace", {})
        return cls(
            n_pairs=int(synth.get("n_pairs", 12)),
            tie_mix=tuple(synth.get("tie_mix", (9, 2, 1))),
            facies_mix=tuple(synth.get("facies_mix", (1 / 3, 1 / 3, 1 / 3))),
            noise_rms_fraction=float(synth.get("noise_rms_fraction", 0.05)),
            fair_noise_fraction=float(synth.get("fair_noise_fraction", 1.0)),
            wavelet_peak_hz=float(synth.get("wavelet_peak_hz", 25.0)),
            seismic_band=bands.get("seismic", "3-6-60-80"),
            broadband_band=bands.get("broadband", "0-1-160-200"),
            seed=int(config.get("seed", 1234)),
            n_samples=int(trace.get("n_samples", 512)),
            dt_ms=float(trace.get("dt_ms", 2.0)),
            description=synth.get("description", "Synthetic seismic/log pairs"),
        )

    @property
    def facies_order(self) -> Tuple[FaciesKind, ...]:
        return (FaciesKind.BLOCKY_SAND, FaciesKind.THIN_BEDS, FaciesKind.SHALE)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_pairs": self.n_pairs,
            "tie_mix": list(self.tie_mix),
            "facies_mix": list(self.facies_mix),
            "noise_rms_fraction": self.noise_rms_fraction,
            "fair_noise_fraction": self.fair_noise_fraction,
            "wavelet_peak_hz": self.wavelet_peak_hz,
            "seismic_band": str(self.seismic_band),
            "broadband_band": str(self.broadband_band),
            "seed": self.seed,
            "n_samples": self.n_samples,
            "dt_ms": self.dt_ms,
        }


def peak_normalize(samples: np.ndarray) -> np.ndarray:
    """Scale to max|x| = 1; all-zero input is returned unchanged"""
    peak = np.max(np.abs(samples))
    if peak == 0:
        return samples
    return samples / peak


def to_float32_grid(samples: np.ndarray) -> np.ndarray:
    """Round to float32 so traces survive the BXT1 container unchanged"""
    return np.asarray(samples, dtype=np.float32).astype(np.float64)


def synthetic_seismic(reflectivity: np.ndarray, dt_ms: float, wavelet_peak_hz: float, band: TrapezoidBand) -> np.ndarray:
    """Reflectivity convolved with a zero-phase Ricker, then band-limited"""
    wavelet = ricker(wavelet_peak_hz, dt_ms, WAVELET_HALF_LEN).samples
    convolved = np.convolve(reflectivity, wavelet, mode="same")
    if convolved.size != reflectivity.size:
        # wavelet longer than the trace: keep the centred window
        start = (convolved.size - reflectivity.size) // 2
        convolved = convolved[start : start + reflectivity.size]
    return bandpass_samples(convolved, dt_ms, band)


def forward_model(reflectivity: Trace, cfg: SynthConfig, seed: int, well_id: Optional[str] = None) -> TracePair:
    """Seismic and broadband log for one reflectivity series

    seismic = bandpass(r * ricker, seismic_band) + noise; log = bandpass(r, broadband_band).
    Both are peak-normalized and rounded onto the float32 grid.
    """
    well_id = well_id or reflectivity.id
    r = reflectivity.samples
    rng = np.random.default_rng(seed)

    signal = synthetic_seismic(r, reflectivity.dt_ms, cfg.wavelet_peak_hz, cfg.seismic_band)
    noise = rng.standard_normal(r.size) * cfg.noise_rms_fraction * rms(signal)
    seismic = to_float32_grid(peak_normalize(signal + noise))
    log = to_float32_grid(peak_normalize(bandpass_samples(r, reflectivity.dt_ms, cfg.broadband_band)))

    return TracePair(
        well_id=well_id,
        seismic=Trace(id=f"{well_id}/seismic", kind=TraceKind.SEISMIC, dt_ms=reflectivity.dt_ms, samples=seismic),
        log=Trace(id=f"{well_id}/log", kind=TraceKind.LOG, dt_ms=reflectivity.dt_ms, samples=log),
        tie_class=TieClass.GOOD,
    )


@dataclass(frozen=True)
class Degradation:
    """Random choices applied by degrade_tie"""

    target: TieClass
    shift_samples: int = 0
    flip_start: int = 0
    flip_stop: int = 0

    def shift_ms(self, dt_ms: float) -> float:
        return self.shift_samples * dt_ms


def _shift_range(bounds_ms: Tuple[float, float], dt_ms: float) -> Tuple[int, int]:
    low = max(1, math.ceil(bounds_ms[0] / dt_ms - 1e-9))
    high = max(low, math.floor(bounds_ms[1] / dt_ms + 1e-9))
    return low, high


def plan_degradation(target: TieClass, seed: int, samples: np.ndarray, dt_ms: float) -> Degradation:
    """Draw the shift (and flipped half for Poor) that degrade_tie will apply

    The flipped contiguous half is complemented when needed so it carries at least half
    of the trace energy.
    """
    target = TieClass(target)
    if target == TieClass.GOOD:
        return Degradation(target=target)

    rng = np.random.default_rng(seed)
    if target == TieClass.FAIR:
        low, high = _shift_range(FAIR_SHIFT_MS, dt_ms)
        return Degradation(target=target, shift_samples=int(rng.integers(low, high + 1)))

    n = samples.size
    half = n // 2
    start = int(rng.integers(0, n - half + 1))
    energy = samples**2
    flipped = energy[start : start + half].sum()
    if flipped < 0.5 * energy.sum():
        # complement: the other half wraps around the flipped window
        start = (start + half) % n
        half = n - half
    low, high = _shift_range(POOR_SHIFT_MS, dt_ms)
    shift = int(rng.integers(low, high + 1))
    return Degradation(target=target, shift_samples=shift, flip_start=start, flip_stop=start + half)


def _interference(n: int, dt_ms: float, cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Seismic-band noise built from an unrelated random reflectivity"""
    unrelated = rng.standard_normal(n)
    return synthetic_seismic(unrelated, dt_ms, cfg.wavelet_peak_hz, cfg.seismic_band)


def degrade_tie(pair: TracePair, target: TieClass, seed: int, cfg: Optional[SynthConfig] = None) -> TracePair:
    """Spoil the seismic/log tie of a Good pair

    Fair: circular shift of 6-12 ms plus band-limited interference and 10% white noise.
    Poor: polarity flip of a contiguous half carrying most of the energy plus a 16-30 ms
    circular shift. Good pairs are returned unchanged. The input must be a Good pair;
    degrading an already degraded or unclassified pair raises DataError.
    """
    target = TieClass(target)
    if pair.tie_class != TieClass.GOOD:
        label = pair.tie_class.value if pair.tie_class else "unclassified"
        raise DataError(f"degrade_tie needs a Good pair, {pair.well_id} is {label}")
    if target == TieClass.GOOD:
        return TracePair(well_id=pair.well_id, seismic=pair.seismic, log=pair.log, tie_class=TieClass.GOOD)

    cfg = cfg or SynthConfig(n_samples=len(pair), dt_ms=pair.dt_ms)
    samples = np.array(pair.seismic.samples)
    n = samples.size
    plan = plan_degradation(target, seed, samples, pair.dt_ms)
    rng = np.random.default_rng([seed, 1])

    if target == TieClass.FAIR:
        level = rms(samples)
        interference = _interference(n, pair.dt_ms, cfg, rng)
        interference_rms = rms(interference)
        if interference_rms > 0:
            samples = samples + interference * (cfg.fair_noise_fraction * level / interference_rms)
        samples = samples + rng.standard_normal(n) * FAIR_WHITE_NOISE * level
    else:
        flip = np.arange(plan.flip_start, plan.flip_stop) % n
        samples[flip] = -samples[flip]

    samples = np.roll(samples, plan.shift_samples)
    seismic = pair.seismic.with_samples(to_float32_grid(peak_normalize(samples)))
    return TracePair(well_id=pair.well_id, seismic=seismic, log=pair.log, tie_class=target)
