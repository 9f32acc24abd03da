import numpy as np
import pytest

from src.core.trace import Trace, TraceKind, Volume
from src.inference.realize import ensemble_stats
from src.inference.volume import export_stats, process_volume, trace_seed
from src.util.errors import GeometryError, InferenceError
from tests.helpers.stubs import NoisyGenerator, ScalingGenerator


def _volume(n=512, keys=((1, 1), (1, 2), (2, 1), (2, 2), (3, 1))):
    traces = {}
    for inline, xline in keys:
        samples = np.random.default_rng(inline * 100 + xline).standard_normal(n)
        traces[(inline, xline)] = Trace(id=f"il{inline}_xl{xline}", kind=TraceKind.SEISMIC, dt_ms=2.0, samples=samples)
    return Volume(dt_ms=2.0, traces=traces)


async def test_worker_count_does_not_change_results():
    """Test that one and two workers give identical volumes"""
    volume = _volume()
    generators = [NoisyGenerator(), NoisyGenerator(gain=0.5)]
    serial = await process_volume(generators, volume, 3, seed=7, workers=1)
    parallel = await process_volume(generators, volume, 3, seed=7, workers=2)

    assert list(serial) == list(volume) == list(parallel)
    for key in volume:
        np.testing.assert_array_equal(serial[key].samples, parallel[key].samples)
        assert serial[key].id == f"il{key[0]}_xl{key[1]}/broadband"
        assert serial[key].kind == TraceKind.BROADBAND


async def test_each_trace_is_its_own_ensemble_mean():
    volume = _volume()
    generators = [NoisyGenerator()]
    out = await process_volume(generators, volume, 4, seed=3)
    key = (2, 1)
    stats, _ = ensemble_stats(generators, volume[key], 4, trace_seed(3, key))
    np.testing.assert_array_equal(out[key].samples, stats.mean)


async def test_geometry_mismatch_names_the_trace():
    with pytest.raises(GeometryError) as info:
        await process_volume([ScalingGenerator()], _volume(n=256), 2, seed=0)
    assert info.value.key == (1, 1)


async def test_volume_errors():
    with pytest.raises(InferenceError):
        await process_volume([], _volume(), 2, seed=0)
    with pytest.raises(InferenceError):
        await process_volume([ScalingGenerator()], _volume(), 2, seed=0, workers=0)


def test_trace_seeds_differ_by_key():
    seeds = {trace_seed(1, (i, x)) for i in range(10) for x in range(10)}
    assert len(seeds) == 100
    assert trace_seed(1, (3, 4)) == trace_seed(1, (3, 4))


def test_export_stats(tmp_path, noise_trace):
    stats, _ = ensemble_stats([NoisyGenerator()], noise_trace(), 5, seed=1, histogram_samples=[0, 256], bins=4)
    export_stats(stats, tmp_path / "out")

    lines = (tmp_path / "out" / "stats.csv").read_text().splitlines()
    assert lines[0] == "sample_index,mean,std"
    assert len(lines) == 513
    hist = (tmp_path / "out" / "stats_hist_sample0256.csv").read_text().splitlines()
    assert hist[0] == "bin_left,bin_right,count"
    assert len(hist) == 5
    assert sum(int(line.split(",")[2]) for line in hist[1:]) == 5
    assert (tmp_path / "out" / "stats_hist_sample0000.csv").is_file()
