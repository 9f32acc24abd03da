import json

import numpy as np
import pytest

from src.core.trace import Trace, TraceKind, Volume
from src.core.volume_io import INDEX_NAME, export_volume_csv, read_volume, trace_filename, volume_frame, write_volume
from src.util.errors import FormatError, GeometryError


@pytest.fixture
def volume():
    traces = {}
    for inline in (10, 11):
        for xline in (1, 2, 3):
            samples = np.arange(8, dtype=float) + inline * 100 + xline
            traces[(inline, xline)] = Trace(id=f"il{inline}_xl{xline}", kind=TraceKind.SEISMIC, dt_ms=2.0, samples=samples)
    return Volume(dt_ms=2.0, traces=traces)


def test_volume_round_trip(tmp_path, volume):
    """Test that a written volume reads back with the same keys and samples"""
    write_volume(volume, tmp_path / "vol")
    index = json.loads((tmp_path / "vol" / INDEX_NAME).read_text())
    assert index["dt_ms"] == 2.0
    assert len(index["traces"]) == 6
    assert (tmp_path / "vol" / trace_filename(10, 1)).is_file()

    loaded = read_volume(tmp_path / "vol")
    assert list(loaded) == list(volume)
    for key in volume:
        np.testing.assert_array_equal(loaded[key].samples, volume[key].samples)
        assert loaded[key].id == f"il{key[0]}_xl{key[1]}"


def test_trace_filename_is_zero_padded():
    assert trace_filename(3, 12) == "il00003_xl00012.bxt"


def test_read_volume_errors(tmp_path, volume):
    """Test missing index, missing trace and duplicate keys"""
    with pytest.raises(FormatError):
        read_volume(tmp_path / "nothing")

    directory = write_volume(volume, tmp_path / "vol")
    (directory / trace_filename(11, 3)).unlink()
    with pytest.raises(FormatError):
        read_volume(directory)

    dup = write_volume(volume, tmp_path / "dup")
    index = json.loads((dup / INDEX_NAME).read_text())
    index["traces"].append(dict(index["traces"][0]))
    (dup / INDEX_NAME).write_text(json.dumps(index))
    with pytest.raises(GeometryError):
        read_volume(dup)


def test_volume_frame_and_csv(tmp_path, volume):
    """Test the long-format sample table"""
    frame = volume_frame(volume)
    assert list(frame.columns) == ["inline", "xline", "sample_index", "time_ms", "amplitude"]
    assert len(frame) == 6 * 8
    first = frame.iloc[0]
    assert (first["inline"], first["xline"], first["sample_index"]) == (10, 1, 0)
    assert first["amplitude"] == 1001.0

    export_volume_csv(volume, tmp_path / "vol.csv")
    lines = (tmp_path / "vol.csv").read_text().splitlines()
    assert lines[0] == "inline,xline,sample_index,time_ms,amplitude"
    assert len(lines) == 49


def test_empty_volume_frame():
    frame = volume_frame(Volume(dt_ms=2.0))
    assert frame.empty
