import struct

import numpy as np
import pytest

from src.core.container import HEADER_SIZE, decode_trace, encode_header, encode_trace, read_trace, write_trace
from src.core.trace import Trace, TraceKind
from src.util.errors import DataError, FormatError


@pytest.fixture
def trace():
    # quarter steps are exact in float32
    return Trace(id="w1", kind=TraceKind.LOG, dt_ms=2.0, t0_ms=-8.0, samples=np.arange(512) * 0.25 - 10.0)


def test_header_bytes_for_default_geometry():
    """Test the 20-byte header against a hand-assembled dump"""
    trace = Trace(id="h", kind=TraceKind.SEISMIC, dt_ms=2.0, t0_ms=0.0, samples=np.zeros(512))
    expected = bytes.fromhex(
        "42585431"  # magic BXT1
        "01000000"  # version 1
        "00020000"  # 512 samples
        "00000040"  # dt 2.0f
        "00000000"  # t0 0.0f
        "00"  # kind seismic
        "000000"  # reserved
    )
    assert HEADER_SIZE == 20
    assert encode_header(trace) == expected
    assert encode_trace(trace)[:20] == expected
    assert len(encode_trace(trace)) == 20 + 4 * 512


def test_write_read_round_trip(tmp_path, trace):
    """Test that a written trace reads back equal and the file is stable"""
    path = tmp_path / "w1.bxt"
    write_trace(trace, path)
    loaded = read_trace(path)
    assert loaded == trace
    assert loaded.kind == TraceKind.LOG
    assert loaded.t0_ms == -8.0

    # rewriting the loaded trace gives the same bytes
    again = tmp_path / "again.bxt"
    write_trace(loaded, again)
    assert again.read_bytes() == path.read_bytes()


def test_read_trace_uses_explicit_id(tmp_path, trace):
    path = tmp_path / "file.bxt"
    write_trace(trace, path)
    assert read_trace(path).id == "file"
    assert read_trace(path, trace_id="W01/log").id == "W01/log"


def test_empty_trace_is_rejected_before_write():
    with pytest.raises(DataError):
        Trace(id="e", kind=TraceKind.SEISMIC, dt_ms=2.0, samples=np.array([]))


def test_decode_rejects_malformed_containers(trace):
    """Test magic, version, kind, truncation and trailing-byte checks"""
    data = encode_trace(trace)

    with pytest.raises(FormatError):
        decode_trace(data[:10])
    with pytest.raises(FormatError):
        decode_trace(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        decode_trace(data[:4] + struct.pack("<I", 2) + data[8:])
    with pytest.raises(FormatError):
        decode_trace(data[:16] + bytes([9]) + data[17:])
    with pytest.raises(FormatError):
        decode_trace(data + b"\x00\x00\x00\x00")


def test_decode_rejects_truncated_payload(trace):
    """Test a header declaring 512 samples over a payload of 100"""
    data = encode_trace(trace)[: HEADER_SIZE + 4 * 100]
    with pytest.raises(FormatError, match="512"):
        decode_trace(data)


def test_decode_rejects_non_finite_samples(trace):
    data = bytearray(encode_trace(trace))
    data[HEADER_SIZE : HEADER_SIZE + 4] = struct.pack("<f", float("nan"))
    with pytest.raises(DataError):
        decode_trace(bytes(data))


@pytest.mark.parametrize(
    "overrides",
    [
        {"samples": np.array([1e39, 0.0])},
        {"samples": np.array([0.0, -4e38])},
        {"dt_ms": 1e-50},
        {"t0_ms": 1e40},
    ],
)
def test_values_outside_float32_are_rejected_before_write(tmp_path, overrides):
    """Test that a trace which would not read back raises DataError and leaves no file"""
    fields = {"id": "x", "kind": TraceKind.SEISMIC, "dt_ms": 2.0, "t0_ms": 0.0, "samples": np.zeros(4)}
    fields.update(overrides)
    trace = Trace(**fields)
    path = tmp_path / "x.bxt"
    with pytest.raises(DataError):
        write_trace(trace, path)
    assert not path.exists()
    with pytest.raises(DataError):
        encode_trace(trace)


def test_largest_float32_values_round_trip(tmp_path):
    big = float(np.finfo(np.float32).max)
    trace = Trace(id="big", kind=TraceKind.LOG, dt_ms=2.0, samples=np.array([big, -big, 0.0]))
    write_trace(trace, tmp_path / "big.bxt")
    assert read_trace(tmp_path / "big.bxt") == trace
