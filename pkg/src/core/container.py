"""BXT1 binary trace container

Layout (little-endian)::

    magic    4s   b"BXT1"
    version  u32  1
    n        u32  number of samples
    dt_ms    f32
    t0_ms    f32
    kind     u8   0=seismic 1=log 2=broadband
    reserved 3x   zero
    samples  n x f32

Samples are widened to float64 on read. The trace id is not stored; readers take it
from the file stem unless one is supplied.
"""

import os
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.core.trace import Trace, TraceKind
from src.util.errors import DataError, FormatError, WriteError

MAGIC = b"BXT1"
VERSION = 1
HEADER = struct.Struct("<4sIIffB3x")
HEADER_SIZE = HEADER.size  # 20 bytes

PathLike = Union[str, os.PathLike]


def check_float32(trace: Trace) -> None:
    """Reject traces whose header or samples do not survive the float32 cast"""
    with np.errstate(over="ignore"):
        samples = np.asarray(trace.samples, dtype="<f4")
        dt_ms, t0_ms = np.float32(trace.dt_ms), np.float32(trace.t0_ms)
    if not np.all(np.isfinite(samples)):
        raise DataError(f"Trace {trace.id!r} has samples outside the float32 range")
    if not dt_ms > 0:
        raise DataError(f"Trace {trace.id!r} dt_ms={trace.dt_ms!r} underflows float32")
    if not np.isfinite(t0_ms):
        raise DataError(f"Trace {trace.id!r} t0_ms={trace.t0_ms!r} overflows float32")


def encode_header(trace: Trace) -> bytes:
    return HEADER.pack(MAGIC, VERSION, len(trace), trace.dt_ms, trace.t0_ms, trace.kind.code)


def encode_trace(trace: Trace) -> bytes:
    """Serialize a trace to BXT1 bytes"""
    check_float32(trace)
    payload = np.asarray(trace.samples, dtype="<f4").tobytes()
    return encode_header(trace) + payload


def decode_trace(data: bytes, trace_id: str = "") -> Trace:
    """Parse BXT1 bytes into a Trace"""
    if len(data) < HEADER_SIZE:
        raise FormatError(f"Container too short for header: {len(data)} bytes")
    magic, version, n_samples, dt_ms, t0_ms, kind_code = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"Bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"Unsupported container version {version}")
    try:
        kind = TraceKind.from_code(kind_code)
    except ValueError as e:
        raise FormatError(str(e))

    expected = HEADER_SIZE + 4 * n_samples
    if len(data) < expected:
        held = (len(data) - HEADER_SIZE) // 4
        raise FormatError(f"Truncated payload: header declares {n_samples} samples, file holds {held}")
    if len(data) > expected:
        raise FormatError(f"Trailing bytes after {n_samples} samples")

    samples = np.frombuffer(data, dtype="<f4", count=n_samples, offset=HEADER_SIZE).astype(np.float64)
    if not np.all(np.isfinite(samples)):
        raise DataError(f"Trace {trace_id!r} contains non-finite samples")
    return Trace(id=trace_id, kind=kind, dt_ms=float(dt_ms), t0_ms=float(t0_ms), samples=samples)


def write_trace(trace: Trace, path: PathLike) -> None:
    """Write a trace as a BXT1 file

    Values are stored as float32 and lose precision beyond it. Samples or a
    header that overflow (or a dt that underflows) raise DataError and nothing
    is written.
    """
    data = encode_trace(trace)
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(data)
    except OSError as e:
        raise WriteError(str(path), e.strerror or str(e))


def read_trace(path: PathLike, trace_id: Optional[str] = None) -> Trace:
    """Read a BXT1 file"""
    with open(path, "rb") as f:
        data = f.read()
    return decode_trace(data, trace_id if trace_id is not None else Path(path).stem)
