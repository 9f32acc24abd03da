"""Trace, pair and volume types"""

import enum
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from src.util.errors import DataError, GeometryError


class TraceKind(str, enum.Enum):
    SEISMIC = "seismic"
    LOG = "log"
    BROADBAND = "broadband"

    @property
    def code(self) -> int:
        """Kind byte used by the BXT1 container"""
        return _KIND_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "TraceKind":
        for kind, value in _KIND_CODES.items():
            if value == code:
                return kind
        raise ValueError(f"Unknown trace kind code: {code}")


_KIND_CODES = {TraceKind.SEISMIC: 0, TraceKind.LOG: 1, TraceKind.BROADBAND: 2}


class TieClass(str, enum.Enum):
    GOOD = "good"
    FAIR = "fair"
    POOR = "poor"

    @property
    def rank(self) -> int:
        """Higher is a better tie"""
        return {TieClass.GOOD: 2, TieClass.FAIR: 1, TieClass.POOR: 0}[self]


@dataclass(frozen=True, eq=False)
class Trace:
    """Uniformly sampled real-valued signal

    Samples are held as a read-only float64 array; every constructor path validates
    that the trace is nonempty, finite and has a positive sample interval.
    """

    id: str
    kind: TraceKind
    dt_ms: float
    samples: np.ndarray
    t0_ms: float = 0.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64).reshape(-1)
        if samples.size == 0:
            raise DataError(f"Trace {self.id!r} has no samples")
        if not np.all(np.isfinite(samples)):
            raise DataError(f"Trace {self.id!r} contains non-finite samples")
        if not (self.dt_ms > 0 and np.isfinite(self.dt_ms)):
            raise DataError(f"Trace {self.id!r} has invalid sample interval {self.dt_ms}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "kind", TraceKind(self.kind))
        object.__setattr__(self, "dt_ms", float(self.dt_ms))
        object.__setattr__(self, "t0_ms", float(self.t0_ms))

    def __len__(self) -> int:
        return int(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.id == other.id
            and self.kind == other.kind
            and self.dt_ms == other.dt_ms
            and self.t0_ms == other.t0_ms
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None

    @property
    def nyquist_hz(self) -> float:
        return 500.0 / self.dt_ms

    @property
    def times_ms(self) -> np.ndarray:
        return self.t0_ms + self.dt_ms * np.arange(len(self))

    @property
    def duration_ms(self) -> float:
        return self.dt_ms * len(self)

    def with_samples(self, samples: np.ndarray, **changes) -> "Trace":
        """Copy of this trace with new samples (and optionally other fields)"""
        return replace(self, samples=samples, **changes)

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.samples**2)))


@dataclass(frozen=True)
class TracePair:
    """Co-located seismic trace and well-log trace, the supervised training unit"""

    well_id: str
    seismic: Trace
    log: Trace
    tie_class: Optional[TieClass] = None

    def __post_init__(self):
        if not self.well_id:
            raise DataError("TracePair requires a nonempty well_id")
        if self.seismic.kind != TraceKind.SEISMIC:
            raise DataError(f"Pair {self.well_id}: seismic trace has kind {self.seismic.kind.value}")
        if self.log.kind != TraceKind.LOG:
            raise DataError(f"Pair {self.well_id}: log trace has kind {self.log.kind.value}")
        if self.seismic.dt_ms != self.log.dt_ms or len(self.seismic) != len(self.log):
            raise DataError(
                f"Pair {self.well_id}: seismic ({len(self.seismic)} @ {self.seismic.dt_ms} ms) and "
                f"log ({len(self.log)} @ {self.log.dt_ms} ms) are not aligned"
            )
        if self.tie_class is not None:
            object.__setattr__(self, "tie_class", TieClass(self.tie_class))

    @property
    def dt_ms(self) -> float:
        return self.seismic.dt_ms

    def __len__(self) -> int:
        return len(self.seismic)


VolumeKey = Tuple[int, int]


@dataclass(frozen=True)
class Volume:
    """Traces keyed by (inline, xline); all members share dt and length"""

    dt_ms: float
    traces: Dict[VolumeKey, Trace] = field(default_factory=dict)

    def __post_init__(self):
        traces = dict(sorted(self.traces.items()))
        lengths = {len(t) for t in traces.values()}
        if len(lengths) > 1:
            raise GeometryError(f"Volume traces have differing lengths: {sorted(lengths)}")
        for key, trace in traces.items():
            if trace.dt_ms != self.dt_ms:
                raise GeometryError(f"Trace at {key} has dt {trace.dt_ms} ms, volume dt is {self.dt_ms} ms", key=key)
        object.__setattr__(self, "traces", traces)

    def keys(self):
        return self.traces.keys()

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[VolumeKey]:
        return iter(self.traces)

    def __getitem__(self, key: VolumeKey) -> Trace:
        return self.traces[key]

    @property
    def n_samples(self) -> Optional[int]:
        for trace in self.traces.values():
            return len(trace)
        return None
