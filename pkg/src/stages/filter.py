from pathlib import Path

from src.core.container import read_trace, write_trace
from src.core.trace import Volume
from src.core.volume_io import INDEX_NAME, read_volume, write_volume
from src.dsp.filters import bandpass_trapezoid
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import band_param
from src.stages.result import StageResult
from src.util.errors import FormatError


class FilterStage(BaseStage):
    """Zero-phase trapezoid band-pass of a trace or a volume"""

    spec = StageSpec(
        name="filter",
        description="Band-pass a trace file or a volume directory",
        help_text="""Band-pass a trace or a volume with a zero-phase trapezoid filter.

--input is either a BXT1 file or a volume directory containing index.json. The
band defaults to the seismic band of the configuration.

Examples:
bandext filter --input bb/W05_broadband.bxt --band 3-6-60-80 --out filtered/
bandext filter --input bb/volume --band 0-0-8-16 --out lowpass/""",
        arguments=[
            StageArgument(name="input", description="BXT1 file or volume directory"),
            StageArgument(name="band", description="Band f1-f2-f3-f4", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        source = run.require("input", FormatError)
        band = band_param(run)

        if source.is_dir() and (source / INDEX_NAME).is_file():
            volume = read_volume(source)
            filtered = Volume(dt_ms=volume.dt_ms, traces={k: bandpass_trapezoid(t, band) for k, t in volume.traces.items()})
            out = write_volume(filtered, run.out_dir / source.name)
            return StageResult.json({"traces": len(filtered), "band": str(band), "volume": str(out)}).with_outputs(out)

        trace = read_trace(source)
        filtered = bandpass_trapezoid(trace, band)
        out = run.out_dir / f"{Path(source).stem}_filtered.bxt"
        write_trace(filtered, out)
        return StageResult.json({"trace": trace.id, "band": str(band), "output": str(out)}).with_outputs(out)
