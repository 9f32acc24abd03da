"""Per-well QC tables"""

from dataclasses import asdict, dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from src.core.manifest import PairRole
from src.core.trace import Trace, TracePair
from src.qc.metrics import (
    QcBands,
    band_consistency,
    blind_validation,
    filtered_correlation,
    sidelobe_metric,
    spectrum_report,
)
from src.util.errors import MetricError


@dataclass(frozen=True)
class QcRow:
    well_id: str
    role: str
    tie_class: str
    blind_corr: Optional[float]
    baseline_corr: Optional[float]
    band_consistency: Optional[float]
    sidelobe_generated: float
    sidelobe_seismic: float
    low_ratio: Optional[float]
    mid_ratio: Optional[float]
    high_ratio: Optional[float]
    corr_unfiltered: Optional[float]
    corr_display_band: Optional[float]
    corr_seismic_band: Optional[float]
    corr_low_band: Optional[float]
    display_band_applied: str


QC_COLUMNS = list(QcRow.__dataclass_fields__)
SPECTRUM_COLUMNS = ["well_id", "band", "corners", "original_energy", "generated_energy", "ratio"]


@dataclass
class QcReport:
    rows: List[QcRow]
    spectrum_rows: List[Dict[str, object]]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.rows], columns=QC_COLUMNS)

    def spectrum_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.spectrum_rows, columns=SPECTRUM_COLUMNS)

    def median(self, column: str, role: Optional[PairRole] = None) -> Optional[float]:
        """Median of a column, optionally over one role; None if nothing to aggregate"""
        values = [getattr(r, column) for r in self.rows if role is None or r.role == PairRole(role).value]
        values = [v for v in values if v is not None]
        return float(np.median(values)) if values else None


def _safe(metric, *args) -> Optional[float]:
    try:
        return metric(*args)
    except MetricError:
        return None


def qc_well(
    pair: TracePair,
    generated: Trace,
    role: PairRole,
    bands: QcBands,
) -> (QcRow, List[Dict[str, object]]):
    seismic, log = pair.seismic, pair.log
    display = bands.display_for(seismic.nyquist_hz)
    comparison = spectrum_report(seismic, generated, low=bands.low, high=bands.high, mid=bands.mid)

    row = QcRow(
        well_id=pair.well_id,
        role=PairRole(role).value,
        tie_class=pair.tie_class.value if pair.tie_class else "",
        blind_corr=_safe(blind_validation, generated, log),
        baseline_corr=_safe(blind_validation, seismic, log),
        band_consistency=_safe(band_consistency, generated, seismic, bands.seismic),
        sidelobe_generated=sidelobe_metric(generated),
        sidelobe_seismic=sidelobe_metric(seismic),
        low_ratio=comparison.ratios["low"],
        mid_ratio=comparison.ratios["mid"],
        high_ratio=comparison.ratios["high"],
        corr_unfiltered=filtered_correlation(generated, log, None),
        corr_display_band=filtered_correlation(generated, log, display.applied),
        corr_seismic_band=filtered_correlation(generated, log, bands.seismic),
        corr_low_band=filtered_correlation(generated, log, bands.low),
        display_band_applied=str(display.applied),
    )
    spectrum_rows = [
        {
            "well_id": pair.well_id,
            "band": name,
            "corners": str(band),
            "original_energy": comparison.original_energy[name],
            "generated_energy": comparison.generated_energy[name],
            "ratio": comparison.ratios[name],
        }
        for name, band in comparison.bands.items()
    ]
    return row, spectrum_rows


def qc_report(
    pairs: Sequence[TracePair],
    generated: Mapping[str, Trace],
    roles: Mapping[str, PairRole],
    bands: QcBands = QcBands(),
) -> QcReport:
    """One row per well that has a generated trace, in well_id order"""
    rows, spectrum_rows = [], []
    for pair in sorted(pairs, key=lambda p: p.well_id):
        if pair.well_id not in generated:
            continue
        row, spectra = qc_well(pair, generated[pair.well_id], roles.get(pair.well_id, PairRole.UNASSIGNED), bands)
        rows.append(row)
        spectrum_rows.extend(spectra)
    return QcReport(rows=rows, spectrum_rows=spectrum_rows)
