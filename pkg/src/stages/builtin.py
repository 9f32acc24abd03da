"""Built-in stages registration"""

from typing import List, Type

from src.stages.base import BaseStage
from src.stages.filter import FilterStage
from src.stages.infer import InferStage
from src.stages.qc import QcStage
from src.stages.select import SelectStage
from src.stages.spectrum import SpectrumStage
from src.stages.stats import StatsStage
from src.stages.study import StudyStage
from src.stages.synth import SynthStage
from src.stages.tie import TieStage
from src.stages.train import TrainStage


def get_builtin_stages() -> List[Type[BaseStage]]:
    """Get all built-in stages that should be registered by default"""
    return [
        SynthStage,
        TieStage,
        SelectStage,
        TrainStage,
        InferStage,
        StatsStage,
        FilterStage,
        SpectrumStage,
        QcStage,
        StudyStage,
    ]
