"""Exception hierarchy shared by every bandext module"""

from typing import Optional


class BandextError(Exception):
    """Base class for all domain errors raised by bandext"""


class ConfigError(BandextError, ValueError):
    """Invalid or unreadable configuration"""


# Trace containers and manifests


class WriteError(BandextError, OSError):
    """Failed to write an artifact"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"Failed to write {path}: {reason}")
        self.path = path


class FormatError(BandextError, ValueError):
    """Malformed binary container"""


class DataError(BandextError, ValueError):
    """Container is well formed but holds invalid values"""


class ManifestError(BandextError, ValueError):
    """Invalid dataset manifest"""


# Signal processing


class BandError(BandextError, ValueError):
    """Invalid trapezoid band or frequency request"""


class SpectrogramError(BandextError, ValueError):
    """Invalid STFT geometry"""


class ReconstructionError(BandextError, ValueError):
    """Spectrogram cannot be inverted"""


class ResampleError(BandextError, ValueError):
    """Unsupported resampling request"""


# Synthetic data, well ties


class ModelError(BandextError, ValueError):
    """Earth model cannot produce the requested trace"""


class TieError(BandextError, ValueError):
    """Well tie cannot be scored"""


class SelectionError(BandextError, ValueError):
    """Training selection policy cannot be satisfied"""


# Autodiff engine


class ShapeError(BandextError, ValueError):
    """Operand shapes are inconsistent"""


class StatError(BandextError, ValueError):
    """Not enough elements to estimate batch statistics"""


class GraphError(BandextError, ValueError):
    """Invalid use of the computation graph"""


class OptimizerError(BandextError, ValueError):
    """Optimizer step cannot be applied"""


# Networks and training


class SpecError(BandextError, ValueError):
    """Network specification cannot be built"""


class TrainError(BandextError, ValueError):
    """Training cannot start"""


class DivergenceError(BandextError, ArithmeticError):
    """A training loss became non-finite"""

    def __init__(self, epoch: int, batch: int, losses: dict):
        super().__init__(f"Non-finite loss at epoch {epoch}, batch {batch}: {losses}")
        self.epoch = epoch
        self.batch = batch
        self.losses = losses


class CheckpointError(BandextError, ValueError):
    """Checkpoint file is unreadable or does not match the model"""

    def __init__(self, message: str, parameter: Optional[str] = None):
        super().__init__(message)
        self.parameter = parameter


# Inference and QC


class GeometryError(BandextError, ValueError):
    """Trace geometry does not match the training geometry"""

    def __init__(self, message: str, key: Optional[tuple] = None):
        super().__init__(message)
        self.key = key


class InferenceError(BandextError, ValueError):
    """Inference cannot run with the given inputs"""


class MetricError(BandextError, ValueError):
    """Metric is undefined for the given traces"""


class StudyError(BandextError, ValueError):
    """Training-combination study is misconfigured"""
