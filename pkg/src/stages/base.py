import asyncio
import json
import os
import uuid
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Type

from src.stages.result import StageResult
from src.util.errors import BandextError, CheckpointError, DataError, FormatError, ManifestError, WriteError
from src.util.logging import Logger

RUN_RECORD_NAME = "run.json"

INPUT_ERRORS: Dict[str, Type[BandextError]] = {"manifest": ManifestError, "checkpoints": CheckpointError}


@dataclass
class StageArgument:
    """Describes a stage argument"""

    name: str
    description: str
    required: bool = True


@dataclass
class StageSpec:
    """Specification for a stage"""

    name: str
    description: str  # Short one-line description for the command list
    help_text: str  # Detailed help text shown with <stage> --help
    arguments: List[StageArgument] = None


@dataclass
class RunConfig:
    """Everything one stage run needs: resolved configuration, input paths and stage parameters"""

    stage: str
    config: Dict[str, Any]
    out_dir: Path
    paths: Dict[str, Optional[str]] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    log_level: str = "WARNING"

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)

    @property
    def seed(self) -> int:
        return int(self.config["seed"])

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.config.get(name, {}))

    def param(self, name: str, default: Any = None) -> Any:
        value = self.params.get(name)
        return default if value is None else value

    def require(self, name: str, error: Type[BandextError] = DataError) -> Path:
        """Path of a required input; raises error naming the path if it does not exist"""
        value = self.paths.get(name)
        if not value:
            raise error(f"{self.stage}: --{name} is required")
        path = Path(value)
        if not path.exists():
            raise error(f"{self.stage}: {name} not found: {path}")
        return path

    def check_inputs(self) -> None:
        """Every given input path must exist before the stage runs"""
        for name in sorted(self.paths):
            if self.paths[name]:
                self.require(name, INPUT_ERRORS.get(name, FormatError))

    def optional(self, name: str) -> Optional[Path]:
        value = self.paths.get(name)
        return Path(value) if value else None

    def prepare_output(self) -> Path:
        """Create the output directory in one rename so a half-made directory is never visible"""
        if self.out_dir.is_dir():
            return self.out_dir
        parent = self.out_dir.parent
        try:
            parent.mkdir(parents=True, exist_ok=True)
            staging = parent / f".{self.out_dir.name}.{uuid.uuid4().hex[:8]}.tmp"
            staging.mkdir()
            try:
                os.rename(staging, self.out_dir)
            except OSError:
                staging.rmdir()
                if not self.out_dir.is_dir():
                    raise
        except OSError as e:
            raise WriteError(str(self.out_dir), e.strerror or str(e))
        return self.out_dir

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "out_dir": str(self.out_dir),
            "paths": {k: v for k, v in sorted(self.paths.items())},
            "params": {k: v for k, v in sorted(self.params.items())},
            "log_level": self.log_level,
            "config": self.config,
        }

    def write_record(self, result: StageResult) -> Path:
        """Echo the effective configuration and the stage outputs to run.json"""
        record = self.to_dict()
        record["outputs"] = sorted(result.outputs)
        path = self.out_dir / RUN_RECORD_NAME
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(json.dumps(record, indent=2, sort_keys=True, default=str) + "\n")
        except OSError as e:
            raise WriteError(str(path), e.strerror or str(e))
        return path


class BaseStage(ABC):
    """Base class for all stages"""

    spec: Optional[StageSpec] = None

    def __init__(self):
        self._update_callback = None
        self.logger = Logger(self.__class__.__name__)

    def set_update_callback(self, callback: Callable[[str], Any]) -> None:
        """Set a callback for progress updates"""
        self._update_callback = callback

    async def send_update(self, message: str) -> None:
        """Send a progress update"""
        if self._update_callback:
            await self._update_callback(message)

    async def offload(self, func: Callable, *args, **kwargs) -> Any:
        """Run blocking numerical work off the event loop"""
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, partial(func, *args, **kwargs))

    @abstractmethod
    async def execute(self, run: RunConfig) -> StageResult:
        """Execute the stage"""
