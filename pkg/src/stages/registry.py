from typing import Any, Callable, Dict, Optional, Tuple, Type

from src.stages.base import BaseStage, RunConfig, StageSpec
from src.stages.builtin import get_builtin_stages
from src.stages.result import StageResult
from src.util.logging import Logger


class StageRegistry:
    """Registry for all available stages"""

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(StageRegistry, cls).__new__(cls)
        return cls._instance

    def initialize(self):
        """Initialize the registry if not already initialized"""
        if self._initialized:
            return

        self.logger = Logger("StageRegistry")
        self.stages: Dict[str, Tuple[Callable, StageSpec]] = {}

        for stage_class in get_builtin_stages():
            self.register_stage(stage_class.spec.name, stage_class)

        self._initialized = True
        self.logger.debug("Stage registry ready", extra_data={"stages": ",".join(sorted(self.stages))})

    def register_stage(self, name: str, stage_class: Type[BaseStage]) -> None:
        """Register a stage class"""
        handler = self.create_handler(stage_class)
        self.stages[name] = (handler, stage_class.spec)
        self.logger.debug(f"Registered stage: {name}")

    def create_handler(self, stage_class: Type[BaseStage]) -> Callable:
        """Create handler for a stage class

        The handler prepares the output directory, runs the stage and echoes the run
        to run.json when the stage succeeds.
        """

        async def handler(run: RunConfig, update_callback: Optional[Callable] = None) -> StageResult:
            try:
                stage = stage_class()
                if update_callback:
                    stage.set_update_callback(update_callback)

                run.check_inputs()
                run.prepare_output()
                result = await stage.execute(run)
                if not isinstance(result, StageResult):
                    result = StageResult.text(str(result))
                if result.ok:
                    run.write_record(result)
                return result

            except Exception as e:
                self.logger.error(f"Stage {stage_class.spec.name} failed: {e}")
                raise

        return handler

    def get_stage(self, name: str) -> Optional[Tuple[Callable, StageSpec]]:
        """Get a stage by name"""
        if not self._initialized:
            self.initialize()
        return self.stages.get(name)

    def get_stages(self) -> Dict[str, Tuple[Callable, StageSpec]]:
        """Get all registered stages"""
        if not self._initialized:
            self.initialize()
        return self.stages

    async def run(self, run: RunConfig, update_callback: Optional[Callable] = None) -> Any:
        entry = self.get_stage(run.stage)
        if entry is None:
            return StageResult.error(f"Unknown stage '{run.stage}'")
        handler, _ = entry
        return await handler(run, update_callback)
