"""Stage result types and formatting"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import pandas as pd


class ResultType(Enum):
    """Types of stage results"""

    TEXT = "text"
    TABLE = "table"
    JSON = "json"
    ERROR = "error"


@dataclass
class StageResult:
    """Result from a stage execution"""

    type: ResultType
    content: Any
    metadata: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    outputs: List[str] = field(default_factory=list)

    def __str__(self) -> str:
        if self.type == ResultType.TABLE:
            frame = pd.DataFrame(self.content["rows"], columns=self.content["headers"])
            return frame.to_string(index=False, float_format=lambda v: f"{v:.4g}")
        if self.type == ResultType.JSON:
            return json.dumps(self.content, indent=2, sort_keys=True, default=str)
        if self.type == ResultType.ERROR:
            return f"Error: {self.error}"
        return str(self.content)

    @property
    def ok(self) -> bool:
        return self.type != ResultType.ERROR

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {
            "type": self.type.value,
            "content": self.content,
            "metadata": self.metadata,
            "outputs": sorted(self.outputs),
        }

    def with_outputs(self, *paths) -> "StageResult":
        self.outputs.extend(str(p) for p in paths)
        return self

    @staticmethod
    def text(content: str, metadata: Optional[Dict[str, Any]] = None) -> "StageResult":
        return StageResult(type=ResultType.TEXT, content=content, metadata=metadata)

    @staticmethod
    def table(headers: List[str], rows: List[List[Any]], metadata: Optional[Dict[str, Any]] = None) -> "StageResult":
        return StageResult(type=ResultType.TABLE, content={"headers": headers, "rows": rows}, metadata=metadata)

    @staticmethod
    def from_frame(frame: pd.DataFrame, metadata: Optional[Dict[str, Any]] = None) -> "StageResult":
        rows = frame.astype(object).where(frame.notna(), None).values.tolist()
        return StageResult.table(list(frame.columns), rows, metadata)

    @staticmethod
    def json(data: Any, metadata: Optional[Dict[str, Any]] = None) -> "StageResult":
        return StageResult(type=ResultType.JSON, content=data, metadata=metadata)

    @staticmethod
    def error(message: str, metadata: Optional[Dict[str, Any]] = None) -> "StageResult":
        return StageResult(type=ResultType.ERROR, content=message, error=message, metadata=metadata)
