from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Dict, Optional, Any

from pydantic import BaseModel, Field

from core.globals import VERSION


SCHEMA_VERSION = "v1"


class PointStatus(Enum):
    OK = "ok"
    FAILED = "failed"


@dataclass(frozen=True)
class PointResult:
    """Timing of one evaluated sweep grid point."""
    status: PointStatus
    ts_created: float
    duration_seconds: float
    error_message: Optional[str] = None

    @property
    def finished_at(self) -> float:
        return self.ts_created + self.duration_seconds


class TeleItemStatus(Enum):
    SUCCESS = "success"
    FAILURE = "failure"


class TeleSweepPoint(BaseModel):
    """One JSONL record per evaluated (n, p, noise level) grid point."""
    schema_version: str = SCHEMA_VERSION
    sweep: str = Field(..., description="SweepConfig.name")
    status: TeleItemStatus
    error_message: Optional[str] = None

    n: int
    p: int
    noise_level: float
    data_mode: str
    estimator: str
    tag: str = Field("", description="threshold_tag of the produced row")
    redraws: int = 1
    trials: int = 1

    duration_seconds: float = 0.0
    timestamp: datetime = Field(default_factory=datetime.now)
    app_version: str = VERSION

    @property
    def failed(self) -> bool:
        return self.status is TeleItemStatus.FAILURE

    def to_dict(self) -> Dict[str, Any]:
        # enum values and ISO timestamps
        return self.model_dump(mode="json")

    def write(self, writer):
        writer.write(self)
