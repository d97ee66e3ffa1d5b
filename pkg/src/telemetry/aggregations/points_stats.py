from typing import Any, List, Dict
from dataclasses import dataclass, field
from collections import Counter

import numpy as np

from numba import jit

from telemetry.models import PointResult


__all__ = ["PointStats", "aggr_points_stats"]


PERCENTILES = (50, 90, 99)
MOVING_AVERAGE_WINDOW = 10


@dataclass
class PointStats:
    avg: float = 0.0
    min: float = 0.0
    max: float = 0.0
    total: float = 0.0
    count: int = 0
    std_dev: float = 0.0
    percentiles: Dict[str, float] = field(default_factory=dict)
    status_counts: Dict[str, int] = field(default_factory=dict)
    error_counts: Dict[str, int] = field(default_factory=dict)
    throughput: float = 0.0
    moving_average: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "avg": self.avg,
            "min": self.min,
            "max": self.max,
            "total": self.total,
            "count": self.count,
            "std_dev": self.std_dev,
            "percentiles": self.percentiles,
            "status_counts": self.status_counts,
            "error_counts": self.error_counts,
            "throughput": self.throughput,
            "moving_average": self.moving_average,
        }


@jit(nopython=True)
def moving_average_numba(durations, window_size):
    """Simple moving average of point durations in completion order."""
    n = len(durations)
    out = np.zeros(n - window_size + 1)
    window_sum = 0.0
    for i in range(window_size):
        window_sum += durations[i]
    out[0] = window_sum / window_size
    for i in range(1, n - window_size + 1):
        window_sum += durations[i + window_size - 1] - durations[i - 1]
        out[i] = window_sum / window_size
    return out


def aggr_points_stats(points: List[PointResult]) -> PointStats:
    """Duration statistics, status/error counts and throughput of evaluated grid points.

    Returns an all-zero PointStats for an empty list.
    """
    if not points:
        return PointStats()

    durations = np.array([r.duration_seconds for r in points], dtype=np.float64)
    ordered = sorted(points, key=lambda r: r.finished_at)

    moving_average = []
    if len(ordered) >= MOVING_AVERAGE_WINDOW:
        ordered_durations = np.array([r.duration_seconds for r in ordered], dtype=np.float64)
        moving_average = moving_average_numba(ordered_durations, MOVING_AVERAGE_WINDOW).tolist()

    throughput = 0.0
    if len(points) > 1:
        start_time = min(r.ts_created for r in points)
        end_time = max(r.finished_at for r in points)
        if end_time > start_time:
            throughput = len(points) / (end_time - start_time)

    return PointStats(
        avg=float(np.mean(durations)),
        min=float(np.min(durations)),
        max=float(np.max(durations)),
        total=float(np.sum(durations)),
        count=len(points),
        std_dev=float(np.std(durations)),
        percentiles={f"p{q}": float(np.percentile(durations, q)) for q in PERCENTILES},
        status_counts=dict(Counter(r.status.value for r in points)),
        error_counts=dict(Counter(r.error_message for r in points if r.error_message)),
        throughput=throughput,
        moving_average=moving_average,
    )
