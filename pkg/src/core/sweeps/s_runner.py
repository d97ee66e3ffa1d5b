import asyncio
import time

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import List, Optional, Tuple

import uvloop

from core.globals import VERSION
from core.logger import info, warn, exception
from core.sweeps.s_models import SweepConfig, SweepResult, SweepRow
from core.sweeps.s_point import GridPoint, grid_points, evaluate_point, error_row
from telemetry.aggregations.points_stats import aggr_points_stats
from telemetry.models import PointResult, PointStatus, TeleSweepPoint, TeleItemStatus
from telemetry.tele_writer import TeleWriter


__all__ = ["run_sweep", "evaluate_timed"]


OFF_THEORY_NOTE = (
    "hmm-sequence designs are single correlated chains; "
    "theory columns assume i.i.d. rows with the stationary covariance"
)


def evaluate_timed(
        config: SweepConfig,
        point: GridPoint,
        tele_writer: Optional[TeleWriter] = None
) -> Tuple[SweepRow, PointResult]:
    """Evaluate one grid point; failures become rows tagged 'error'."""
    ts = time.time()
    t0 = time.perf_counter()
    error_message = None
    try:
        row = evaluate_point(config, point)
    except Exception as e:
        exception(f"grid point n={point.n} p={point.p} noise={point.noise_level} failed: {e}")
        row = error_row(point)
        error_message = f"{type(e).__name__}: {e}"
    duration = time.perf_counter() - t0

    status = PointStatus.OK if error_message is None else PointStatus.FAILED
    result = PointResult(status=status, ts_created=ts, duration_seconds=duration, error_message=error_message)

    if tele_writer is not None:
        TeleSweepPoint(
            sweep=config.name,
            status=TeleItemStatus.SUCCESS if error_message is None else TeleItemStatus.FAILURE,
            error_message=error_message,
            n=point.n,
            p=point.p,
            noise_level=point.noise_level,
            data_mode=config.data_mode,
            estimator=config.estimator.label,
            tag=row.threshold_tag,
            redraws=config.x_redraws,
            trials=config.trials,
            duration_seconds=duration,
        ).write(tele_writer)

    return row, result


async def _run_points(
        config: SweepConfig,
        points: List[GridPoint],
        tele_writer: Optional[TeleWriter]
) -> List[Tuple[SweepRow, PointResult]]:
    loop = asyncio.get_running_loop()
    # Limit the number of grid points in flight
    semaphore = asyncio.Semaphore(config.workers)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        async def evaluate_with_semaphore(point: GridPoint):
            async with semaphore:
                return await loop.run_in_executor(pool, partial(evaluate_timed, config, point, tele_writer))

        tasks = [evaluate_with_semaphore(point) for point in points]
        return await asyncio.gather(*tasks)


def run_sweep(config: SweepConfig, tele_writer: Optional[TeleWriter] = None) -> SweepResult:
    """Evaluate every (n, p, noise) grid point and attach run metadata.

    Rows are sorted by (noise level, n, p), so the result does not depend on
    completion order.
    """
    points = grid_points(config)
    info(
        f"Sweep '{config.name}': {len(points)} points, mode={config.data_mode}, "
        f"estimator={config.estimator.label}, redraws={config.x_redraws}, trials={config.trials}, workers={config.workers}"
    )
    if config.data_mode == "hmm-sequence":
        warn(OFF_THEORY_NOTE)

    t0 = time.perf_counter()
    evaluated = uvloop.run(_run_points(config, points, tele_writer))
    wall_time = time.perf_counter() - t0

    rows = sorted((row for row, _ in evaluated), key=SweepRow.sort_key)
    stats = aggr_points_stats([result for _, result in evaluated])
    failed = stats.status_counts.get(PointStatus.FAILED.value, 0)
    if failed:
        warn(f"Sweep '{config.name}': {failed} of {len(points)} points failed")
    info(f"Sweep '{config.name}' done in {wall_time:.2f}s")

    return SweepResult(
        rows=rows,
        metadata={
            "preset": config.name,
            "config": config.model_dump(mode="json"),
            "version": VERSION,
            "wall_time_seconds": wall_time,
            "mode_note": OFF_THEORY_NOTE if config.data_mode == "hmm-sequence" else None,
            "timing": stats.to_dict(),
        },
    )
