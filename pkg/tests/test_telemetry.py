from datetime import datetime

import pytest
import ujson as json

from telemetry.aggregations.points_stats import MOVING_AVERAGE_WINDOW, aggr_points_stats
from telemetry.models import PointResult, PointStatus, TeleItemStatus, TeleSweepPoint
from telemetry.tele_writer import TeleWriter


def _point(i: int, duration: float, failed: bool = False) -> PointResult:
    return PointResult(
        status=PointStatus.FAILED if failed else PointStatus.OK,
        ts_created=1000.0 + i,
        duration_seconds=duration,
        error_message="ValueError: bad" if failed else None,
    )


def _tele_point(**update) -> TeleSweepPoint:
    doc = dict(
        sweep="figure1",
        status=TeleItemStatus.SUCCESS,
        n=100,
        p=50,
        noise_level=0.5,
        data_mode="direct-linear",
        estimator="min-norm",
    )
    doc.update(update)
    return TeleSweepPoint(**doc)


def test_to_dict_serializes_enums_and_timestamp():
    point = _tele_point(timestamp=datetime(2025, 1, 2, 3, 4, 5))
    doc = point.to_dict()

    assert doc["status"] == "success"
    assert doc["timestamp"] == "2025-01-02T03:04:05"
    assert (doc["n"], doc["p"], doc["noise_level"]) == (100, 50, 0.5)
    assert doc["error_message"] is None
    assert doc["estimator"] == "min-norm" and doc["tag"] == ""
    assert not point.failed


def test_writer_appends_daily_jsonl(tmp_path):
    writer = TeleWriter(tmp_path / "telemetry")
    _tele_point().write(writer)
    _tele_point(status=TeleItemStatus.FAILURE, error_message="boom").write(writer)

    path = writer.current_file_path()
    assert path.name == datetime.now().strftime("%Y%m%d") + ".jsonl"
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert [r["status"] for r in records] == ["success", "failure"]
    assert records[1]["error_message"] == "boom"


def test_empty_stats():
    stats = aggr_points_stats([])
    assert stats.count == 0
    assert stats.to_dict()["moving_average"] == []


def test_stats_counts_and_percentiles():
    points = [_point(i, d) for i, d in enumerate([1.0, 2.0, 3.0])] + [_point(3, 4.0, failed=True)]
    stats = aggr_points_stats(points)

    assert stats.count == 4
    assert stats.avg == pytest.approx(2.5)
    assert (stats.min, stats.max, stats.total) == (1.0, 4.0, 10.0)
    assert stats.percentiles["p50"] == pytest.approx(2.5)
    assert stats.status_counts == {"ok": 3, "failed": 1}
    assert stats.error_counts == {"ValueError: bad": 1}
    assert stats.throughput > 0
    assert stats.moving_average == []


def test_moving_average_over_completion_order():
    points = [_point(i, 1.0) for i in range(MOVING_AVERAGE_WINDOW + 2)]
    stats = aggr_points_stats(points)
    assert stats.moving_average == pytest.approx([1.0, 1.0, 1.0])
