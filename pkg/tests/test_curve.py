import math

import pytest

from asymptotics.context import SpectrumContext
from asymptotics.curve import (
    CurveRow,
    format_cell,
    read_curve_csv,
    read_curve_json,
    theoretical_risk_curve,
    write_curve_csv,
    write_curve_json,
)


GRID = [0.5, 0.9995, 1.0, 2.0]


def test_ridgeless_curve_regimes():
    rows = theoretical_risk_curve(SpectrumContext.isotropic(100, 1.0), GRID)

    under, near, at, over = rows
    assert (under.bias, under.variance, under.risk) == (0.0, 1.0, 1.0)
    assert near.is_threshold and math.isinf(near.risk)
    assert at.is_threshold and at.bias is None
    assert over.tag == ""
    assert over.c0 == pytest.approx(0.5)
    assert over.risk == pytest.approx(1.5)


def test_ridge_curve_has_no_threshold():
    rows = theoretical_risk_curve(SpectrumContext.isotropic(100, 1.0), GRID, lam=0.1)

    assert all(row.tag == "" for row in rows)
    assert all(math.isfinite(row.risk) for row in rows)
    assert all(row.risk == pytest.approx(row.bias + row.variance) for row in rows)


def test_curve_from_regression_pair(isotropic_pair):
    (row,) = theoretical_risk_curve(isotropic_pair, [2.0])
    assert row.bias == pytest.approx(0.5, rel=1e-8)
    assert row.variance == pytest.approx(1.0, rel=1e-8)


def test_curve_rejects_nonpositive_gamma():
    with pytest.raises(ValueError):
        theoretical_risk_curve(SpectrumContext.isotropic(10, 1.0), [0.0])


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(math.inf) == "inf"
    assert format_cell(0.1) == "0.1"
    assert format_cell("threshold") == "threshold"


def test_curve_csv(tmp_path):
    rows = theoretical_risk_curve(SpectrumContext.isotropic(100, 1.0), GRID)
    path = tmp_path / "theory.csv"
    write_curve_csv(rows, path)

    lines = path.read_text().splitlines()
    assert lines[0] == "gamma,bias,variance,risk,tag"
    assert lines[1] == "0.5,0.0,1.0,1.0,"
    assert lines[3] == "1.0,,,inf,threshold"

    loaded = read_curve_csv(path)
    assert [row.tag for row in loaded] == [row.tag for row in rows]
    assert loaded[3].risk == rows[3].risk


def test_curve_json_marks_threshold_with_null_risk(tmp_path):
    rows = theoretical_risk_curve(SpectrumContext.isotropic(100, 1.0), GRID)
    path = tmp_path / "theory.json"
    write_curve_json(rows, path)

    assert '"risk":null' in path.read_text().replace(" ", "")
    loaded = read_curve_json(path)
    assert math.isinf(loaded[2].risk)
    assert loaded[3].c0 == pytest.approx(rows[3].c0)


def test_threshold_row_needs_no_risk():
    assert math.isinf(CurveRow.model_validate({"gamma": 1.0, "tag": "threshold"}).risk)
