import numpy as np
import pytest

from physics.verify import VerificationReport
from utils.output import columns_of, csv_value, exit_code, float_column, format_rows, json_value, parse_rows


def test_csv_cells():
    assert csv_value(True) == "true"
    assert csv_value(np.bool_(False)) == "false"
    assert csv_value(np.int64(3)) == "3"
    assert csv_value(1.0 / 3.0) == "0.333333333333"
    assert csv_value([1.5, -2.0]) == "1.5;-2"
    assert csv_value(float("nan")) == ""
    assert csv_value(None) == ""


def test_json_values():
    assert json_value(np.float64(2.0 / 3.0)) == 0.666666666667
    assert json_value(float("inf")) is None
    assert json_value([np.bool_(True), 1]) == [True, 1]


def test_header_only_table():
    assert format_rows([], "csv", ["n", "energy"]).splitlines() == ["n,energy"]
    assert parse_rows(format_rows([], "json", ["n"]), "json") == []


def test_unknown_format():
    with pytest.raises(ValueError):
        format_rows([{"n": 0}], "xml")


def test_columns_follow_first_seen_order():
    assert columns_of([{"a": 1, "b": 2}, {"c": 3, "a": 4}]) == ["a", "b", "c"]


def test_csv_round_trip_with_missing_cells():
    rows = [{"x": 0.5, "y": 1.25}, {"x": 1.0}]
    parsed = parse_rows(format_rows(rows))
    assert float_column(parsed, "x") == pytest.approx([0.5, 1.0])
    y = float_column(parsed, "y")
    assert y[0] == 1.25 and np.isnan(y[1])


def test_exit_code_reflects_every_report():
    ok = VerificationReport(claim="a", parameters={}, analytic=[], numeric=[], deviation=0.0,
                            rel_deviation=0.0, tolerance=1e-4)
    bad = VerificationReport(claim="b", parameters={}, analytic=[1.0], numeric=[2.0], deviation=1.0,
                             rel_deviation=1.0, tolerance=1e-4)
    assert exit_code([ok]) == 0
    assert exit_code([ok, bad]) == 1
