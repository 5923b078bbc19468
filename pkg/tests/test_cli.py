import numpy as np
import pytest

from main import main
from utils.output import float_column, parse_rows, read_rows


def run(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr().out


def sign_changes(values):
    values = values[np.abs(values) > 1e-6 * np.max(np.abs(values))]
    return int(np.count_nonzero(np.diff(np.sign(values))))


def test_spectrum_es_worked_chain(capsys):
    status, out = run(capsys, "spectrum-es", "--alpha", "1.5", "--beta", "4")
    assert status == 0
    assert out.splitlines()[0] == "n,analytic,numeric,deviation"
    rows = parse_rows(out)
    assert len(rows) == 1
    assert float(rows[0]["analytic"]) == pytest.approx(-9.36111111111, abs=1e-10)
    assert float(rows[0]["numeric"]) == pytest.approx(-337.0 / 36.0, abs=1e-4)


def test_spectrum_es_json(capsys):
    status, out = run(capsys, "spectrum-es", "--alpha", "1.5", "--beta", "4", "--format", "json")
    assert status == 0
    rows = parse_rows(out, "json")
    assert rows[0]["n"] == 0
    assert rows[0]["deviation"] < 1e-4


def test_spectrum_es_outside_window(capsys):
    status, out = run(capsys, "spectrum-es", "--alpha", "2", "--beta", "4")
    assert status == 2
    assert out == ""


def test_spectrum_es_needs_both_parameters(capsys):
    status, _ = run(capsys, "spectrum-es", "--alpha", "1.5")
    assert status == 2


def test_malformed_flag_value():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum-es", "--alpha", "abc", "--beta", "4"])
    assert exc.value.code == 2


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum-xyz"])
    assert exc.value.code == 2


def test_too_few_grid_points(capsys):
    status, out = run(capsys, "spectrum-es", "--alpha", "1.5", "--beta", "4", "--grid-points", "50")
    assert status == 2
    assert out == ""


def test_spectrum_es_rejects_grid_reaching_past_origin(capsys):
    status, out = run(capsys, "spectrum-es", "--alpha", "1.5", "--beta", "4", "--grid-min", "-1")
    assert status == 2
    assert out == ""


def test_spectrum_ces_worked_chain(capsys):
    status, out = run(capsys, "spectrum-ces", "--A", str(82.0 / 9.0), "--B", "8", "--n-max", "0")
    assert status == 0
    rows = parse_rows(out)
    assert len(rows) == 1
    assert float(rows[0]["selected_root"]) == pytest.approx(1.0, abs=1e-10)
    assert float(rows[0]["energy"]) == pytest.approx(-1.0, abs=1e-10)
    assert rows[0]["admissible"].split(";").count("true") == 1


def test_spectrum_ces_empty_table(capsys):
    status, out = run(capsys, "spectrum-ces", "--A", "0.75", "--B", "0")
    assert status == 0
    assert out.splitlines() == ["n,sqrt_eps,energy,numeric,deviation,cubic_roots,admissible,selected_root"]


def test_duality_check_defaults(capsys):
    status, out = run(capsys, "duality-check")
    assert status == 0
    rows = parse_rows(out)
    assert [row["claim"] for row in rows] == ["duality-exchange", "schwarzian"]
    exchange, closure = rows
    assert float(exchange["rayleigh_quotient"]) == pytest.approx(-0.75, abs=1e-3)
    assert float(closure["schwarzian_generic"]) == pytest.approx(-0.625, abs=1e-10)
    assert float(closure["schwarzian_closed_form"]) == pytest.approx(-0.625, abs=1e-10)


def test_export_es_ground_state_is_nodeless(capsys):
    status, out = run(capsys, "export-wf", "--alpha", "1.5", "--beta", "4", "--grid-points", "3000")
    assert status == 0
    rows = parse_rows(out)
    assert list(rows[0]) == ["coordinate", "analytic", "numeric"]
    numeric = float_column(rows, "numeric")
    analytic = float_column(rows, "analytic")
    assert sign_changes(numeric) == 0
    assert np.max(np.abs(analytic - numeric)) <= 1e-2 * np.max(np.abs(numeric))


@pytest.mark.parametrize("n", [1, 2])
def test_export_es_excited_state_nodes(capsys, n):
    status, out = run(capsys, "export-wf", "--alpha", "2.5", "--beta", "25", "--n", str(n), "--grid-points", "4000")
    assert status == 0
    rows = parse_rows(out)
    assert sign_changes(float_column(rows, "numeric")) == n
    assert sign_changes(float_column(rows, "analytic")) == n


def test_export_ces_to_file(capsys, tmp_path, worked_ces):
    path = tmp_path / "phi.csv"
    status, out = run(capsys, "export-wf", "--A", str(worked_ces.A), "--B", "8", "--out", str(path))
    assert status == 0
    assert out == ""
    rows = read_rows(str(path))
    assert len(rows) == 12000
    y = float_column(rows, "coordinate")
    numeric = float_column(rows, "numeric")
    analytic = float_column(rows, "analytic")
    # printed coordinates carry 12 digits, so the spacing comes from the full span
    h = (y[-1] - y[0]) / (len(y) - 1)
    assert np.sum(numeric ** 2) * h == pytest.approx(1.0, abs=1e-8)
    assert np.max(np.abs(analytic - numeric)) <= 1e-2 * np.max(np.abs(numeric))


def test_export_without_bound_level(capsys):
    status, out = run(capsys, "export-wf", "--A", "0.75", "--B", "0")
    assert status == 1
    assert out == ""


def test_export_needs_a_mode(capsys):
    status, _ = run(capsys, "export-wf")
    assert status == 2
