import csv
import io
import json
from importlib import resources

import numpy as np
import pytest

from dea_closest import ValidationError, load_dataset
from dea_closest.cli import main
from dea_closest.report import RunConfig, analyze, emit_plot_data, run

from conftest import EIGHT_DMU_CSV, FOUR_DMU_CSV


@pytest.fixture(scope="module")
def table_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "table.csv"
    p.write_text(EIGHT_DMU_CSV, encoding="utf-8")
    return str(p)


@pytest.fixture(scope="module")
def four_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("data4") / "four.csv"
    p.write_text(FOUR_DMU_CSV, encoding="utf-8")
    return str(p)


def strip_timings(doc: dict) -> dict:
    doc = json.loads(json.dumps(doc))
    doc["meta"]["timings"] = {}
    return doc


def test_full_report_matches_reference_tables(table_path):
    report = run(RunConfig(input_path=table_path, command="report"))
    doc = report.to_dict()
    by_name = {rec["name"]: rec for rec in doc["results"]}

    assert [r["name"] for r in doc["results"]] == [f"DMU{k}" for k in range(1, 9)]
    for k in (1, 2, 3, 4):
        assert by_name[f"DMU{k}"]["efficiency"]["efficient"] is True
    for k in (5, 6, 7, 8):
        assert by_name[f"DMU{k}"]["efficiency"]["efficient"] is False

    assert by_name["DMU5"]["projection"]["target_inputs"] == [5.0]
    assert by_name["DMU7"]["projection"]["target_inputs"][0] == pytest.approx(4 / 3, abs=1e-4)
    assert [m["name"] for m in by_name["DMU8"]["mcrs"]["members"]] == ["DMU1", "DMU2"]
    assert by_name["DMU8"]["mcrs"]["members"][0]["weight"] == pytest.approx(1 / 3, abs=1e-4)
    assert by_name["DMU5"]["rts"]["label"] == "drs"
    assert by_name["DMU6"]["rts"]["label"] == "irs"
    assert by_name["DMU1"]["rts"]["intercept_lower"] == "-inf"
    assert by_name["DMU4"]["rts"]["intercept_upper"] == "+inf"


def test_efficiency_command_on_motivating_example(four_path):
    doc = run(RunConfig(input_path=four_path, command="efficiency")).to_dict()
    flags = {r["name"]: r["efficiency"]["efficient"] for r in doc["results"]}
    assert flags == {"A": True, "B": True, "C": True, "D": False}
    assert all("projection" not in r for r in doc["results"])


def test_subcommand_gating(table_path):
    levels = {
        "efficiency": ("efficiency",),
        "project": ("efficiency", "projection"),
        "mcrs": ("efficiency", "projection", "mcrs"),
        "rts": ("efficiency", "projection", "mcrs", "rts"),
        "report": ("efficiency", "projection", "mcrs", "rts"),
    }
    for command, keys in levels.items():
        doc = run(RunConfig(input_path=table_path, command=command)).to_dict()
        for rec in doc["results"]:
            present = tuple(k for k in ("efficiency", "projection", "mcrs", "rts") if k in rec)
            assert present == keys, (command, rec["name"])


def test_json_report_validates_against_schema(table_path):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(resources.files("dea_closest")
                        .joinpath("schemas/report-v1.schema.json").read_text())
    for command in ("efficiency", "report"):
        doc = run(RunConfig(input_path=table_path, command=command)).to_dict()
        jsonschema.validate(doc, schema)


def test_reports_are_reproducible(table_path):
    a = run(RunConfig(input_path=table_path, command="report"))
    b = run(RunConfig(input_path=table_path, command="report"))
    assert strip_timings(a.to_dict()) == strip_timings(b.to_dict())
    assert a.to_csv() == b.to_csv()


def test_csv_json_parity_to_nine_digits(table_path):
    report = run(RunConfig(input_path=table_path, command="report"))
    doc = report.to_dict()
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    for rec, row in zip(doc["results"], rows):
        assert rec["name"] == row["name"]
        assert float(row["theta"]) == rec["efficiency"]["theta"]
        assert float(row["target_in:input"]) == rec["projection"]["target_inputs"][0]
        assert float(row["slack_in:input"]) == rec["projection"]["slacks"]["in:input"]
        weights = [float(w) for w in row["mcrs_weights"].split(";")]
        assert weights == [m["weight"] for m in rec["mcrs"]["members"]]
        assert row["rts"] == rec["rts"]["label"]
        for key, col in (("intercept_lower", "intercept_lower"),
                         ("intercept_upper", "intercept_upper")):
            v = rec["rts"][key]
            assert row[col] == (v if isinstance(v, str) else f"{v:.9g}")


def test_plot_data_contents(table_path, tmp_path):
    out = tmp_path / "plot.csv"
    run(RunConfig(input_path=table_path, command="report", plot_data_path=str(out)))
    rows = list(csv.reader(io.StringIO(out.read_text())))
    frontier = [(r[2], r[3]) for r in rows if r[0] == "frontier"]
    assert frontier == [("1", "2"), ("2", "5"), ("3", "6"), ("5", "8")]
    assert sum(1 for r in rows if r[0] == "observed") == 8
    arrows = {r[1]: (r[4], r[5]) for r in rows if r[0] == "projection"}
    assert set(arrows) == {"DMU5", "DMU6", "DMU7", "DMU8"}
    assert arrows["DMU7"] == ("1.33333333", "3")


def test_plot_data_with_efficiency_command_keeps_report_scoped(table_path, tmp_path):
    out = tmp_path / "plot.csv"
    report = run(RunConfig(input_path=table_path, command="efficiency",
                           plot_data_path=str(out)))
    assert out.exists()
    assert all("projection" not in rec for rec in report.to_dict()["results"])


def test_plot_data_rejects_multidimensional(tmp_path, cfg):
    csv_text = "dmu,in:a,in:b,out:c\nu1,1,2,3\nu2,2,1,3\n"
    p = tmp_path / "multi.csv"
    p.write_text(csv_text)
    report = analyze(load_dataset(p), RunConfig(input_path=str(p), command="report"))
    with pytest.raises(ValidationError):
        emit_plot_data(report, str(tmp_path / "plot.csv"))


def test_single_efficient_dmu_degenerate_frontier(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("dmu,in:a,out:b\nsolo,2,3\n")
    out = tmp_path / "plot.csv"
    report = run(RunConfig(input_path=str(p), command="report", plot_data_path=str(out)))
    doc = report.to_dict()
    assert doc["results"][0]["efficiency"]["efficient"] is True
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert [(r[2], r[3]) for r in rows if r[0] == "frontier"] == [("2", "3")]


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(input_path="x.csv", command="bogus")
    with pytest.raises(ValidationError):
        RunConfig(input_path="x.csv", output_format="xml")
    with pytest.raises(ValidationError):
        RunConfig(input_path="")


def test_cli_report_stdout(table_path, capsys):
    assert main(["report", "--input", table_path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["command"] == "report"
    assert len(doc["results"]) == 8


def test_cli_csv_format(table_path, capsys):
    assert main(["efficiency", "--input", table_path, "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "name,theta,efficient"


def test_cli_priority_spec(table_path, capsys):
    code = main(["project", "--input", table_path,
                 "--priority", "in:input,out:output"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["config"]["priority"] == ["in:input", "out:output"]


def test_cli_validation_exit_codes(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["efficiency", "--input", str(empty)]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["efficiency", "--input", str(tmp_path / "missing.csv")]) == 4
    assert main(["report", "--input", str(empty), "--priority", "out:nope"]) == 2


def test_cli_solver_limit_exit_code(table_path, capsys):
    assert main(["efficiency", "--input", table_path, "--max-iterations", "1"]) == 3
    assert "solver limit" in capsys.readouterr().err


def test_cli_bad_priority_label(table_path, capsys):
    assert main(["report", "--input", table_path, "--priority", "out:wrong,in:input"]) == 2
