"""
Unit tests for the analyze, hopf, normalform, simulate and sweep commands.
"""

import csv
import tempfile
from pathlib import Path

import pytest

from nonlocalhopf.commands import (
    COMMANDS,
    THREADS_ENV,
    NoHopfPointsError,
    ParameterSweep,
    ReportDocument,
    _sweep_row,
    _worker_count,
    cmd_analyze,
    cmd_hopf,
    cmd_normalform,
    cmd_simulate,
    cmd_sweep,
)
from nonlocalhopf.dataframe import ResultTable
from nonlocalhopf.model import ModelParams, ParameterError
from nonlocalhopf.parser import build_run_config
from nonlocalhopf.simulator import BlowUpError
from nonlocalhopf.validator import ValidationError
from nonlocalhopf.writer import loads

EXAMPLE_PARAMS = {"d1": 0.8, "d2": 1.0, "beta": 1.5, "b": 1.2, "c": 0.1, "ell": 10.0}


def make_config(temp_dir, command, **sections):
    document = {
        "command": command,
        "params": dict(EXAMPLE_PARAMS, **sections.pop("params", {})),
        "output": {"dir": str(temp_dir), "prefix": "t"},
        **sections,
    }
    return build_run_config(document)


def read_report(temp_dir):
    return loads((Path(temp_dir) / "t_report.json").read_text(encoding="utf-8"))


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


class TestAnalyze:
    """Test cases for cmd_analyze."""

    def test_outputs(self):
        """Test the regime report and the stability map."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(temp_dir, "analyze", analysis={"n_lambda": 21})
            report = cmd_analyze(config)
            data = read_report(temp_dir)
            rows = read_rows(Path(temp_dir) / "t_stability_map.csv")
        assert report.files == ["t_stability_map.csv", "t_report.json"]
        assert data["regime"]["case"] == "strong-competition-mode1"
        assert len(data["hopf_points"]) == 2
        assert data["local_model"]["has_mode1_instability"] is False
        assert data["tool"] == "nonlocalhopf"
        assert len(rows) == 21
        assert list(rows[0]) == [
            "lambda",
            "b",
            "stable",
            "failing_mode",
            "reason",
            "stable_local",
        ]
        assert {row["stable"] for row in rows} == {"true", "false"}
        assert all(row["stable_local"] == "true" for row in rows)

    def test_without_local_model(self):
        """Test the local-model contrast can be switched off."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(
                temp_dir, "analyze", analysis={"n_lambda": 5, "include_local": False}
            )
            cmd_analyze(config)
            assert read_report(temp_dir)["local_model"] is None


class TestHopf:
    """Test cases for cmd_hopf."""

    def test_points(self):
        """Test the report lists both mode-1 points in order."""
        with tempfile.TemporaryDirectory() as temp_dir:
            report = cmd_hopf(make_config(temp_dir, "hopf"))
            data = read_report(temp_dir)
        assert report.files == ["t_report.json"]
        lambdas = [point["lambda"] for point in data["hopf_points"]]
        assert lambdas == pytest.approx([0.205856, 0.382144], abs=1e-5)
        assert [point["branch"] for point in data["hopf_points"]] == ["minus", "plus"]


class TestNormalForm:
    """Test cases for cmd_normalform."""

    def test_normal_forms_and_limits(self):
        """Test one normal form and one limit per branch."""
        with tempfile.TemporaryDirectory() as temp_dir:
            cmd_normalform(make_config(temp_dir, "normalform"))
            data = read_report(temp_dir)
        assert [entry["branch"] for entry in data["normal_forms"]] == ["minus", "plus"]
        assert [entry["orbit_stability"] for entry in data["normal_forms"]] == [
            "unstable",
            "stable",
        ]
        assert data["limits"][1]["lambda_inf"] == pytest.approx(0.4528, abs=1e-3)

    def test_quadrature_check(self):
        """Test the optional quadrature cross-check."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(
                temp_dir,
                "normalform",
                analysis={"verify_quadrature": True, "include_limits": False},
            )
            cmd_normalform(config)
            data = read_report(temp_dir)
        assert data["limits"] == []
        for entry in data["normal_forms"]:
            assert entry["quadrature"]["relative_g21_error"] <= 1e-8

    def test_no_points(self):
        """Test the error when ell is below the mode-1 threshold."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(temp_dir, "normalform", params={"ell": 5.0})
            with pytest.raises(NoHopfPointsError, match="No mode-1 Hopf points"):
                cmd_normalform(config)
            assert not (Path(temp_dir) / "t_report.json").exists()

    def test_nonpositive_determinant_is_rejected(self):
        """Test d1/d2 below p1(lambda1) fails before any normal form is attempted."""
        params = {"d1": 0.01, "d2": 1.0, "beta": 1.5, "b": 1.0, "c": 0.01, "ell": 3.2}
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(temp_dir, "normalform", params=params)
            with pytest.raises(ParameterError, match="every mode determinant positive"):
                cmd_normalform(config)
            assert not (Path(temp_dir) / "t_report.json").exists()


class TestSimulate:
    """Test cases for cmd_simulate."""

    def test_outputs(self):
        """Test the trajectory, diagnostics, plot script and report."""
        sim = {"n_cells": 32, "dt": 0.1, "t_end": 2.0, "sample_every": 5}
        with tempfile.TemporaryDirectory() as temp_dir:
            report = cmd_simulate(make_config(temp_dir, "simulate", sim=sim))
            data = read_report(temp_dir)
            rows = read_rows(Path(temp_dir) / "t_trajectory.csv")
            script = (Path(temp_dir) / "t_surface.gp").read_text(encoding="utf-8")
        assert report.files == [
            "t_surface.gp",
            "t_trajectory.csv",
            "t_diagnostics.json",
            "t_report.json",
        ]
        assert data["simulation"]["status"] == "completed"
        assert data["simulation"]["samples"] == 5
        assert len(rows) == 5 * 32
        assert list(rows[0]) == ["t", "x", "u", "v"]
        assert "t_trajectory.csv" in script

    def test_dimensional_summary(self):
        """Test dimensional results when the run starts from raw rates."""
        raw = {"a": 2, "b": 4, "c": 0.2, "e": 1, "k": 10, "m": 15, "d1": 1.6, "d2": 2}
        raw["domain_length"] = 10
        document = {
            "command": "simulate",
            "raw_params": raw,
            "sim": {"n_cells": 32, "dt": 0.1, "t_end": 1.0},
        }
        with tempfile.TemporaryDirectory() as temp_dir:
            document["output"] = {"dir": temp_dir, "prefix": "t"}
            cmd_simulate(build_run_config(document))
            data = read_report(temp_dir)
        summary = data["simulation"]
        assert summary["final_state_dimensional"]["t"] == pytest.approx(0.5)
        assert data["inputs"]["raw_params"]["m"] == 15

    def test_blow_up_report(self):
        """Test a blow-up writes a failure report before raising."""
        sim = {
            "n_cells": 32,
            "dt": 0.01,
            "t_end": 1.0,
            "ic": {"kind": "custom", "u_expr": "1e-6", "v_expr": "1"},
        }
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(temp_dir, "simulate", params={"b": 1000.0}, sim=sim)
            with pytest.raises(BlowUpError):
                cmd_simulate(config)
            data = read_report(temp_dir)
            rows = read_rows(Path(temp_dir) / "t_trajectory.csv")
        assert data["simulation"]["status"] == "blow-up"
        assert data["simulation"]["step"] == 1
        assert data["simulation"]["last_state"]["t"] == 0.0
        assert len(rows) == 32


class TestSweep:
    """Test cases for cmd_sweep."""

    def test_rows_in_order(self, monkeypatch):
        """Test one row per value, in sweep order."""
        monkeypatch.setenv(THREADS_ENV, "2")
        sweep = {"axis": "ell", "values": [20.0, 5.0, 10.0]}
        with tempfile.TemporaryDirectory() as temp_dir:
            cmd_sweep(make_config(temp_dir, "sweep", sweep=sweep))
            rows = read_rows(Path(temp_dir) / "t_sweep.csv")
            data = read_report(temp_dir)
        assert [float(row["value"]) for row in rows] == [20.0, 5.0, 10.0]
        assert all(row["axis"] == "ell" for row in rows)
        assert rows[1]["lambda_plus"] == ""
        assert float(rows[2]["lambda_plus"]) == pytest.approx(0.382144, abs=1e-5)
        assert all(row["error"] == "" for row in rows)
        assert data["files"] == ["t_sweep.csv", "t_report.json"]

    def test_failed_point_is_recorded(self):
        """Test a failing point becomes an error row."""
        params = ModelParams(**EXAMPLE_PARAMS)
        row = _sweep_row(params, "c", -1.0)
        assert row["error"].startswith("ParameterError")
        assert row["value"] == -1.0

    def test_worker_count(self, monkeypatch):
        """Test the thread cap from the environment."""
        monkeypatch.setenv(THREADS_ENV, "3")
        assert _worker_count() == 3
        monkeypatch.setenv(THREADS_ENV, "0")
        assert _worker_count() == 1
        monkeypatch.setenv(THREADS_ENV, "many")
        assert _worker_count() >= 1

    def test_without_sweep_section(self):
        """Test the sweep command needs a sweep section."""
        with tempfile.TemporaryDirectory() as temp_dir:
            with pytest.raises(ValidationError, match="needs a sweep section"):
                cmd_sweep(make_config(temp_dir, "sweep"))

    def test_b_sweep_flips_at_b_plus(self):
        """Test the verdict across b_plus: stable below it, unstable above it."""
        sweep = {"axis": "b", "values": [1.4, 1.5, 1.6, 1.7]}
        with tempfile.TemporaryDirectory() as temp_dir:
            cmd_sweep(make_config(temp_dir, "sweep", sweep=sweep))
            rows = read_rows(Path(temp_dir) / "t_sweep.csv")
        b_plus = float(rows[0]["b_plus"])
        assert b_plus == pytest.approx(1.5436, abs=1e-3)
        assert {float(row["b_plus"]) for row in rows} == {b_plus}
        for row in rows:
            expected = "true" if float(row["value"]) < b_plus else "false"
            assert row["stable"] == expected
            assert row["failing_mode"] == ("" if expected == "true" else "1")
        assert [row["stable"] for row in rows] == ["true", "true", "false", "false"]


class TestParameterSweep:
    """Test cases for ParameterSweep."""

    def test_table(self):
        """Test the table has one row per value with the sweep columns."""
        sweep = ParameterSweep(ModelParams(**EXAMPLE_PARAMS), "ell", n_jobs=2)
        table = sweep.table([5.0, 10.0])
        assert isinstance(table, ResultTable)
        assert [row["value"] for row in table.rows] == [5.0, 10.0]
        assert table.rows[0].get("lambda_plus") is None
        assert table.rows[1]["lambda_plus"] == pytest.approx(0.382144, abs=1e-5)

    def test_unknown_axis(self):
        """Test an axis that is not a model parameter."""
        with pytest.raises(ValueError, match="Unknown sweep axis"):
            ParameterSweep(ModelParams(**EXAMPLE_PARAMS), "d1")

    def test_frame_pandas(self):
        """Test the sweep as a pandas DataFrame."""
        pytest.importorskip("pandas")
        sweep = ParameterSweep(ModelParams(**EXAMPLE_PARAMS), "b", dataframe_library="pandas")
        frame = sweep.frame([1.4, 1.7])
        assert list(frame.columns) == sweep.table([1.4]).columns
        assert frame["stable"].tolist() == [True, False]

    def test_frame_polars(self):
        """Test the sweep as a polars DataFrame."""
        pytest.importorskip("polars")
        sweep = ParameterSweep(ModelParams(**EXAMPLE_PARAMS), "b", dataframe_library="polars")
        frame = sweep.frame([1.4, 1.7])
        assert frame.height == 2
        assert frame["stable"].to_list() == [True, False]


class TestDeterminism:
    """Repeated runs of one configuration write identical bytes."""

    @pytest.mark.parametrize(
        "command,sections",
        [
            ("normalform", {"analysis": {"verify_quadrature": True}}),
            ("simulate", {"sim": {"n_cells": 32, "dt": 0.1, "t_end": 5.0, "sample_every": 10}}),
            ("sweep", {"sweep": {"axis": "ell", "values": [5.0, 10.0, 20.0]}}),
        ],
    )
    def test_report_bytes(self, command, sections):
        """Test the report is byte-identical across two runs."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = make_config(temp_dir, command, **sections)
            outputs = []
            for _ in range(2):
                COMMANDS[command](config)
                outputs.append(
                    {path.name: path.read_bytes() for path in sorted(Path(temp_dir).iterdir())}
                )
        assert outputs[0] == outputs[1]
        assert "t_report.json" in outputs[0]


class TestReportDocument:
    """Test cases for ReportDocument."""

    def test_round_trip(self):
        """Test rebuilding a report from its dictionary."""
        report = ReportDocument(command="hopf", seed=4, files=["a.json"])
        assert ReportDocument.from_dict(report.to_dict()) == report

    def test_command_table(self):
        """Test every command is registered."""
        assert sorted(COMMANDS) == ["analyze", "hopf", "normalform", "simulate", "sweep"]
