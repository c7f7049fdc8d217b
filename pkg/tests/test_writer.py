"""
Unit tests for deterministic JSON output and the ReportWriter class.
"""

import math
import tempfile
from pathlib import Path

import numpy as np
import pytest

from nonlocalhopf.dataframe import ResultTable
from nonlocalhopf.hopf import Branch
from nonlocalhopf.simulator import SimState
from nonlocalhopf.writer import ReportWriter, TrajectoryWriter, dumps, gnuplot_script, loads


class TestDumps:
    """Test cases for dumps and loads."""

    def test_layout(self):
        """Test sorted keys, two-space indentation and a trailing newline."""
        text = dumps({"b": 1, "a": [1.5, None]})
        assert text == '{\n  "a": [\n    1.5,\n    null\n  ],\n  "b": 1\n}\n'

    def test_full_precision(self):
        """Test floats keep 17 significant digits."""
        assert dumps(0.1) == "0.10000000000000001\n"
        assert loads(dumps(0.1)) == 0.1

    def test_non_finite_become_null(self):
        """Test NaN and infinities are written as null."""
        assert loads(dumps([math.nan, math.inf, -math.inf])) == [None, None, None]

    def test_special_types(self):
        """Test enums, numpy values, paths and tuples."""
        value = {
            "branch": Branch.PLUS,
            "flag": np.bool_(True),
            "n": np.int64(4),
            "x": np.float64(0.25),
            "grid": np.array([1.0, 2.0]),
            "path": Path("out") / "a.csv",
            "pair": (1, 2),
        }
        result = loads(dumps(value))
        assert result == {
            "branch": "plus",
            "flag": True,
            "n": 4,
            "x": 0.25,
            "grid": [1.0, 2.0],
            "path": str(Path("out") / "a.csv"),
            "pair": [1, 2],
        }

    def test_empty_containers(self):
        """Test empty objects and arrays stay on one line."""
        assert dumps({"a": {}, "b": []}) == '{\n  "a": {},\n  "b": []\n}\n'

    def test_deterministic(self):
        """Test insertion order does not change the output."""
        assert dumps({"x": 1, "y": 2}) == dumps({"y": 2, "x": 1})

    def test_unsupported_type(self):
        """Test an unsupported object raises TypeError."""
        with pytest.raises(TypeError, match="not serializable"):
            dumps({"a": object()})


class TestGnuplotScript:
    """Test cases for gnuplot_script."""

    def test_script(self):
        """Test the script reads the trajectory and spans the domain."""
        script = gnuplot_script("run_trajectory.csv", 10.0, "b=1.2")
        assert "set output 'run_trajectory.png'" in script
        assert "using 2:1:3" in script
        assert "using 2:1:4" in script
        assert f"set xrange [0:{10.0 * math.pi:.17g}]" in script
        assert script.endswith("\n")


class TestReportWriter:
    """Test cases for ReportWriter and TrajectoryWriter."""

    def test_creates_directory_and_tracks_files(self):
        """Test the output directory is created and file names are recorded."""
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "nested" / "out"
            writer = ReportWriter(out)
            writer.write_json("report.json", {"ok": True})
            writer.write_table("table.csv", ResultTable(["a"], [{"a": 1}]))
            writer.write_text("plot.gp", "plot x\n")
            assert writer.files == ["report.json", "table.csv", "plot.gp"]
            assert loads((out / "report.json").read_text(encoding="utf-8")) == {"ok": True}
            assert (out / "table.csv").read_text(encoding="utf-8") == "a\n1\n"

    def test_trajectory_rows(self):
        """Test each sample writes one row per cell."""
        x = np.array([0.5, 1.5, 2.5])
        with tempfile.TemporaryDirectory() as temp_dir:
            writer = ReportWriter(temp_dir)
            with writer.open_trajectory("traj.csv", x) as trajectory:
                for t in (0.0, 1.0):
                    trajectory.write(SimState(t=t, u=np.full(3, 0.4), v=np.full(3, 0.6)))
                assert isinstance(trajectory, TrajectoryWriter)
            lines = (Path(temp_dir) / "traj.csv").read_text(encoding="utf-8").splitlines()
            assert trajectory.rows_written == 6
        assert lines[0] == "t,x,u,v"
        assert len(lines) == 7
        assert lines[1] == "0,0.5,0.40000000000000002,0.59999999999999998"

    def test_close_is_idempotent(self):
        """Test closing a trajectory twice."""
        with tempfile.TemporaryDirectory() as temp_dir:
            trajectory = TrajectoryWriter(Path(temp_dir) / "t.csv", np.array([1.0]))
            trajectory.close()
            trajectory.close()
