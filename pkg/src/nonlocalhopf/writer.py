"""
Output writer module.

Every file a command produces goes through one ReportWriter: JSON reports with
deterministic formatting, result tables, streamed trajectory CSVs and gnuplot
scripts.
"""

import csv
import json
import logging
import math
from enum import Enum
from pathlib import Path
from types import TracebackType
from typing import Any, List, Optional, TextIO, Type, Union

import numpy as np

from nonlocalhopf.dataframe import ResultTable, format_value
from nonlocalhopf.simulator import SimState

logger = logging.getLogger(__name__)

INDENT = "  "


def _emit(value: Any, depth: int) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return "%.17g" % number if math.isfinite(number) else "null"
    if isinstance(value, Enum):
        return _emit(value.value, depth)
    if isinstance(value, (str, Path)):
        return json.dumps(str(value), ensure_ascii=False)
    if isinstance(value, np.ndarray):
        return _emit(value.tolist(), depth)
    pad, inner = INDENT * depth, INDENT * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(key), ensure_ascii=False)}: {_emit(value[key], depth + 1)}"
            for key in sorted(value, key=str)
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_emit(item, depth + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"Object of type {type(value).__name__} is not serializable")


def dumps(obj: Any) -> str:
    """
    Serialize to deterministic JSON.

    Keys are sorted, indentation is two spaces, floats carry 17 significant digits
    and non-finite floats become null.
    """
    return _emit(obj, 0) + "\n"


def loads(text: str) -> Any:
    """Parse JSON produced by dumps."""
    return json.loads(text)


def gnuplot_script(csv_name: str, ell: float, title: str) -> str:
    """
    Build a gnuplot script drawing space-time surfaces of u and v.

    Args:
        csv_name: Trajectory CSV with columns t, x, u, v.
        ell: Spatial scale; the x range is [0, ell pi].
        title: Plot title.

    Returns:
        The script text.
    """
    return "\n".join(
        [
            f"# Space-time surfaces of {csv_name}",
            'set datafile separator ","',
            "set terminal pngcairo size 1200,500",
            f"set output '{Path(csv_name).stem}.png'",
            "set multiplot layout 1,2 title " + json.dumps(title),
            "set dgrid3d 80,80 qnorm 2",
            "set hidden3d",
            f"set xrange [0:{ell * math.pi:.17g}]",
            'set xlabel "x"',
            'set ylabel "t"',
            'set zlabel "u"',
            f"splot '{csv_name}' every ::1 using 2:1:3 with lines title 'u'",
            'set zlabel "v"',
            f"splot '{csv_name}' every ::1 using 2:1:4 with lines title 'v'",
            "unset multiplot",
            "",
        ]
    )


class TrajectoryWriter:
    """
    Streams sampled states into a CSV with columns t, x, u, v.

    Attributes:
        path: Destination file.
        x: Cell centers written with every sample.
        rows_written: Data rows written so far.
    """

    def __init__(self, path: Path, x: np.ndarray) -> None:
        """
        Initialize the TrajectoryWriter and write the header row.

        Args:
            path: Destination file.
            x: Cell centers of the grid.
        """
        self.path = path
        self.x = x
        self.rows_written = 0
        self._handle: TextIO = path.open("w", encoding="utf-8", newline="")
        self._csv = csv.writer(self._handle, lineterminator="\n")
        self._csv.writerow(["t", "x", "u", "v"])

    def write(self, state: SimState) -> None:
        """Append one sampled state; the file is flushed after every sample."""
        t = format_value(float(state.t))
        self._csv.writerows(
            [t, format_value(float(x)), format_value(float(u)), format_value(float(v))]
            for x, u, v in zip(self.x, state.u, state.v)
        )
        self.rows_written += len(self.x)
        self._handle.flush()

    def close(self) -> None:
        """Close the file."""
        if not self._handle.closed:
            self._handle.close()
            logger.debug(f"Wrote {self.rows_written} trajectory rows to {self.path}")

    def __enter__(self) -> "TrajectoryWriter":
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        self.close()


class ReportWriter:
    """
    Single funnel for the files of one command.

    Attributes:
        out_dir: Directory receiving the files.
        files: Names of the files written, in order.
    """

    def __init__(self, out_dir: Union[str, Path]) -> None:
        """
        Initialize the ReportWriter and create the output directory.

        Args:
            out_dir: Output directory.
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: List[str] = []

    def _target(self, name: str) -> Path:
        self.files.append(name)
        return self.out_dir / name

    def write_json(self, name: str, obj: Any) -> Path:
        """Write an object with deterministic JSON formatting."""
        path = self._target(name)
        path.write_text(dumps(obj), encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    def write_table(self, name: str, table: ResultTable) -> Path:
        """Write a result table as CSV."""
        path = table.write_csv(self._target(name))
        logger.info(f"Wrote {path} ({len(table)} rows)")
        return path

    def write_text(self, name: str, text: str) -> Path:
        """Write a text file such as a plot script."""
        path = self._target(name)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    def open_trajectory(self, name: str, x: np.ndarray) -> TrajectoryWriter:
        """Open a streamed trajectory CSV."""
        return TrajectoryWriter(self._target(name), x)
