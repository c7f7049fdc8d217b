"""
Result tables and DataFrame library detection.

Tables are kept as ordered rows of plain values so that CSV output does not
depend on any DataFrame library; pandas or polars are used only when a table is
materialised as a DataFrame.
"""

import csv
import importlib
import math
from enum import Enum
from pathlib import Path
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    List,
    Optional,
    Protocol,
    Sequence,
    Union,
    runtime_checkable,
)


class DataFrameLibrary(Enum):
    """Enum for supported DataFrame libraries."""

    PANDAS = "pandas"
    POLARS = "polars"


@runtime_checkable
class DataFrameLike(Protocol):
    """Protocol for DataFrame-like objects."""

    def __len__(self) -> int: ...

    def __getitem__(self, key: Any) -> Any: ...


class DataFrameLibraryDetector:
    """
    Detects which DataFrame libraries are installed.

    Polars is preferred over pandas when both are available.
    """

    def __init__(self) -> None:
        """Initialize the detector and scan for available libraries."""
        self._constructors: Dict[DataFrameLibrary, Callable[..., DataFrameLike]] = {}
        self._detect_libraries()

    def _detect_libraries(self) -> None:
        """Detect which DataFrame libraries are available."""
        for library in DataFrameLibrary:
            try:
                module = importlib.import_module(library.value)
            except ImportError:
                continue
            self._constructors[library] = module.DataFrame

    def is_available(self, library: DataFrameLibrary) -> bool:
        """
        Check if a DataFrame library is available.

        Args:
            library: The DataFrame library to check.

        Returns:
            True if the library is available, False otherwise.
        """
        return library in self._constructors

    def get_available_libraries(self) -> List[DataFrameLibrary]:
        """Return the available DataFrame libraries."""
        return list(self._constructors.keys())

    def get_preferred_library(self) -> Optional[DataFrameLibrary]:
        """
        Get the preferred library.

        Priority order: Polars > Pandas

        Returns:
            The preferred DataFrame library, or None if none are available.
        """
        for library in (DataFrameLibrary.POLARS, DataFrameLibrary.PANDAS):
            if self.is_available(library):
                return library
        return None

    def get_constructor(self, library: DataFrameLibrary) -> Callable[..., DataFrameLike]:
        """
        Get the DataFrame constructor for the specified library.

        Raises:
            ImportError: If the library is not available.
        """
        if not self.is_available(library):
            raise ImportError(f"{library.value} is not available")
        return self._constructors[library]


_detector = DataFrameLibraryDetector()


def get_detector() -> DataFrameLibraryDetector:
    """
    Get the global DataFrameLibraryDetector instance.

    Returns:
        The global detector instance.
    """
    return _detector


def format_value(value: Any) -> str:
    """Format a cell for CSV: floats with 17 significant digits, NaN and None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return "%.17g" % value
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


class ResultTable:
    """
    An ordered table of result rows.

    Attributes:
        columns: Column names in output order.
        rows: Row dictionaries; missing keys are written as empty cells.
    """

    def __init__(
        self, columns: Sequence[str], rows: Optional[Iterable[Dict[str, Any]]] = None
    ) -> None:
        """
        Initialize the ResultTable.

        Args:
            columns: Column names in output order.
            rows: Initial rows.
        """
        self.columns = list(columns)
        self.rows: List[Dict[str, Any]] = []
        for row in rows or ():
            self.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def append(self, row: Dict[str, Any]) -> None:
        """
        Append a row.

        Raises:
            KeyError: If the row has a key that is not a column.
        """
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"Unknown columns: {', '.join(sorted(unknown))}")
        self.rows.append(dict(row))

    def write_csv(self, path: Union[str, Path]) -> Path:
        """
        Write the table as UTF-8 CSV with a header row.

        Args:
            path: Destination file.

        Returns:
            The written path.
        """
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([format_value(row.get(column)) for column in self.columns])
        return path

    def to_dataframe(self, library: Optional[Union[str, DataFrameLibrary]] = None) -> DataFrameLike:
        """
        Materialise the table as a DataFrame.

        Args:
            library: 'pandas', 'polars' or None for the preferred available library.

        Returns:
            DataFrame instance from the selected library.

        Raises:
            ImportError: If no supported DataFrame library is found.
        """
        if library is None:
            selected = _detector.get_preferred_library()
            if selected is None:
                raise ImportError("No supported DataFrame library found")
        else:
            selected = DataFrameLibrary(library)
        constructor = _detector.get_constructor(selected)
        data = {column: [row.get(column) for row in self.rows] for column in self.columns}
        return constructor(data)
