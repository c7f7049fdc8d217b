"""
The five commands of the command-line tool.

Each command takes a validated RunConfig, computes its results, writes them
through a single ReportWriter and returns the ReportDocument it wrote.
"""

import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from nonlocalhopf import __version__
from nonlocalhopf.dataframe import DataFrameLibrary, DataFrameLike, ResultTable, get_detector
from nonlocalhopf.hopf import determinant_threshold, local_hopf_points, regime_classify
from nonlocalhopf.model import ModelParams, ParameterError, b_from_lambda, equilibrium_from_b
from nonlocalhopf.normal_form import (
    DegenerateHopfError,
    hopf_branch_curve,
    limits_infinity,
    mode1_points,
    normal_form,
)
from nonlocalhopf.parser import RunConfig
from nonlocalhopf.quadrature import quadrature_g_coefficients
from nonlocalhopf.simulator import BlowUpError, SimState, cell_centers, run, to_dimensional
from nonlocalhopf.stability import LinearStability, Model
from nonlocalhopf.validator import ValidationError
from nonlocalhopf.writer import ReportWriter, gnuplot_script

logger = logging.getLogger(__name__)

THREADS_ENV = "NONLOCAL_HOPF_THREADS"

STABILITY_MAP_COLUMNS = ["lambda", "b", "stable", "failing_mode", "reason", "stable_local"]

SWEEP_AXES = ("b", "ell", "beta", "c")

SWEEP_COLUMNS = [
    "axis",
    "value",
    "case",
    "lambda",
    "stable",
    "failing_mode",
    "lambda_minus",
    "lambda_plus",
    "b_minus",
    "b_plus",
    "re_g21_minus",
    "re_g21_plus",
    "error",
]


class NoHopfPointsError(LookupError):
    """Exception raised when no mode-1 Hopf point exists for the given parameters."""

    pass


@dataclass
class ReportDocument:
    """
    The JSON report of one command.

    Attributes:
        tool: Tool name.
        version: Tool version.
        command: Command that produced the report.
        seed: Seed echoed from the configuration.
        inputs: The validated configuration and the resolved parameters.
        regime: Regime report, when computed.
        hopf_points: Primary Hopf points with b-equivalents.
        normal_forms: One normal form per mode-1 point.
        limits: Large-ell limits per branch.
        local_model: Hopf points of the local model, for contrast.
        simulation: Simulation diagnostics.
        stability_map: Name of the stability-map CSV.
        files: Names of every file written.
    """

    command: str
    seed: int = 0
    inputs: Dict[str, Any] = field(default_factory=dict)
    regime: Optional[Dict[str, Any]] = None
    hopf_points: List[Dict[str, Any]] = field(default_factory=list)
    normal_forms: List[Dict[str, Any]] = field(default_factory=list)
    limits: List[Dict[str, Any]] = field(default_factory=list)
    local_model: Optional[Dict[str, Any]] = None
    simulation: Optional[Dict[str, Any]] = None
    stability_map: Optional[str] = None
    files: List[str] = field(default_factory=list)
    tool: str = "nonlocalhopf"
    version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        """Return the report as plain values."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportDocument":
        """Rebuild a report from its dictionary form."""
        return cls(**data)


def _inputs(config: RunConfig) -> Dict[str, Any]:
    inputs: Dict[str, Any] = {"config": config.document, "params": config.params.to_dict()}
    if config.raw_params is not None:
        inputs["raw_params"] = asdict(config.raw_params)
    return inputs


def _finish(report: ReportDocument, writer: ReportWriter, prefix: str) -> ReportDocument:
    name = f"{prefix}_report.json"
    report.files = list(writer.files) + [name]
    writer.write_json(name, report.to_dict())
    return report


def _stability_map(params: ModelParams, n_lambda: int) -> ResultTable:
    nonlocal_analysis = LinearStability(params)
    local_analysis = LinearStability(params, Model.LOCAL)
    upper = 1.0 / params.beta
    table = ResultTable(STABILITY_MAP_COLUMNS)
    for lam in upper * np.arange(1, n_lambda + 1) / (n_lambda + 1):
        lam = float(lam)
        verdict = nonlocal_analysis.classify_equilibrium(lam)
        reason = verdict.failing_modes[0][1].value if verdict.failing_modes else None
        table.append(
            {
                "lambda": lam,
                "b": b_from_lambda(params.beta, lam),
                "stable": verdict.stable,
                "failing_mode": verdict.first_failing_mode,
                "reason": reason,
                "stable_local": local_analysis.classify_equilibrium(lam).stable,
            }
        )
    return table


def cmd_analyze(config: RunConfig) -> ReportDocument:
    """
    Classify the regime and map stability over a lambda grid.

    Writes <prefix>_stability_map.csv and <prefix>_report.json.
    """
    params = config.params
    writer = ReportWriter(config.output_dir)
    regime = regime_classify(params)
    report = ReportDocument(
        command="analyze",
        seed=config.seed,
        inputs=_inputs(config),
        regime=regime.to_dict(),
        hopf_points=[point.to_dict() for point in regime.hopf_points],
    )
    if config.analysis.include_local:
        local = local_hopf_points(params)
        report.local_model = {
            "hopf_points": [point.to_dict() for point in local],
            "has_mode1_instability": any(point.mode == 1 for point in local),
        }
    map_name = f"{config.prefix}_stability_map.csv"
    writer.write_table(map_name, _stability_map(params, config.analysis.n_lambda))
    report.stability_map = map_name
    return _finish(report, writer, config.prefix)


def cmd_hopf(config: RunConfig) -> ReportDocument:
    """Report the regime and every Hopf point, without normal forms."""
    writer = ReportWriter(config.output_dir)
    regime = regime_classify(config.params)
    report = ReportDocument(
        command="hopf",
        seed=config.seed,
        inputs=_inputs(config),
        regime=regime.to_dict(),
        hopf_points=[point.to_dict() for point in regime.hopf_points],
    )
    return _finish(report, writer, config.prefix)


def cmd_normalform(config: RunConfig) -> ReportDocument:
    """
    Normal forms at both mode-1 Hopf points plus their large-ell limits.

    Raises:
        ParameterError: If d1/d2 <= p1(lambda1), where determinants may vanish.
        NoHopfPointsError: If no mode-1 Hopf point exists.
    """
    params = config.params
    threshold = determinant_threshold(params)
    if params.d1 / params.d2 <= threshold:
        raise ParameterError(
            f"d1/d2={params.d1 / params.d2!r} <= p1(lambda1)={threshold!r}; "
            "normal forms need every mode determinant positive"
        )
    points = mode1_points(params)
    if not points:
        raise NoHopfPointsError(
            f"No mode-1 Hopf points for ell={params.ell!r}, beta={params.beta!r}, c={params.c!r}"
        )
    writer = ReportWriter(config.output_dir)
    report = ReportDocument(
        command="normalform",
        seed=config.seed,
        inputs=_inputs(config),
        hopf_points=[point.to_dict() for point in points],
    )
    for point in points:
        entry = normal_form(point, params).to_dict()
        if config.analysis.verify_quadrature:
            check = quadrature_g_coefficients(point, params)
            entry["quadrature"] = check.to_dict()
            entry["quadrature"]["relative_g21_error"] = check.relative_g21_error(
                complex(*entry["g21"])
            )
        report.normal_forms.append(entry)
    if config.analysis.include_limits:
        report.limits = [
            limits_infinity(params.beta, params.c, point.branch).to_dict() for point in points
        ]
    return _finish(report, writer, config.prefix)


def _state_summary(state: SimState) -> Dict[str, float]:
    return {
        "t": float(state.t),
        "u_mean": float(np.mean(state.u)),
        "v_mean": float(np.mean(state.v)),
        "u_min": float(np.min(state.u)),
        "u_max": float(np.max(state.u)),
    }


def cmd_simulate(config: RunConfig) -> ReportDocument:
    """
    Run the simulator and write trajectory, diagnostics and a plot script.

    Raises:
        BlowUpError: After the partial trajectory and a failure report are written.
    """
    params = config.params
    writer = ReportWriter(config.output_dir)
    trajectory_name = f"{config.prefix}_trajectory.csv"
    writer.write_text(
        f"{config.prefix}_surface.gp",
        gnuplot_script(trajectory_name, params.ell, f"{config.prefix}: b={params.b:g}"),
    )
    report = ReportDocument(command="simulate", seed=config.seed, inputs=_inputs(config))
    x = cell_centers(config.sim.n_cells, params.ell)
    config.sim.check_stability(params)

    with writer.open_trajectory(trajectory_name, x) as trajectory:
        try:
            samples, diagnostics = run(params, config.sim, config.ic, on_sample=trajectory.write)
        except BlowUpError as e:
            report.simulation = {
                "status": "blow-up",
                "time": e.time,
                "step": e.step,
                "u_min": e.u_min,
                "last_state": _state_summary(e.last_state),
            }
            trajectory.close()
            _finish(report, writer, config.prefix)
            raise

    simulation: Dict[str, Any] = {
        "status": "completed",
        "equilibrium": equilibrium_from_b(params).lam,
        "diagnostics": diagnostics.to_dict(),
        "final_state": _state_summary(samples[-1]),
        "samples": len(samples),
    }
    if config.raw_params is not None:
        simulation["final_state_dimensional"] = _state_summary(
            to_dimensional(samples[-1], config.raw_params)
        )
        if diagnostics.period is not None:
            simulation["period_dimensional"] = diagnostics.period / config.raw_params.a
    report.simulation = simulation
    writer.write_json(f"{config.prefix}_diagnostics.json", diagnostics.to_dict())
    return _finish(report, writer, config.prefix)


def _worker_count() -> int:
    limit = os.environ.get(THREADS_ENV)
    if limit:
        try:
            return max(1, int(limit))
        except ValueError:
            logger.warning(f"Ignoring {THREADS_ENV}={limit!r}; not an integer")
    return os.cpu_count() or 1


def _sweep_row(params: ModelParams, axis: str, value: float) -> Dict[str, Any]:
    """Evaluate one sweep point; failures are recorded in the row."""
    row: Dict[str, Any] = {"axis": axis, "value": value}
    logger.debug(f"Sweep point {axis}={value!r} started")
    try:
        varied = params.with_changes(**{axis: value})
        regime = regime_classify(varied)
        lam = equilibrium_from_b(varied).lam
        verdict = LinearStability(varied).classify_equilibrium(lam)
        row.update(
            case=regime.case.value,
            stable=verdict.stable,
            failing_mode=verdict.first_failing_mode,
        )
        row["lambda"] = lam
        curve = hopf_branch_curve(varied, [varied.ell])[0]
        row.update({key: curve[key] for key in SWEEP_COLUMNS if key in curve})
    except (ParameterError, DegenerateHopfError, ArithmeticError, ValueError) as e:
        row["error"] = f"{type(e).__name__}: {e}"
        logger.warning(f"Sweep point {axis}={value!r} failed: {e}")
    logger.debug(f"Sweep point {axis}={value!r} finished")
    return row


class ParameterSweep:
    """
    Evaluates regime, stability and the mode-1 Hopf branches along one parameter axis.

    Points run on joblib threads; rows come back in sweep order. Results are a
    ResultTable, or a DataFrame from the preferred (or requested) library.
    """

    def __init__(
        self,
        params: ModelParams,
        axis: str,
        n_jobs: Optional[int] = None,
        dataframe_library: Optional[Union[str, DataFrameLibrary]] = None,
    ) -> None:
        """
        Initialize the ParameterSweep.

        Args:
            params: Base parameters; the axis field is replaced by each value.
            axis: One of b, ell, beta or c.
            n_jobs: Worker threads; defaults to the NONLOCAL_HOPF_THREADS cap.
            dataframe_library: Library for frame(); None selects the preferred one.
        """
        if axis not in SWEEP_AXES:
            raise ValueError(f"Unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
        self.params = params
        self.axis = axis
        self.n_jobs = n_jobs
        if dataframe_library is None:
            self.preferred_library = get_detector().get_preferred_library()
        else:
            self.preferred_library = DataFrameLibrary(dataframe_library)

    def table(self, values: Sequence[float]) -> ResultTable:
        """Evaluate every value and return the rows as a table."""
        workers = max(1, min(self.n_jobs or _worker_count(), len(values)))
        logger.info(f"Sweeping {self.axis} over {len(values)} points with {workers} workers")
        rows = Parallel(n_jobs=workers, prefer="threads")(
            delayed(_sweep_row)(self.params, self.axis, value) for value in values
        )
        return ResultTable(SWEEP_COLUMNS, rows)

    def frame(self, values: Sequence[float]) -> DataFrameLike:
        """
        Evaluate every value and return the rows as a DataFrame.

        Raises:
            ImportError: If no supported DataFrame library is installed.
        """
        return self.table(values).to_dataframe(self.preferred_library)


def cmd_sweep(config: RunConfig) -> ReportDocument:
    """
    Sweep one parameter axis and write <prefix>_sweep.csv.

    Rows are computed by worker threads and written by the calling thread.
    """
    if config.sweep is None:
        raise ValidationError("sweep: the sweep command needs a sweep section")
    writer = ReportWriter(config.output_dir)
    sweep = ParameterSweep(config.params, config.sweep.axis)
    writer.write_table(f"{config.prefix}_sweep.csv", sweep.table(config.sweep.values))
    report = ReportDocument(command="sweep", seed=config.seed, inputs=_inputs(config))
    return _finish(report, writer, config.prefix)


COMMANDS = {
    "analyze": cmd_analyze,
    "hopf": cmd_hopf,
    "normalform": cmd_normalform,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}
