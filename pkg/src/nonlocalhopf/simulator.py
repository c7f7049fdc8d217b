"""
Method-of-lines simulator for the nonlocal prey-predator system.

The interval (0, ell*pi) is split into n_cells uniform cells with values at the
cell centers; no-flux boundaries are imposed by reflecting ghost cells. The
default IMEX scheme solves the diffusion implicitly (one tridiagonal solve per
species) and advances reaction and the nonlocal mean explicitly.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import sympy
from scipy.linalg import solve_banded
from scipy.signal import find_peaks

from nonlocalhopf.model import ModelParams, ParameterError, RawParams, equilibrium_from_b
from nonlocalhopf.stability import Model

logger = logging.getLogger(__name__)

MIN_CELLS = 32
BLOWUP_FLOOR = 1e-8
N_MODES = 5
CELLS_PER_UNIT_ELL = 25.6


class SimConfigError(ValueError):
    """Exception raised when a simulation configuration is invalid."""

    pass


class BlowUpError(RuntimeError):
    """
    Exception raised when the prey density collapses towards zero.

    Attributes:
        time: Simulation time of the failing step.
        step: Index of the failing step.
        u_min: Smallest prey value after the step.
        last_state: The last state with admissible values.
    """

    def __init__(self, time: float, step: int, u_min: float, last_state: "SimState") -> None:
        super().__init__(f"Blow-up at t={time:.6g} (step {step}): min u = {u_min!r}")
        self.time = time
        self.step = step
        self.u_min = u_min
        self.last_state = last_state


class Scheme(str, Enum):
    """Time-stepping scheme."""

    IMEX = "imex"
    EXPLICIT = "explicit"


class Convergence(str, Enum):
    """Long-time behavior of a run."""

    STEADY = "steady"
    PERIODIC = "periodic"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class SimConfig:
    """
    Numerical settings of one run.

    Attributes:
        n_cells: Grid resolution, at least 32.
        dt: Time step.
        t_end: Integration horizon.
        scheme: IMEX or explicit Euler.
        model: Nonlocal mean or pointwise (local) competition.
        transient_fraction: Share of the run discarded before diagnosing the tail.
        probe_location: Grid index of the probe signal.
        sample_every: Steps between trajectory samples.
        steady_tol: Tail oscillation below which the run counts as steady.
    """

    n_cells: int = 256
    dt: float = 0.01
    t_end: float = 3000.0
    scheme: Scheme = Scheme.IMEX
    model: Model = Model.NONLOCAL
    transient_fraction: float = 0.5
    probe_location: int = 0
    sample_every: int = 100
    steady_tol: float = 1e-8

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "model", Model(self.model))
        if self.n_cells < MIN_CELLS:
            raise SimConfigError(f"n_cells must be at least {MIN_CELLS}, got {self.n_cells}")
        if not self.dt > 0:
            raise SimConfigError(f"dt must be positive, got {self.dt!r}")
        if not self.t_end >= self.dt:
            raise SimConfigError(f"t_end={self.t_end!r} is shorter than one step dt={self.dt!r}")
        if not 0.0 < self.transient_fraction < 1.0:
            raise SimConfigError(
                f"transient_fraction must lie in (0, 1), got {self.transient_fraction!r}"
            )
        if not 0 <= self.probe_location < self.n_cells:
            raise SimConfigError(
                f"probe_location {self.probe_location} is outside [0, {self.n_cells})"
            )
        if self.sample_every < 1:
            raise SimConfigError(f"sample_every must be at least 1, got {self.sample_every}")

    @classmethod
    def for_ell(cls, ell: float, **overrides: object) -> "SimConfig":
        """Build a config whose default resolution scales with ell (256 cells at ell=10)."""
        settings: Dict[str, object] = {"n_cells": max(MIN_CELLS, round(CELLS_PER_UNIT_ELL * ell))}
        settings.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**settings)  # type: ignore[arg-type]

    @property
    def n_steps(self) -> int:
        """Number of steps needed to reach t_end."""
        return int(round(self.t_end / self.dt))

    def check_stability(self, params: ModelParams) -> None:
        """
        Check the explicit diffusion bound dt <= dx^2 / (2 max(d1, d2)).

        Raises:
            SimConfigError: If the explicit scheme would be unstable.
        """
        if self.scheme is not Scheme.EXPLICIT:
            return
        dx = params.ell * math.pi / self.n_cells
        bound = dx * dx / (2.0 * max(params.d1, params.d2))
        if self.dt > bound:
            raise SimConfigError(f"Explicit scheme needs dt <= {bound:.6g}, got dt={self.dt!r}")

    def to_dict(self) -> Dict[str, object]:
        """Return the settings as plain values."""
        return {
            "n_cells": self.n_cells,
            "dt": self.dt,
            "t_end": self.t_end,
            "scheme": self.scheme.value,
            "model": self.model.value,
            "transient_fraction": self.transient_fraction,
            "probe_location": self.probe_location,
            "sample_every": self.sample_every,
            "steady_tol": self.steady_tol,
        }


@dataclass(frozen=True)
class SimState:
    """
    Cell-centered fields at one time.

    Attributes:
        t: Time.
        u: Prey density per cell.
        v: Predator density per cell.
    """

    t: float
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class OrbitDiagnostics:
    """
    Classification of the tail of a run.

    Attributes:
        converged_to: Steady, periodic or undetermined.
        period: Mean peak-to-peak interval when periodic.
        amplitude_u: Half the probe's peak-to-trough range over the last period (or tail).
        mode_amp: Time-averaged |c_n| for n = 0..4.
        boundary_concentration: Range of u(0, t) over the last period divided by the
            time-averaged spatial mean.
        final_deviation: Max distance of the final fields from the constant equilibrium.
        n_peaks: Probe peaks found in the tail.
        t_final: Time at the end of the run.
    """

    converged_to: Convergence
    period: Optional[float]
    amplitude_u: float
    mode_amp: Tuple[float, ...]
    boundary_concentration: float
    final_deviation: float
    n_peaks: int
    t_final: float

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary."""
        return {
            "converged_to": self.converged_to.value,
            "period": self.period,
            "amplitude_u": self.amplitude_u,
            "mode_amp": list(self.mode_amp),
            "boundary_concentration": self.boundary_concentration,
            "final_deviation": self.final_deviation,
            "n_peaks": self.n_peaks,
            "t_final": self.t_final,
        }


@dataclass(frozen=True)
class InitialCondition:
    """
    Initial data preset.

    Attributes:
        kind: One of constant, fig1, fig2, mode1, custom.
        value: Constant level for "constant"; the equilibrium when absent.
        amplitude: Size of the cos(x/ell) perturbation for "mode1".
        u_expr: Expression in x, ell and lam for the prey ("custom").
        v_expr: Expression in x, ell and lam for the predator ("custom").
    """

    kind: str = "fig1"
    value: Optional[float] = None
    amplitude: float = 1e-3
    u_expr: Optional[str] = None
    v_expr: Optional[str] = None

    KINDS = ("constant", "fig1", "fig2", "mode1", "custom")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise SimConfigError(
                f"Unknown initial condition {self.kind!r}; use one of {self.KINDS}"
            )
        if self.kind == "custom" and not (self.u_expr and self.v_expr):
            raise SimConfigError("A custom initial condition needs both u_expr and v_expr")

    @classmethod
    def from_spec(
        cls, spec: Union[str, Dict[str, object], "InitialCondition"]
    ) -> "InitialCondition":
        """Accept a preset name, a mapping of fields or an instance."""
        if isinstance(spec, InitialCondition):
            return spec
        if isinstance(spec, str):
            return cls(kind=spec)
        return cls(**spec)  # type: ignore[arg-type]


_SYMBOLS = sympy.symbols("x ell lam")


def _compile_expression(text: str) -> Callable[..., np.ndarray]:
    try:
        expr = sympy.sympify(text, locals={name.name: name for name in _SYMBOLS})
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise SimConfigError(f"Cannot parse initial condition {text!r}: {e}") from e
    unknown = expr.free_symbols - set(_SYMBOLS)
    if unknown:
        names = ", ".join(sorted(str(s) for s in unknown))
        raise SimConfigError(f"Initial condition {text!r} uses unknown symbols: {names}")
    return sympy.lambdify(_SYMBOLS, expr, modules="numpy")


def cell_centers(n_cells: int, ell: float) -> np.ndarray:
    """Cell-center coordinates of the uniform grid on (0, ell*pi)."""
    dx = ell * math.pi / n_cells
    return (np.arange(n_cells) + 0.5) * dx


def init_state(
    config: SimConfig, ic_spec: Union[str, Dict[str, object], InitialCondition], params: ModelParams
) -> SimState:
    """
    Sample the initial fields at the cell centers.

    Args:
        config: Simulation settings.
        ic_spec: A preset name, mapping or InitialCondition.
        params: Model parameters; ell and the equilibrium are used.

    Returns:
        The initial state at t = 0.

    Raises:
        ParameterError: If the initial data is not strictly positive.
        SimConfigError: If the preset is unknown or a custom expression is malformed.
    """
    ic = InitialCondition.from_spec(ic_spec)
    ell = params.ell
    x = cell_centers(config.n_cells, ell)
    lam = equilibrium_from_b(params).lam
    span = (ell * math.pi) ** 2

    if ic.kind == "constant":
        level = lam if ic.value is None else ic.value
        u = np.full_like(x, level)
        v = np.full_like(x, level)
    elif ic.kind == "fig1":
        u = 0.5 + 0.05 * x**2 / span
        v = 0.5 + 0.05 * np.cos(x) ** 2
    elif ic.kind == "fig2":
        u = 3.0 + 0.5 * x**2 / span
        v = 3.0 + 0.5 * np.cos(x) ** 2
    elif ic.kind == "mode1":
        perturbation = ic.amplitude * np.cos(x / ell)
        u = lam + perturbation
        v = lam + perturbation
    else:
        u_func = _compile_expression(ic.u_expr or "")
        v_func = _compile_expression(ic.v_expr or "")
        u = np.broadcast_to(np.asarray(u_func(x, ell, lam), dtype=float), x.shape).copy()
        v = np.broadcast_to(np.asarray(v_func(x, ell, lam), dtype=float), x.shape).copy()

    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ParameterError(f"Initial condition {ic.kind!r} is not finite")
    if u.min() <= 0.0 or v.min() <= 0.0:
        raise ParameterError(
            f"Initial condition {ic.kind!r} must be positive; min u={u.min()!r}, min v={v.min()!r}"
        )
    return SimState(t=0.0, u=u, v=v)


def nonlocal_mean(u: np.ndarray, ell: Optional[float] = None) -> float:
    """
    Spatial mean (1/(ell pi)) int u dx by the midpoint rule on cell centers.

    The midpoint rule on a uniform grid reduces to the arithmetic mean, so ell does
    not enter; it is accepted for symmetry with the other operators.
    """
    return float(np.mean(u))


def diffusion(u: np.ndarray, dx: float) -> np.ndarray:
    """Three-point Laplacian with reflecting ghost cells; zero for constant fields."""
    padded = np.concatenate(([u[0]], u, [u[-1]]))
    return (padded[:-2] - 2.0 * u + padded[2:]) / (dx * dx)


def reaction(
    u: np.ndarray, v: np.ndarray, params: ModelParams, model: Model
) -> Tuple[np.ndarray, np.ndarray]:
    """Kinetic terms; the local model replaces the mean of u by u itself."""
    competition = nonlocal_mean(u) if model is Model.NONLOCAL else u
    f = u * (1.0 - params.beta * competition) - params.b * u * v / (u + 1.0)
    g = params.c * v * (1.0 - v / u)
    return f, g


def _implicit_banded(n: int, ratio: float) -> np.ndarray:
    """Banded form of I - ratio * Laplacian (in units of dx^2) with reflecting ends."""
    ab = np.zeros((3, n))
    ab[0, 1:] = -ratio
    ab[1, :] = 1.0 + 2.0 * ratio
    ab[1, 0] = ab[1, -1] = 1.0 + ratio
    ab[2, :-1] = -ratio
    return ab


class Simulator:
    """
    Time integrator for one parameter set and configuration.

    Attributes:
        params: Model parameters.
        config: Simulation settings.
        dx: Cell width.
        x: Cell centers.
    """

    def __init__(self, params: ModelParams, config: SimConfig) -> None:
        """
        Initialize the Simulator.

        Args:
            params: Model parameters.
            config: Simulation settings.

        Raises:
            SimConfigError: If the explicit scheme violates its stability bound.
        """
        config.check_stability(params)
        self.params = params
        self.config = config
        self.dx = params.ell * math.pi / config.n_cells
        self.x = cell_centers(config.n_cells, params.ell)
        scale = config.dt / (self.dx * self.dx)
        self._banded_u = _implicit_banded(config.n_cells, params.d1 * scale)
        self._banded_v = _implicit_banded(config.n_cells, params.d2 * scale)
        modes = np.arange(N_MODES)[:, np.newaxis]
        weights = np.where(modes == 0, 1.0, 2.0) / config.n_cells
        self._projection = weights * np.cos(modes * self.x[np.newaxis, :] / params.ell)

    def step(self, state: SimState) -> SimState:
        """Advance the state by one time step."""
        p, cfg = self.params, self.config
        f, g = reaction(state.u, state.v, p, cfg.model)
        if cfg.scheme is Scheme.IMEX:
            u = solve_banded((1, 1), self._banded_u, state.u + cfg.dt * f, check_finite=False)
            v = solve_banded((1, 1), self._banded_v, state.v + cfg.dt * g, check_finite=False)
        else:
            u = state.u + cfg.dt * (p.d1 * diffusion(state.u, self.dx) + f)
            v = state.v + cfg.dt * (p.d2 * diffusion(state.v, self.dx) + g)
        return SimState(t=state.t + cfg.dt, u=u, v=v)

    def mode_amplitudes(self, u: np.ndarray) -> np.ndarray:
        """Cosine coefficients c_0..c_4 of u on this grid."""
        return self._projection @ u

    def iter_states(self, state: SimState) -> Iterator[Tuple[int, SimState]]:
        """
        Yield (step index, state) from the initial state through t_end.

        Raises:
            BlowUpError: If u falls below the floor or stops being finite.
        """
        yield 0, state
        for index in range(1, self.config.n_steps + 1):
            advanced = self.step(state)
            u_min = float(np.min(advanced.u))
            if not u_min >= BLOWUP_FLOOR or not np.all(np.isfinite(advanced.v)):
                logger.debug(f"Blow-up guard tripped at step {index}, min u = {u_min!r}")
                raise BlowUpError(advanced.t, index, u_min, state)
            state = advanced
            yield index, state


def step(state: SimState, config: SimConfig, params: ModelParams) -> SimState:
    """Advance a state by one step of the configured scheme."""
    return Simulator(params, config).step(state)


@dataclass
class _Recorder:
    probe: List[float] = field(default_factory=list)
    boundary: List[float] = field(default_factory=list)
    mean_u: List[float] = field(default_factory=list)
    modes: List[np.ndarray] = field(default_factory=list)


def run(
    params: ModelParams,
    config: SimConfig,
    ic_spec: Union[str, Dict[str, object], InitialCondition] = "fig1",
    on_sample: Optional[Callable[[SimState], None]] = None,
) -> Tuple[List[SimState], OrbitDiagnostics]:
    """
    Integrate to t_end and classify the tail of the run.

    Args:
        params: Model parameters.
        config: Simulation settings.
        ic_spec: Initial condition preset.
        on_sample: Called with every sampled state, including the initial one.

    Returns:
        The sampled states and the orbit diagnostics.

    Raises:
        BlowUpError: If the prey density collapses; samples already passed to
            on_sample are kept by the caller.
    """
    simulator = Simulator(params, config)
    state = init_state(config, ic_spec, params)
    samples: List[SimState] = []
    record = _Recorder()
    logger.info(
        f"Simulating {config.model.value} model to t={config.t_end:g} "
        f"({config.n_steps} steps, {config.n_cells} cells, {config.scheme.value})"
    )
    for index, state in simulator.iter_states(state):
        record.probe.append(float(state.u[config.probe_location]))
        record.boundary.append(float(state.u[0]))
        record.mean_u.append(nonlocal_mean(state.u))
        record.modes.append(simulator.mode_amplitudes(state.u))
        if index % config.sample_every == 0 or index == config.n_steps:
            samples.append(state)
            if on_sample is not None:
                on_sample(state)
    diagnostics = _diagnose(record, state, params, config)
    logger.info(f"Run finished: {diagnostics.converged_to.value}, period={diagnostics.period}")
    return samples, diagnostics


def _periodic_window(probe: np.ndarray) -> Tuple[bool, Optional[Tuple[int, int]], int, float]:
    """Check the tail for regular peaks; return (periodic, last period, peak count, interval)."""
    peaks, _ = find_peaks(probe)
    if len(peaks) < 6:
        return False, None, len(peaks), math.nan
    last = (int(peaks[-2]), int(peaks[-1]))
    recent = peaks[-6:]
    intervals = np.diff(recent).astype(float)
    amplitudes = np.array(
        [probe[start] - probe[start:stop].min() for start, stop in zip(recent[:-1], recent[1:])]
    )
    regular = np.ptp(intervals) <= 0.01 * intervals.mean()
    steady_height = amplitudes.mean() > 0 and np.ptp(amplitudes) <= 0.02 * amplitudes.mean()
    return bool(regular and steady_height), last, len(peaks), float(intervals.mean())


def _diagnose(
    record: _Recorder, final: SimState, params: ModelParams, config: SimConfig
) -> OrbitDiagnostics:
    """Classify the recorded tail as steady, periodic or undetermined."""
    start = int(config.transient_fraction * len(record.probe))
    probe = np.asarray(record.probe[start:])
    boundary = np.asarray(record.boundary[start:])
    mean_u = np.asarray(record.mean_u[start:])
    modes = np.abs(np.asarray(record.modes[start:]))

    lam = equilibrium_from_b(params).lam
    deviation = float(max(np.abs(final.u - lam).max(), np.abs(final.v - lam).max()))

    oscillation = float(np.ptp(probe))
    periodic, window, n_peaks, interval = _periodic_window(probe)
    period: Optional[float] = None
    if oscillation < config.steady_tol:
        converged = Convergence.STEADY
        window = None
    elif periodic and window is not None:
        converged = Convergence.PERIODIC
        period = interval * config.dt
    else:
        converged = Convergence.UNDETERMINED
        window = None

    lo, hi = window if window is not None else (0, len(probe))
    segment = slice(lo, hi + 1)
    amplitude = 0.5 * float(np.ptp(probe[segment]))
    mode_amp = tuple(float(a) for a in modes[segment].mean(axis=0))
    spatial_mean = float(mean_u[segment].mean())
    concentration = float(np.ptp(boundary[segment])) / spatial_mean
    return OrbitDiagnostics(
        converged_to=converged,
        period=period,
        amplitude_u=amplitude,
        mode_amp=mode_amp,
        boundary_concentration=concentration,
        final_deviation=deviation,
        n_peaks=n_peaks,
        t_final=final.t,
    )


def mode_amplitude(state: SimState, n: int, ell: float) -> float:
    """
    Cosine coefficient c_n = (2 - delta_n0)/(ell pi) int u cos(n x/ell) dx.

    Args:
        state: Fields on a cell-centered grid.
        n: Mode index, at least 0.
        ell: Spatial scale.

    Raises:
        ValueError: If n is negative.
    """
    if n < 0:
        raise ValueError(f"Mode index must be non-negative, got {n}")
    x = cell_centers(len(state.u), ell)
    weight = (1.0 if n == 0 else 2.0) / len(state.u)
    return float(weight * np.dot(state.u, np.cos(n * x / ell)))


def to_dimensional(state: SimState, raw: RawParams) -> SimState:
    """Map a nondimensional state back to dimensional time and densities."""
    return replace(state, t=state.t / raw.a, u=raw.m * state.u, v=raw.m * state.v / raw.e)
