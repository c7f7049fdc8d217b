"""
Model parameters and the constant positive equilibrium.

The nondimensional system on (0, ell*pi) with no-flux boundaries reads

    u_t = d1 u_xx + u (1 - beta * mean(u)) - b u v / (u + 1)
    v_t = d2 v_xx + c v (1 - v / u)

where mean(u) is the spatial average of the prey density. The constant
positive equilibrium (lam, lam) solves (1 - beta lam)(1 + lam) = b lam.
"""

import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class ParameterError(ValueError):
    """Exception raised when a parameter or equilibrium value is outside its domain."""

    pass


def _require_positive(owner: str, values: Mapping[str, float]) -> None:
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ParameterError(f"{owner}.{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class RawParams:
    """
    Dimensional rates of the prey-predator system before rescaling.

    Attributes:
        a: Intrinsic growth rate of the prey.
        b: Predation strength.
        c: Intrinsic growth rate of the predator.
        e: Predator conversion parameter in the logistic predator term.
        k: Prey carrying capacity.
        m: Half-saturation constant of the predation term.
        d1: Prey diffusion rate.
        d2: Predator diffusion rate.
        domain_length: Spatial scale ell; the domain is (0, ell*pi).
    """

    a: float
    b: float
    c: float
    e: float
    k: float
    m: float
    d1: float
    d2: float
    domain_length: float

    def __post_init__(self) -> None:
        _require_positive("RawParams", {f.name: getattr(self, f.name) for f in fields(self)})


@dataclass(frozen=True)
class ModelParams:
    """
    The six nondimensional parameters of the nonlocal system.

    Attributes:
        d1: Prey diffusion rate.
        d2: Predator diffusion rate.
        beta: Nonlocal competition strength.
        b: Predation parameter.
        c: Predator growth rate.
        ell: Spatial scale; the domain is (0, ell*pi).
    """

    d1: float
    d2: float
    beta: float
    b: float
    c: float
    ell: float

    def __post_init__(self) -> None:
        _require_positive("ModelParams", {f.name: getattr(self, f.name) for f in fields(self)})

    @property
    def lambda_max(self) -> float:
        """Upper end 1/beta of the admissible equilibrium range."""
        return 1.0 / self.beta

    def with_changes(self, **changes: float) -> "ModelParams":
        """
        Return a copy with some fields replaced.

        Args:
            **changes: Field names and their new values.

        Returns:
            A new validated ModelParams.
        """
        return replace(self, **changes)

    def with_lambda(self, lam: float) -> "ModelParams":
        """Return a copy whose b places the equilibrium at lam."""
        return replace(self, b=b_from_lambda(self.beta, lam))

    def to_dict(self) -> Dict[str, float]:
        """Return the parameters as a plain dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        """
        Build parameters from a mapping.

        Args:
            data: Mapping with keys d1, d2, beta, b, c, ell.

        Returns:
            The validated parameters.

        Raises:
            ParameterError: If a key is missing or a value is not positive.
        """
        names = [f.name for f in fields(cls)]
        missing = [name for name in names if name not in data]
        if missing:
            raise ParameterError(f"Missing model parameters: {', '.join(missing)}")
        return cls(**{name: float(data[name]) for name in names})


@dataclass(frozen=True)
class Equilibrium:
    """
    The constant positive equilibrium (lam, lam).

    Attributes:
        lam: Coexistence density, in (0, 1/beta).
        beta: Competition parameter the equilibrium was computed for.
        b: Predation parameter the equilibrium was computed for.
    """

    lam: float
    beta: float
    b: float

    @property
    def residual(self) -> float:
        """Absolute residual of (1 - beta lam)(1 + lam) = b lam."""
        return abs((1.0 - self.beta * self.lam) * (1.0 + self.lam) - self.b * self.lam)


def check_lambda(beta: float, lam: float) -> None:
    """
    Validate that lam lies in the open interval (0, 1/beta).

    Raises:
        ParameterError: If lam is outside the interval or not finite.
    """
    if not (math.isfinite(lam) and 0.0 < lam < 1.0 / beta):
        raise ParameterError(f"lambda={lam!r} is outside (0, 1/beta) = (0, {1.0 / beta!r})")


def nondimensionalize(raw: RawParams) -> ModelParams:
    """
    Map dimensional rates onto the nondimensional parameters.

    Uses t~ = a t, u~ = u/m, v~ = e v/m, so that beta = m/k, b~ = b/(a e),
    c~ = c/a and d~_i = d_i/a. The spatial scale passes through unchanged.

    Args:
        raw: Dimensional rates.

    Returns:
        The nondimensional parameters.
    """
    params = ModelParams(
        d1=raw.d1 / raw.a,
        d2=raw.d2 / raw.a,
        beta=raw.m / raw.k,
        b=raw.b / (raw.a * raw.e),
        c=raw.c / raw.a,
        ell=raw.domain_length,
    )
    logger.debug(f"Nondimensionalized {raw} -> {params}")
    return params


def equilibrium_from_b(params: ModelParams) -> Equilibrium:
    """
    Compute the constant positive equilibrium for the given b.

    The positive root of beta lam^2 + (beta - 1 + b) lam - 1 = 0 is taken in the
    cancellation-free form 2 / (s + sqrt(s^2 + 4 beta)) with s = beta - 1 + b.

    Args:
        params: Model parameters.

    Returns:
        The equilibrium.
    """
    s = params.beta - 1.0 + params.b
    root = math.sqrt(s * s + 4.0 * params.beta)
    if s >= 0:
        lam = 2.0 / (s + root)
    else:
        lam = (root - s) / (2.0 * params.beta)
    return Equilibrium(lam=lam, beta=params.beta, b=params.b)


def b_from_lambda(beta: float, lam: float) -> float:
    """
    Return the predation parameter b that places the equilibrium at lam.

    Args:
        beta: Competition parameter.
        lam: Equilibrium density in (0, 1/beta).

    Returns:
        (1 - beta lam)(1 + lam) / lam, strictly decreasing in lam.

    Raises:
        ParameterError: If lam is outside (0, 1/beta).
    """
    check_lambda(beta, lam)
    return (1.0 - beta * lam) * (1.0 + lam) / lam


def kinetics(t: float, y: Sequence[float], params: ModelParams) -> np.ndarray:
    """Right-hand side of the spatially homogeneous dynamics, for ODE solvers."""
    u, v = y[0], y[1]
    return np.array(
        [
            u * (1.0 - params.beta * u) - params.b * u * v / (u + 1.0),
            params.c * v * (1.0 - v / u),
        ]
    )


def dimensional_kinetics(t: float, y: Sequence[float], raw: RawParams) -> np.ndarray:
    """Right-hand side of the spatially homogeneous dimensional dynamics."""
    u, v = y[0], y[1]
    return np.array(
        [
            raw.a * u * (1.0 - u / raw.k) - raw.b * u * v / (u + raw.m),
            raw.c * v * (1.0 - raw.e * v / u),
        ]
    )
