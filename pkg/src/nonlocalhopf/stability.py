"""
Characteristic quadratics of the linearization and local stability of (lam, lam).

Restricted to the cosine mode cos(n x / ell), the linearization has the 2x2 symbol

    [ a11(n)     -(1 - beta lam) ]
    [ c          -c - d2 n^2/ell^2 ]

with a11(n) = p2(lam) - d1 n^2/ell^2 for n >= 1 and a11(0) = p3(lam), since the
nonlocal mean only acts on the constant mode. Without the nonlocal effect the
pointwise derivative p3(lam) - d1 n^2/ell^2 applies to every mode.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import optimize

from nonlocalhopf.model import ModelParams, ParameterError, check_lambda

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
BRACKET_INSET = 1e-9


class Model(str, Enum):
    """Competition term of the prey equation."""

    NONLOCAL = "nonlocal"
    LOCAL = "local"


class FailureReason(str, Enum):
    """Why a mode fails the stability test."""

    TRACE_NONNEGATIVE = "trace_nonnegative"
    DET_NONPOSITIVE = "det_nonpositive"


@dataclass(frozen=True)
class ModeQuadratic:
    """
    Trace and determinant of one mode; eigenvalues solve mu^2 - T mu + D = 0.

    Attributes:
        n: Spatial mode number.
        T: Trace.
        D: Determinant.
    """

    n: int
    T: float
    D: float

    def eigenvalues(self) -> Tuple[complex, complex]:
        """Return both roots, the one with the larger real (then imaginary) part first."""
        root = cmath.sqrt(self.T * self.T - 4.0 * self.D)
        return (self.T + root) / 2.0, (self.T - root) / 2.0


@dataclass(frozen=True)
class StabilityVerdict:
    """
    Outcome of the mode-by-mode stability test.

    Attributes:
        stable: True when every checked mode has T < 0 and D > 0.
        failing_modes: Pairs (n, reason) for every failing mode.
        n_checked: Highest mode checked; modes beyond it are certified stable.
    """

    stable: bool
    failing_modes: Tuple[Tuple[int, FailureReason], ...]
    n_checked: int

    @property
    def first_failing_mode(self) -> Optional[int]:
        """Lowest failing mode, or None when stable."""
        return min((n for n, _ in self.failing_modes), default=None)


@dataclass(frozen=True)
class CriticalPoints:
    """
    Maximizers of the auxiliary curves p1, p2 and p3 on (0, 1/beta).

    Attributes:
        lambda1: Maximizer of p1.
        lambda2: Maximizer of p2, sqrt((beta + 1)/beta) - 1.
        lambda3: Maximizer of p3, sqrt((beta + 1)/(2 beta)) - 1; None when beta > 1.
    """

    lambda1: float
    lambda2: float
    lambda3: Optional[float]


def _check_curve_domain(lam: float, beta: float) -> None:
    if not (math.isfinite(lam) and 0.0 <= lam <= 1.0 / beta):
        raise ParameterError(f"lambda={lam!r} is outside [0, 1/beta] = [0, {1.0 / beta!r}]")


def p_curve(i: int, lam: float, beta: float, c: float) -> float:
    """
    Evaluate one of the auxiliary curves.

    p1 = (1 - beta lam)/c * (1 - (1 + lam)^(-1/2))^2 bounds d1/d2 for a positive
    determinant, p2 = lam (1 - beta lam)/(1 + lam) drives the mode-1 trace and
    p3 = lam (1 - beta - 2 beta lam)/(1 + lam) = p2 - beta lam drives the mode-0 trace.

    Args:
        i: Curve index, 1, 2 or 3.
        lam: Equilibrium density in [0, 1/beta].
        beta: Competition parameter.
        c: Predator growth rate.

    Returns:
        The curve value.

    Raises:
        ParameterError: If lam is outside [0, 1/beta].
        ValueError: If i is not 1, 2 or 3.
    """
    _check_curve_domain(lam, beta)
    if i == 1:
        return (1.0 - beta * lam) / c * (1.0 - 1.0 / math.sqrt(1.0 + lam)) ** 2
    if i == 2:
        return lam * (1.0 - beta * lam) / (1.0 + lam)
    if i == 3:
        return lam * (1.0 - beta - 2.0 * beta * lam) / (1.0 + lam)
    raise ValueError(f"Unknown auxiliary curve index: {i}")


def p_curve_derivative(i: int, lam: float, beta: float, c: float) -> float:
    """
    Analytic derivative of an auxiliary curve with respect to lam.

    Raises:
        ParameterError: If lam is outside [0, 1/beta].
        ValueError: If i is not 1, 2 or 3.
    """
    _check_curve_domain(lam, beta)
    if i == 1:
        s = 1.0 / math.sqrt(1.0 + lam)
        return (1.0 - s) / c * (-beta * (1.0 - s) + (1.0 - beta * lam) * s**3)
    if i == 2:
        return (1.0 - 2.0 * beta * lam - beta * lam * lam) / (1.0 + lam) ** 2
    if i == 3:
        return (1.0 - beta - 4.0 * beta * lam - 2.0 * beta * lam * lam) / (1.0 + lam) ** 2
    raise ValueError(f"Unknown auxiliary curve index: {i}")


def critical_points(beta: float) -> CriticalPoints:
    """
    Locate the maximizers of p1, p2 and p3.

    lambda2 and lambda3 are closed forms; lambda1 is the bisection root of
    beta (1 - (1 + lam)^(-1/2)) = (1 - beta lam)(1 + lam)^(-3/2) on (0, 1/beta).

    Args:
        beta: Competition parameter.

    Returns:
        The critical points; lambda3 is None for beta > 1.
    """
    if not (math.isfinite(beta) and beta > 0):
        raise ParameterError(f"beta must be positive, got {beta!r}")

    def stationarity(lam: float) -> float:
        return beta * (1.0 - 1.0 / math.sqrt(1.0 + lam)) - (1.0 - beta * lam) * (1.0 + lam) ** -1.5

    lo, hi = BRACKET_INSET, 1.0 / beta - BRACKET_INSET
    if not stationarity(lo) < 0.0 < stationarity(hi):
        raise ArithmeticError(f"No sign change for the p1 maximizer on ({lo}, {hi})")
    lambda1, result = optimize.bisect(stationarity, lo, hi, xtol=ROOT_XTOL, full_output=True)
    logger.debug(f"lambda1={lambda1!r} after {result.iterations} bisection steps")

    lambda2 = math.sqrt((beta + 1.0) / beta) - 1.0
    lambda3 = math.sqrt((beta + 1.0) / (2.0 * beta)) - 1.0 if beta <= 1.0 else None
    return CriticalPoints(lambda1=float(lambda1), lambda2=lambda2, lambda3=lambda3)


def max_p2(beta: float) -> float:
    """Maximum of p2 over (0, 1/beta); independent of c."""
    lambda2 = math.sqrt((beta + 1.0) / beta) - 1.0
    return lambda2 * (1.0 - beta * lambda2) / (1.0 + lambda2)


class LinearStability:
    """
    Mode-by-mode linear stability of the constant equilibrium.

    Attributes:
        params: Model parameters; only b is ignored since lam is the bifurcation parameter.
        model: Nonlocal or local competition.
    """

    def __init__(self, params: ModelParams, model: Union[str, Model] = Model.NONLOCAL) -> None:
        """
        Initialize the analysis.

        Args:
            params: Model parameters.
            model: "nonlocal" (default) or "local".
        """
        self.params = params
        self.model = Model(model)

    def _wavenumber(self, n: int) -> float:
        if n < 0:
            raise ValueError(f"Mode number must be nonnegative, got {n}")
        return n * n / (self.params.ell * self.params.ell)

    def trace_T(self, n: int, lam: float) -> float:
        """
        Trace of mode n at lam.

        Args:
            n: Mode number.
            lam: Equilibrium density in (0, 1/beta).

        Returns:
            T_n(lam).

        Raises:
            ParameterError: If lam is outside (0, 1/beta).
        """
        p = self.params
        check_lambda(p.beta, lam)
        k = self._wavenumber(n)
        if self.model is Model.LOCAL:
            return p_curve(3, lam, p.beta, p.c) - p.c - (p.d1 + p.d2) * k
        if n == 0:
            return -p.c + lam * (1.0 - p.beta - 2.0 * p.beta * lam) / (1.0 + lam)
        return -p.c + lam * (1.0 - p.beta * lam) / (1.0 + lam) - (p.d1 + p.d2) * k

    def det_D(self, n: int, lam: float) -> float:
        """
        Determinant of mode n at lam.

        For the nonlocal model and n >= 1 this is D_of_p(lam, n^2/ell^2).

        Raises:
            ParameterError: If lam is outside (0, 1/beta).
        """
        p = self.params
        check_lambda(p.beta, lam)
        k = self._wavenumber(n)
        if self.model is Model.LOCAL:
            a11 = p_curve(3, lam, p.beta, p.c) - p.d1 * k
            return a11 * (-p.c - p.d2 * k) + p.c * (1.0 - p.beta * lam)
        if n == 0:
            return p.beta * p.c * lam + p.c * (1.0 - p.beta * lam) / (1.0 + lam)
        return self.D_of_p(lam, k)

    def D_of_p(self, lam: float, p: float) -> float:
        """
        Determinant as a quadratic in the wavenumber p = n^2/ell^2.

        D(lam, p) = c (1 - beta lam)/(1 + lam) + [d1 c - d2 p2(lam)] p + d1 d2 p^2.

        Raises:
            ParameterError: If lam is outside (0, 1/beta) or p is negative.
        """
        prm = self.params
        check_lambda(prm.beta, lam)
        if p < 0:
            raise ParameterError(f"Wavenumber p must be nonnegative, got {p!r}")
        p2 = lam * (1.0 - prm.beta * lam) / (1.0 + lam)
        return (
            prm.c * (1.0 - prm.beta * lam) / (1.0 + lam)
            + (prm.d1 * prm.c - prm.d2 * p2) * p
            + prm.d1 * prm.d2 * p * p
        )

    def symbol(self, n: int, lam: float) -> np.ndarray:
        """Return the 2x2 matrix of the linearization restricted to mode n."""
        p = self.params
        check_lambda(p.beta, lam)
        k = self._wavenumber(n)
        if self.model is Model.LOCAL or n == 0:
            a11 = p_curve(3, lam, p.beta, p.c) - p.d1 * k
        else:
            a11 = p_curve(2, lam, p.beta, p.c) - p.d1 * k
        return np.array([[a11, -(1.0 - p.beta * lam)], [p.c, -p.c - p.d2 * k]])

    def mode_quadratic(self, n: int, lam: float) -> ModeQuadratic:
        """Return the characteristic quadratic of mode n."""
        return ModeQuadratic(n=n, T=self.trace_T(n, lam), D=self.det_D(n, lam))

    def mode_eigenvalues(self, n: int, lam: float) -> Tuple[complex, complex]:
        """Return both eigenvalues of mode n; a conjugate pair when T^2 < 4D."""
        return self.mode_quadratic(n, lam).eigenvalues()

    def mode_cutoff(self) -> int:
        """
        Highest mode that needs checking.

        Beyond the smallest n with n^2/ell^2 > max p2 / d1 every trace is negative and
        every determinant exceeds its constant term, for both competition models.
        """
        p = self.params
        return int(math.floor(p.ell * math.sqrt(max_p2(p.beta) / p.d1))) + 1

    def mode_table(self, lam: float) -> List[ModeQuadratic]:
        """Quadratics of modes 0 through the cutoff."""
        return [self.mode_quadratic(n, lam) for n in range(self.mode_cutoff() + 1)]

    def classify_equilibrium(self, lam: float) -> StabilityVerdict:
        """
        Classify the local stability of (lam, lam).

        Args:
            lam: Equilibrium density in (0, 1/beta).

        Returns:
            The verdict listing every failing mode up to the cutoff.
        """
        failing: List[Tuple[int, FailureReason]] = []
        table = self.mode_table(lam)
        for quad in table:
            if quad.T >= 0.0:
                failing.append((quad.n, FailureReason.TRACE_NONNEGATIVE))
            if quad.D <= 0.0:
                failing.append((quad.n, FailureReason.DET_NONPOSITIVE))
        return StabilityVerdict(
            stable=not failing, failing_modes=tuple(failing), n_checked=table[-1].n
        )


def trace_T(n: int, lam: float, params: ModelParams) -> float:
    """Trace of mode n for the nonlocal model."""
    return LinearStability(params).trace_T(n, lam)


def det_D(n: int, lam: float, params: ModelParams) -> float:
    """Determinant of mode n for the nonlocal model."""
    return LinearStability(params).det_D(n, lam)


def D_of_p(lam: float, p: float, params: ModelParams) -> float:
    """Determinant as a quadratic in the wavenumber p."""
    return LinearStability(params).D_of_p(lam, p)


def mode_eigenvalues(n: int, lam: float, params: ModelParams) -> Tuple[complex, complex]:
    """Eigenvalues of mode n for the nonlocal model."""
    return LinearStability(params).mode_eigenvalues(n, lam)


def classify_equilibrium(lam: float, params: ModelParams) -> StabilityVerdict:
    """Stability verdict of (lam, lam) for the nonlocal model."""
    return LinearStability(params).classify_equilibrium(lam)
