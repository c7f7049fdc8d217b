"""
Center-manifold reduction and normal form at mode-1 Hopf points.

At lam* with T_1(lam*) = 0 the linearization has the eigenpair +/- i omega* with
eigenvector q = (1, q2) cos(x/ell) and adjoint vector
q* = 2/(ell pi conj(D)) (1, q2*) cos(x/ell). The quadratic parts of the center
manifold are

    w20 = (a1, a2) cos(2x/ell) + (a3, a4),    w11 = (b1, b2) cos(2x/ell) + (b3, b4),

and the cubic coefficient g21 = A1 + A2 + A3 decides the direction and orbital
stability of the bifurcating spatially nonhomogeneous periodic solutions.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from nonlocalhopf.hopf import (
    Branch,
    DegenerateHopfError,
    HopfPoint,
    hopf_points_mode1,
    make_hopf_point,
    transversality,
)
from nonlocalhopf.model import ModelParams, ParameterError, b_from_lambda
from nonlocalhopf.stability import LinearStability, critical_points, p_curve

logger = logging.getLogger(__name__)

RESONANCE_TOL = 1e-12

Quad = Tuple[complex, complex, complex, complex]


class Direction(str, Enum):
    """Side of lam* on which the bifurcating periodic solutions exist."""

    FORWARD = "forward"
    BACKWARD = "backward"


class OrbitStability(str, Enum):
    """Orbital stability of the bifurcating periodic solutions."""

    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class EigenData:
    """
    Critical eigenvectors at a mode-1 Hopf point.

    Attributes:
        lambda_star: Bifurcation value lam*.
        omega_star: Crossing frequency sqrt(D_1(lam*)).
        q2: Second component of q.
        q2_star: Second component of the adjoint vector.
        D: Normalization 1 + q2 conj(q2_star).
        ell: Spatial scale.
    """

    lambda_star: float
    omega_star: float
    q2: complex
    q2_star: complex
    D: complex
    ell: float

    def q(self, x: np.ndarray) -> np.ndarray:
        """Sample q on the grid x; shape (2, len(x))."""
        mode = np.cos(x / self.ell)
        return np.array([mode + 0j, self.q2 * mode])

    def q_adjoint(self, x: np.ndarray) -> np.ndarray:
        """Sample q* on the grid x; shape (2, len(x))."""
        scale = 2.0 / (self.ell * math.pi * self.D.conjugate())
        mode = np.cos(x / self.ell)
        return np.array([scale * mode, scale * self.q2_star * mode])


@dataclass(frozen=True)
class CenterManifoldCoeffs:
    """
    Quadratic center-manifold data.

    Attributes:
        gamma: gamma1..gamma4; h20 = (gamma1, gamma2) cos^2 and h11 = (gamma3, gamma4) cos^2.
        a: a1..a4 of w20.
        b: b1..b4 of w11; real.
        ell: Spatial scale.
    """

    gamma: Quad
    a: Quad
    b: Quad
    ell: float

    def w20(self, x: np.ndarray) -> np.ndarray:
        """Sample w20 on the grid x; shape (2, len(x))."""
        mode = np.cos(2.0 * x / self.ell)
        return np.array([self.a[0] * mode + self.a[2], self.a[1] * mode + self.a[3]])

    def w11(self, x: np.ndarray) -> np.ndarray:
        """Sample w11 on the grid x; shape (2, len(x))."""
        mode = np.cos(2.0 * x / self.ell)
        return np.array([self.b[0] * mode + self.b[2], self.b[1] * mode + self.b[3]])


@dataclass(frozen=True)
class HopfNormalForm:
    """
    Normal-form coefficients at a mode-1 Hopf point.

    Attributes:
        lambda_star: Bifurcation value lam*.
        b_star: The predation parameter at lam*.
        branch: Root below or above lambda2.
        omega_star: Crossing frequency.
        g20, g11, g02: Quadratic coefficients; zero because the cubic mode integral vanishes.
        g21: Cubic coefficient A1 + A2 + A3.
        A: The three parts of g21.
        C1: g21 / 2.
        alpha_prime: Transversality p2'(lam*)/2.
        mu2: -Re C1 / alpha_prime; orbits exist for lam > lam* iff positive.
        beta2: Re g21; orbits are stable iff negative.
        direction: Forward when mu2 > 0.
        orbit_stability: Stable when beta2 < 0.
    """

    lambda_star: float
    b_star: float
    branch: Branch
    omega_star: float
    g20: complex
    g11: complex
    g02: complex
    g21: complex
    A: Tuple[complex, complex, complex]
    C1: complex
    alpha_prime: float
    mu2: float
    beta2: float
    direction: Direction
    orbit_stability: OrbitStability

    @property
    def direction_lambda(self) -> str:
        """Side of lam* where the orbits exist, in lambda."""
        return "right" if self.direction is Direction.FORWARD else "left"

    @property
    def direction_b(self) -> str:
        """Side of b* where the orbits exist; b decreases as lambda grows."""
        return "left" if self.direction is Direction.FORWARD else "right"

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary; complex values become [re, im]."""
        return {
            "lambda_star": self.lambda_star,
            "b_star": self.b_star,
            "branch": self.branch.value,
            "omega_star": self.omega_star,
            "g20": _pair(self.g20),
            "g11": _pair(self.g11),
            "g02": _pair(self.g02),
            "g21": _pair(self.g21),
            "A": [_pair(value) for value in self.A],
            "C1": _pair(self.C1),
            "alpha_prime": self.alpha_prime,
            "mu2": self.mu2,
            "beta2": self.beta2,
            "direction": self.direction.value,
            "direction_lambda": self.direction_lambda,
            "direction_b": self.direction_b,
            "orbit_stability": self.orbit_stability.value,
        }


@dataclass(frozen=True)
class AsymptoticLimits:
    """
    Large-ell limits of the normal-form data along one mode-1 branch.

    Attributes:
        branch: Root of c = lam (1 - beta lam)/(1 + lam) above ("plus") or below lambda2.
        lambda_inf: Limit of lam*.
        b_inf: The predation parameter at lambda_inf.
        omega_inf: Limit of omega*.
        q2_inf, q2s_inf, D_inf: Limits of the eigenvector data.
        gamma_inf, a_inf, b_coeffs_inf: Limits of the center-manifold coefficients.
        A1_inf, A2_inf, A3_inf: Limits of the parts of g21.
        B_inf: The five parts of A3_inf.
        re_A1_closed, re_A2_closed, re_A3_closed: Closed forms of the real parts.
        re_g21_inf: Closed form of Re g21 in the limit.
    """

    branch: Branch
    lambda_inf: float
    b_inf: float
    omega_inf: float
    q2_inf: complex
    q2s_inf: complex
    D_inf: complex
    gamma_inf: Quad
    a_inf: Quad
    b_coeffs_inf: Quad
    A1_inf: complex
    A2_inf: complex
    A3_inf: complex
    B_inf: Tuple[complex, complex, complex, complex, complex]
    re_A1_closed: float
    re_A2_closed: float
    re_A3_closed: float
    re_g21_inf: float

    @property
    def orbit_stability(self) -> OrbitStability:
        """Orbital stability predicted for large ell."""
        return OrbitStability.STABLE if self.re_g21_inf < 0 else OrbitStability.UNSTABLE

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary; complex values become [re, im]."""
        return {
            "branch": self.branch.value,
            "lambda_inf": self.lambda_inf,
            "b_inf": self.b_inf,
            "omega_inf": self.omega_inf,
            "q2_inf": _pair(self.q2_inf),
            "q2s_inf": _pair(self.q2s_inf),
            "D_inf": _pair(self.D_inf),
            "gamma_inf": [_pair(v) for v in self.gamma_inf],
            "a_inf": [_pair(v) for v in self.a_inf],
            "b_inf_coeffs": [_pair(v) for v in self.b_coeffs_inf],
            "A_inf": [_pair(self.A1_inf), _pair(self.A2_inf), _pair(self.A3_inf)],
            "B_inf": [_pair(v) for v in self.B_inf],
            "re_A_closed": [self.re_A1_closed, self.re_A2_closed, self.re_A3_closed],
            "re_g21_inf": self.re_g21_inf,
            "orbit_stability": self.orbit_stability.value,
        }


def _pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def eigen_data(point: HopfPoint, params: ModelParams) -> EigenData:
    """
    Critical eigenvector data at a mode-1 Hopf point.

    Args:
        point: A mode-1 Hopf point.
        params: Model parameters; ell, d1, d2, beta and c are used.

    Returns:
        The eigenvector data with q2 = c/(i omega + d2/ell^2 + c) and
        q2* = (1 - beta lam)/(i omega - d2/ell^2 - c).

    Raises:
        ValueError: If the point is not a mode-1 point.
        DegenerateHopfError: If D_1(lam*) <= 0.
    """
    if point.mode != 1:
        raise ValueError(f"Normal forms are computed at mode-1 points only, got mode {point.mode}")
    lam = point.lam
    d1_value = LinearStability(params).det_D(1, lam)
    if d1_value <= 0.0:
        raise DegenerateHopfError(f"D_1({lam!r}) = {d1_value!r} is not positive")
    omega = math.sqrt(d1_value)
    shift = params.d2 / params.ell**2 + params.c
    q2 = params.c / complex(shift, omega)
    q2_star = (1.0 - params.beta * lam) / complex(-shift, omega)
    D = 1.0 + q2 * q2_star.conjugate()
    return EigenData(
        lambda_star=lam, omega_star=omega, q2=q2, q2_star=q2_star, D=D, ell=params.ell
    )


def _gammas(lam: float, beta: float, c: float, q2: complex) -> Quad:
    slope = 1.0 - beta * lam
    K = slope / (lam * (1.0 + lam))
    gamma1 = 2.0 * slope / (1.0 + lam) ** 2 - 2.0 * K * q2
    gamma2 = -(2.0 * c / lam) * (1.0 - q2) ** 2
    gamma3 = complex(2.0 * slope / (1.0 + lam) ** 2 - 2.0 * K * q2.real)
    gamma4 = complex(-(2.0 * c / lam) * abs(1.0 - q2) ** 2)
    return gamma1, gamma2, gamma3, gamma4


def gamma_coeffs(ed: EigenData, params: ModelParams) -> Quad:
    """
    Coefficients of h20 = (gamma1, gamma2) cos^2 and h11 = (gamma3, gamma4) cos^2.

    gamma3 and gamma4 are real; gamma4 = -(2c/lam*) |1 - q2|^2 < 0.
    """
    return _gammas(ed.lambda_star, params.beta, params.c, ed.q2)


def _nonresonant(value: complex, label: str) -> complex:
    if abs(value) < RESONANCE_TOL:
        raise DegenerateHopfError(f"Resonant denominator {label} = {value!r}")
    return value


def ab_coeffs(ed: EigenData, gamma: Quad, params: ModelParams) -> Tuple[Quad, Quad]:
    """
    Center-manifold coefficients a1..a4 of w20 and b1..b4 of w11.

    They solve (2 i omega - L_2)(a1, a2) = (gamma1, gamma2)/2,
    (2 i omega - L_0)(a3, a4) = (gamma1, gamma2)/2, -L_2 (b1, b2) = (gamma3, gamma4)/2
    and -L_0 (b3, b4) = (gamma3, gamma4)/2, with L_n the mode-n symbol at lam*.

    Raises:
        DegenerateHopfError: If a denominator vanishes within 1e-12.
    """
    lam, omega = ed.lambda_star, ed.omega_star
    beta, c, ell = params.beta, params.c, params.ell
    analysis = LinearStability(params)
    slope = 1.0 - beta * lam
    p2 = p_curve(2, lam, beta, c)
    p3 = p_curve(3, lam, beta, c)
    g1, g2, g3, g4 = gamma
    two_iw = 2j * omega

    T2, D2 = analysis.trace_T(2, lam), analysis.det_D(2, lam)
    T0, D0 = analysis.trace_T(0, lam), analysis.det_D(0, lam)
    den2 = _nonresonant(-4.0 * omega**2 - 2j * T2 * omega + D2, "mode-2 resolvent")
    den0 = _nonresonant(-4.0 * omega**2 - 2j * T0 * omega + D0, "mode-0 resolvent")
    _nonresonant(D2, "D_2(lam*)")
    _nonresonant(D0, "D_0(lam*)")

    k1, k2 = 4.0 * params.d1 / ell**2, 4.0 * params.d2 / ell**2
    a1 = 0.5 * (g1 * (two_iw + k2 + c) - g2 * slope) / den2
    a2 = 0.5 * (g2 * (two_iw + k1 - p2) + c * g1) / den2
    a3 = 0.5 * (g1 * (two_iw + c) - g2 * slope) / den0
    a4 = 0.5 * (g2 * (two_iw - p3) + c * g1) / den0
    b1 = 0.5 * ((k2 + c) * g3 - slope * g4) / D2
    b2 = 0.5 * ((k1 - p2) * g4 + c * g3) / D2
    b3 = 0.5 * (c * g3 - slope * g4) / D0
    b4 = 0.5 * (-p3 * g4 + c * g3) / D0
    return (a1, a2, a3, a4), (b1, b2, b3, b4)


def center_manifold(point: HopfPoint, params: ModelParams) -> CenterManifoldCoeffs:
    """Compute gamma, a and b at a mode-1 Hopf point."""
    ed = eigen_data(point, params)
    gamma = gamma_coeffs(ed, params)
    a, b = ab_coeffs(ed, gamma, params)
    return CenterManifoldCoeffs(gamma=gamma, a=a, b=b, ell=params.ell)


def _a_terms(
    lam: float,
    beta: float,
    c: float,
    q2: complex,
    q2_star: complex,
    D: complex,
    a: Quad,
    b: Quad,
) -> Tuple[complex, complex, complex]:
    """
    The three parts of g21 after integrating the cosine products exactly.

    Uses int cos^2 = ell pi/2, int cos^4 = 3 ell pi/8, int cos^2 cos(2x/ell) = ell pi/4
    and int cos(2x/ell) = 0 over (0, ell pi).
    """
    slope = 1.0 - beta * lam
    K = slope / (lam * (1.0 + lam))
    r = 2.0 * lam / (1.0 + lam)
    qs_bar = q2_star.conjugate()
    q2_bar = q2.conjugate()
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b

    A1 = (
        K * (r * b1 - b2 - q2 * b1)
        + 2.0 * K * (r * b3 - b4 - q2 * b3)
        - 2.0 * beta * b3
        - (2.0 * c / lam) * qs_bar * (1.0 - q2) * (b1 - b2)
        - (4.0 * c / lam) * qs_bar * (1.0 - q2) * (b3 - b4)
    ) / D
    A2 = (
        0.75
        * (
            -6.0 * slope / (1.0 + lam) ** 3
            + 2.0 * slope / (lam * (1.0 + lam) ** 2) * (q2_bar + 2.0 * q2)
            - (4.0 * c / lam**2) * qs_bar * (q2_bar + 2.0 * q2)
            + (6.0 * c / lam**2) * qs_bar
            + (2.0 * c / lam**2) * qs_bar * (q2 * q2 + 2.0 * q2 * q2_bar)
        )
        / D
    )
    A3 = (
        K * ((r - q2_bar) * (a1 / 2.0 + a3) - a2 / 2.0 - a4)
        - beta * a3
        - (c / lam) * qs_bar * (1.0 - q2_bar) * (a1 - a2)
        - (2.0 * c / lam) * qs_bar * (1.0 - q2_bar) * (a3 - a4)
    ) / D
    return A1, A2, A3


def g21_parts(point: HopfPoint, params: ModelParams) -> Tuple[complex, complex, complex]:
    """Return (A1, A2, A3) at a mode-1 Hopf point."""
    ed = eigen_data(point, params)
    gamma = gamma_coeffs(ed, params)
    a, b = ab_coeffs(ed, gamma, params)
    return _a_terms(ed.lambda_star, params.beta, params.c, ed.q2, ed.q2_star, ed.D, a, b)


def g21_finite(point: HopfPoint, params: ModelParams) -> complex:
    """
    Cubic normal-form coefficient g21 at finite ell.

    Args:
        point: A mode-1 Hopf point.
        params: Model parameters.

    Returns:
        g21 = A1 + A2 + A3; g20 = g11 = g02 = 0 at every such point.

    Raises:
        DegenerateHopfError: If the point is degenerate or resonant.
    """
    return complex(sum(g21_parts(point, params)))


def normal_form(point: HopfPoint, params: ModelParams) -> HopfNormalForm:
    """
    Direction and stability of the periodic solutions bifurcating at a mode-1 point.

    Args:
        point: A mode-1 Hopf point.
        params: Model parameters.

    Returns:
        The normal form with C1 = g21/2, mu2 = -Re C1/alpha' and beta2 = Re g21.

    Raises:
        DegenerateHopfError: If the transversality vanishes or a denominator is resonant.
    """
    alpha_prime = transversality(point, params)
    if abs(alpha_prime) < RESONANCE_TOL:
        raise DegenerateHopfError(f"Zero transversality at lambda={point.lam!r}")
    ed = eigen_data(point, params)
    parts = g21_parts(point, params)
    g21 = complex(sum(parts))
    C1 = g21 / 2.0
    mu2 = -C1.real / alpha_prime
    beta2 = g21.real
    result = HopfNormalForm(
        lambda_star=point.lam,
        b_star=b_from_lambda(params.beta, point.lam),
        branch=point.branch,
        omega_star=ed.omega_star,
        g20=0j,
        g11=0j,
        g02=0j,
        g21=g21,
        A=parts,
        C1=C1,
        alpha_prime=alpha_prime,
        mu2=mu2,
        beta2=beta2,
        direction=Direction.FORWARD if mu2 > 0 else Direction.BACKWARD,
        orbit_stability=OrbitStability.STABLE if beta2 < 0 else OrbitStability.UNSTABLE,
    )
    logger.info(
        f"Normal form at lambda*={point.lam:.10g} ({point.branch.value}): "
        f"Re g21={beta2:.6g}, mu2={mu2:.6g}, {result.orbit_stability.value}"
    )
    return result


def limit_roots(beta: float, c: float) -> Tuple[float, float]:
    """
    Roots of c = lam (1 - beta lam)/(1 + lam), i.e. beta lam^2 + (c - 1) lam + c = 0.

    Raises:
        ParameterError: If c >= p2(lambda2), so no real positive roots exist.
    """
    lambda2 = critical_points(beta).lambda2
    if c >= p_curve(2, lambda2, beta, c):
        raise ParameterError(f"c={c!r} >= max p2 for beta={beta!r}; no large-ell Hopf points")
    root = math.sqrt((1.0 - c) ** 2 - 4.0 * beta * c)
    upper = ((1.0 - c) + root) / (2.0 * beta)
    lower = 2.0 * c / ((1.0 - c) + root)
    return lower, upper


def limits_infinity(beta: float, c: float, branch: Union[str, Branch]) -> AsymptoticLimits:
    """
    Closed-form limits of the normal-form data as ell grows without bound.

    Args:
        beta: Competition parameter.
        c: Predator growth rate; must satisfy c < p2(lambda2).
        branch: "plus" for the root above lambda2, "minus" for the one below.

    Returns:
        The asymptotic limits, including Re g21 in the limit.

    Raises:
        ParameterError: If no real limit exists.
    """
    branch = Branch(branch)
    lower, upper = limit_roots(beta, c)
    lam = upper if branch is Branch.PLUS else lower
    slope = 1.0 - beta * lam
    omega2 = c * slope / (1.0 + lam)
    omega = math.sqrt(omega2)
    ratio = c / omega

    q2 = complex(lam / (1.0 + lam), -ratio / (1.0 + lam))
    q2s = complex(-1.0, -omega / c)
    D = 2.0 / complex(1.0, -ratio)

    gamma: Quad = (
        2j * omega / (lam * (1.0 + lam)),
        -(2.0 * c / (lam * (1.0 + lam) ** 2)) * complex(1.0 - lam, 2.0 * ratio),
        0j,
        complex(-2.0 * c / (lam * (1.0 + lam))),
    )
    sigma_den = complex(-3.0 * omega2 + beta * c * lam, 2.0 * beta * lam * omega)
    a1 = complex(1.0 / (3.0 * lam), -c / (lam * omega * (1.0 + lam)))
    a2 = complex(
        (lam - 5.0) / (3.0 * (1.0 + lam) ** 2),
        -c * (5.0 * lam - 1.0) / (3.0 * lam * omega * (1.0 + lam) ** 2),
    )
    a3 = -3.0 * omega2 * a1 / sigma_den
    a4 = (-3.0 * omega2 * a2 + beta * lam * gamma[1] / 2.0) / sigma_den
    base = omega2 + beta * c * lam
    b_coeffs: Quad = (
        complex(1.0 / lam),
        complex(1.0 / (1.0 + lam)),
        complex(c * c / (lam * lam * base)),
        complex(c * (c - beta * lam) / (lam * (1.0 + lam) * base)),
    )
    a_coeffs: Quad = (a1, a2, a3, a4)

    A1, A2, A3 = _a_terms(lam, beta, c, q2, q2s, D, a_coeffs, b_coeffs)

    r = 2.0 * lam / (1.0 + lam)
    q2_bar, qs_bar = q2.conjugate(), q2s.conjugate()
    scale = c / (D * lam * lam)
    B = (
        scale * ((r - q2_bar) * a1 / 2.0 - a2 / 2.0),
        2.0 * scale * ((r - q2_bar) * a3 / 2.0 - a4 / 2.0),
        -beta * a3 / D,
        -(c / (D * lam)) * qs_bar * (1.0 - q2_bar) * (a1 - a2),
        -(2.0 * c / (D * lam)) * qs_bar * (1.0 - q2_bar) * (a3 - a4),
    )

    lam2, one = lam * lam, 1.0 + lam
    re_A1 = 7.0 * c / (2.0 * lam2 * one) + c * (omega2 - beta * c * lam) / (lam2 * one * base)
    re_A2 = -3.0 * c / (4.0 * lam * one**2) - 3.0 * c / (2.0 * lam2 * one)
    cross = (beta * c * lam * (lam + 4.0) - omega2 * (lam - 2.0)) / (
        (-3.0 * omega2 + beta * c * lam) ** 2 + 4.0 * beta**2 * lam2 * omega2
    )
    tail = beta * c * c / (2.0 * lam2 * one) * cross
    re_A3 = -9.0 * c / (4.0 * lam2 * one) + tail
    re_g21 = (
        -3.0 * c / (4.0 * lam * one**2)
        - c / (4.0 * lam2 * one)
        + c * (omega2 - beta * c * lam) / (lam2 * one * base)
        + tail
    )
    return AsymptoticLimits(
        branch=branch,
        lambda_inf=lam,
        b_inf=b_from_lambda(beta, lam),
        omega_inf=omega,
        q2_inf=q2,
        q2s_inf=q2s,
        D_inf=D,
        gamma_inf=gamma,
        a_inf=a_coeffs,
        b_coeffs_inf=b_coeffs,
        A1_inf=A1,
        A2_inf=A2,
        A3_inf=A3,
        B_inf=B,
        re_A1_closed=re_A1,
        re_A2_closed=re_A2,
        re_A3_closed=re_A3,
        re_g21_inf=re_g21,
    )


def hopf_branch_curve(params: ModelParams, ells: Iterable[float]) -> List[Dict[str, float]]:
    """
    Follow both mode-1 Hopf points and their Re g21 as ell varies.

    Args:
        params: Model parameters; ell is replaced by each value of ells.
        ells: Spatial scales to evaluate.

    Returns:
        One row per ell; NaN entries where no mode-1 points exist.
    """
    rows: List[Dict[str, float]] = []
    for ell in ells:
        scaled = params.with_changes(ell=float(ell))
        row: Dict[str, float] = {"ell": float(ell)}
        pair = hopf_points_mode1(scaled)
        for name, lam in zip(("minus", "plus"), pair or (None, None)):
            re_g21: Optional[float] = None
            b_value: Optional[float] = None
            if lam is not None:
                point = _mode1_point(scaled, lam, Branch(name))
                re_g21 = g21_finite(point, scaled).real
                b_value = point.b_equivalent
            row[f"lambda_{name}"] = math.nan if lam is None else lam
            row[f"b_{name}"] = math.nan if b_value is None else b_value
            row[f"re_g21_{name}"] = math.nan if re_g21 is None else re_g21
        rows.append(row)
    return rows


def _mode1_point(params: ModelParams, lam: float, branch: Branch) -> HopfPoint:
    return make_hopf_point(LinearStability(params), lam, 1, branch)


def mode1_points(params: ModelParams) -> List[HopfPoint]:
    """
    The two mode-1 Hopf points as HopfPoint objects.

    Returns:
        [minus, plus], or an empty list when they do not exist.
    """
    pair = hopf_points_mode1(params)
    if pair is None:
        return []
    return [_mode1_point(params, lam, branch) for lam, branch in zip(pair, Branch)]
