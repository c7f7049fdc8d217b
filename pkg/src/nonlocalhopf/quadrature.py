"""
Numerical cross-check of the closed-form normal form.

The reduced vector field g(z, conj z) = <q*, F(z q + conj(z) conj(q) + w)> is
sampled on a grid of independent phases of z and zeta on a small circle,
integrated over x with the trapezoid rule, and its Taylor coefficients are
read off with a two-dimensional FFT. Agreement with the closed forms checks
the eigenvectors, the center-manifold coefficients and the cosine integrals.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from nonlocalhopf.hopf import HopfPoint
from nonlocalhopf.model import ModelParams, b_from_lambda
from nonlocalhopf.normal_form import center_manifold, eigen_data
from nonlocalhopf.stability import p_curve

logger = logging.getLogger(__name__)

DEFAULT_NODES = 10001
DEFAULT_ANGLES = 16


@dataclass(frozen=True)
class QuadratureCheck:
    """
    Normal-form coefficients recovered by quadrature.

    Attributes:
        g20, g11, g02, g21: Coefficients of z^2/2, z conj z, conj(z)^2/2 and z^2 conj(z)/2.
        radius: Circle radius the phases were sampled on.
        normalization: |<q*, q> - 1|.
        orthogonality: |<q*, conj q>|.
    """

    g20: complex
    g11: complex
    g02: complex
    g21: complex
    radius: float
    normalization: float
    orthogonality: float

    def relative_g21_error(self, g21: complex) -> float:
        """Relative deviation from a closed-form g21."""
        return abs(self.g21 - g21) / abs(g21)

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary."""
        return {
            "g20": [self.g20.real, self.g20.imag],
            "g11": [self.g11.real, self.g11.imag],
            "g02": [self.g02.real, self.g02.imag],
            "g21": [self.g21.real, self.g21.imag],
            "radius": self.radius,
            "normalization": self.normalization,
            "orthogonality": self.orthogonality,
        }


def inner_product(left: np.ndarray, right: np.ndarray, x: np.ndarray) -> complex:
    """
    Complex inner product <left, right> = int conj(left) . right dx.

    Args:
        left: Shape (2, nx).
        right: Shape (2, ..., nx); leading axes after the first are broadcast.
        x: Quadrature nodes on [0, ell pi].
    """
    weights = np.conj(left)
    integrand = weights[0] * right[0] + weights[1] * right[1]
    return trapezoid(integrand, x, axis=-1)


def normalization_residuals(
    point: HopfPoint, params: ModelParams, n_nodes: int = DEFAULT_NODES
) -> Tuple[float, float]:
    """
    Check <q*, q> = 1 and <q*, conj q> = 0 by quadrature.

    Returns:
        (|<q*, q> - 1|, |<q*, conj q>|).
    """
    ed = eigen_data(point, params)
    x = np.linspace(0.0, params.ell * math.pi, n_nodes)
    q_star = ed.q_adjoint(x)
    q = ed.q(x)
    return (
        float(abs(inner_product(q_star, q, x) - 1.0)),
        float(abs(inner_product(q_star, np.conj(q), x))),
    )


def nonlinear_part(
    U: np.ndarray, lam: float, params: ModelParams, x: np.ndarray
) -> np.ndarray:
    """
    F(U) = R(lam + U) - J U, the reaction minus its linearization at (lam, lam).

    Args:
        U: Perturbation of shape (2, ..., nx); complex values are allowed.
        lam: Equilibrium density; b is set to put the equilibrium there.
        params: Model parameters.
        x: Quadrature nodes used for the spatial mean.
    """
    beta, c = params.beta, params.c
    b_star = b_from_lambda(beta, lam)
    length = params.ell * math.pi
    u = lam + U[0]
    v = lam + U[1]
    mean_u = trapezoid(u, x, axis=-1)[..., np.newaxis] / length
    mean_U = trapezoid(U[0], x, axis=-1)[..., np.newaxis] / length

    reaction_u = u * (1.0 - beta * mean_u) - b_star * u * v / (u + 1.0)
    reaction_v = c * v * (1.0 - v / u)
    p2 = p_curve(2, lam, beta, c)
    linear_u = p2 * U[0] - beta * lam * mean_U - (1.0 - beta * lam) * U[1]
    linear_v = c * U[0] - c * U[1]
    return np.array([reaction_u - linear_u, reaction_v - linear_v])


def quadrature_g_coefficients(
    point: HopfPoint,
    params: ModelParams,
    n_nodes: int = DEFAULT_NODES,
    n_angles: int = DEFAULT_ANGLES,
    radius: Optional[float] = None,
) -> QuadratureCheck:
    """
    Recover g20, g11, g02 and g21 by quadrature at a mode-1 Hopf point.

    Args:
        point: A mode-1 Hopf point.
        params: Model parameters.
        n_nodes: Trapezoid nodes on [0, ell pi].
        n_angles: Phases per variable; aliasing enters at order n_angles.
        radius: Circle radius; defaults to 0.02 lam*/(1 + lam*), which keeps
            lam* + U away from the singularity at u = 0.

    Returns:
        The recovered coefficients and the normalization residuals.
    """
    ed = eigen_data(point, params)
    cm = center_manifold(point, params)
    lam = ed.lambda_star
    r = radius if radius is not None else 0.02 * lam / (1.0 + lam)

    x = np.linspace(0.0, params.ell * math.pi, n_nodes)
    q = ed.q(x)
    q_bar = np.conj(q)
    q_star = ed.q_adjoint(x)
    w20, w11 = cm.w20(x), cm.w11(x)
    w02 = np.conj(w20)

    phases = 2.0 * math.pi * np.arange(n_angles) / n_angles
    zeta = (r * np.exp(1j * phases))[:, np.newaxis]
    samples = np.empty((n_angles, n_angles), dtype=complex)
    for row, theta in enumerate(phases):
        z = r * np.exp(1j * theta)
        U = (
            z * q[:, np.newaxis, :]
            + zeta * q_bar[:, np.newaxis, :]
            + (z * z / 2.0) * w20[:, np.newaxis, :]
            + (z * zeta) * w11[:, np.newaxis, :]
            + (zeta * zeta / 2.0) * w02[:, np.newaxis, :]
        )
        samples[row] = inner_product(q_star, nonlinear_part(U, lam, params, x), x)

    spectrum = np.fft.fft2(samples) / n_angles**2

    def coefficient(i: int, j: int) -> complex:
        return complex(spectrum[i, j] / r ** (i + j))

    normalization, orthogonality = normalization_residuals(point, params, n_nodes)
    check = QuadratureCheck(
        g20=2.0 * coefficient(2, 0),
        g11=coefficient(1, 1),
        g02=2.0 * coefficient(0, 2),
        g21=2.0 * coefficient(2, 1),
        radius=r,
        normalization=normalization,
        orthogonality=orthogonality,
    )
    logger.debug(f"Quadrature g21 at lambda*={lam:.10g}: {check.g21!r} (radius {r:.3g})")
    return check
