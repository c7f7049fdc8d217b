"""
nonlocalhopf - Stability and Hopf bifurcation analysis of a diffusive prey-predator
model with nonlocal prey competition.

This library provides:
- Linear stability of the constant equilibrium, mode by mode
- Location and classification of Hopf bifurcation points
- Normal-form coefficients deciding direction and stability of periodic orbits
- A method-of-lines simulator with orbit diagnostics
- Parallel parameter sweeps returned as tables or DataFrames
"""

__version__ = "0.1.0"
__license__ = "Apache-2.0"

from nonlocalhopf.commands import ParameterSweep
from nonlocalhopf.hopf import HopfPoint, RegimeReport, regime_classify
from nonlocalhopf.model import ModelParams, RawParams, equilibrium_from_b, nondimensionalize
from nonlocalhopf.normal_form import HopfNormalForm, limits_infinity, normal_form
from nonlocalhopf.simulator import SimConfig, Simulator, run
from nonlocalhopf.stability import LinearStability

__all__ = [
    "HopfNormalForm",
    "HopfPoint",
    "LinearStability",
    "ModelParams",
    "ParameterSweep",
    "RawParams",
    "RegimeReport",
    "SimConfig",
    "Simulator",
    "equilibrium_from_b",
    "limits_infinity",
    "nondimensionalize",
    "normal_form",
    "regime_classify",
    "run",
    "__version__",
]
