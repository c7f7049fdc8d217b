"""
Hopf bifurcation points of the constant equilibrium and the regime classification.

With lam as the bifurcation parameter, mode n loses stability where its trace
T_n(lam) vanishes while D_n(lam) > 0. Mode 1 crosses at the two roots of
p2(lam) = c + (d1 + d2)/ell^2 and mode 0 at the two roots of p3(lam) = c; the
relative position of these roots organizes the possible regimes.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from scipy import optimize

from nonlocalhopf.model import ModelParams, b_from_lambda
from nonlocalhopf.stability import (
    BRACKET_INSET,
    ROOT_XTOL,
    CriticalPoints,
    LinearStability,
    Model,
    critical_points,
    p_curve,
    p_curve_derivative,
)

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]

BOUNDARY_RTOL = 1e-12


class DegenerateHopfError(ArithmeticError):
    """Exception raised when a Hopf point is degenerate or resonant."""

    pass


class Profile(str, Enum):
    """Spatial profile of the bifurcating periodic solutions."""

    HOMOGENEOUS = "homogeneous"
    NONHOMOGENEOUS = "nonhomogeneous"


class Branch(str, Enum):
    """Which root of a trace equation a point is: below or above the curve maximum."""

    MINUS = "minus"
    PLUS = "plus"


class RegimeCase(str, Enum):
    """
    Bifurcation regimes of the constant equilibrium.

    "strong"/"weak" competition means beta >= 1 or beta < 1 with no mode-0
    crossing. The "mode0-*" regimes have beta < 1 and two mode-0 roots; "above"
    and "below" place the upper mode-0 root relative to the maximizer of p2.
    """

    STRONG_STABLE = "strong-competition-stable"
    STRONG_MODE1 = "strong-competition-mode1"
    WEAK_STABLE = "weak-competition-stable"
    WEAK_MODE1 = "weak-competition-mode1"
    ABOVE_HOMOGENEOUS = "mode0-above-peak-homogeneous"
    ABOVE_INTERLACED = "mode0-above-peak-interlaced"
    ABOVE_MODE1_OUTER = "mode0-above-peak-mode1-outer"
    BELOW_HOMOGENEOUS = "mode0-below-peak-homogeneous"
    BELOW_SEPARATED = "mode0-below-peak-separated"
    BELOW_INTERLACED = "mode0-below-peak-interlaced"
    BELOW_MODE1_OUTER = "mode0-below-peak-mode1-outer"
    UNCLASSIFIED = "unclassified"


# Strict root orderings each regime guarantees; "l1-" is lambda_{1,-} and so on.
_CASE_ORDERINGS: Dict[RegimeCase, Tuple[str, ...]] = {
    RegimeCase.STRONG_MODE1: ("0", "l1-", "l2", "l1+", "1/beta"),
    RegimeCase.WEAK_MODE1: ("0", "l1-", "l2", "l1+", "1/beta"),
    RegimeCase.ABOVE_HOMOGENEOUS: ("0", "l0-", "l3", "l2", "l0+", "1/beta"),
    RegimeCase.ABOVE_INTERLACED: ("l0-", "l1-", "l2", "l0+", "l1+"),
    RegimeCase.ABOVE_MODE1_OUTER: ("l1-", "l0-", "l2", "l0+", "l1+"),
    RegimeCase.BELOW_HOMOGENEOUS: ("0", "l0-", "l3", "l0+", "l2"),
    RegimeCase.BELOW_SEPARATED: ("l0-", "l0+", "l1-", "l2", "l1+"),
    RegimeCase.BELOW_INTERLACED: ("l0-", "l1-", "l0+", "l2", "l1+"),
    RegimeCase.BELOW_MODE1_OUTER: ("l1-", "l0-", "l0+", "l2", "l1+"),
}


@dataclass(frozen=True)
class HopfPoint:
    """
    A Hopf bifurcation candidate of the constant equilibrium.

    Attributes:
        lam: Bifurcation value of lambda.
        mode: Spatial mode whose trace vanishes.
        omega: Crossing frequency sqrt(D_mode(lam)).
        transversality: Derivative of the real part of the crossing pair.
        profile: Homogeneous for mode 0, nonhomogeneous otherwise.
        b_equivalent: The predation parameter b at lam.
        branch: Root below ("minus") or above ("plus") the curve maximum.
        primary: False when another mode is already unstable at lam.
    """

    lam: float
    mode: int
    omega: float
    transversality: float
    profile: Profile
    b_equivalent: float
    branch: Branch
    primary: bool = True

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary."""
        return {
            "lambda": self.lam,
            "mode": self.mode,
            "omega": self.omega,
            "transversality": self.transversality,
            "profile": self.profile.value,
            "b_equivalent": self.b_equivalent,
            "branch": self.branch.value,
            "primary": self.primary,
        }


@dataclass(frozen=True)
class EllThresholds:
    """
    Spatial scales at which the mode-1 roots appear or pass the mode-0 roots.

    Attributes:
        ell_1: Smallest ell with mode-1 Hopf points, if p2(lambda2) > c.
        ell_tilde_plus: ell at which lambda_{0,+} is a mode-1 root.
        ell_tilde_minus: ell at which lambda_{0,-} is a mode-1 root.
    """

    ell_1: Optional[float]
    ell_tilde_plus: Optional[float]
    ell_tilde_minus: Optional[float]

    def to_dict(self) -> Dict[str, Optional[float]]:
        """Return a JSON-ready dictionary."""
        return {
            "ell_1": self.ell_1,
            "ell_tilde_plus": self.ell_tilde_plus,
            "ell_tilde_minus": self.ell_tilde_minus,
        }


@dataclass(frozen=True)
class RegimeReport:
    """
    Regime classification of the constant equilibrium over lambda in (0, 1/beta).

    Attributes:
        case: Selected regime.
        beta: Competition parameter, for mapping intervals to b.
        stable_intervals: Open lambda-intervals of local asymptotic stability.
        unstable_intervals: Open lambda-intervals of instability.
        hopf_points: Mode-0 and mode-1 points ordered by lambda.
        secondary_points: Higher-mode crossings, never primary.
        thresholds: The ell thresholds.
        critical: Maximizers of the auxiliary curves.
        degenerate_reasons: Threshold equalities met within tolerance.
    """

    case: RegimeCase
    beta: float
    stable_intervals: List[Interval] = field(default_factory=list)
    unstable_intervals: List[Interval] = field(default_factory=list)
    hopf_points: List[HopfPoint] = field(default_factory=list)
    secondary_points: List[HopfPoint] = field(default_factory=list)
    thresholds: Optional[EllThresholds] = None
    critical: Optional[CriticalPoints] = None
    degenerate_reasons: List[str] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        """True when a threshold equality was met."""
        return bool(self.degenerate_reasons)

    @property
    def unstable_interval(self) -> Optional[Interval]:
        """Convex hull of the unstable set, or None when stable everywhere."""
        if not self.unstable_intervals:
            return None
        return self.unstable_intervals[0][0], self.unstable_intervals[-1][1]

    @property
    def b_stable_intervals(self) -> List[Interval]:
        """Stable intervals in b-coordinates, ordered by b."""
        return sorted(_to_b_interval(self.beta, iv) for iv in self.stable_intervals)

    @property
    def b_unstable_intervals(self) -> List[Interval]:
        """Unstable intervals in b-coordinates, ordered by b."""
        return sorted(_to_b_interval(self.beta, iv) for iv in self.unstable_intervals)

    def to_dict(self) -> Dict[str, object]:
        """Return a JSON-ready dictionary."""
        crit = self.critical
        return {
            "case": self.case.value,
            "stable_intervals": [list(iv) for iv in self.stable_intervals],
            "unstable_intervals": [list(iv) for iv in self.unstable_intervals],
            "b_stable_intervals": [list(iv) for iv in self.b_stable_intervals],
            "b_unstable_intervals": [list(iv) for iv in self.b_unstable_intervals],
            "hopf_points": [p.to_dict() for p in self.hopf_points],
            "secondary_points": [p.to_dict() for p in self.secondary_points],
            "thresholds": self.thresholds.to_dict() if self.thresholds else None,
            "critical_points": (
                {"lambda1": crit.lambda1, "lambda2": crit.lambda2, "lambda3": crit.lambda3}
                if crit
                else None
            ),
            "degenerate": self.degenerate,
            "degenerate_reasons": list(self.degenerate_reasons),
        }


def _to_b_interval(beta: float, interval: Interval) -> Interval:
    lo, hi = interval
    b_hi = math.inf if lo <= 0.0 else b_from_lambda(beta, lo)
    b_lo = 0.0 if hi >= 1.0 / beta else b_from_lambda(beta, hi)
    return b_lo, b_hi


def _compare(value: float, threshold: float) -> int:
    """Three-way comparison with a relative tolerance; 0 means equal."""
    if abs(value - threshold) <= BOUNDARY_RTOL * max(abs(value), abs(threshold)):
        return 0
    return 1 if value > threshold else -1


def _bisect(func: Callable[[float], float], lo: float, hi: float) -> float:
    f_lo, f_hi = func(lo), func(hi)
    if f_lo * f_hi > 0:
        raise ArithmeticError(f"Invalid bracket ({lo!r}, {hi!r}): f={f_lo!r}, {f_hi!r}")
    root, result = optimize.bisect(func, lo, hi, xtol=ROOT_XTOL, full_output=True)
    logger.debug(f"Bisection on ({lo:.6g}, {hi:.6g}) -> {root!r} in {result.iterations} steps")
    return float(root)


def _trace_root_pair(
    analysis: LinearStability, n: int, peak: float
) -> Tuple[float, float]:
    """Bisect T_n = 0 on both sides of the trace maximizer."""
    beta = analysis.params.beta

    def trace(lam: float) -> float:
        return analysis.trace_T(n, lam)

    lower = _bisect(trace, BRACKET_INSET, peak - BRACKET_INSET)
    upper = _bisect(trace, peak + BRACKET_INSET, 1.0 / beta - BRACKET_INSET)
    return lower, upper


def make_hopf_point(
    analysis: LinearStability, lam: float, n: int, branch: Branch, primary: bool = True
) -> HopfPoint:
    """
    Build a HopfPoint for mode n at lam, filling in omega, transversality and b.

    Raises:
        DegenerateHopfError: If D_n(lam) <= 0, so the crossing is not a Hopf point.
    """
    p = analysis.params
    curve = 3 if (n == 0 or analysis.model is Model.LOCAL) else 2
    det = analysis.det_D(n, lam)
    if not det > 0.0:
        raise DegenerateHopfError(
            f"Mode-{n} determinant D_{n}({lam!r}) = {det!r} is not positive; no Hopf point"
        )
    return HopfPoint(
        lam=lam,
        mode=n,
        omega=math.sqrt(det),
        transversality=p_curve_derivative(curve, lam, p.beta, p.c) / 2.0,
        profile=Profile.HOMOGENEOUS if n == 0 else Profile.NONHOMOGENEOUS,
        b_equivalent=b_from_lambda(p.beta, lam),
        branch=branch,
        primary=primary,
    )


def ell_thresholds(params: ModelParams) -> EllThresholds:
    """
    Compute the ell thresholds of the regime classification.

    ell_1 = sqrt((d1 + d2)/(p2(lambda2) - c)) when p2(lambda2) > c, and
    ell~_1^(+/-) = sqrt((d1 + d2)/(beta lambda_{0,+/-})) when mode-0 roots exist.

    Args:
        params: Model parameters.

    Returns:
        The thresholds, absent where their premise fails.
    """
    crit = critical_points(params.beta)
    gap = p_curve(2, crit.lambda2, params.beta, params.c) - params.c
    ell_1 = math.sqrt((params.d1 + params.d2) / gap) if gap > 0 else None

    mode0 = hopf_points_mode0(params)
    if mode0 is None:
        return EllThresholds(ell_1=ell_1, ell_tilde_plus=None, ell_tilde_minus=None)
    lam_minus, lam_plus = mode0
    diffusion = params.d1 + params.d2
    return EllThresholds(
        ell_1=ell_1,
        ell_tilde_plus=math.sqrt(diffusion / (params.beta * lam_plus)),
        ell_tilde_minus=math.sqrt(diffusion / (params.beta * lam_minus)),
    )


def hopf_points_mode1(params: ModelParams) -> Optional[Tuple[float, float]]:
    """
    Locate the mode-1 Hopf points (lambda_{1,-}, lambda_{1,+}).

    Args:
        params: Model parameters.

    Returns:
        The pair straddling lambda2, or None unless c < p2(lambda2) and ell > ell_1.
    """
    lambda2 = critical_points(params.beta).lambda2
    peak = p_curve(2, lambda2, params.beta, params.c)
    if params.c >= peak:
        return None
    ell_1 = math.sqrt((params.d1 + params.d2) / (peak - params.c))
    if _compare(params.ell, ell_1) <= 0:
        return None
    return _trace_root_pair(LinearStability(params), 1, lambda2)


def hopf_points_mode0(params: ModelParams) -> Optional[Tuple[float, float]]:
    """
    Locate the mode-0 Hopf points (lambda_{0,-}, lambda_{0,+}).

    Args:
        params: Model parameters.

    Returns:
        The pair straddling lambda3, or None unless beta < 1 and c < p3(lambda3).
    """
    if params.beta >= 1.0:
        return None
    lambda3 = critical_points(params.beta).lambda3
    assert lambda3 is not None
    if _compare(params.c, p_curve(3, lambda3, params.beta, params.c)) >= 0:
        return None
    return _trace_root_pair(LinearStability(params), 0, lambda3)


def transversality(point: HopfPoint, params: ModelParams) -> float:
    """
    Derivative of the real part of the crossing eigenvalue pair.

    Equals p2'(lam)/2 at mode n >= 1 and p3'(lam)/2 at mode 0.
    """
    curve = 3 if point.mode == 0 else 2
    return p_curve_derivative(curve, point.lam, params.beta, params.c) / 2.0


def _secondary_points(analysis: LinearStability, lambda2: float) -> List[HopfPoint]:
    points: List[HopfPoint] = []
    for n in range(2, analysis.mode_cutoff() + 1):
        if analysis.trace_T(n, lambda2) <= 0.0:
            break
        lower, upper = _trace_root_pair(analysis, n, lambda2)
        points.append(make_hopf_point(analysis, lower, n, Branch.MINUS, primary=False))
        points.append(make_hopf_point(analysis, upper, n, Branch.PLUS, primary=False))
        logger.warning(
            f"Mode {n} crosses at {lower:.6g} and {upper:.6g}; not a primary bifurcation"
        )
    return points


def _merge(intervals: Sequence[Interval]) -> List[Interval]:
    merged: List[Interval] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def _complement(intervals: Sequence[Interval], upper: float) -> List[Interval]:
    result: List[Interval] = []
    start = 0.0
    for lo, hi in intervals:
        if lo > start:
            result.append((start, lo))
        start = hi
    if start < upper:
        result.append((start, upper))
    return result


def _select_case(
    params: ModelParams,
    crit: CriticalPoints,
    thresholds: EllThresholds,
    mode0: Optional[Interval],
    reasons: List[str],
) -> RegimeCase:
    c, ell = params.c, params.ell
    p2_peak = p_curve(2, crit.lambda2, params.beta, c)

    def below_ell_1() -> bool:
        if thresholds.ell_1 is None:
            if _compare(c, p2_peak) == 0:
                reasons.append("c equals p2(lambda2)")
            return True
        side = _compare(ell, thresholds.ell_1)
        if side == 0:
            reasons.append("ell equals ell_1")
        return side <= 0

    if params.beta >= 1.0 or mode0 is None:
        strong = params.beta >= 1.0
        if not strong and crit.lambda3 is not None:
            if _compare(c, p_curve(3, crit.lambda3, params.beta, c)) == 0:
                reasons.append("c equals p3(lambda3)")
        if below_ell_1():
            return RegimeCase.STRONG_STABLE if strong else RegimeCase.WEAK_STABLE
        return RegimeCase.STRONG_MODE1 if strong else RegimeCase.WEAK_MODE1

    assert thresholds.ell_tilde_plus is not None and thresholds.ell_tilde_minus is not None
    side_plus = _compare(ell, thresholds.ell_tilde_plus)
    side_minus = _compare(ell, thresholds.ell_tilde_minus)
    if side_plus == 0:
        reasons.append("ell equals ell_tilde_plus")
    if side_minus == 0:
        reasons.append("ell equals ell_tilde_minus")

    upper_side = _compare(mode0[1], crit.lambda2)
    if upper_side == 0:
        reasons.append("lambda_{0,+} equals lambda2")
    if upper_side >= 0:
        if side_plus <= 0:
            return RegimeCase.ABOVE_HOMOGENEOUS
        if side_minus <= 0:
            return RegimeCase.ABOVE_INTERLACED
        return RegimeCase.ABOVE_MODE1_OUTER
    if below_ell_1():
        return RegimeCase.BELOW_HOMOGENEOUS
    if side_plus <= 0:
        return RegimeCase.BELOW_SEPARATED
    if side_minus <= 0:
        return RegimeCase.BELOW_INTERLACED
    return RegimeCase.BELOW_MODE1_OUTER


def _check_ordering(
    case: RegimeCase,
    beta: float,
    crit: CriticalPoints,
    mode0: Optional[Interval],
    mode1: Optional[Interval],
) -> None:
    keys = _CASE_ORDERINGS.get(case)
    if keys is None:
        return
    values: Dict[str, Optional[float]] = {"0": 0.0, "1/beta": 1.0 / beta, "l2": crit.lambda2}
    values["l3"] = crit.lambda3
    values["l0-"], values["l0+"] = mode0 if mode0 else (None, None)
    values["l1-"], values["l1+"] = mode1 if mode1 else (None, None)
    chain = [values[key] for key in keys if values[key] is not None]
    if case is RegimeCase.ABOVE_HOMOGENEOUS and mode1 is not None:
        chain = [values[k] for k in ("l0-", "l1-", "l2", "l1+", "l0+")]
    if any(a >= b for a, b in zip(chain, chain[1:])):  # type: ignore[operator]
        raise ArithmeticError(f"Root ordering of regime {case.value} violated: {chain}")


def determinant_threshold(params: ModelParams) -> float:
    """Return p1(lambda1); every mode determinant is positive when d1/d2 exceeds it."""
    return p_curve(1, critical_points(params.beta).lambda1, params.beta, params.c)


def regime_classify(params: ModelParams) -> RegimeReport:
    """
    Classify the stability regime of the constant equilibrium over lambda.

    Requires d1/d2 > p1(lambda1), which keeps every determinant positive; otherwise an
    unclassified report without intervals is returned. Equalities at the thresholds
    are classified on the non-bifurcating (smaller-ell) side and flagged.

    Args:
        params: Model parameters; b is not used.

    Returns:
        The regime report.
    """
    crit = critical_points(params.beta)
    if params.d1 / params.d2 <= determinant_threshold(params):
        logger.warning(
            f"d1/d2={params.d1 / params.d2:.6g} <= p1(lambda1); outside the analyzed regime"
        )
        return RegimeReport(case=RegimeCase.UNCLASSIFIED, beta=params.beta, critical=crit)

    analysis = LinearStability(params)
    thresholds = ell_thresholds(params)
    mode0 = hopf_points_mode0(params)
    mode1 = hopf_points_mode1(params)

    reasons: List[str] = []
    case = _select_case(params, crit, thresholds, mode0, reasons)
    if not reasons:
        _check_ordering(case, params.beta, crit, mode0, mode1)

    unstable = _merge([iv for iv in (mode0, mode1) if iv is not None])
    stable = _complement(unstable, 1.0 / params.beta)

    points: List[HopfPoint] = []
    for n, pair, other in ((0, mode0, mode1), (1, mode1, mode0)):
        if pair is None:
            continue
        for lam, branch in zip(pair, (Branch.MINUS, Branch.PLUS)):
            primary = other is None or not (other[0] < lam < other[1])
            points.append(make_hopf_point(analysis, lam, n, branch, primary))
    points.sort(key=lambda point: point.lam)

    secondary = _secondary_points(analysis, crit.lambda2)
    for reason in reasons:
        logger.warning(f"Degenerate boundary: {reason}")
    logger.info(
        f"Regime {case.value}: {len(points)} Hopf points, unstable on {unstable or 'nothing'}"
    )
    return RegimeReport(
        case=case,
        beta=params.beta,
        stable_intervals=stable,
        unstable_intervals=unstable,
        hopf_points=points,
        secondary_points=secondary,
        thresholds=thresholds,
        critical=crit,
        degenerate_reasons=reasons,
    )


def local_hopf_points(params: ModelParams) -> List[HopfPoint]:
    """
    Hopf points of the model with pointwise (local) prey competition.

    Every mode n up to the cutoff crosses at the roots of p3(lam) = c + (d1 + d2) n^2/ell^2
    where the local determinant is positive; p3 < 0 throughout (0, 1/beta) for beta >= 1,
    so none exist there.

    Args:
        params: Model parameters.

    Returns:
        Points ordered by lambda; only mode-0 points are primary.
    """
    if params.beta >= 1.0:
        return []
    lambda3 = critical_points(params.beta).lambda3
    assert lambda3 is not None
    analysis = LinearStability(params, Model.LOCAL)
    points: List[HopfPoint] = []
    for n in range(analysis.mode_cutoff() + 1):
        if analysis.trace_T(n, lambda3) <= 0.0:
            break
        for lam, branch in zip(_trace_root_pair(analysis, n, lambda3), (Branch.MINUS, Branch.PLUS)):
            if analysis.det_D(n, lam) > 0.0:
                points.append(make_hopf_point(analysis, lam, n, branch, primary=(n == 0)))
    return sorted(points, key=lambda point: point.lam)
