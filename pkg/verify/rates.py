"""Rate fitting for error sequences indexed by iteration m."""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from config.constants import MIN_FIT_POINTS
from utils.errors import InvalidParameterError, WindowTooSmallError

logger = logging.getLogger(__name__)

DECAY_POWER = "power"
DECAY_EXPONENTIAL = "exponential"


@dataclass
class RateFit:
    """Least-squares line through the window's points (log-log or semi-log)."""

    window: Tuple[int, int]
    slope: float
    intercept: float
    r_squared: float
    points: int

    def as_dict(self) -> dict:
        return {
            "window": list(self.window),
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": self.points,
        }


@dataclass
class ExponentialFit:
    """log(value) ~ intercept + m log(rate)."""

    window: Tuple[int, int]
    rate: float
    r_squared: float
    points: int


def _window_points(values: Sequence[float], window: Tuple[int, int], floor: float):
    """
    (m, value) pairs with m_lo <= m <= m_hi, cut at the first value <= floor.

    values[m] is the error after m iterations (values[0] is the initial one).
    """
    m_lo, m_hi = window
    if m_lo < 0 or m_hi <= m_lo:
        raise InvalidParameterError("window", f"need 0 <= m_lo < m_hi, got {window}")
    ms = []
    vs = []
    for m in range(m_lo, min(m_hi, len(values) - 1) + 1):
        value = float(values[m])
        if not math.isfinite(value) or value <= floor:
            break
        ms.append(m)
        vs.append(value)
    if len(ms) < MIN_FIT_POINTS:
        raise WindowTooSmallError(len(ms), MIN_FIT_POINTS)
    return np.array(ms, dtype=float), np.array(vs)


def fit_rate(values: Sequence[float], window: Tuple[int, int], floor: float = 0.0) -> RateFit:
    """
    Slope of log(value) against log(m) over the window.

    Args:
        values: Error sequence indexed by m
        window: Inclusive (m_lo, m_hi) with m_lo >= 1
        floor: Values at or below it end the window

    Returns:
        RateFit over the truncated window

    Raises:
        WindowTooSmallError: If fewer than 8 points survive truncation
    """
    if window[0] < 1:
        raise InvalidParameterError("window", "log-log fits need m_lo >= 1")
    ms, vs = _window_points(values, window, floor)
    fit = stats.linregress(np.log(ms), np.log(vs))
    result = RateFit(
        window=(int(ms[0]), int(ms[-1])),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        points=ms.size,
    )
    logger.debug(f"Rate fit on m in {result.window}: slope={result.slope:.4f} r2={result.r_squared:.4f}")
    return result


def fit_exponential(values: Sequence[float], window: Tuple[int, int], floor: float = 0.0) -> ExponentialFit:
    """Geometric rate exp(slope) of log(value) against m over the window."""
    ms, vs = _window_points(values, window, floor)
    fit = stats.linregress(ms, np.log(vs))
    return ExponentialFit(
        window=(int(ms[0]), int(ms[-1])),
        rate=float(math.exp(fit.slope)),
        r_squared=float(fit.rvalue ** 2),
        points=ms.size,
    )


def classify_decay(values: Sequence[float], window: Tuple[int, int], floor: float = 0.0) -> str:
    """'power' or 'exponential', whichever line fits better."""
    power = fit_rate(values, window, floor)
    geometric = fit_exponential(values, window, floor)
    return DECAY_EXPONENTIAL if geometric.r_squared > power.r_squared else DECAY_POWER


@dataclass
class ExponentialReport:
    factor: float
    passed: bool
    first_violation: Optional[int]
    worst_ratio: float

    def as_dict(self) -> dict:
        return {
            "factor": self.factor,
            "pass": self.passed,
            "first_violation": self.first_violation,
            "worst_ratio": self.worst_ratio,
        }


def check_exponential(values: Sequence[float], factor: float, slack: float = 1e-9) -> ExponentialReport:
    """
    Check value_m <= factor^m value_0 (1 + slack) for every m.

    Args:
        values: Sequence indexed by m
        factor: Contraction factor in (0, 1)
        slack: Relative slack

    Returns:
        ExponentialReport; worst_ratio is max value_m / (factor^m value_0)
    """
    if not 0.0 < factor < 1.0:
        raise InvalidParameterError("factor", "must lie in (0, 1)")
    values = np.asarray(values, dtype=float)
    bounds = values[0] * factor ** np.arange(values.size)
    first = None
    worst = 0.0
    for m in range(values.size):
        if values[m] > bounds[m] * (1.0 + slack):
            first = m if first is None else first
        if bounds[m] > 0:
            worst = max(worst, float(values[m] / bounds[m]))
    passed = first is None
    if not passed:
        logger.info(f"Exponential bound {factor:.6f}^m broken first at m={first}")
    return ExponentialReport(factor=factor, passed=passed, first_violation=first, worst_ratio=worst)
