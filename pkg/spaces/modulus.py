"""Empirical modulus of smoothness and power-law fitting."""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from config.constants import NORM_TOL
from spaces.norms import lp_norm
from spaces.space import SmoothSpace
from utils.errors import InvalidParameterError, SmoothnessViolationError

logger = logging.getLogger(__name__)


@dataclass
class ModulusEstimate:
    """Table of (u, empirical modulus) with the declared majorant."""

    rows: List[Tuple[float, float]]
    gamma: float
    q: float
    violations: List[Tuple[float, float, float]] = field(default_factory=list)

    @property
    def dominated(self) -> bool:
        return not self.violations

    def require_dominated(self):
        """
        Raises:
            SmoothnessViolationError: At the first grid point the majorant misses
        """
        if self.violations:
            u, observed, bound = self.violations[0]
            raise SmoothnessViolationError(u, observed, bound)

    def fit_exponent(self) -> float:
        """Slope of log(rho) against log(u) over rows with u > 0 and rho > 0."""
        return fit_power_exponent([u for u, _ in self.rows], [r for _, r in self.rows])


def fit_power_exponent(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Least-squares slope in log-log coordinates.

    Args:
        xs: Abscissae (positive entries are used)
        ys: Ordinates (positive entries are used)

    Returns:
        Fitted exponent
    """
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        raise InvalidParameterError("grid", "need two positive points to fit an exponent")
    logx = np.log([x for x, _ in pts])
    logy = np.log([y for _, y in pts])
    return float(stats.linregress(logx, logy).slope)


def _unit_rows(rng: np.random.Generator, n: int, d: int, p: float) -> np.ndarray:
    raw = rng.standard_normal((n, d))
    sizes = lp_norm(raw.T, p, axis=0)
    return raw / sizes[:, None]


def _structured_pairs(d: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Coordinate pairs; in l_p with p < 2 they realize the extremal modulus."""
    if d < 2:
        return []
    e1 = np.zeros(d)
    e1[0] = 1.0
    e2 = np.zeros(d)
    e2[1] = 1.0
    return [(e1, e2)]


def sup_symmetric_difference(evaluate: Callable[[np.ndarray], np.ndarray],
                             xs: np.ndarray, ys: np.ndarray, u: float,
                             baseline: np.ndarray) -> float:
    """
    max over sample pairs of (f(x+uy) + f(x-uy)) / 2 - f(x).

    Args:
        evaluate: Row-wise function of an (n, d) array
        xs: Base points, one per row
        ys: Directions, one per row
        u: Step
        baseline: evaluate(xs), precomputed

    Returns:
        Largest observed half second difference
    """
    plus = evaluate(xs + u * ys)
    minus = evaluate(xs - u * ys)
    return float(np.max(0.5 * (plus + minus) - baseline))


def estimate_modulus(sp: SmoothSpace, u_grid: Sequence[float], n_samples: int,
                     seed: Optional[int] = None) -> ModulusEstimate:
    """
    Empirical rho(u) = sup 1/2(||x+uy|| + ||x-uy||) - 1 over unit x, y.

    Args:
        sp: Space whose declared (gamma, q) are checked
        u_grid: Non-negative step sizes
        n_samples: Random unit pairs per step
        seed: Generator seed

    Returns:
        ModulusEstimate with violations of rho <= gamma*u^q + 1e-12 recorded
    """
    if n_samples < 1:
        raise InvalidParameterError("n_samples", "must be at least 1")
    grid = [float(u) for u in u_grid]
    if any(u < 0 for u in grid):
        raise InvalidParameterError("u_grid", "steps must be non-negative")

    rng = np.random.default_rng(seed)
    xs = _unit_rows(rng, n_samples, sp.d, sp.p)
    ys = _unit_rows(rng, n_samples, sp.d, sp.p)
    for x, y in _structured_pairs(sp.d):
        xs = np.vstack([xs, x])
        ys = np.vstack([ys, y])

    def evaluate(points: np.ndarray) -> np.ndarray:
        return lp_norm(points.T, sp.p, axis=0)

    baseline = evaluate(xs)
    rows: List[Tuple[float, float]] = []
    violations: List[Tuple[float, float, float]] = []
    for u in grid:
        rho = 0.0 if u == 0 else max(0.0, sup_symmetric_difference(evaluate, xs, ys, u, baseline))
        bound = sp.majorant(u)
        rows.append((u, rho))
        if rho > bound + NORM_TOL:
            violations.append((u, rho, bound))
            logger.warning(f"Modulus {rho:.3e} exceeds gamma*u^q={bound:.3e} at u={u} (p={sp.p})")

    logger.debug(f"Estimated modulus on {len(grid)} steps with {xs.shape[0]} pairs (p={sp.p})")
    return ModulusEstimate(rows=rows, gamma=sp.gamma, q=sp.q, violations=violations)
