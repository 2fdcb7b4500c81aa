"""Norms, dual pairings and norming (peak) functionals in l_p."""
import logging
from typing import Sequence

import numpy as np

from config.constants import FD_STEP
from spaces.space import Covector, SmoothSpace, Vector, dual_exponent
from utils.errors import InvalidParameterError, ZeroVectorError

logger = logging.getLogger(__name__)


def lp_norm(arr: np.ndarray, p: float, axis=None) -> np.ndarray:
    """Scaled l_p norm; immune to overflow for large entries."""
    if p == 2.0:
        return np.linalg.norm(arr, axis=axis)
    scale = np.max(np.abs(arr), axis=axis, keepdims=axis is not None)
    safe = np.where(scale > 0, scale, 1.0)
    value = safe * np.sum(np.abs(arr / safe) ** p, axis=axis, keepdims=axis is not None) ** (1.0 / p)
    value = np.where(scale > 0, value, 0.0)
    if axis is None:
        return float(value)
    return np.squeeze(value, axis=axis)


def norm(x: Vector, sp: SmoothSpace) -> float:
    """
    l_p norm (sum |x_i|^p)^(1/p).

    Args:
        x: Vector of dimension sp.d
        sp: Ambient space

    Returns:
        Non-negative norm, zero iff x = 0
    """
    arr = sp.check_vector(x)
    return float(lp_norm(arr, sp.p))


def column_norms(atoms: np.ndarray, sp: SmoothSpace) -> np.ndarray:
    """Norms of the columns of a d x N matrix."""
    return np.asarray(lp_norm(np.asarray(atoms, dtype=float), sp.p, axis=0), dtype=float)


def dual_norm(F: Covector, sp: SmoothSpace) -> float:
    """Dual norm ||F||_{p'} under the coordinate pairing."""
    arr = sp.check_vector(F, "F")
    return float(lp_norm(arr, dual_exponent(sp.p)))


def pair(F: Covector, x: Vector) -> float:
    """Standard coordinate pairing F(x)."""
    return float(np.dot(F, x))


def norming_functional(x: Vector, sp: SmoothSpace) -> Covector:
    """
    Norming (peak) functional F_x with F_x(x) = ||x|| and ||F_x|| = 1.

    In l_p it is x|x|^(p-2) ||x||^(1-p); in l_2 it reduces to x / ||x||.

    Raises:
        ZeroVectorError: For x = 0
    """
    arr = sp.check_vector(x)
    size = lp_norm(arr, sp.p)
    if size == 0:
        raise ZeroVectorError("norming functional is undefined at the zero vector")
    unit = arr / size
    if sp.is_euclidean:
        return unit
    return np.sign(unit) * np.abs(unit) ** (sp.p - 1.0)


def directional_derivative(x: Vector, y: Vector, sp: SmoothSpace, u: float = FD_STEP) -> float:
    """
    Central difference (||x+uy|| - ||x-uy||) / (2u).

    Converges to F_x(y) as u -> 0 for x != 0.
    """
    arr = sp.check_vector(x)
    direction = sp.check_vector(y, "y")
    if u <= 0:
        raise InvalidParameterError("u", "step must be positive")
    if lp_norm(arr, sp.p) == 0:
        raise ZeroVectorError("directional derivative of the norm is undefined at zero")
    forward = lp_norm(arr + u * direction, sp.p)
    backward = lp_norm(arr - u * direction, sp.p)
    return float((forward - backward) / (2.0 * u))


def convexity_defect(x: Vector, y: Vector, sp: SmoothSpace, u_grid: Sequence[float]) -> float:
    """
    Smallest second divided difference of u -> ||x + u y|| on a grid.

    A convex profile gives a value >= 0 up to round-off.
    """
    arr = sp.check_vector(x)
    direction = sp.check_vector(y, "y")
    grid = np.sort(np.asarray(u_grid, dtype=float))
    if grid.size < 3:
        raise InvalidParameterError("u_grid", "need at least three points")
    values = np.array([lp_norm(arr + u * direction, sp.p) for u in grid])
    slopes = np.diff(values) / np.diff(grid)
    curvature = np.diff(slopes) / (grid[2:] - grid[:-2])
    return float(np.min(curvature))
