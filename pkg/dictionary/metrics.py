"""Dictionary geometry: coherence and the beta parameter."""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import optimize, special

from config.constants import BETA_BRUTEFORCE, BETA_CANONICAL, BETA_MULTISTART
from config.settings import settings
from dictionary.atoms import Dictionary
from utils.errors import InvalidParameterError
from utils.validators import require, validate_positive_int

logger = logging.getLogger(__name__)

GRID_CHUNK = 65536


@dataclass(frozen=True, eq=False)
class BetaEstimate:
    """Bracket on beta(D, X) = min over unit F of max_g |F(g)|."""

    upper: float
    lower: Optional[float]
    method: str
    grid_tol: Optional[float] = None
    argmin: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.lower is not None and not 0.0 <= self.lower <= self.upper + 1e-15:
            raise InvalidParameterError("beta", f"inconsistent bracket [{self.lower}, {self.upper}]")

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "lower": self.lower,
            "upper": self.upper,
            "grid_tol": self.grid_tol,
        }


def normalized_atoms(D: Dictionary) -> np.ndarray:
    """Columns rescaled to unit Euclidean norm (zero columns left as is)."""
    norms = np.linalg.norm(D.atoms, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    return D.atoms / safe


def is_euclidean_normalized(D: Dictionary, tol: float = 1e-12) -> bool:
    return bool(np.all(np.abs(np.linalg.norm(D.atoms, axis=0) - 1.0) <= tol))


def coherence_report(D: Dictionary) -> Tuple[float, bool]:
    """
    M(D) = max over k != l of |<g^k, g^l>| for Euclidean-normalized atoms.

    Returns:
        Tuple of (coherence, renormalized); renormalized is True when atoms
        had to be rescaled to unit length for the inner products
    """
    renormalized = not is_euclidean_normalized(D)
    if D.N == 1:
        return 0.0, renormalized
    if renormalized:
        logger.info(f"Renormalizing atoms of {D.label} for coherence")
    G = normalized_atoms(D)
    gram = np.abs(G.T @ G)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max()), renormalized


def coherence(D: Dictionary) -> float:
    """Mutual coherence M(D); see coherence_report for the renormalization flag."""
    return coherence_report(D)[0]


def _require_grid_scope(D: Dictionary):
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", "beta grid oracle is implemented for p = 2 only")
    if D.d not in (2, 3):
        raise InvalidParameterError("d", "beta grid oracle supports d in {2, 3}")


def circle_grid(n: int) -> np.ndarray:
    """n unit covectors at angles k*pi/n; F -> max|F(g)| is even so a half circle suffices."""
    angles = np.pi * np.arange(n) / n
    return np.vstack([np.cos(angles), np.sin(angles)]).T


def fibonacci_sphere(n: int) -> np.ndarray:
    """Spherical Fibonacci lattice of n points on S^2, one point per row."""
    index = np.arange(n, dtype=float)
    y = 1.0 - (2.0 * index + 1.0) / n
    radius = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    phi = index * math.pi * (3.0 - math.sqrt(5.0))
    return np.vstack([np.cos(phi) * radius, y, np.sin(phi) * radius]).T


def grid_slack(d: int, n: int) -> float:
    """
    Upper bound on the distance from any unit covector to the grid.

    d = 2: half the angular spacing pi/n bounds the chord. d = 3: twice
    the side of a square with the lattice's area per point, sqrt(4 pi / n).
    """
    if d == 2:
        return math.pi / (2.0 * n)
    return 2.0 * math.sqrt(4.0 * math.pi / n)


def _max_abs_correlation(covectors: np.ndarray, atoms: np.ndarray) -> np.ndarray:
    values = np.empty(covectors.shape[0])
    for start in range(0, covectors.shape[0], GRID_CHUNK):
        block = covectors[start:start + GRID_CHUNK]
        values[start:start + GRID_CHUNK] = np.max(np.abs(block @ atoms), axis=1)
    return values


def beta_bruteforce(D: Dictionary, grid_resolution: Optional[int] = None,
                    polish: bool = True) -> BetaEstimate:
    """
    Certified two-sided bracket on beta for l_2^2 and l_2^3.

    Evaluates h(F) = max_g |<F, g>| on a uniform grid of unit covectors.
    Because h is 1-Lipschitz (||g|| <= 1), the grid minimum minus the grid's
    gap bound is a lower bound; the grid minimum (optionally improved by a
    local polish from the best grid point) is an upper bound.

    Args:
        D: Dictionary in l_2^d, d in {2, 3}
        grid_resolution: Number of grid covectors (defaults from settings)
        polish: Refine the upper end from the best grid point

    Returns:
        BetaEstimate with method bruteforce_grid
    """
    _require_grid_scope(D)
    if grid_resolution is None:
        grid_resolution = settings.BETA_GRID_2D if D.d == 2 else settings.BETA_GRID_3D
    n = require(validate_positive_int(grid_resolution, "grid_resolution"), "grid_resolution")

    grid = circle_grid(n) if D.d == 2 else fibonacci_sphere(n)
    values = _max_abs_correlation(grid, D.atoms)
    best = int(np.argmin(values))
    upper = float(values[best])
    argmin = grid[best]
    slack = grid_slack(D.d, n)

    if polish and upper > 0:
        polished, point = _polish(D.atoms, grid[best])
        if polished < upper:
            upper, argmin = polished, point

    lower = max(0.0, float(values[best]) - slack)
    lower = min(lower, upper)
    logger.debug(f"beta grid ({D.label}, n={n}): [{lower:.6f}, {upper:.6f}]")
    return BetaEstimate(upper=upper, lower=lower, method=BETA_BRUTEFORCE, grid_tol=slack, argmin=argmin)


def _soft_max_objective(z: np.ndarray, atoms: np.ndarray, tau: float):
    size = np.linalg.norm(z)
    F = z / size
    c = atoms.T @ F
    scores = tau * np.concatenate([c, -c])
    value = special.logsumexp(scores) / tau
    weights = special.softmax(scores)
    n = c.size
    grad_F = atoms @ (weights[:n] - weights[n:])
    grad_z = (grad_F - F * (F @ grad_F)) / size
    return value, grad_z


def _exact_h(atoms: np.ndarray, F: np.ndarray) -> float:
    F = F / np.linalg.norm(F)
    return float(np.max(np.abs(atoms.T @ F)))


def _polish(atoms: np.ndarray, start: np.ndarray, taus=(30.0, 300.0, 3000.0, 30000.0)):
    """Soft-max continuation from a starting covector; returns (h, F) of the best iterate."""
    z = np.array(start, dtype=float)
    best_F = z / np.linalg.norm(z)
    best = _exact_h(atoms, best_F)
    for tau in taus:
        result = optimize.minimize(
            _soft_max_objective, z, args=(atoms, tau), jac=True,
            method="L-BFGS-B", options={"maxiter": 500, "gtol": 1e-14, "ftol": 1e-16},
        )
        z = result.x / np.linalg.norm(result.x)
        value = _exact_h(atoms, z)
        if value < best:
            best, best_F = value, z
    return best, best_F


def _subgradient_descent(atoms: np.ndarray, F: np.ndarray, steps: int = 200, step0: float = 0.5):
    best_F = F
    best = _exact_h(atoms, F)
    for k in range(1, steps + 1):
        c = atoms.T @ F
        j = int(np.argmax(np.abs(c)))
        g = np.sign(c[j]) * atoms[:, j]
        tangent = g - F * (F @ g)
        size = np.linalg.norm(tangent)
        if size == 0:
            break
        F = F - (step0 / math.sqrt(k)) * tangent / size
        F = F / np.linalg.norm(F)
        value = _exact_h(atoms, F)
        if value < best:
            best, best_F = value, F
    return best, best_F


def beta_upper(D: Dictionary, restarts: int = 64, seed: Optional[int] = None) -> BetaEstimate:
    """
    Heuristic upper bound on beta by multistart local minimization.

    Each restart runs projected subgradient steps on the unit sphere and then
    a soft-max polish. Any unit covector gives an upper bound, so the best
    value found is returned; no lower bound is claimed.

    Args:
        D: Dictionary in l_2^d
        restarts: Number of random starting covectors
        seed: Generator seed

    Returns:
        BetaEstimate with method multistart_descent
    """
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", "beta estimation is implemented for p = 2 only")
    restarts = require(validate_positive_int(restarts, "restarts"), "restarts")
    rng = np.random.default_rng(seed)
    best = math.inf
    best_F = None
    for _ in range(restarts):
        F = rng.standard_normal(D.d)
        F /= np.linalg.norm(F)
        value, F = _subgradient_descent(D.atoms, F)
        polished, polished_F = _polish(D.atoms, F)
        if polished < value:
            value, F = polished, polished_F
        if value < best:
            best, best_F = value, F
    logger.debug(f"beta multistart ({D.label}, {restarts} restarts): upper={best:.6f}")
    return BetaEstimate(upper=float(best), lower=None, method=BETA_MULTISTART, argmin=best_F)


def beta_canonical(d: int) -> BetaEstimate:
    """Exact beta = d^(-1/2) of the canonical basis of l_2^d."""
    value = d ** -0.5
    return BetaEstimate(upper=value, lower=value, method=BETA_CANONICAL, grid_tol=0.0)


def best_beta(D: Dictionary, seed: Optional[int] = None) -> BetaEstimate:
    """Grid bracket when d <= 3, multistart upper bound otherwise."""
    if D.d in (2, 3):
        return beta_bruteforce(D)
    return beta_upper(D, seed=seed)


def beta_cardinality_bound(d: int, a: float) -> float:
    """
    Upper bound (2(a ln d + ln 2) / d)^(1/2) on beta for |D| <= d^a.

    Vacuous when it exceeds 1.
    """
    if a < 1:
        raise InvalidParameterError("a", "must be at least 1")
    if d < 2:
        raise InvalidParameterError("d", "must be at least 2")
    return math.sqrt(2.0 * (a * math.log(d) + math.log(2.0)) / d)
