"""Seeded target generators for the verification experiments."""
import logging
from typing import Optional, Tuple

import numpy as np

from dictionary.atoms import Dictionary
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)


def a1_target(D: Dictionary, n_atoms: int, budget: float = 1.0,
              rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    budget times a random convex combination of n_atoms signed atoms.

    The result lies in budget * A_1(D).
    """
    rng = rng or np.random.default_rng()
    if not 1 <= n_atoms <= D.N:
        raise InvalidParameterError("target.n_atoms", f"must lie in [1, {D.N}]")
    columns = rng.choice(D.N, size=n_atoms, replace=False)
    signs = rng.choice([-1.0, 1.0], size=n_atoms)
    weights = rng.dirichlet(np.ones(n_atoms))
    return budget * (D.atoms[:, columns] @ (signs * weights))


def power_law_target(D: Dictionary, exponent: float = 1.0, budget: float = 1.0,
                     rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    budget times sum_k w_k s_k g^{pi(k)} over every atom, w_k proportional to k^-exponent.

    Weights sum to one, so the result lies in budget * A_1(D); its m-term
    tails decay like m^(1/2 - exponent).
    """
    rng = rng or np.random.default_rng()
    if exponent <= 0.5:
        raise InvalidParameterError("exponent", "must exceed 1/2")
    weights = np.arange(1, D.N + 1, dtype=float) ** -exponent
    weights /= weights.sum()
    order = rng.permutation(D.N)
    signs = rng.choice([-1.0, 1.0], size=D.N)
    return budget * (D.atoms[:, order] @ (signs * weights))


def perturb(f: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
    """f plus a random Euclidean perturbation of norm eps."""
    if eps <= 0:
        return f.copy()
    direction = rng.standard_normal(f.size)
    return f + eps * direction / np.linalg.norm(direction)


def sparse_target(D: Dictionary, m: int, rng: Optional[np.random.Generator] = None
                  ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Exactly m-sparse target with coefficient magnitudes in [1, 2] and random signs.

    Returns:
        Tuple of (f0, support as 0-based indices, coefficients)
    """
    rng = rng or np.random.default_rng()
    if not 1 <= m <= D.N:
        raise InvalidParameterError("target.sparsity", f"must lie in [1, {D.N}]")
    support = np.sort(rng.choice(D.N, size=m, replace=False))
    coefficients = rng.choice([-1.0, 1.0], size=m) * (1.0 + rng.random(m))
    return D.atoms[:, support] @ coefficients, support, coefficients


def gaussian_target(d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(d)
