"""LASSO instances recast as quadratic minimization over a normalized dictionary."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from descent.energy import Energy, make_quadratic_energy
from dictionary.atoms import Dictionary
from spaces.space import SmoothSpace
from utils.errors import DimensionMismatchError, InvalidParameterError, ZeroVectorError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LassoInstance:
    """y = Phi x_true + noise, with the planted sparse x_true."""

    Phi: np.ndarray
    y: np.ndarray
    x_true: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_true)


def lasso_recast(Phi, y) -> Tuple[Dictionary, Energy, np.ndarray]:
    """
    Recast min ½‖y - Phi x‖^2 over ‖x‖_1 <= s as minimization of ½‖y - z‖^2 over z in R^k.

    Atoms are the columns of Phi scaled to unit l_2 norm; scale[j] is
    ‖Phi_j‖, so an expansion z = sum c_j g^j maps back to x_j = c_j / scale[j].

    Args:
        Phi: k x n design matrix
        y: Observations of length k

    Returns:
        Tuple of (dictionary in l_2^k, quadratic energy, scale)

    Raises:
        ZeroVectorError: If a column of Phi is zero
    """
    Phi = np.atleast_2d(np.asarray(Phi, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if Phi.shape[0] != y.size:
        raise DimensionMismatchError(f"Phi has {Phi.shape[0]} rows, y has {y.size} entries")
    scale = np.linalg.norm(Phi, axis=0)
    zero = np.flatnonzero(scale == 0)
    if zero.size:
        raise ZeroVectorError(f"column {int(zero[0]) + 1} of Phi is zero")
    atoms = Phi / scale
    D = Dictionary(atoms=atoms, ambient=SmoothSpace.euclidean(Phi.shape[0]), label="lasso")
    D.metadata["scale"] = scale.tolist()
    logger.debug(f"Recast LASSO instance k={Phi.shape[0]} n={Phi.shape[1]}")
    return D, make_quadratic_energy(y), scale


def coefficients_to_x(coefficients: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Map dictionary coefficients back to the x-coordinates of the original problem."""
    return np.asarray(coefficients, dtype=float) / scale


def make_lasso_instance(k: int, n: int, sparsity: int, noise: float = 0.0,
                        seed: Optional[int] = None) -> LassoInstance:
    """
    Gaussian design with a planted sparse vector.

    Nonzero entries of x_true have magnitude in [1, 2] with random signs.
    """
    if not 1 <= sparsity <= n:
        raise InvalidParameterError("target.sparsity", f"must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    Phi = rng.standard_normal((k, n)) / np.sqrt(k)
    x_true = np.zeros(n)
    support = rng.choice(n, size=sparsity, replace=False)
    x_true[support] = rng.choice([-1.0, 1.0], size=sparsity) * (1.0 + rng.random(sparsity))
    y = Phi @ x_true
    if noise > 0:
        perturbation = rng.standard_normal(k)
        y = y + noise * perturbation / np.linalg.norm(perturbation)
    return LassoInstance(Phi=Phi, y=y, x_true=x_true)
