"""Best approximation from a span (Chebyshev projection) and the two-variable relaxation step."""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from spaces.norms import lp_norm, norming_functional
from spaces.space import SmoothSpace
from utils.errors import InnerSolverError

logger = logging.getLogger(__name__)


def _residual_objective(c: np.ndarray, f0: np.ndarray, Phi: np.ndarray, sp: SmoothSpace):
    r = f0 - Phi @ c
    value = lp_norm(r, sp.p)
    if value == 0:
        return 0.0, np.zeros_like(c)
    return value, -(Phi.T @ norming_functional(r, sp))


def minimize_norm(f0: np.ndarray, Phi: np.ndarray, sp: SmoothSpace, inner_tol: float,
                  inner_max_iter: int, start: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Minimize c -> ‖f0 - Phi c‖_p.

    l_2 is solved exactly by least squares (minimum-norm coefficients when
    Phi is rank deficient). Other p use BFGS on the convex objective with
    gradient -Phi^T F_r, stopping at gradient norm inner_tol.

    Args:
        f0: Target
        Phi: d x k matrix of spanning vectors
        sp: Ambient space
        inner_tol: Stationarity tolerance
        inner_max_iter: Iteration cap
        start: Warm start coefficients

    Returns:
        Coefficients c of length k

    Raises:
        InnerSolverError: If the iteration cap is hit before stationarity
    """
    if sp.is_euclidean:
        coefficients, *_ = np.linalg.lstsq(Phi, f0, rcond=None)
        return coefficients

    x0 = np.zeros(Phi.shape[1]) if start is None else np.asarray(start, dtype=float)
    result = optimize.minimize(
        _residual_objective, x0, args=(f0, Phi, sp), jac=True, method="BFGS",
        options={"gtol": inner_tol, "maxiter": inner_max_iter},
    )
    if result.nit >= inner_max_iter:
        _, gradient = _residual_objective(result.x, f0, Phi, sp)
        raise InnerSolverError(int(result.nit), float(np.linalg.norm(gradient)))
    if not result.success:
        # precision loss near the optimum; the objective value is still usable
        logger.debug(f"Span minimization stopped early: {result.message}")
    return result.x


def relaxation_step(f0: np.ndarray, G: np.ndarray, phi: np.ndarray, sp: SmoothSpace, inner_tol: float,
                    inner_max_iter: int) -> Tuple[float, float]:
    """
    Minimize (w, lam) -> ‖f0 - ((1 - w) G + lam phi)‖.

    Returns:
        Tuple of (w, lam)
    """
    r = f0 - G
    B = np.column_stack([-G, phi])
    w, lam = minimize_norm(r, B, sp, inner_tol, inner_max_iter)
    return float(w), float(lam)
