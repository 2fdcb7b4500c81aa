"""Exponential-decay guarantee for greedy runs from a certified beta lower bound."""
import logging

from greedy.trace import Trace
from spaces.space import SmoothSpace
from utils.errors import HypothesisViolationError, InvalidParameterError
from utils.validators import require, validate_weakness

logger = logging.getLogger(__name__)


def contraction_kappa(sp: SmoothSpace, beta_lower: float, t: float) -> float:
    """kappa = 1/2 (t beta / (4 gamma))^(1/(q-1))."""
    return 0.5 * (t * beta_lower / (4.0 * sp.gamma)) ** (1.0 / (sp.q - 1.0))


def lambda_one(residual_norm: float, sp: SmoothSpace, beta_lower: float, t: float) -> float:
    """Step length lambda_1 = 2 kappa ‖f_{m-1}‖ behind the per-step bound."""
    return 2.0 * contraction_kappa(sp, beta_lower, t) * residual_norm


def guaranteed_contraction(sp: SmoothSpace, beta_lower: float, t: float = 1.0) -> float:
    """
    Per-step factor 1 - kappa t beta with ‖f_m‖ <= factor^m ‖f_0‖.

    Args:
        sp: Space with declared (gamma, q)
        beta_lower: Certified lower bound on beta(D)
        t: Weakness parameter

    Returns:
        Contraction factor in (0, 1)

    Raises:
        InvalidParameterError: If beta_lower <= 0
        HypothesisViolationError: If the factor falls outside (0, 1)
    """
    t = require(validate_weakness(t), "t")
    if beta_lower is None or beta_lower <= 0:
        raise InvalidParameterError("beta_lower", "must be positive")
    kappa = contraction_kappa(sp, beta_lower, t)
    factor = 1.0 - kappa * t * beta_lower
    if not 0.0 < factor < 1.0:
        raise HypothesisViolationError(
            f"contraction factor {factor:.6g} outside (0, 1) for beta={beta_lower}, "
            f"gamma={sp.gamma}, q={sp.q}"
        )
    return factor


def attach_guarantee(trace: Trace, sp: SmoothSpace, beta_lower: float, t: float = 1.0) -> Trace:
    """Record kappa, lambda_1 (at f_0), beta and the contraction factor on a trace."""
    trace.factor = guaranteed_contraction(sp, beta_lower, t)
    trace.kappa = contraction_kappa(sp, beta_lower, t)
    trace.lambda1 = lambda_one(trace.initial_norm, sp, beta_lower, t)
    trace.beta = beta_lower
    logger.debug(f"{trace.algorithm}: guarantee factor {trace.factor:.6f} (kappa={trace.kappa:.6f})")
    return trace
