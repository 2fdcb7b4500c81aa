"""Weak Chebyshev Greedy Algorithm and its l_2 form, orthogonal matching pursuit."""
import logging
from typing import List, Optional

import numpy as np

from config.constants import ALGO_WCGA, ALGO_WOGA, STATUS_CONVERGED, STATUS_STAGNATED
from dictionary.atoms import Dictionary
from greedy.config import GreedyConfig
from greedy.projection import minimize_norm
from greedy.selection import select_by_covector
from greedy.trace import IterationRecord, Trace, finish_trace, new_trace
from spaces.norms import lp_norm, norming_functional
from spaces.space import SmoothSpace
from utils.errors import DimensionMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)


def check_run_inputs(f0, D: Dictionary, sp: SmoothSpace) -> np.ndarray:
    """Validate a target against the dictionary's space and return it as a float vector."""
    if D.d != sp.d:
        raise DimensionMismatchError(f"dictionary has d={D.d}, space has d={sp.d}")
    f0 = sp.check_vector(f0, "f0")
    if not np.all(np.isfinite(f0)):
        raise InvalidParameterError("f0", "entries must be finite")
    return f0


def run_wcga(f0, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None,
             algorithm: str = ALGO_WCGA) -> Trace:
    """
    WCGA: greedy selection followed by best approximation from the selected span.

    Each step picks phi_m maximizing F_{f_{m-1}} over D^±, adds its column
    to the span (reselection leaves the span unchanged) and sets
    G_m to the best approximant of f0 from that span.

    Args:
        f0: Target
        D: Dictionary
        sp: Ambient space
        cfg: Greedy parameters

    Returns:
        Trace with non-increasing residual norms

    Raises:
        InnerSolverError: If the span minimization hits its cap (p != 2)
    """
    cfg = cfg or GreedyConfig()
    f0 = check_run_inputs(f0, D, sp)
    trace = new_trace(algorithm, f0, D.N, sp)
    selected: List[int] = []
    span_coefficients = np.zeros(0)
    residual = trace.residual
    current = trace.initial_norm

    for m in range(1, cfg.max_iter + 1):
        if current <= cfg.stop_norm:
            trace.status = STATUS_CONVERGED
            break
        F = norming_functional(residual, sp)
        index, value, sup, margin = select_by_covector(F, D, cfg.t, cfg.scan_mode, cfg.tie_tol)
        if sup <= 0:
            logger.warning(f"{algorithm}: residual annihilates every atom at m={m}")
            trace.status = STATUS_STAGNATED
            break

        column = abs(index) - 1
        if column not in selected:
            selected.append(column)
            span_coefficients = np.append(span_coefficients, 0.0)
        Phi = D.atoms[:, selected]
        candidate = minimize_norm(f0, Phi, sp, cfg.inner_tol, cfg.inner_max_iter, start=span_coefficients)
        candidate_residual = f0 - Phi @ candidate
        candidate_norm = float(lp_norm(candidate_residual, sp.p))
        if not sp.is_euclidean and candidate_norm > current:
            logger.debug(f"{algorithm}: inner solve worsened the residual at m={m}, keeping G_(m-1)")
            candidate = span_coefficients
            candidate_residual = f0 - Phi @ candidate
            candidate_norm = float(lp_norm(candidate_residual, sp.p))

        span_coefficients = candidate
        trace.coefficients = np.zeros(D.N)
        trace.coefficients[selected] = span_coefficients
        residual = candidate_residual
        trace.residual = residual
        current = candidate_norm
        trace.records.append(IterationRecord(
            m=m,
            selected_index=index,
            value=value,
            sup_value=sup,
            step_coefficient=float(span_coefficients[selected.index(column)]),
            residual_norm=current,
            coeff_l1=float(np.sum(np.abs(span_coefficients))),
            margin=margin,
        ))
        logger.debug(f"{algorithm} m={m} index={index:+d} residual={current:.6e}")

    return finish_trace(trace, cfg.stop_norm)


def run_woga(f0, D: Dictionary, cfg: Optional[GreedyConfig] = None) -> Trace:
    """
    Orthogonal matching pursuit (WCGA in l_2).

    After d linearly independent selections the residual is zero.
    """
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", "WOGA is defined in l_2 only")
    return run_wcga(f0, D, D.ambient, cfg, algorithm=ALGO_WOGA)
