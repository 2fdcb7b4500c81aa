"""Matching pursuit (WGA) and the WOGA -> WGA hybrid."""
import logging
import math
from typing import Optional

import numpy as np

from config.constants import (
    ALGO_HYBRID, ALGO_WGA, PHASE_WGA, PHASE_WOGA, STATUS_CONVERGED, STATUS_RUNNING, STATUS_STAGNATED
)
from dictionary.atoms import Dictionary
from greedy.chebyshev import check_run_inputs, run_woga
from greedy.config import GreedyConfig
from greedy.selection import select_by_covector
from greedy.trace import IterationRecord, Trace, finish_trace, new_trace
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)


def _require_euclidean(D: Dictionary, name: str):
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", f"{name} is defined in l_2 only")


def _continue_pursuit(trace: Trace, D: Dictionary, cfg: GreedyConfig, steps: int, phase: str = ""):
    """
    Run up to `steps` matching-pursuit updates from the trace's current state.

    f_m = f_{m-1} - <f_{m-1}, phi_m> / ‖phi_m‖^2 phi_m; every
    recompute_every steps the residual is rebuilt from f0 and the
    coefficients.
    """
    residual = trace.residual.copy()
    coefficients = trace.coefficients.copy()
    current = float(np.linalg.norm(residual))
    m = trace.iterations
    for _ in range(steps):
        if current <= cfg.stop_norm:
            trace.status = STATUS_CONVERGED
            break
        m += 1
        index, value, sup, margin = select_by_covector(
            residual / current, D, cfg.t, cfg.scan_mode, cfg.tie_tol
        )
        if sup <= 0:
            logger.warning(f"{trace.algorithm}: residual annihilates every atom at m={m}")
            trace.status = STATUS_STAGNATED
            break
        phi = D.signed_atom(index)
        alpha = float(residual @ phi) / float(phi @ phi)
        residual = residual - alpha * phi
        coefficients[abs(index) - 1] += np.sign(index) * alpha
        if m % cfg.recompute_every == 0:
            residual = trace.f0 - D.atoms @ coefficients
        current = float(np.linalg.norm(residual))
        trace.records.append(IterationRecord(
            m=m,
            selected_index=index,
            value=value,
            sup_value=sup,
            step_coefficient=alpha,
            residual_norm=current,
            coeff_l1=float(np.sum(np.abs(coefficients))),
            margin=margin,
            phase=phase,
        ))
        logger.debug(f"{trace.algorithm} m={m} index={index:+d} residual={current:.6e}")
    trace.residual = residual
    trace.coefficients = coefficients


def run_wga(f0, D: Dictionary, cfg: Optional[GreedyConfig] = None) -> Trace:
    """
    Weak greedy algorithm (matching pursuit) in l_2.

    Args:
        f0: Target
        D: Dictionary in l_2^d
        cfg: Greedy parameters

    Returns:
        Trace; ‖f_m‖^2 = ‖f_{m-1}‖^2 - <f_{m-1}, phi_m>^2 for unit atoms
    """
    _require_euclidean(D, "WGA")
    cfg = cfg or GreedyConfig()
    f0 = check_run_inputs(f0, D, D.ambient)
    trace = new_trace(ALGO_WGA, f0, D.N, D.ambient)
    _continue_pursuit(trace, D, cfg, cfg.max_iter)
    return finish_trace(trace, cfg.stop_norm)


def default_switch_iter(d: int) -> int:
    return math.ceil(math.sqrt(d))


def run_hybrid(f0, D: Dictionary, cfg: Optional[GreedyConfig] = None,
               switch_iter: Optional[int] = None) -> Trace:
    """
    WOGA for switch_iter steps, then WGA from the WOGA residual.

    Records are tagged with their phase; max_iter bounds the total.

    Args:
        f0: Target
        D: Dictionary in l_2^d
        cfg: Greedy parameters
        switch_iter: WOGA steps (default ceil(sqrt(d)))

    Returns:
        Concatenated trace
    """
    _require_euclidean(D, "the hybrid strategy")
    cfg = cfg or GreedyConfig()
    if switch_iter is None:
        switch_iter = default_switch_iter(D.d)
    if switch_iter < 0:
        raise InvalidParameterError("switch_iter", "must be non-negative")
    f0 = check_run_inputs(f0, D, D.ambient)

    head = min(switch_iter, cfg.max_iter)
    trace = new_trace(ALGO_HYBRID, f0, D.N, D.ambient)
    if head > 0:
        orthogonal = run_woga(f0, D, cfg.with_updates(max_iter=head))
        for record in orthogonal.records:
            record.phase = PHASE_WOGA
        trace.records = orthogonal.records
        trace.coefficients = orthogonal.coefficients
        trace.residual = orthogonal.residual
        if orthogonal.status == STATUS_STAGNATED:
            trace.status = STATUS_STAGNATED
    if trace.status == STATUS_RUNNING:
        _continue_pursuit(trace, D, cfg, cfg.max_iter - trace.iterations, phase=PHASE_WGA)
    logger.debug(f"hybrid: switched to WGA after {head} WOGA steps")
    return finish_trace(trace, cfg.stop_norm)
