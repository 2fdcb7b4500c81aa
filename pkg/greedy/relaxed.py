"""Weak Greedy Algorithm with Free Relaxation."""
import logging
from typing import Optional

import numpy as np

from config.constants import ALGO_WGAFR, STATUS_CONVERGED, STATUS_STAGNATED
from dictionary.atoms import Dictionary
from greedy.chebyshev import check_run_inputs
from greedy.config import GreedyConfig
from greedy.projection import relaxation_step
from greedy.selection import select_by_covector
from greedy.trace import IterationRecord, Trace, finish_trace, new_trace
from spaces.norms import lp_norm, norming_functional
from spaces.space import SmoothSpace

logger = logging.getLogger(__name__)


def run_wgafr(f0, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None) -> Trace:
    """
    WGAFR: G_m = (1 - w_m) G_{m-1} + lam_m phi_m with (w_m, lam_m) minimizing ‖f0 - G_m‖.

    G_m is held as coefficients over the columns and rebuilt from them each
    step, so no drift accumulates. (w, lam) = (0, 0) is feasible and
    steps that would increase the residual are rejected.

    Args:
        f0: Target
        D: Dictionary
        sp: Ambient space
        cfg: Greedy parameters

    Returns:
        Trace with non-increasing residual norms
    """
    cfg = cfg or GreedyConfig()
    f0 = check_run_inputs(f0, D, sp)
    trace = new_trace(ALGO_WGAFR, f0, D.N, sp)
    coefficients = np.zeros(D.N)
    G = np.zeros(D.d)
    residual = trace.residual
    current = trace.initial_norm

    for m in range(1, cfg.max_iter + 1):
        if current <= cfg.stop_norm:
            trace.status = STATUS_CONVERGED
            break
        F = norming_functional(residual, sp)
        index, value, sup, margin = select_by_covector(F, D, cfg.t, cfg.scan_mode, cfg.tie_tol)
        if sup <= 0:
            logger.warning(f"wgafr: residual annihilates every atom at m={m}")
            trace.status = STATUS_STAGNATED
            break

        phi = D.signed_atom(index)
        w, lam = relaxation_step(f0, G, phi, sp, cfg.inner_tol, cfg.inner_max_iter)
        candidate = (1.0 - w) * coefficients
        candidate[abs(index) - 1] += np.sign(index) * lam
        candidate_G = D.atoms @ candidate
        candidate_norm = float(lp_norm(f0 - candidate_G, sp.p))
        if candidate_norm > current:
            logger.debug(f"wgafr: relaxation step worsened the residual at m={m}, keeping G_(m-1)")
            w, lam = 0.0, 0.0
        else:
            coefficients, G, current = candidate, candidate_G, candidate_norm
            residual = f0 - G

        trace.records.append(IterationRecord(
            m=m,
            selected_index=index,
            value=value,
            sup_value=sup,
            step_coefficient=lam,
            residual_norm=current,
            coeff_l1=float(np.sum(np.abs(coefficients))),
            margin=margin,
        ))
        logger.debug(f"wgafr m={m} index={index:+d} w={w:.4f} lam={lam:.4f} residual={current:.6e}")

    trace.coefficients = coefficients
    trace.residual = residual
    return finish_trace(trace, cfg.stop_norm)
