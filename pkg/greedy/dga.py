"""Dual greedy expansion DGA(t, b, mu) with mu(u) = gamma * u**q."""
import logging
from typing import Optional

import numpy as np

from config.constants import (
    ALGO_DGA, DGA_STAGNATION_DELTA, DGA_STAGNATION_WINDOW, STATUS_CONVERGED, STATUS_STAGNATED
)
from dictionary.atoms import Dictionary
from greedy.chebyshev import check_run_inputs
from greedy.config import GreedyConfig
from greedy.selection import select_by_covector
from greedy.trace import IterationRecord, Trace, finish_trace, new_trace
from spaces.norms import lp_norm, norming_functional
from spaces.space import SmoothSpace

logger = logging.getLogger(__name__)


def dga_step_length(residual_norm: float, r_D: float, sp: SmoothSpace, t: float, b: float) -> float:
    """
    Closed-form root c of ‖f‖ mu(c / ‖f‖) = (t b / 2) c r_D(f).

    With mu(u) = gamma u^q this is c = ‖f‖ (t b r_D / (2 gamma))^(1/(q-1)).
    """
    return residual_norm * (t * b * r_D / (2.0 * sp.gamma)) ** (1.0 / (sp.q - 1.0))


def run_dga(f0, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None) -> Trace:
    """
    DGA(t, b, mu): f_m = f_{m-1} - c_m phi_m with the closed-form step length.

    The expansion {(c_k, signed index)} and sum of c_k are kept on the
    trace; sum c_k bounds the atomic norm of f0 - f_m. A residual that
    drops by less than 1e-15 over 100 steps ends the run as stagnated.

    Args:
        f0: Target
        D: Dictionary
        sp: Ambient space with declared (gamma, q)
        cfg: Greedy parameters (t, b, max_iter, stop_norm)

    Returns:
        Trace with expansion and coeff_sum filled in
    """
    cfg = cfg or GreedyConfig()
    f0 = check_run_inputs(f0, D, sp)
    trace = new_trace(ALGO_DGA, f0, D.N, sp)
    residual = trace.residual.copy()
    coefficients = np.zeros(D.N)
    norms = [trace.initial_norm]
    current = trace.initial_norm

    for m in range(1, cfg.max_iter + 1):
        if current <= cfg.stop_norm:
            trace.status = STATUS_CONVERGED
            break
        F = norming_functional(residual, sp)
        index, value, r_D, margin = select_by_covector(F, D, cfg.t, cfg.scan_mode, cfg.tie_tol)
        if r_D <= 0:
            logger.warning(f"dga: residual annihilates every atom at m={m}")
            trace.status = STATUS_STAGNATED
            break

        c = dga_step_length(current, r_D, sp, cfg.t, cfg.b)
        residual = residual - c * D.signed_atom(index)
        coefficients[abs(index) - 1] += np.sign(index) * c
        if m % cfg.recompute_every == 0:
            residual = f0 - D.atoms @ coefficients
        current = float(lp_norm(residual, sp.p))
        norms.append(current)
        trace.coeff_sum += c
        trace.expansion.append((c, index))
        trace.records.append(IterationRecord(
            m=m,
            selected_index=index,
            value=value,
            sup_value=r_D,
            step_coefficient=c,
            residual_norm=current,
            coeff_l1=trace.coeff_sum,
            margin=margin,
        ))

        if m >= DGA_STAGNATION_WINDOW and norms[m - DGA_STAGNATION_WINDOW] - current < DGA_STAGNATION_DELTA:
            logger.warning(
                f"dga: residual {current:.3e} decreased by less than {DGA_STAGNATION_DELTA:g} "
                f"over {DGA_STAGNATION_WINDOW} steps, stopping at m={m}"
            )
            trace.status = STATUS_STAGNATED
            break

    trace.coefficients = coefficients
    trace.residual = residual
    return finish_trace(trace, cfg.stop_norm)


def dga_decrease_violations(trace: Trace, t: float, b: float, tol: float = 1e-10):
    """
    Steps breaking t (1 - b) c_k r_D(f_{k-1}) <= ‖f_{k-1}‖ - ‖f_k‖ + tol.

    Returns:
        List of (k, required decrease, observed decrease)
    """
    norms = trace.residual_norms()
    violations = []
    for record in trace.records:
        required = t * (1.0 - b) * record.step_coefficient * record.sup_value
        observed = norms[record.m - 1] - norms[record.m]
        if required > observed + tol:
            violations.append((record.m, required, observed))
    return violations
