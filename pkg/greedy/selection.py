"""Atom selection over the symmetrized dictionary."""
import logging
from typing import Tuple

import numpy as np

from config.constants import SCAN_EXACT, SCAN_FIRST_ACCEPTABLE
from dictionary.atoms import Dictionary
from spaces.norms import norming_functional
from spaces.space import Covector, SmoothSpace, Vector
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)


def choose_from_scores(scores: np.ndarray, t: float = 1.0, scan_mode: str = SCAN_EXACT,
                       tie_tol: float = 0.0) -> Tuple[int, float, float, float]:
    """
    Pick a signed atom from the correlations c_j = F(g^j).

    Over D^± the value of ±g^j is |c_j|, attained with the sign of c_j.
    Exact mode takes the lowest index whose |c_j| is within tie_tol
    (relative) of the maximum; first-acceptable mode takes the lowest index
    with |c_j| >= t * max.

    Args:
        scores: Correlations F(g^j), one per column
        t: Weakness parameter
        scan_mode: exact or first_acceptable
        tie_tol: Relative tie tolerance for exact mode

    Returns:
        Tuple of (signed index, value, sup value, margin)
    """
    magnitudes = np.abs(scores)
    best = float(np.max(magnitudes))
    if scan_mode == SCAN_EXACT:
        threshold = best * (1.0 - tie_tol)
    elif scan_mode == SCAN_FIRST_ACCEPTABLE:
        threshold = t * best
    else:
        raise InvalidParameterError("scan_mode", f"unknown scan mode {scan_mode}")
    j = int(np.flatnonzero(magnitudes >= threshold)[0])
    value = float(magnitudes[j])
    index = j + 1 if scores[j] >= 0 else -(j + 1)

    if magnitudes.size > 1 and best > 0:
        runner_up = float(np.max(np.delete(magnitudes, int(np.argmax(magnitudes)))))
        margin = (best - runner_up) / best
    else:
        margin = 1.0
    return index, value, best, margin


def select_by_covector(F: Covector, D: Dictionary, t: float = 1.0, scan_mode: str = SCAN_EXACT,
                       tie_tol: float = 0.0) -> Tuple[int, float, float, float]:
    """Selection driven by an arbitrary covector (-E'(G) for the descent algorithms)."""
    return choose_from_scores(D.atoms.T @ F, t=t, scan_mode=scan_mode, tie_tol=tie_tol)


def select_atom(residual: Vector, D: Dictionary, sp: SmoothSpace, t: float = 1.0,
                scan_mode: str = SCAN_EXACT, tie_tol: float = 0.0) -> Tuple[int, float]:
    """
    Greedy step: maximize F_residual(g) over g in D^±.

    Args:
        residual: Current residual f_{m-1}
        D: Dictionary
        sp: Ambient space
        t: Weakness parameter (used by first_acceptable mode)
        scan_mode: exact or first_acceptable
        tie_tol: Relative tie tolerance

    Returns:
        Tuple of (signed 1-based index, value F(±g))

    Raises:
        ZeroVectorError: If the residual is zero
    """
    F = norming_functional(residual, sp)
    index, value, _, _ = select_by_covector(F, D, t=t, scan_mode=scan_mode, tie_tol=tie_tol)
    return index, value
