"""WCGA(co) on E(x) = ½‖x - f0‖^2 against WCGA on f0."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from descent.algorithms import run_wcga_co
from descent.energy import Potential, make_norm_composite_energy
from dictionary.atoms import Dictionary
from greedy.chebyshev import run_wcga
from greedy.config import GreedyConfig
from spaces.space import SmoothSpace
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

ENERGY_TOL = 1e-8


@dataclass
class EquivalenceReport:
    """
    Outcome of one equivalence trial.

    tie_detected marks a split at a step whose best and runner-up scores
    were within the tie tolerance in either run; only such a split passes.
    """

    identical: bool
    max_energy_diff: float
    steps: int
    first_mismatch: Optional[int]
    tie_detected: bool
    passed: bool

    def as_dict(self) -> dict:
        return {
            "identical": self.identical,
            "max_energy_diff": self.max_energy_diff,
            "steps": self.steps,
            "first_mismatch": self.first_mismatch,
            "tie_detected": self.tie_detected,
            "pass": self.passed,
        }


def check_equivalence_co(f0, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None) -> EquivalenceReport:
    """
    Run WCGA and WCGA(co) with V(u) = u^2/2 and compare them step by step.

    A mismatch is a failing report, never an exception.

    Args:
        f0: Target
        D: Dictionary in l_2^d
        sp: Ambient space (p = 2)
        cfg: Shared greedy parameters

    Returns:
        EquivalenceReport
    """
    if not sp.is_euclidean:
        raise InvalidParameterError("p", "the equivalence check is stated in l_2")
    cfg = cfg or GreedyConfig()
    approx = run_wcga(f0, D, sp, cfg)
    energy = make_norm_composite_energy(f0, Potential.square(), sp)
    descent = run_wcga_co(energy, D, sp, cfg)

    left = approx.selected_indices()
    right = descent.selected_indices()
    first_mismatch = None
    for k, (a, b) in enumerate(zip(left, right), start=1):
        if a != b:
            first_mismatch = k
            break
    if first_mismatch is None and len(left) != len(right):
        first_mismatch = min(len(left), len(right)) + 1
    identical = first_mismatch is None

    agree = min(len(left), len(right)) if identical else first_mismatch - 1
    half_squares = 0.5 * approx.residual_norms()[:agree + 1] ** 2
    energies = descent.energies()[:agree + 1]
    max_diff = float(np.max(np.abs(half_squares - energies)))

    tie_detected = False
    if first_mismatch is not None:
        margins = [trace.records[first_mismatch - 1].margin for trace in (approx, descent)
                   if len(trace.records) >= first_mismatch]
        tie_detected = any(m <= cfg.tie_tol for m in margins)
    passed = max_diff <= ENERGY_TOL and (identical or tie_detected)
    if tie_detected:
        logger.warning(f"Selections split at near-tie step {first_mismatch} (margin <= {cfg.tie_tol:g})")
    if not passed:
        logger.info(f"Equivalence mismatch at step {first_mismatch}: {left} vs {right} (energy diff {max_diff:.3e})")
    return EquivalenceReport(
        identical=identical,
        max_energy_diff=max_diff,
        steps=len(left),
        first_mismatch=first_mismatch,
        tie_detected=tie_detected,
        passed=passed,
    )
