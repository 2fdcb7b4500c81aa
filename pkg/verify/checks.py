"""Lebesgue-type inequality checks for orthogonal greedy approximation."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dictionary.atoms import Dictionary
from dictionary.metrics import coherence
from greedy.chebyshev import run_woga
from greedy.config import GreedyConfig
from verify.oracles import IncoherenceProfile, check_property_A, sigma_m_bruteforce

logger = logging.getLogger(__name__)

DEFAULT_C1 = 2
DEFAULT_C2 = 3.0
DEFAULT_C3 = 0.5
LEBESGUE_SLACK = 1e-10


@dataclass
class LebesgueReport:
    m: int
    steps: int
    residual: float
    sigma: float
    ratio: Optional[float]
    mu: float
    in_regime: bool
    C1: int
    C2: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "steps": self.steps,
            "residual": self.residual,
            "sigma": self.sigma,
            "ratio": self.ratio,
            "mu": self.mu,
            "in_regime": self.in_regime,
            "C1": self.C1,
            "C2": self.C2,
            "pass": self.passed,
        }


def check_lebesgue(D: Dictionary, f0, m: int, C1: int = DEFAULT_C1, C2: float = DEFAULT_C2,
                   C3: float = DEFAULT_C3, budget: Optional[int] = None) -> LebesgueReport:
    """
    Check ‖f_{C1 m}‖ <= C2 sigma_m(f0, D) for WOGA.

    The inequality is claimed for m <= C3 / M(D); runs outside that range
    are still evaluated and flagged with in_regime = False. The raw ratio
    residual / sigma_m is always reported.

    Args:
        D: Dictionary in l_2^d
        f0: Target
        m: Sparsity level
        C1: Iteration multiplier
        C2: Error multiplier
        C3: Coherence range constant
        budget: Brute-force cap for sigma_m

    Returns:
        LebesgueReport
    """
    f0 = D.ambient.check_vector(f0, "f0")
    mu = coherence(D)
    in_regime = mu == 0 or m <= C3 / mu
    if not in_regime:
        logger.warning(f"m={m} exceeds C3/M(D)={C3 / mu:.3f}; Lebesgue check outside its regime")
    sigma = sigma_m_bruteforce(f0, D, m, budget=budget)
    steps = C1 * m
    if steps == 0:
        residual = float(np.linalg.norm(f0))
    else:
        residual = float(run_woga(f0, D, GreedyConfig(max_iter=steps)).residual_norms()[-1])
    ratio = residual / sigma if sigma > 0 else None
    passed = residual <= C2 * sigma + LEBESGUE_SLACK
    logger.debug(f"Lebesgue m={m}: residual={residual:.3e} sigma={sigma:.3e} ratio={ratio}")
    return LebesgueReport(
        m=m, steps=steps, residual=residual, sigma=sigma, ratio=ratio, mu=mu,
        in_regime=in_regime, C1=C1, C2=C2, passed=passed,
    )


def property_A_iterations(V: float, K: int, r: float, q: float = 2.0) -> int:
    """Iteration count V^q' ln(V K) K^(r q') with q' = q / (q - 1), rounded up."""
    q_dual = q / (q - 1.0)
    return max(1, math.ceil(V ** q_dual * math.log(max(V * K, math.e)) * K ** (r * q_dual)))


def explore_property_A_lebesgue(D: Dictionary, f0, support, coefficients, profile: IncoherenceProfile,
                                budget: Optional[int] = None) -> dict:
    """
    Exploratory property-A experiment: measure the minimal V, run WOGA for the
    matching iteration count and report the residual next to sigma_K.

    No pass/fail verdict is produced since every constant involved is unknown.
    """
    report = check_property_A(D, profile, support, coefficients, budget=budget)
    if math.isinf(report.min_V):
        return {"min_V": report.min_V, "iterations": None, "residual": None, "sigma_K": None, "pass": None}
    iterations = property_A_iterations(report.min_V, profile.K, profile.r)
    trace = run_woga(f0, D, GreedyConfig(max_iter=iterations))
    sigma = sigma_m_bruteforce(f0, D, profile.K, budget=budget)
    return {
        "min_V": report.min_V,
        "iterations": iterations,
        "residual": float(trace.residual_norms()[-1]),
        "sigma_K": sigma,
        "pass": None,
    }
