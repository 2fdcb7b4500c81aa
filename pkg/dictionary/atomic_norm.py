"""Atomic norm brackets and the R_1 = 1/beta identity."""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from config.constants import SPAN_TOL
from dictionary.atoms import Dictionary
from dictionary.metrics import BetaEstimate, beta_bruteforce
from spaces.norms import norming_functional
from utils.errors import (
    BudgetExceededError, HypothesisViolationError, InvalidParameterError, OutsideSpanError
)

logger = logging.getLogger(__name__)

L1_ORACLE_MAX_ATOMS = 12
BRACKET_RTOL = 1e-9


@dataclass
class AtomicNormConfig:
    """Settings for atomic_norm_bounds."""

    t: float = 1.0
    b: float = 0.5
    eta: float = 1e-6
    max_iter: int = 10000
    n_random_covectors: int = 32
    seed: Optional[int] = 0
    beta_lower: Optional[float] = None
    exact_lp: bool = True


@dataclass
class AtomicNormBracket:
    """lower <= ||x||_{A_1(D)} <= upper."""

    lower: float
    upper: float
    dga_upper: Optional[float] = None
    lp_upper: Optional[float] = None
    best_covector: Optional[np.ndarray] = None

    @property
    def width(self) -> float:
        return self.upper - self.lower


def span_residual(x: np.ndarray, D: Dictionary) -> float:
    """Euclidean least-squares distance from x to span(D)."""
    coefficients, *_ = np.linalg.lstsq(D.atoms, x, rcond=None)
    return float(np.linalg.norm(x - D.atoms @ coefficients))


def _lstsq_l1(r: np.ndarray, D: Dictionary) -> float:
    coefficients, *_ = np.linalg.lstsq(D.atoms, r, rcond=None)
    return float(np.sum(np.abs(coefficients)))


def dual_ratio(F: np.ndarray, x: np.ndarray, D: Dictionary) -> float:
    """|F(x)| / max_g |F(g)|, a lower bound on the atomic norm for any F."""
    denominator = float(np.max(np.abs(D.atoms.T @ F)))
    if denominator <= 0:
        return 0.0
    return abs(float(F @ x)) / denominator


def exact_atomic_norm(x: np.ndarray, D: Dictionary) -> Tuple[float, np.ndarray, Optional[np.ndarray]]:
    """
    Atomic norm by linear programming.

    Primal: min ||c||_1 subject to D c = x, with c = c+ - c-.
    Dual: max <F, x> subject to |<F, g>| <= 1, which yields a covector
    for the lower bound.

    Returns:
        Tuple of (primal value, coefficients, dual covector or None)
    """
    d, n = D.atoms.shape
    primal = optimize.linprog(
        c=np.ones(2 * n),
        A_eq=np.hstack([D.atoms, -D.atoms]),
        b_eq=x,
        bounds=[(0, None)] * (2 * n),
        method="highs",
    )
    if primal.status != 0:
        raise OutsideSpanError(span_residual(x, D))
    coefficients = primal.x[:n] - primal.x[n:]

    dual = optimize.linprog(
        c=-x,
        A_ub=np.vstack([D.atoms.T, -D.atoms.T]),
        b_ub=np.ones(2 * n),
        bounds=[(None, None)] * d,
        method="highs",
    )
    covector = dual.x if dual.status == 0 else None
    return float(np.sum(np.abs(coefficients))), coefficients, covector


def l1_oracle(x: np.ndarray, D: Dictionary, tol: float = 1e-10) -> float:
    """
    Exact atomic norm for tiny dictionaries by support enumeration.

    Minimal l_1 representations are attained on linearly independent
    supports of size <= d, where least squares gives the coefficients.
    """
    if D.N > L1_ORACLE_MAX_ATOMS:
        raise BudgetExceededError(2 ** D.N, 2 ** L1_ORACLE_MAX_ATOMS)
    if not np.any(x):
        return 0.0
    best = math.inf
    for size in range(1, min(D.d, D.N) + 1):
        for support in itertools.combinations(range(D.N), size):
            columns = D.atoms[:, support]
            coefficients, *_ = np.linalg.lstsq(columns, x, rcond=None)
            if np.linalg.norm(columns @ coefficients - x) <= tol:
                best = min(best, float(np.sum(np.abs(coefficients))))
    if math.isinf(best):
        raise OutsideSpanError(span_residual(x, D))
    return best


def atomic_norm_bounds(x: np.ndarray, D: Dictionary,
                       cfg: Optional[AtomicNormConfig] = None) -> AtomicNormBracket:
    """
    Two-sided bracket on the atomic norm ||x||_{A_1(D)}.

    The upper end comes from a DGA(t, b, mu) expansion run to residual eta,
    closed with eta / beta_lower when a beta lower bound is known and with a
    least-squares representation of the residual otherwise; the LP value
    tightens it when enabled. The lower end is the best |F(x)| / max_g |F(g)|
    over the norming functional of x, random unit covectors and the dual LP
    covector.

    Args:
        x: Target vector
        D: Dictionary
        cfg: Bracket settings

    Returns:
        AtomicNormBracket

    Raises:
        OutsideSpanError: If x is not in the span of the atoms
        HypothesisViolationError: If the dual lower bound exceeds the upper bound
            (an overstated cfg.beta_lower)
    """
    from greedy.config import GreedyConfig
    from greedy.dga import run_dga

    cfg = cfg or AtomicNormConfig()
    x = D.ambient.check_vector(x)
    if not np.any(x):
        return AtomicNormBracket(lower=0.0, upper=0.0, dga_upper=0.0, lp_upper=0.0)
    residual = span_residual(x, D)
    if residual >= SPAN_TOL:
        raise OutsideSpanError(residual)

    greedy_cfg = GreedyConfig(t=cfg.t, b=cfg.b, max_iter=cfg.max_iter, stop_norm=cfg.eta)
    trace = run_dga(x, D, D.ambient, greedy_cfg)
    tail_norm = trace.residual_norms()[-1]
    if cfg.beta_lower is not None and cfg.beta_lower > 0:
        tail = tail_norm / cfg.beta_lower
    else:
        tail = _lstsq_l1(trace.residual, D)
    dga_upper = trace.coeff_sum + tail
    upper = dga_upper

    covectors: List[np.ndarray] = [norming_functional(x, D.ambient)]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.n_random_covectors):
        F = rng.standard_normal(D.d)
        covectors.append(F / np.linalg.norm(F))

    lp_upper = None
    if cfg.exact_lp:
        value, coefficients, dual = exact_atomic_norm(x, D)
        lp_upper = value + _lstsq_l1(x - D.atoms @ coefficients, D)
        upper = min(upper, lp_upper)
        if dual is not None:
            covectors.append(dual)

    ratios = [dual_ratio(F, x, D) for F in covectors]
    best = int(np.argmax(ratios))
    lower = ratios[best]
    if lower > upper * (1.0 + BRACKET_RTOL) + BRACKET_RTOL:
        logger.warning(f"Dual lower bound {lower:.9g} exceeds upper bound {upper:.9g} for {D.label}")
        raise HypothesisViolationError(
            f"atomic norm bracket is inverted ([{lower:.9g}, {upper:.9g}]); is beta_lower a true lower bound?"
        )
    # rounding only
    lower = min(lower, upper)
    logger.debug(f"Atomic norm bracket for {D.label}: [{lower:.6f}, {upper:.6f}] (dga {dga_upper:.6f})")
    return AtomicNormBracket(
        lower=lower, upper=upper, dga_upper=dga_upper, lp_upper=lp_upper, best_covector=covectors[best]
    )


@dataclass
class R1BetaReport:
    """Bracket comparison of R_1(D) against 1/beta(D)."""

    r1_lower: float
    r1_upper: float
    beta: BetaEstimate
    n_samples: int
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def product_bracket(self) -> Tuple[float, float]:
        return self.r1_lower * self.beta.lower, self.r1_upper * self.beta.upper

    @property
    def product_width(self) -> float:
        lo, hi = self.product_bracket
        return hi - lo

    def as_dict(self) -> dict:
        lo, hi = self.product_bracket
        return {
            "r1_lower": self.r1_lower,
            "r1_upper": self.r1_upper,
            "beta": self.beta.as_dict(),
            "product_lower": lo,
            "product_upper": hi,
            "n_samples": self.n_samples,
            "pass": self.passed,
        }


def check_R1_beta(D: Dictionary, n_samples: int = 200, seed: Optional[int] = None,
                  cfg: Optional[AtomicNormConfig] = None, tol: float = 1e-9) -> R1BetaReport:
    """
    Compare sampled atomic norms of unit vectors with 1/beta.

    R_1 = sup over unit x of ||x||_A is bracketed by the largest sampled
    lower and upper ends; the beta minimizer is added to the samples since
    it is where the supremum is attained. The check passes when
    [R1_lo, R1_hi] meets [1/beta_hi, 1/beta_lo].
    """
    if not D.ambient.is_euclidean or D.d > 3:
        raise InvalidParameterError("D", "check_R1_beta needs l_2^d with d <= 3")
    beta = beta_bruteforce(D)
    if beta.lower is None or beta.upper <= 0 or not D.spans_space():
        raise HypothesisViolationError("beta(D) = 0: the atoms do not span the space")

    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((n_samples, D.d))
    samples /= np.linalg.norm(samples, axis=1, keepdims=True)
    if beta.argmin is not None:
        samples = np.vstack([samples, beta.argmin / np.linalg.norm(beta.argmin)])

    cfg = cfg or AtomicNormConfig(seed=seed)
    r1_lower = 0.0
    r1_upper = 0.0
    for x in samples:
        bracket = atomic_norm_bounds(x, D, cfg)
        r1_lower = max(r1_lower, bracket.lower)
        r1_upper = max(r1_upper, bracket.upper)

    inv_lo = 1.0 / beta.upper
    inv_hi = math.inf if beta.lower <= 0 else 1.0 / beta.lower
    passed = r1_lower <= inv_hi + tol and r1_upper >= inv_lo - tol
    report = R1BetaReport(
        r1_lower=r1_lower, r1_upper=r1_upper, beta=beta, n_samples=samples.shape[0], passed=passed
    )
    lo, hi = report.product_bracket
    logger.info(
        f"R1 vs 1/beta ({D.label}): R1 in [{r1_lower:.6f}, {r1_upper:.6f}], "
        f"beta in [{beta.lower:.6f}, {beta.upper:.6f}], product in [{lo:.6f}, {hi:.6f}]"
    )
    return report
