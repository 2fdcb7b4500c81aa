"""Brute-force oracles: best m-term error and the l_1 incoherence property."""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config.settings import settings
from dictionary.atoms import Dictionary
from greedy.projection import minimize_norm
from spaces.norms import lp_norm
from spaces.space import SmoothSpace
from utils.errors import BudgetExceededError, InvalidParameterError

logger = logging.getLogger(__name__)


def _span_distance(f: np.ndarray, columns: np.ndarray, sp: SmoothSpace) -> float:
    if columns.shape[1] == 0:
        return float(lp_norm(f, sp.p))
    if sp.is_euclidean:
        coefficients, *_ = np.linalg.lstsq(columns, f, rcond=None)
        return float(np.linalg.norm(f - columns @ coefficients))
    coefficients = minimize_norm(f, columns, sp, settings.INNER_TOL, settings.INNER_MAX_ITER)
    return float(lp_norm(f - columns @ coefficients, sp.p))


def sigma_m_bruteforce(f0, D: Dictionary, m: int, sp: Optional[SmoothSpace] = None,
                       budget: Optional[int] = None) -> float:
    """
    Best m-term error sigma_m(f0, D) by enumerating every m-subset of atoms.

    Args:
        f0: Target
        D: Dictionary
        m: Number of terms (m = 0 gives ‖f0‖)
        sp: Ambient space (the dictionary's by default)
        budget: Cap on C(N, m) (defaults from settings)

    Returns:
        Minimum distance from f0 to the span of m atoms

    Raises:
        BudgetExceededError: If C(N, m) exceeds the budget
    """
    sp = sp or D.ambient
    f0 = sp.check_vector(f0, "f0")
    if m < 0:
        raise InvalidParameterError("m", "must be non-negative")
    budget = budget or settings.SIGMA_BUDGET
    m = min(m, D.N)
    required = math.comb(D.N, m)
    if required > budget:
        raise BudgetExceededError(required, budget)
    if m == 0:
        return float(lp_norm(f0, sp.p))
    best = math.inf
    for subset in itertools.combinations(range(D.N), m):
        best = min(best, _span_distance(f0, D.atoms[:, subset], sp))
    return best


@dataclass(frozen=True)
class IncoherenceProfile:
    """Property-A parameters: support size K, depth Dmax, constant V and exponent r."""

    K: int
    Dmax: int
    V: Optional[float] = None
    r: float = 0.5

    def __post_init__(self):
        if self.K < 1 or self.Dmax < self.K:
            raise InvalidParameterError("profile", "need 1 <= K <= Dmax")
        if not 0.0 <= self.r <= 1.0:
            raise InvalidParameterError("profile.r", "must lie in [0, 1]")


@dataclass
class PropertyAReport:
    min_V: float
    pairs: int
    passed: Optional[bool]
    worst_A: tuple
    worst_Lambda: tuple

    def as_dict(self) -> dict:
        return {
            "min_V": self.min_V,
            "pairs": self.pairs,
            "pass": self.passed,
            "worst_A": list(self.worst_A),
            "worst_Lambda": list(self.worst_Lambda),
        }


def _pair_count(N: int, support_size: int, profile: IncoherenceProfile) -> int:
    total = 0
    for a in range(1, min(profile.K, support_size) + 1):
        lambdas = sum(math.comb(N - a, k) for k in range(0, profile.Dmax - a + 1))
        total += math.comb(support_size, a) * lambdas
    return total


def check_property_A(D: Dictionary, profile: IncoherenceProfile, support: Sequence[int],
                     coefficients: Sequence[float], budget: Optional[int] = None) -> PropertyAReport:
    """
    Smallest V with sum_{i in A} |x_i| <= V |A|^r ‖f_A - sum_{i in Lambda} c_i g^i‖.

    A ranges over nonempty subsets of the support with |A| <= K; Lambda
    over atom sets disjoint from A with |A| + |Lambda| <= Dmax. The
    infimum over c is the distance to span(g^Lambda). l_2 only.

    Args:
        D: Dictionary in l_2^d
        profile: Property-A parameters; profile.V, when set, is the pass threshold
        support: 0-based atom indices of f
        coefficients: x_i for each support index
        budget: Cap on enumerated (A, Lambda) pairs

    Returns:
        PropertyAReport (min_V is inf when some f_A lies in a span of Lambda)

    Raises:
        BudgetExceededError: If the enumeration exceeds the budget
    """
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", "property A is checked in l_2 only")
    support = [int(i) for i in support]
    x = np.asarray(coefficients, dtype=float)
    if len(support) != x.size:
        raise InvalidParameterError("coefficients", "one coefficient per support index is required")
    budget = budget or settings.PROPERTY_A_BUDGET
    required = _pair_count(D.N, len(support), profile)
    if required > budget:
        raise BudgetExceededError(required, budget)

    min_V = 0.0
    worst_A: tuple = ()
    worst_Lambda: tuple = ()
    pairs = 0
    for a in range(1, min(profile.K, len(support)) + 1):
        for chosen in itertools.combinations(range(len(support)), a):
            A = tuple(support[i] for i in chosen)
            weights = x[list(chosen)]
            f_A = D.atoms[:, list(A)] @ weights
            mass = float(np.sum(np.abs(weights)))
            others = [j for j in range(D.N) if j not in A]
            for k in range(0, profile.Dmax - a + 1):
                for Lambda in itertools.combinations(others, k):
                    pairs += 1
                    distance = _span_distance(f_A, D.atoms[:, list(Lambda)], D.ambient)
                    if mass == 0:
                        continue
                    ratio = math.inf if distance == 0 else mass / (a ** profile.r * distance)
                    if ratio > min_V:
                        min_V, worst_A, worst_Lambda = ratio, A, Lambda

    passed = None if profile.V is None else min_V <= profile.V
    logger.debug(f"Property A: minimal V={min_V:.6g} over {pairs} pairs (r={profile.r})")
    return PropertyAReport(min_V=min_V, pairs=pairs, passed=passed, worst_A=worst_A, worst_Lambda=worst_Lambda)
