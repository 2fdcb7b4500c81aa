"""Sphere/ball coverings and their duality with the beta parameter."""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config.constants import (
    COVERING_TARGETS, COVERING_BETA_CAP, NORM_TOL, TARGET_BALL, TARGET_SPHERE
)
from config.settings import settings
from dictionary.atoms import Dictionary
from dictionary.metrics import beta_bruteforce
from spaces.space import SmoothSpace
from utils.errors import HypothesisViolationError, InvalidParameterError, ZeroVectorError
from utils.validators import require, validate_radius

logger = logging.getLogger(__name__)

SAMPLE_CHUNK = 8192


@dataclass(frozen=True, eq=False)
class CoveringSpec:
    """Balls B(x, r) around centers meant to cover the unit sphere or unit ball of l_2^d."""

    centers: np.ndarray
    radius: float
    target: str = TARGET_SPHERE
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        centers = np.atleast_2d(np.array(self.centers, dtype=float))
        radius = require(validate_radius(self.radius), "radius")
        if self.target not in COVERING_TARGETS:
            raise InvalidParameterError("target", f"must be one of {COVERING_TARGETS}")
        if centers.shape[0] < 1:
            raise InvalidParameterError("centers", "need at least one center")
        if np.any(np.linalg.norm(centers, axis=1) > 1.0 + NORM_TOL):
            raise InvalidParameterError("centers", "centers must have norm <= 1")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radius", radius)

    @property
    def d(self) -> int:
        return self.centers.shape[1]


@dataclass
class CoveringReport:
    """Monte-Carlo covering verdict."""

    n_samples: int
    covered_fraction: float
    worst_gap: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "covered_fraction": self.covered_fraction,
            "worst_gap": self.worst_gap,
            "pass": self.passed,
        }


def covering_from_beta(D: Dictionary, beta: Optional[float] = None, cap: bool = True) -> CoveringSpec:
    """
    Ball covering {B(±beta g^j, r)}, r^2 = 1 - beta^2, of the unit ball.

    Valid whenever beta is a lower bound on beta(D) and beta <= 2^(-1/2).
    A larger beta is capped at 2^(-1/2) (a smaller lower bound still
    certifies the covering) unless cap is False.

    Args:
        D: Dictionary in l_2^d
        beta: Certified lower bound; the grid oracle's lower end when omitted
        cap: Clamp beta to 2^(-1/2) instead of raising

    Returns:
        CoveringSpec targeting the unit ball
    """
    if not D.ambient.is_euclidean:
        raise InvalidParameterError("p", "coverings are built in l_2 only")
    if beta is None:
        beta = beta_bruteforce(D).lower
    if beta is None or beta <= 0:
        raise HypothesisViolationError("beta must be a positive lower bound (atoms must span)")
    if beta > COVERING_BETA_CAP:
        if not cap:
            raise HypothesisViolationError(f"beta={beta:.6f} exceeds 2^(-1/2)")
        logger.warning(f"Capping beta {beta:.6f} at 2^(-1/2) for the ball covering")
        beta = COVERING_BETA_CAP

    centers = beta * np.hstack([D.atoms, -D.atoms]).T
    radius = math.sqrt(1.0 - beta * beta)
    return CoveringSpec(centers=centers, radius=radius, target=TARGET_BALL, metadata={"beta": beta})


def dictionary_from_covering(cov: CoveringSpec) -> Dictionary:
    """
    Normalized centers of a sphere covering, as a dictionary.

    The covering certifies beta >= sqrt(1 - r^2); the claim is stored in
    metadata["beta_lower_claim"] for checking against the grid oracle.
    """
    if cov.target != TARGET_SPHERE:
        raise InvalidParameterError("target", "dictionary_from_covering needs a sphere covering")
    norms = np.linalg.norm(cov.centers, axis=1)
    if np.any(norms == 0):
        raise ZeroVectorError("covering centers must be nonzero")
    atoms = (cov.centers / norms[:, None]).T
    dictionary = Dictionary(
        atoms=atoms, ambient=SmoothSpace.euclidean(cov.d), label=f"covering_r{cov.radius:g}"
    )
    dictionary.metadata["beta_lower_claim"] = math.sqrt(max(0.0, 1.0 - cov.radius ** 2))
    return dictionary


def equispaced_circle_covering(radius: float, count: Optional[int] = None) -> CoveringSpec:
    """
    Equispaced points on S^1 covering the circle with chord radius r.

    With n points the largest chord to the nearest center is 2 sin(pi / (2n)),
    so n = ceil(pi / (2 arcsin(r / 2))) points suffice.
    """
    radius = require(validate_radius(radius), "radius")
    needed = math.ceil(math.pi / (2.0 * math.asin(radius / 2.0)))
    n = needed if count is None else count
    if n < needed:
        raise HypothesisViolationError(f"{n} equispaced centers cannot cover S^1 at radius {radius}")
    angles = 2.0 * math.pi * np.arange(n) / n
    centers = np.vstack([np.cos(angles), np.sin(angles)]).T
    return CoveringSpec(centers=centers, radius=radius, target=TARGET_SPHERE)


def sample_target(target: str, d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples on the unit sphere or unit ball of l_2^d, one per row."""
    points = rng.standard_normal((n, d))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    if target == TARGET_BALL:
        points *= rng.random(n)[:, None] ** (1.0 / d)
    return points


def verify_covering(cov: CoveringSpec, n_samples: Optional[int] = None,
                    seed: Optional[int] = None) -> CoveringReport:
    """
    Monte-Carlo covering check.

    Args:
        cov: Covering to check
        n_samples: Uniform samples on the target (defaults from settings)
        seed: Generator seed

    Returns:
        CoveringReport; passed means every sample was within the radius
    """
    n_samples = n_samples or settings.COVERING_SAMPLES
    rng = np.random.default_rng(seed)
    points = sample_target(cov.target, cov.d, n_samples, rng)
    center_sq = np.sum(cov.centers ** 2, axis=1)

    covered = 0
    worst_gap = -math.inf
    for start in range(0, n_samples, SAMPLE_CHUNK):
        block = points[start:start + SAMPLE_CHUNK]
        sq = np.sum(block ** 2, axis=1)[:, None] - 2.0 * block @ cov.centers.T + center_sq[None, :]
        nearest = np.sqrt(np.clip(np.min(sq, axis=1), 0.0, None))
        gaps = nearest - cov.radius
        covered += int(np.count_nonzero(gaps <= NORM_TOL))
        worst_gap = max(worst_gap, float(np.max(gaps)))

    fraction = covered / n_samples
    passed = covered == n_samples
    logger.info(
        f"Covering check ({cov.target}, d={cov.d}, {cov.centers.shape[0]} centers, r={cov.radius:.6f}): "
        f"fraction={fraction:.6f} worst_gap={worst_gap:.3e}"
    )
    return CoveringReport(n_samples=n_samples, covered_fraction=fraction, worst_gap=worst_gap, passed=passed)
