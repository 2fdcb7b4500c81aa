"""Convex energies E with declared smoothness, and their numerical checks."""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from config.constants import FD_STEP
from spaces.modulus import ModulusEstimate, sup_symmetric_difference
from spaces.norms import lp_norm, norming_functional
from spaces.space import SmoothSpace
from utils.errors import GradientUndefinedError, InvalidParameterError, SamplingError
from utils.validators import require, validate_positive_real, validate_smoothness_power

logger = logging.getLogger(__name__)

SANDWICH_TOL = 1e-9
GRADIENT_REL_TOL = 1e-5


@dataclass(frozen=True)
class Potential:
    """Scalar profile V with V' > 0 on (0, inf), used in E(x) = V(‖x - f0‖)."""

    name: str
    value: Callable[[float], float]
    derivative: Callable[[float], float]

    @classmethod
    def square(cls) -> "Potential":
        return cls("square", lambda u: 0.5 * u * u, lambda u: u)

    @classmethod
    def identity(cls) -> "Potential":
        return cls("identity", lambda u: u, lambda u: 1.0)

    @classmethod
    def quartic(cls) -> "Potential":
        return cls("quartic", lambda u: u ** 4, lambda u: 4.0 * u ** 3)

    @classmethod
    def power(cls, r: float) -> "Potential":
        if r <= 1:
            raise InvalidParameterError("r", "power potential needs r > 1")
        return cls(f"power_{r:g}", lambda u: u ** r, lambda u: r * u ** (r - 1.0))

    @classmethod
    def by_name(cls, name: str) -> "Potential":
        builders = {"square": cls.square, "identity": cls.identity, "quartic": cls.quartic}
        if name not in builders:
            raise InvalidParameterError("potential", f"unknown potential {name}")
        return builders[name]()


@dataclass(frozen=True, eq=False)
class Energy:
    """
    Convex objective on R^d.

    C0 bounds ‖x‖ on the level set D = {x : E(x) <= E(0)}; (q, gamma)
    declare rho(E, u) <= gamma u^q on D. A quadratic_target y marks
    E(x) = ½‖y - x‖_2^2, for which span minimization is least squares.
    """

    evaluate: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    q: float
    gamma: float
    C0: float
    known_min: Optional[float] = None
    label: str = "energy"
    quadratic_target: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q", require(validate_smoothness_power(self.q), "energy.q"))
        object.__setattr__(self, "gamma", require(validate_positive_real(self.gamma, "gamma"), "energy.gamma"))
        object.__setattr__(self, "C0", require(validate_positive_real(self.C0, "C0"), "energy.C0"))

    def __call__(self, x: np.ndarray) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)))

    def grad(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.gradient(np.asarray(x, dtype=float)), dtype=float)

    def gap(self, value: float) -> Optional[float]:
        """E(x) - E* when the minimum is known."""
        if self.known_min is None:
            return None
        return value - self.known_min

    def evaluate_rows(self, points: np.ndarray) -> np.ndarray:
        return np.array([self(x) for x in points])


def make_quadratic_energy(y) -> Energy:
    """
    E(z) = ½‖y - z‖_2^2.

    gamma = 1/2 and q = 2 exactly; the level set is the ball ‖z - y‖ <= ‖y‖,
    so C0 = 2‖y‖ (1 for y = 0); the minimum 0 is attained at y.
    """
    y = np.array(y, dtype=float)
    size = float(np.linalg.norm(y))
    return Energy(
        evaluate=lambda z: 0.5 * float(np.sum((y - z) ** 2)),
        gradient=lambda z: z - y,
        q=2.0,
        gamma=0.5,
        C0=2.0 * size if size > 0 else 1.0,
        known_min=0.0,
        label="quadratic",
        quadratic_target=y,
    )


def make_norm_composite_energy(f0, V: Potential, sp: SmoothSpace, q: Optional[float] = None,
                               gamma: Optional[float] = None, C0: Optional[float] = None,
                               known_min: Optional[float] = None) -> Energy:
    """
    E(x) = V(‖x - f0‖) with E'(x) = V'(‖x - f0‖) F_{x - f0}.

    Args:
        f0: Center
        V: Potential
        sp: Ambient space
        q: Declared smoothness power (defaults to the space's)
        gamma: Declared smoothness coefficient (defaults to the space's)
        C0: Level-set radius (defaults to 2‖f0‖, exact for increasing V)
        known_min: Minimum value (defaults to V(0))

    Returns:
        Energy; the square potential in l_2 carries a quadratic_target

    Raises:
        GradientUndefinedError: From the gradient at x = f0 when V'(0) != 0
    """
    f0 = sp.check_vector(f0, "f0").copy()
    quadratic = V.name == "square" and sp.is_euclidean
    if quadratic:
        q, gamma = 2.0, 0.5
    else:
        q = sp.q if q is None else q
        gamma = sp.gamma if gamma is None else gamma
    size = float(lp_norm(f0, sp.p))
    if C0 is None:
        C0 = 2.0 * size if size > 0 else 1.0

    def evaluate(x: np.ndarray) -> float:
        return V.value(float(lp_norm(x - f0, sp.p)))

    def gradient(x: np.ndarray) -> np.ndarray:
        z = x - f0
        distance = float(lp_norm(z, sp.p))
        if distance == 0:
            if V.derivative(0.0) != 0:
                raise GradientUndefinedError(f"{V.name} potential has a kink at x = f0")
            return np.zeros_like(z)
        return V.derivative(distance) * norming_functional(z, sp)

    return Energy(
        evaluate=evaluate,
        gradient=gradient,
        q=q,
        gamma=gamma,
        C0=C0,
        known_min=V.value(0.0) if known_min is None else known_min,
        label=f"composite_{V.name}",
        quadratic_target=f0 if quadratic else None,
    )


def sample_level_set(E: Energy, sp: SmoothSpace, n: int, rng: np.random.Generator,
                     max_attempts: Optional[int] = None) -> np.ndarray:
    """
    Rejection-sample n points of D = {E(x) <= E(0)} from the ball of radius C0.

    Raises:
        SamplingError: If fewer than n points are accepted within max_attempts draws
    """
    max_attempts = max_attempts or 1000 * n
    level = E(np.zeros(sp.d))
    accepted: List[np.ndarray] = []
    attempts = 0
    while len(accepted) < n and attempts < max_attempts:
        count = min(4 * n, max_attempts - attempts)
        directions = rng.standard_normal((count, sp.d))
        directions /= lp_norm(directions.T, sp.p, axis=0)[:, None]
        radii = E.C0 * rng.random(count) ** (1.0 / sp.d)
        for point in directions * radii[:, None]:
            if E(point) <= level:
                accepted.append(point)
                if len(accepted) == n:
                    break
        attempts += count
    if len(accepted) < n:
        raise SamplingError(
            f"accepted {len(accepted)}/{n} level-set points in {attempts} draws (C0={E.C0})"
        )
    return np.array(accepted)


def _unit_directions(rng: np.random.Generator, n: int, sp: SmoothSpace) -> np.ndarray:
    raw = rng.standard_normal((n, sp.d))
    return raw / lp_norm(raw.T, sp.p, axis=0)[:, None]


def energy_modulus_estimate(E: Energy, sp: SmoothSpace, u_grid: Sequence[float], n_samples: int,
                            seed: Optional[int] = None) -> ModulusEstimate:
    """
    Empirical rho(E, u) = sup ½|E(x+uy) + E(x-uy) - 2E(x)| over x in D and unit y.

    Args:
        E: Energy
        sp: Ambient space
        u_grid: Non-negative steps
        n_samples: Sample pairs
        seed: Generator seed

    Returns:
        ModulusEstimate against the energy's declared (gamma, q)
    """
    grid = [float(u) for u in u_grid]
    if any(u < 0 for u in grid):
        raise InvalidParameterError("u_grid", "steps must be non-negative")
    rng = np.random.default_rng(seed)
    xs = sample_level_set(E, sp, n_samples, rng)
    ys = _unit_directions(rng, n_samples, sp)
    baseline = E.evaluate_rows(xs)

    rows = []
    violations = []
    for u in grid:
        rho = 0.0 if u == 0 else abs(sup_symmetric_difference(E.evaluate_rows, xs, ys, u, baseline))
        bound = E.gamma * u ** E.q
        rows.append((u, rho))
        if rho > bound + 1e-12 * max(1.0, bound):
            violations.append((u, rho, bound))
            logger.warning(f"Energy modulus {rho:.3e} exceeds gamma*u^q={bound:.3e} at u={u} ({E.label})")
    return ModulusEstimate(rows=rows, gamma=E.gamma, q=E.q, violations=violations)


@dataclass
class EnergyCheckReport:
    """Worst observed defects of the convexity, sandwich and gradient checks."""

    convexity_defect: float
    sandwich_lower_defect: float
    sandwich_upper_defect: float
    gradient_rel_error: float
    n_samples: int

    @property
    def passed(self) -> bool:
        return (
            self.convexity_defect <= SANDWICH_TOL
            and self.sandwich_lower_defect <= SANDWICH_TOL
            and self.sandwich_upper_defect <= SANDWICH_TOL
            and self.gradient_rel_error <= GRADIENT_REL_TOL
        )

    def as_dict(self) -> dict:
        return {
            "convexity_defect": self.convexity_defect,
            "sandwich_lower_defect": self.sandwich_lower_defect,
            "sandwich_upper_defect": self.sandwich_upper_defect,
            "gradient_rel_error": self.gradient_rel_error,
            "n_samples": self.n_samples,
            "pass": self.passed,
        }


def finite_difference_gradient(E: Energy, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient, coordinate by coordinate."""
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (E(x + e) - E(x - e)) / (2.0 * step)
    return grad


def check_energy(E: Energy, sp: SmoothSpace, n_samples: int = 1000, seed: Optional[int] = None,
                 n_gradient: int = 100) -> EnergyCheckReport:
    """
    Sampled checks on the level set.

    Convexity: E(y) >= E(x) + <E'(x), y - x>. Sandwich:
    0 <= E(x+uy) - E(x) - u<E'(x), y> <= 2 gamma (u‖y‖)^q. Gradient:
    central differences against E' (relative error). Defects are scaled by
    max(1, |E(x)|).
    """
    rng = np.random.default_rng(seed)
    xs = sample_level_set(E, sp, n_samples, rng)
    others = sample_level_set(E, sp, n_samples, rng)
    ys = _unit_directions(rng, n_samples, sp)
    us = rng.random(n_samples)

    convexity = 0.0
    lower = 0.0
    upper = 0.0
    for x, other, y, u in zip(xs, others, ys, us):
        try:
            g = E.grad(x)
        except GradientUndefinedError:
            continue
        ex = E(x)
        scale = max(1.0, abs(ex))
        convexity = max(convexity, (ex + float(g @ (other - x)) - E(other)) / scale)
        excess = E(x + u * y) - ex - u * float(g @ y)
        lower = max(lower, -excess / scale)
        upper = max(upper, (excess - 2.0 * E.gamma * (u * float(lp_norm(y, sp.p))) ** E.q) / scale)

    gradient_error = 0.0
    for x in xs[:n_gradient]:
        try:
            g = E.grad(x)
        except GradientUndefinedError:
            continue
        fd = finite_difference_gradient(E, x)
        gradient_error = max(gradient_error, float(np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-12)))

    report = EnergyCheckReport(
        convexity_defect=convexity,
        sandwich_lower_defect=lower,
        sandwich_upper_defect=upper,
        gradient_rel_error=gradient_error,
        n_samples=n_samples,
    )
    logger.info(f"Energy checks for {E.label}: {report.as_dict()}")
    return report
