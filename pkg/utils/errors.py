"""Exception hierarchy shared by every package."""
from typing import Optional


class GreedyDescentError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(GreedyDescentError, ValueError):
    """A parameter is outside its admissible range."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigError(InvalidParameterError):
    """Run configuration is malformed (unknown key, bad type, bad value)."""


class DimensionMismatchError(GreedyDescentError, ValueError):
    """Vector or matrix dimension does not match the ambient space."""


class ZeroVectorError(GreedyDescentError, ValueError):
    """Operation undefined at the zero vector."""


class DictionaryInvariantError(GreedyDescentError):
    """A dictionary column violates ||g|| <= 1."""

    def __init__(self, column: int, norm: float):
        self.column = column
        self.norm = norm
        super().__init__(f"column {column} has norm {norm:.6g} > 1")


class OutsideSpanError(GreedyDescentError):
    """Target lies outside the span of the atoms; its atomic norm is +inf."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"target outside atom span (least-squares residual {residual:.3e})")


class InnerSolverError(GreedyDescentError):
    """Inner convex solver hit its iteration cap."""

    def __init__(self, iterations: int, gradient_norm: float):
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        super().__init__(
            f"inner solver did not converge in {iterations} iterations "
            f"(gradient norm {gradient_norm:.3e})"
        )


class BudgetExceededError(GreedyDescentError):
    """A brute-force enumeration would exceed its hard cap."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} cases, budget is {budget}")


class WindowTooSmallError(GreedyDescentError):
    """Rate-fit window has too few positive points."""

    def __init__(self, points: int, required: int):
        self.points = points
        self.required = required
        super().__init__(f"fit window has {points} usable points, need {required}")


class GradientUndefinedError(GreedyDescentError):
    """Energy gradient does not exist at the requested point."""


class SamplingError(GreedyDescentError):
    """Rejection sampling could not collect enough points."""


class SmoothnessViolationError(GreedyDescentError):
    """Declared (gamma, q) do not dominate an empirical modulus."""

    def __init__(self, u: float, observed: float, bound: float):
        self.u = u
        self.observed = observed
        self.bound = bound
        super().__init__(
            f"empirical modulus {observed:.6e} exceeds declared bound {bound:.6e} at u={u}"
        )


class HypothesisViolationError(GreedyDescentError):
    """A construction's precondition does not hold."""


def describe(exc: BaseException, field: Optional[str] = None) -> str:
    """One-line description of an error for stderr."""
    name = type(exc).__name__
    if field:
        return f"{name} [{field}]: {exc}"
    return f"{name}: {exc}"
