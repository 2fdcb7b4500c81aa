"""Greedy run configuration."""
from dataclasses import dataclass, field, replace

from config.constants import SCAN_EXACT, SCAN_FIRST_ACCEPTABLE
from config.settings import settings
from utils.errors import InvalidParameterError
from utils.validators import (
    require, validate_open_unit, validate_positive_int, validate_positive_real, validate_weakness
)


@dataclass(frozen=True)
class GreedyConfig:
    """
    Parameters shared by every greedy algorithm.

    Ties in atom selection always go to the lowest signed index among
    scores within tie_tol (relative) of the best.
    """

    t: float = 1.0
    b: float = 0.5
    max_iter: int = 100
    inner_tol: float = field(default_factory=lambda: settings.INNER_TOL)
    inner_max_iter: int = field(default_factory=lambda: settings.INNER_MAX_ITER)
    stop_norm: float = 1e-12
    scan_mode: str = SCAN_EXACT
    tie_tol: float = field(default_factory=lambda: settings.TIE_TOL)
    recompute_every: int = field(default_factory=lambda: settings.RECOMPUTE_EVERY)

    def __post_init__(self):
        object.__setattr__(self, "t", require(validate_weakness(self.t), "params.t"))
        object.__setattr__(self, "b", require(validate_open_unit(self.b, "b"), "params.b"))
        object.__setattr__(
            self, "max_iter", require(validate_positive_int(self.max_iter, "max_iter"), "params.max_iter")
        )
        object.__setattr__(
            self, "inner_tol", require(validate_positive_real(self.inner_tol, "inner_tol"), "params.inner_tol")
        )
        object.__setattr__(
            self, "inner_max_iter",
            require(validate_positive_int(self.inner_max_iter, "inner_max_iter"), "params.inner_max_iter"),
        )
        object.__setattr__(
            self, "recompute_every",
            require(validate_positive_int(self.recompute_every, "recompute_every"), "params.recompute_every"),
        )
        if self.stop_norm < 0:
            raise InvalidParameterError("params.stop_norm", "must be non-negative")
        if self.tie_tol < 0:
            raise InvalidParameterError("params.tie_tol", "must be non-negative")
        if self.scan_mode not in (SCAN_EXACT, SCAN_FIRST_ACCEPTABLE):
            raise InvalidParameterError(
                "params.scan_mode", f"must be '{SCAN_EXACT}' or '{SCAN_FIRST_ACCEPTABLE}'"
            )

    def with_updates(self, **changes) -> "GreedyConfig":
        return replace(self, **changes)
