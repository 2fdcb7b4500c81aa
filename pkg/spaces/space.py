"""Finite-dimensional l_p spaces with declared smoothness parameters."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.errors import DimensionMismatchError
from utils.validators import (
    require, validate_exponent, validate_positive_int,
    validate_positive_real, validate_smoothness_power
)

logger = logging.getLogger(__name__)

Vector = np.ndarray
Covector = np.ndarray


def default_smoothness(p: float):
    """
    Default (q, gamma) with rho(u) <= gamma * u**q for l_p.

    p <= 2 gives q = p, gamma = 1/p; p >= 2 gives q = 2, gamma = (p-1)/2.
    These are declared values; estimate_modulus checks them empirically.
    """
    if p <= 2:
        return p, 1.0 / p
    return 2.0, (p - 1.0) / 2.0


def dual_exponent(p: float) -> float:
    """Conjugate exponent p' with 1/p + 1/p' = 1."""
    return p / (p - 1.0)


@dataclass(frozen=True)
class SmoothSpace:
    """
    l_p^d with smoothness majorant rho(u) <= gamma * u**q.

    q and gamma default from p; explicit values win for every p, l_2
    included, and are only checked empirically by estimate_modulus.
    """

    d: int
    p: float = 2.0
    q: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        d = require(validate_positive_int(self.d, "d"), "space.d")
        p = require(validate_exponent(self.p), "space.p")
        default_q, default_gamma = default_smoothness(p)
        q = default_q if self.q is None else require(validate_smoothness_power(self.q), "space.q")
        gamma = default_gamma if self.gamma is None else require(
            validate_positive_real(self.gamma, "gamma"), "space.gamma"
        )
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gamma", gamma)
        if (q, gamma) != (default_q, default_gamma):
            logger.debug(f"Declared smoothness q={q:g}, gamma={gamma:g} replaces the l_{p:g} default "
                         f"q={default_q:g}, gamma={default_gamma:g}")

    @classmethod
    def euclidean(cls, d: int) -> "SmoothSpace":
        """l_2^d with q = 2, gamma = 1/2."""
        return cls(d=d, p=2.0)

    @classmethod
    def lp(cls, d: int, p: float) -> "SmoothSpace":
        return cls(d=d, p=p)

    @property
    def is_euclidean(self) -> bool:
        return self.p == 2.0

    @property
    def p_dual(self) -> float:
        return dual_exponent(self.p)

    def majorant(self, u: float) -> float:
        """Declared bound gamma * u**q on the modulus of smoothness."""
        return self.gamma * u ** self.q

    def check_vector(self, x, name: str = "x") -> Vector:
        """
        Coerce to a float vector of this space's dimension.

        Raises:
            DimensionMismatchError: If the length is not d
        """
        arr = np.asarray(x, dtype=float)
        if arr.ndim != 1 or arr.shape[0] != self.d:
            raise DimensionMismatchError(
                f"{name} has shape {arr.shape}, expected ({self.d},)"
            )
        return arr

    def describe(self) -> dict:
        return {"d": self.d, "p": self.p, "q": self.q, "gamma": self.gamma}
