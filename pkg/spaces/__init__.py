"""Finite-dimensional l_p geometry."""
from .space import SmoothSpace, Vector, Covector, default_smoothness, dual_exponent
from .norms import (
    norm, dual_norm, pair, norming_functional, directional_derivative,
    convexity_defect, column_norms, lp_norm
)
from .modulus import ModulusEstimate, estimate_modulus, fit_power_exponent

__all__ = [
    'SmoothSpace', 'Vector', 'Covector', 'default_smoothness', 'dual_exponent',
    'norm', 'dual_norm', 'pair', 'norming_functional', 'directional_derivative',
    'convexity_defect', 'column_norms', 'lp_norm',
    'ModulusEstimate', 'estimate_modulus', 'fit_power_exponent',
]
