"""Utility functions package."""
from .errors import *
from .validators import *
from .formatters import *

__all__ = [
    'GreedyDescentError',
    'InvalidParameterError',
    'ConfigError',
    'require',
    'validate_exponent',
    'validate_weakness',
    'format_real',
    'format_bracket',
    'format_verdict',
]
