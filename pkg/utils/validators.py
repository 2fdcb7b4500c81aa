"""Input validation functions."""
import logging
import math
from typing import Any, Optional, Tuple

from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

Validation = Tuple[bool, Optional[Any], Optional[str]]


def _as_float(value: Any) -> Optional[float]:
    if isinstance(value, bool):
        return None
    try:
        result = float(value)
    except (ValueError, TypeError):
        return None
    if not math.isfinite(result):
        return None
    return result


def validate_exponent(p_input: Any) -> Validation:
    """
    Validate an l_p exponent.

    Args:
        p_input: Candidate exponent

    Returns:
        Tuple of (is_valid, p, error_message)
    """
    p = _as_float(p_input)
    if p is None:
        return False, None, "Exponent p must be a finite number"
    if p <= 1:
        return False, None, "Exponent p must be > 1 (l_1 is not uniformly smooth)"
    return True, p, None


def validate_smoothness_power(q_input: Any) -> Validation:
    """
    Validate a smoothness power q.

    Args:
        q_input: Candidate power

    Returns:
        Tuple of (is_valid, q, error_message)
    """
    q = _as_float(q_input)
    if q is None:
        return False, None, "Smoothness power q must be a finite number"
    if not 1 < q <= 2:
        return False, None, "Smoothness power q must lie in (1, 2]"
    return True, q, None


def validate_weakness(t_input: Any) -> Validation:
    """
    Validate a weakness parameter t.

    Args:
        t_input: Candidate weakness parameter

    Returns:
        Tuple of (is_valid, t, error_message)
    """
    t = _as_float(t_input)
    if t is None:
        return False, None, "Weakness parameter t must be a number"
    if not 0 < t <= 1:
        return False, None, "Weakness parameter t must lie in (0, 1]"
    return True, t, None


def validate_open_unit(value_input: Any, name: str) -> Validation:
    """
    Validate a real in the open interval (0, 1).

    Args:
        value_input: Candidate value
        name: Parameter name used in the error message

    Returns:
        Tuple of (is_valid, value, error_message)
    """
    value = _as_float(value_input)
    if value is None:
        return False, None, f"{name} must be a number"
    if not 0 < value < 1:
        return False, None, f"{name} must lie in (0, 1)"
    return True, value, None


def validate_positive_real(value_input: Any, name: str) -> Validation:
    """
    Validate a strictly positive real.

    Args:
        value_input: Candidate value
        name: Parameter name used in the error message

    Returns:
        Tuple of (is_valid, value, error_message)
    """
    value = _as_float(value_input)
    if value is None:
        return False, None, f"{name} must be a number"
    if value <= 0:
        return False, None, f"{name} must be positive"
    return True, value, None


def validate_positive_int(value_input: Any, name: str) -> Validation:
    """
    Validate a strictly positive integer.

    Args:
        value_input: Candidate value
        name: Parameter name used in the error message

    Returns:
        Tuple of (is_valid, value, error_message)
    """
    if isinstance(value_input, bool):
        return False, None, f"{name} must be an integer"
    try:
        value = int(value_input)
    except (ValueError, TypeError):
        return False, None, f"{name} must be an integer"
    if value != value_input and not isinstance(value_input, str):
        return False, None, f"{name} must be an integer"
    if value < 1:
        return False, None, f"{name} must be at least 1"
    return True, value, None


def validate_radius(r_input: Any) -> Validation:
    """
    Validate a covering radius in (0, 1].

    Args:
        r_input: Candidate radius

    Returns:
        Tuple of (is_valid, radius, error_message)
    """
    r = _as_float(r_input)
    if r is None:
        return False, None, "Radius must be a number"
    if not 0 < r <= 1:
        return False, None, "Radius must lie in (0, 1]"
    return True, r, None


def require(result: Validation, field: str) -> Any:
    """
    Unwrap a validation tuple or raise.

    Args:
        result: Tuple returned by one of the validators
        field: Field name reported on failure

    Returns:
        The validated value

    Raises:
        InvalidParameterError: If validation failed
    """
    is_valid, value, error = result
    if not is_valid:
        logger.debug(f"Validation failed for {field}: {error}")
        raise InvalidParameterError(field, error)
    return value
