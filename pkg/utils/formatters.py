"""Formatting functions for CSV cells, log lines and reports."""
import logging
import math
from typing import Any, Optional, Sequence

from config.constants import SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)


def format_real(value: Optional[float]) -> str:
    """
    Format a real for round-trip output.

    Args:
        value: Real value, or None for an empty cell

    Returns:
        Decimal literal with 17 significant digits
    """
    if value is None:
        return ""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_signed_index(index: int) -> str:
    """Format a signed 1-based atom index (+j / -j)."""
    return f"{int(index):+d}"


def format_bracket(lower: Optional[float], upper: Optional[float], decimals: int = 6) -> str:
    """
    Format a two-sided bracket for logs.

    Args:
        lower: Lower end (None when absent)
        upper: Upper end
        decimals: Number of decimal places

    Returns:
        Bracket string such as "[0.707100, 0.707108]"
    """
    lo = "?" if lower is None else f"{lower:.{decimals}f}"
    hi = "?" if upper is None else f"{upper:.{decimals}f}"
    return f"[{lo}, {hi}]"


def format_verdict(passed: Optional[bool]) -> str:
    """Format a pass/fail verdict; None marks an exploratory check."""
    if passed is None:
        return "EXPLORATORY"
    return "PASS" if passed else "FAIL"


def format_vector(values: Sequence[float]) -> str:
    """Format a vector as comma-separated round-trip literals."""
    return ",".join(format_real(v) for v in values)


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy scalars/arrays and tuples into plain JSON values.

    Args:
        value: Arbitrary nested structure

    Returns:
        Structure made of dict, list, str, int, float, bool and None
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return to_jsonable(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        return format_real(value)
    return value
