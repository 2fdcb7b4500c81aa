"""Error handler mapping exceptions to process exit codes."""
import logging
import sys
import traceback

from config.constants import EXIT_CONFIG_ERROR, EXIT_FAILURE
from utils.errors import (
    BudgetExceededError, DimensionMismatchError, InvalidParameterError, describe
)

logger = logging.getLogger(__name__)

CONFIG_ERRORS = (InvalidParameterError, DimensionMismatchError, BudgetExceededError)


def exit_code_for(exc: BaseException) -> int:
    """
    Exit code for an exception escaping a command.

    Args:
        exc: The exception

    Returns:
        2 for configuration and argument errors (ConfigError included), 1 otherwise
    """
    if isinstance(exc, CONFIG_ERRORS):
        return EXIT_CONFIG_ERROR
    return EXIT_FAILURE


def error_handler(exc: BaseException) -> int:
    """
    Log an exception with its traceback and report it on stderr.

    Args:
        exc: Exception raised by a command

    Returns:
        Process exit code
    """
    logger.error(f"Exception while running command: {exc}")

    tb_list = traceback.format_exception(type(exc), exc, exc.__traceback__)
    tb_string = ''.join(tb_list)
    logger.error(f"Traceback:\n{tb_string}")

    field = getattr(exc, "field", None)
    print(describe(exc, field if field and field not in str(exc) else None), file=sys.stderr)
    return exit_code_for(exc)
