"""Command error handling package."""
from .error import error_handler, exit_code_for

__all__ = ['error_handler', 'exit_code_for']
