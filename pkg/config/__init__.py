"""Configuration package for the dictionary-descent toolkit."""
from .settings import settings
from .constants import *

__all__ = ['settings']
