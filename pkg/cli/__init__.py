"""Command implementations behind main.py."""
from .config import RunConfig, CheckSpec, parse_run_config, load_run_config
from .run import run_experiment, cmd_run
from .dictionary import build_from_args, inspect_dictionary, cmd_dict_build, cmd_dict_inspect
from .verify import cmd_verify

__all__ = [
    'RunConfig', 'CheckSpec', 'parse_run_config', 'load_run_config',
    'run_experiment', 'cmd_run',
    'build_from_args', 'inspect_dictionary', 'cmd_dict_build', 'cmd_dict_inspect',
    'cmd_verify',
]
