"""The `dict` command: build a dictionary CSV or inspect one."""
import json
import logging
import os
from typing import Any, Dict, Optional

from config.constants import (
    EXIT_OK, RECIPE_CANONICAL, RECIPE_EQUIANGULAR, RECIPE_INCOHERENT, RECIPE_RANDOM_SPHERE
)
from config.settings import settings
from dictionary.atoms import (
    Dictionary, build_canonical, build_equiangular, build_incoherent, build_random_sphere
)
from dictionary.io import load_dictionary, save_dictionary
from dictionary.metrics import best_beta, coherence_report
from spaces.space import SmoothSpace
from utils.errors import ConfigError
from utils.formatters import to_jsonable

logger = logging.getLogger(__name__)

BUILD_KINDS = [RECIPE_CANONICAL, RECIPE_RANDOM_SPHERE, RECIPE_INCOHERENT, RECIPE_EQUIANGULAR]


def _required(value: Optional[Any], flag: str, kind: str) -> Any:
    if value is None:
        raise ConfigError(flag, f"is required for '{kind}'")
    return value


def build_from_args(kind: str, d: Optional[int] = None, n: Optional[int] = None, mu: Optional[float] = None,
                    p: float = 2.0, seed: Optional[int] = None, max_attempts: int = 100000) -> Dictionary:
    """
    Build a dictionary from command-line style arguments.

    Raises:
        ConfigError: For an unknown kind or a missing flag
    """
    if kind not in BUILD_KINDS:
        raise ConfigError("kind", f"must be one of {BUILD_KINDS}")
    if kind == RECIPE_EQUIANGULAR:
        return build_equiangular(_required(n, "--n", kind))
    d = _required(d, "--d", kind)
    if kind == RECIPE_INCOHERENT:
        if p != 2.0:
            raise ConfigError("--p", "incoherent packings live in l_2")
        return build_incoherent(d, _required(n, "--n", kind), _required(mu, "--mu", kind),
                                max_attempts=max_attempts, seed=seed)
    sp = SmoothSpace(d=d, p=p)
    if kind == RECIPE_CANONICAL:
        return build_canonical(sp)
    return build_random_sphere(sp, _required(n, "--n", kind), seed=seed)


def inspect_dictionary(D: Dictionary, seed: Optional[int] = None) -> Dict[str, Any]:
    """d, N, coherence, method-tagged beta bracket and column-norm range (the last two l_2 only)."""
    summary = D.describe()
    if D.ambient.is_euclidean:
        summary["coherence"], summary["coherence_renormalized"] = coherence_report(D)
    else:
        summary["coherence"] = None
    summary["beta"] = best_beta(D, seed=seed).as_dict() if D.ambient.is_euclidean else None
    return summary


def cmd_dict_build(kind: str, out: Optional[str] = None, **kwargs) -> int:
    D = build_from_args(kind, **kwargs)
    path = out or os.path.join(settings.OUTPUT_DIR, f"{D.label}.csv")
    save_dictionary(D, path)
    print(path)
    return EXIT_OK


def cmd_dict_inspect(path: str, seed: Optional[int] = None) -> int:
    """
    Print the inspection summary of a dictionary CSV as JSON.

    A column with norm above 1 raises DictionaryInvariantError while loading.
    """
    if not os.path.exists(path):
        raise ConfigError("path", f"file not found: {path}")
    D = load_dictionary(path)
    print(json.dumps(to_jsonable(inspect_dictionary(D, seed=seed)), indent=2))
    return EXIT_OK
