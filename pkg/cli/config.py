"""Strict JSON run configuration."""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from config.constants import (
    ALGO_HYBRID, ALGO_WGA, ALGO_WOGA, ALL_ALGORITHMS, DICTIONARY_RECIPES, OPTIMIZATION_ALGORITHMS,
    RECIPE_EQUIANGULAR, RECIPE_FILE, RECIPE_INCOHERENT, RECIPE_LASSO, RECIPE_RANDOM_SPHERE,
    TARGET_A1, TARGET_ATOM, TARGET_KINDS, TARGET_LASSO, TARGET_SPARSE, TARGET_VECTOR
)
from config.settings import settings
from greedy.config import GreedyConfig
from spaces.space import SmoothSpace
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ["csv", "json"]
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

TOP_KEYS = {
    "seed", "space", "dictionary", "algorithm", "params", "m_max", "target",
    "energy", "beta", "check", "output", "verbosity", "workers", "repeats",
}
SPACE_KEYS = {"d", "p", "q", "gamma"}
DICTIONARY_KEYS = {"recipe", "N", "mu", "max_attempts", "n", "path", "seed", "sparsity", "noise"}
PARAMS_KEYS = {
    "t", "b", "inner_tol", "inner_max_iter", "stop_norm", "scan_mode", "tie_tol",
    "recompute_every", "switch_iter",
}
TARGET_KEYS = {"kind", "values", "index", "n_atoms", "budget", "sparsity", "noise"}
ENERGY_KEYS = {"potential", "power", "q", "gamma"}
CHECK_KEYS = {"window", "max_slope", "max_final"}
OUTPUT_KEYS = {"dir", "formats"}

EUCLIDEAN_ONLY = {ALGO_WOGA, ALGO_WGA, ALGO_HYBRID}

_MISSING = object()


@dataclass
class CheckSpec:
    """Assertions that turn a run into a pass/fail experiment."""

    window: Tuple[int, int] = (16, 256)
    max_slope: Optional[float] = None
    max_final: Optional[float] = None

    @property
    def active(self) -> bool:
        return self.max_slope is not None or self.max_final is not None


@dataclass
class RunConfig:
    """Validated experiment description plus output options."""

    seed: int
    space: SmoothSpace
    algorithm: str
    params: GreedyConfig
    dictionary: Dict[str, Any]
    target: Dict[str, Any]
    energy: Optional[Dict[str, Any]] = None
    beta: Optional[float] = None
    switch_iter: Optional[int] = None
    check: CheckSpec = field(default_factory=CheckSpec)
    out_dir: str = field(default_factory=lambda: settings.OUTPUT_DIR)
    formats: List[str] = field(default_factory=lambda: list(OUTPUT_FORMATS))
    verbosity: Optional[str] = None
    workers: int = field(default_factory=lambda: settings.WORKERS)
    repeats: int = 1
    raw: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_descent(self) -> bool:
        return self.algorithm in OPTIMIZATION_ALGORITHMS

    @property
    def seeds(self) -> List[int]:
        """One seed per repeat, starting at the configured seed."""
        return [self.seed + k for k in range(self.repeats)]


def _reject_unknown(section: Dict[str, Any], allowed: set, prefix: str):
    for key in section:
        if key not in allowed:
            path = f"{prefix}.{key}" if prefix else key
            raise ConfigError(path, f"unknown key; allowed keys are {sorted(allowed)}")


def _section(raw: Dict[str, Any], name: str, allowed: set, required: bool = False) -> Dict[str, Any]:
    if name not in raw:
        if required:
            raise ConfigError(name, "section is required")
        return {}
    section = raw[name]
    if not isinstance(section, dict):
        raise ConfigError(name, "must be a JSON object")
    _reject_unknown(section, allowed, name)
    return section


def _get(section: Dict[str, Any], key: str, kind, path: str, default: Any = _MISSING) -> Any:
    """Typed lookup; ints are accepted where floats are expected, bools never are."""
    if key not in section:
        if default is _MISSING:
            raise ConfigError(path, "is required")
        return default
    value = section[key]
    if value is None:
        return None
    if isinstance(value, bool) and kind is not bool:
        raise ConfigError(path, f"must be of type {kind.__name__}")
    if kind is float and isinstance(value, int):
        return float(value)
    if not isinstance(value, kind):
        raise ConfigError(path, f"must be of type {kind.__name__}, got {type(value).__name__}")
    return value


def _parse_space(raw: Dict[str, Any]) -> SmoothSpace:
    section = _section(raw, "space", SPACE_KEYS, required=True)
    return SmoothSpace(
        d=_get(section, "d", int, "space.d"),
        p=_get(section, "p", float, "space.p", 2.0),
        q=_get(section, "q", float, "space.q", None),
        gamma=_get(section, "gamma", float, "space.gamma", None),
    )


def _parse_dictionary(raw: Dict[str, Any], sp: SmoothSpace, base_dir: str) -> Dict[str, Any]:
    section = _section(raw, "dictionary", DICTIONARY_KEYS, required=True)
    recipe = _get(section, "recipe", str, "dictionary.recipe")
    if recipe not in DICTIONARY_RECIPES:
        raise ConfigError("dictionary.recipe", f"must be one of {DICTIONARY_RECIPES}")
    spec: Dict[str, Any] = {"recipe": recipe, "seed": _get(section, "seed", int, "dictionary.seed", None)}

    if recipe == RECIPE_RANDOM_SPHERE:
        spec["N"] = _get(section, "N", int, "dictionary.N")
    elif recipe == RECIPE_INCOHERENT:
        spec["N"] = _get(section, "N", int, "dictionary.N")
        spec["mu"] = _get(section, "mu", float, "dictionary.mu")
        spec["max_attempts"] = _get(section, "max_attempts", int, "dictionary.max_attempts", 100000)
    elif recipe == RECIPE_EQUIANGULAR:
        spec["n"] = _get(section, "n", int, "dictionary.n")
        if sp.d != 2 or not sp.is_euclidean:
            raise ConfigError("dictionary.recipe", "equiangular dictionaries live in l_2^2")
    elif recipe == RECIPE_FILE:
        path = _get(section, "path", str, "dictionary.path")
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        if not os.path.exists(path):
            raise ConfigError("dictionary.path", f"file not found: {path}")
        spec["path"] = path
    elif recipe == RECIPE_LASSO:
        if not sp.is_euclidean:
            raise ConfigError("dictionary.recipe", "lasso instances live in l_2")
        spec["n"] = _get(section, "n", int, "dictionary.n")
        spec["sparsity"] = _get(section, "sparsity", int, "dictionary.sparsity")
        spec["noise"] = _get(section, "noise", float, "dictionary.noise", 0.0)

    extra = set(section) - set(spec) - {"recipe"}
    if extra:
        key = sorted(extra)[0]
        raise ConfigError(f"dictionary.{key}", f"not used by recipe '{recipe}'")
    return spec


def _parse_target(raw: Dict[str, Any], sp: SmoothSpace, recipe: str) -> Dict[str, Any]:
    section = _section(raw, "target", TARGET_KEYS, required=True)
    kind = _get(section, "kind", str, "target.kind")
    if kind not in TARGET_KINDS:
        raise ConfigError("target.kind", f"must be one of {TARGET_KINDS}")
    if (kind == TARGET_LASSO) != (recipe == RECIPE_LASSO):
        raise ConfigError("target.kind", "the lasso target goes with the lasso dictionary recipe")
    spec: Dict[str, Any] = {"kind": kind, "noise": _get(section, "noise", float, "target.noise", 0.0)}
    if spec["noise"] < 0:
        raise ConfigError("target.noise", "must be non-negative")

    if kind == TARGET_VECTOR:
        values = _get(section, "values", list, "target.values")
        if len(values) != sp.d or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            raise ConfigError("target.values", f"must be a list of {sp.d} numbers")
        spec["values"] = [float(v) for v in values]
    elif kind == TARGET_ATOM:
        spec["index"] = _get(section, "index", int, "target.index")
        if spec["index"] == 0:
            raise ConfigError("target.index", "signed atom indices are 1-based")
    elif kind == TARGET_A1:
        spec["n_atoms"] = _get(section, "n_atoms", int, "target.n_atoms")
        spec["budget"] = _get(section, "budget", float, "target.budget", 1.0)
    elif kind == TARGET_SPARSE:
        spec["sparsity"] = _get(section, "sparsity", int, "target.sparsity")

    extra = set(section) - set(spec) - {"kind"}
    if extra:
        key = sorted(extra)[0]
        raise ConfigError(f"target.{key}", f"not used by target kind '{kind}'")
    return spec


def _parse_params(raw: Dict[str, Any], m_max: int) -> Tuple[GreedyConfig, Optional[int]]:
    section = _section(raw, "params", PARAMS_KEYS)
    values: Dict[str, Any] = {"max_iter": m_max}
    for key, kind in (("t", float), ("b", float), ("inner_tol", float), ("inner_max_iter", int),
                      ("stop_norm", float), ("scan_mode", str), ("tie_tol", float), ("recompute_every", int)):
        if key in section:
            values[key] = _get(section, key, kind, f"params.{key}")
    switch_iter = _get(section, "switch_iter", int, "params.switch_iter", None)
    return GreedyConfig(**values), switch_iter


def _parse_energy(raw: Dict[str, Any], algorithm: str) -> Optional[Dict[str, Any]]:
    section = _section(raw, "energy", ENERGY_KEYS)
    if not section:
        return None
    if algorithm not in OPTIMIZATION_ALGORITHMS:
        raise ConfigError("energy", f"only used by {OPTIMIZATION_ALGORITHMS}")
    return {
        "potential": _get(section, "potential", str, "energy.potential", "square"),
        "power": _get(section, "power", float, "energy.power", None),
        "q": _get(section, "q", float, "energy.q", None),
        "gamma": _get(section, "gamma", float, "energy.gamma", None),
    }


def _parse_check(raw: Dict[str, Any]) -> CheckSpec:
    section = _section(raw, "check", CHECK_KEYS)
    window = _get(section, "window", list, "check.window", [16, 256])
    if len(window) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in window):
        raise ConfigError("check.window", "must be a pair of integers [m_lo, m_hi]")
    if not 1 <= window[0] < window[1]:
        raise ConfigError("check.window", "need 1 <= m_lo < m_hi")
    return CheckSpec(
        window=(window[0], window[1]),
        max_slope=_get(section, "max_slope", float, "check.max_slope", None),
        max_final=_get(section, "max_final", float, "check.max_final", None),
    )


def parse_run_config(raw: Dict[str, Any], base_dir: str = ".") -> RunConfig:
    """
    Validate a decoded run configuration.

    Args:
        raw: Decoded JSON object
        base_dir: Directory relative dictionary paths are resolved against

    Returns:
        RunConfig

    Raises:
        ConfigError: Naming the offending key path
        InvalidParameterError: From the domain constructors (space, params)
    """
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")
    _reject_unknown(raw, TOP_KEYS, "")

    seed = _get(raw, "seed", int, "seed")
    space = _parse_space(raw)
    algorithm = _get(raw, "algorithm", str, "algorithm")
    if algorithm not in ALL_ALGORITHMS:
        raise ConfigError("algorithm", f"must be one of {ALL_ALGORITHMS}")
    if algorithm in EUCLIDEAN_ONLY and not space.is_euclidean:
        raise ConfigError("algorithm", f"{algorithm} runs in l_2 only")

    m_max = _get(raw, "m_max", int, "m_max", 100)
    params, switch_iter = _parse_params(raw, m_max)
    dictionary = _parse_dictionary(raw, space, base_dir)
    target = _parse_target(raw, space, dictionary["recipe"])

    beta = _get(raw, "beta", float, "beta", None)
    if beta is not None and not 0 < beta <= 1:
        raise ConfigError("beta", "a certified lower bound must lie in (0, 1]")

    output = _section(raw, "output", OUTPUT_KEYS)
    formats = _get(output, "formats", list, "output.formats", list(OUTPUT_FORMATS))
    for fmt in formats:
        if fmt not in OUTPUT_FORMATS:
            raise ConfigError("output.formats", f"must be drawn from {OUTPUT_FORMATS}")
    out_dir = _get(output, "dir", str, "output.dir", settings.OUTPUT_DIR)
    if not os.path.isabs(out_dir):
        out_dir = os.path.join(base_dir, out_dir)

    verbosity = _get(raw, "verbosity", str, "verbosity", None)
    if verbosity is not None and verbosity.upper() not in LOG_LEVELS:
        raise ConfigError("verbosity", f"must be one of {LOG_LEVELS}")
    workers = _get(raw, "workers", int, "workers", settings.WORKERS)
    if workers < 1:
        raise ConfigError("workers", "must be at least 1")
    repeats = _get(raw, "repeats", int, "repeats", 1)
    if repeats < 1:
        raise ConfigError("repeats", "must be at least 1")

    return RunConfig(
        seed=seed,
        space=space,
        algorithm=algorithm,
        params=params,
        dictionary=dictionary,
        target=target,
        energy=_parse_energy(raw, algorithm),
        beta=beta,
        switch_iter=switch_iter,
        check=_parse_check(raw),
        out_dir=out_dir,
        formats=formats,
        verbosity=verbosity.upper() if verbosity else None,
        workers=workers,
        repeats=repeats,
        raw=raw,
    )


def load_run_config(path: str) -> RunConfig:
    """Read and validate a run configuration file."""
    if not os.path.exists(path):
        raise ConfigError("config", f"file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON at line {e.lineno}: {e.msg}")
    logger.debug(f"Loaded run config {path}")
    return parse_run_config(raw, base_dir=os.path.dirname(os.path.abspath(path)))
