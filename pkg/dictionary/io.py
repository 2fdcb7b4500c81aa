"""CSV persistence for dictionaries and coverings."""
import logging
from typing import List, Optional

import numpy as np

from config.constants import TARGET_BALL, TARGET_SPHERE
from dictionary.atoms import Dictionary
from dictionary.covering import CoveringSpec
from spaces.space import SmoothSpace
from utils.errors import ConfigError
from utils.formatters import format_real, format_vector
from utils.io import parse_comment_fields, read_table, write_table

logger = logging.getLogger(__name__)

SHORT_TARGETS = {"sphere": TARGET_SPHERE, "ball": TARGET_BALL}


def _parse_rows(rows: List[List[str]], path: str) -> np.ndarray:
    try:
        return np.array([[float(cell) for cell in row] for row in rows], dtype=float)
    except ValueError as e:
        raise ConfigError(path, f"non-numeric entry: {e}")


def save_dictionary(D: Dictionary, path: str):
    """
    Write atoms one per line after a `# d=.. N=.. p=.. label=..` header.

    Args:
        D: Dictionary to save
        path: Destination CSV
    """
    label = D.label.replace(" ", "_")
    comment = f"d={D.d} N={D.N} p={format_real(D.ambient.p)} label={label}"
    rows = [format_vector(column).split(",") for column in D.atoms.T]
    write_table(path, [], rows, comment=comment)
    logger.info(f"Saved dictionary {D.label} ({D.d}x{D.N}) to {path}")


def load_dictionary(path: str, ambient: Optional[SmoothSpace] = None) -> Dictionary:
    """
    Read a dictionary CSV written by save_dictionary.

    The header fixes d, N and p; a declared ambient space overrides p and
    the smoothness parameters. Column norms are validated on construction.

    Raises:
        ConfigError: If the header is missing or disagrees with the rows
        DictionaryInvariantError: If a column has norm > 1
    """
    comment, _, rows = read_table(path, has_header=False)
    fields = parse_comment_fields(comment)
    if "d" not in fields or "N" not in fields:
        raise ConfigError(path, "missing '# d=.. N=..' header line")
    atoms = _parse_rows(rows, path)
    d, n = int(fields["d"]), int(fields["N"])
    if atoms.shape != (n, d):
        raise ConfigError(path, f"header says {n} atoms of dimension {d}, found shape {atoms.shape}")
    if ambient is None:
        ambient = SmoothSpace(d=d, p=float(fields.get("p", "2")))
    return Dictionary(atoms=atoms.T, ambient=ambient, label=fields.get("label", "file"))


def save_covering(cov: CoveringSpec, path: str):
    """Write centers one per line after a `# radius=.. target=..` header."""
    short = "ball" if cov.target == TARGET_BALL else "sphere"
    comment = f"radius={format_real(cov.radius)} target={short}"
    rows = [format_vector(center).split(",") for center in cov.centers]
    write_table(path, [], rows, comment=comment)
    logger.info(f"Saved covering ({cov.centers.shape[0]} centers) to {path}")


def load_covering(path: str) -> CoveringSpec:
    """Read a covering CSV written by save_covering."""
    comment, _, rows = read_table(path, has_header=False)
    fields = parse_comment_fields(comment)
    if "radius" not in fields:
        raise ConfigError(path, "missing '# radius=.. target=..' header line")
    target = SHORT_TARGETS.get(fields.get("target", "sphere"))
    if target is None:
        raise ConfigError(path, f"unknown covering target {fields.get('target')}")
    return CoveringSpec(centers=_parse_rows(rows, path), radius=float(fields["radius"]), target=target)


def load_matrix(path: str) -> np.ndarray:
    """Plain numeric CSV (no header) as a 2-D array; a single line gives a 1 x n matrix."""
    _, _, rows = read_table(path, has_header=False)
    return np.atleast_2d(_parse_rows(rows, path))
