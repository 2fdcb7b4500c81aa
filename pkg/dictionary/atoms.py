"""Dictionary type and dictionary builders."""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from config.constants import NORM_TOL
from spaces.norms import column_norms
from spaces.space import SmoothSpace
from utils.errors import DictionaryInvariantError, DimensionMismatchError, InvalidParameterError
from utils.validators import require, validate_open_unit, validate_positive_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dictionary:
    """
    A d x N matrix of atoms in an l_p space.

    Columns are atoms g^1..g^N with ||g^j|| <= 1. Algorithms work with the
    symmetrized set D^± and address its elements by signed 1-based
    indices: +j is g^j, -j is -g^j.
    """

    atoms: np.ndarray
    ambient: SmoothSpace
    label: str = "dictionary"
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms.reshape(-1, 1)
        if atoms.ndim != 2 or atoms.shape[0] != self.ambient.d:
            raise DimensionMismatchError(
                f"atoms have shape {atoms.shape}, expected ({self.ambient.d}, N)"
            )
        if atoms.shape[1] < 1:
            raise InvalidParameterError("N", "a dictionary needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise InvalidParameterError("atoms", "entries must be finite")
        norms = column_norms(atoms, self.ambient)
        worst = int(np.argmax(norms))
        if norms[worst] > 1.0 + NORM_TOL:
            raise DictionaryInvariantError(worst + 1, float(norms[worst]))
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    @property
    def d(self) -> int:
        return self.atoms.shape[0]

    @property
    def N(self) -> int:
        return self.atoms.shape[1]

    def column_norms(self) -> np.ndarray:
        return column_norms(self.atoms, self.ambient)

    def symmetrized(self) -> np.ndarray:
        """Columns of D^±: g^1..g^N followed by -g^1..-g^N."""
        return np.hstack([self.atoms, -self.atoms])

    def signed_atom(self, index: int) -> np.ndarray:
        """Element of D^± for a signed 1-based index."""
        if index == 0 or abs(index) > self.N:
            raise InvalidParameterError("index", f"signed index must be in ±[1, {self.N}]")
        column = self.atoms[:, abs(index) - 1]
        return column if index > 0 else -column

    def spans_space(self, tol: float = 1e-10) -> bool:
        """True iff the atoms span R^d (equivalently beta > 0)."""
        singular = np.linalg.svd(self.atoms, compute_uv=False)
        return bool(singular.size >= self.d and singular[self.d - 1] > tol * max(1.0, singular[0]))

    def with_atoms(self, atoms: np.ndarray, label: Optional[str] = None) -> "Dictionary":
        return Dictionary(atoms=atoms, ambient=self.ambient, label=label or self.label)

    def describe(self) -> Dict[str, Any]:
        norms = self.column_norms()
        return {
            "label": self.label,
            "d": self.d,
            "N": self.N,
            "p": self.ambient.p,
            "column_norm_min": float(norms.min()),
            "column_norm_max": float(norms.max()),
        }

    def __repr__(self):
        return f"Dictionary(label={self.label}, d={self.d}, N={self.N}, p={self.ambient.p})"


def build_canonical(sp: SmoothSpace) -> Dictionary:
    """
    The d coordinate atoms e^1..e^d.

    Signs are added by the algorithms at selection time.
    """
    return Dictionary(atoms=np.eye(sp.d), ambient=sp, label="canonical")


def build_random_sphere(sp: SmoothSpace, N: int, seed: Optional[int] = None) -> Dictionary:
    """
    N atoms on the unit sphere of the ambient norm.

    Args:
        sp: Ambient space
        N: Number of atoms
        seed: Generator seed; equal seeds give bitwise-equal matrices

    Returns:
        Dictionary with unit-norm columns
    """
    N = require(validate_positive_int(N, "N"), "N")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((sp.d, N))
    atoms = raw / column_norms(raw, sp)
    logger.debug(f"Built random sphere dictionary d={sp.d} N={N} seed={seed}")
    return Dictionary(atoms=atoms, ambient=sp, label=f"random_sphere_{N}")


def build_equiangular(n: int) -> Dictionary:
    """n atoms of l_2^2 at angles k*pi/n, k = 0..n-1."""
    n = require(validate_positive_int(n, "n"), "n")
    angles = np.pi * np.arange(n) / n
    atoms = np.vstack([np.cos(angles), np.sin(angles)])
    return Dictionary(atoms=atoms, ambient=SmoothSpace.euclidean(2), label=f"equiangular_{n}")


def build_incoherent(d: int, N_target: int, mu: float, max_attempts: int = 100000,
                     seed: Optional[int] = None, batch_size: int = 4096) -> Dictionary:
    """
    Sequential rejection packing of unit vectors in l_2^d.

    Candidates are drawn in order and kept when |<candidate, kept>| <= mu for
    every kept atom. Stops at N_target atoms or after max_attempts draws.
    A shortfall is reported in metadata, not raised.

    Args:
        d: Dimension
        N_target: Wanted number of atoms
        mu: Coherence cap in (0, 1)
        max_attempts: Draw budget
        seed: Generator seed
        batch_size: Candidates drawn per vectorized batch

    Returns:
        Dictionary with coherence <= mu; metadata holds achieved, attempts, shortfall
    """
    d = require(validate_positive_int(d, "d"), "d")
    N_target = require(validate_positive_int(N_target, "N_target"), "N_target")
    mu = require(validate_open_unit(mu, "mu"), "mu")
    max_attempts = require(validate_positive_int(max_attempts, "max_attempts"), "max_attempts")

    rng = np.random.default_rng(seed)
    kept = np.empty((0, d))
    attempts = 0
    while kept.shape[0] < N_target and attempts < max_attempts:
        count = min(batch_size, max_attempts - attempts)
        batch = rng.standard_normal((count, d))
        batch /= np.linalg.norm(batch, axis=1, keepdims=True)
        ok = np.all(np.abs(batch @ kept.T) <= mu, axis=1) if kept.size else np.ones(count, dtype=bool)
        start = 0
        while start < count and kept.shape[0] < N_target:
            hits = np.flatnonzero(ok[start:])
            if hits.size == 0:
                start = count
                break
            pick = start + int(hits[0])
            kept = np.vstack([kept, batch[pick]])
            start = pick + 1
            if start < count:
                ok[start:] &= np.abs(batch[start:] @ batch[pick]) <= mu
        attempts += start

    achieved = kept.shape[0]
    shortfall = N_target - achieved
    if shortfall > 0:
        logger.warning(
            f"Incoherent packing reached {achieved}/{N_target} atoms "
            f"(d={d}, mu={mu}) after {attempts} draws"
        )
    else:
        logger.info(f"Incoherent packing: {achieved} atoms (d={d}, mu={mu}) in {attempts} draws")

    dictionary = Dictionary(
        atoms=kept.T,
        ambient=SmoothSpace.euclidean(d),
        label=f"incoherent_mu{mu:g}",
    )
    dictionary.metadata.update({
        "N_target": N_target,
        "achieved": achieved,
        "attempts": attempts,
        "shortfall": shortfall,
        "mu": mu,
        "d_mu_squared": d * mu * mu,
        "log_achieved": math.log(achieved),
    })
    return dictionary
