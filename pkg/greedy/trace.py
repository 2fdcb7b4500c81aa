"""Per-iteration records of greedy runs and their CSV form."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config.constants import STATUS_CONVERGED, STATUS_MAX_ITER, STATUS_RUNNING, TRACE_CSV_HEADER
from spaces.norms import lp_norm
from spaces.space import SmoothSpace
from utils.errors import ConfigError
from utils.formatters import format_real, format_signed_index
from utils.io import read_table, write_table

logger = logging.getLogger(__name__)


@dataclass
class IterationRecord:
    """
    One greedy step.

    value is F(phi_m) for the chosen signed atom, sup_value the best score
    over D^± (r_D(f_{m-1}) for DGA) and margin the relative gap between the
    best and the runner-up score.
    """

    m: int
    selected_index: int
    value: float
    sup_value: float
    step_coefficient: float
    residual_norm: float
    coeff_l1: float
    margin: float = 1.0
    phase: str = ""


@dataclass
class Trace:
    """Result of a greedy approximation run."""

    algorithm: str
    initial_norm: float
    f0: np.ndarray
    coefficients: np.ndarray
    residual: np.ndarray
    records: List[IterationRecord] = field(default_factory=list)
    status: str = STATUS_RUNNING
    kappa: Optional[float] = None
    lambda1: Optional[float] = None
    beta: Optional[float] = None
    factor: Optional[float] = None
    coeff_sum: float = 0.0
    expansion: List[Tuple[float, int]] = field(default_factory=list)

    def residual_norms(self) -> np.ndarray:
        """‖f_0‖, ‖f_1‖, ..., ‖f_m‖."""
        return np.array([self.initial_norm] + [r.residual_norm for r in self.records])

    def selected_indices(self) -> List[int]:
        return [r.selected_index for r in self.records]

    def approximant(self) -> np.ndarray:
        """G_m = f_0 - f_m."""
        return self.f0 - self.residual

    @property
    def iterations(self) -> int:
        return len(self.records)

    def min_margin(self) -> float:
        return min((r.margin for r in self.records), default=1.0)

    def summary(self) -> dict:
        norms = self.residual_norms()
        return {
            "algorithm": self.algorithm,
            "status": self.status,
            "iterations": self.iterations,
            "initial_norm": self.initial_norm,
            "final_norm": float(norms[-1]),
            "coeff_l1": float(np.sum(np.abs(self.coefficients))),
            "kappa": self.kappa,
            "lambda1": self.lambda1,
            "beta": self.beta,
            "factor": self.factor,
        }


def new_trace(algorithm: str, f0: np.ndarray, N: int, sp: SmoothSpace) -> Trace:
    """Empty trace at G_0 = 0, f_0 = f0."""
    return Trace(
        algorithm=algorithm,
        initial_norm=float(lp_norm(f0, sp.p)),
        f0=f0.copy(),
        coefficients=np.zeros(N),
        residual=f0.copy(),
    )


def finish_trace(trace: Trace, stop_norm: float) -> Trace:
    """Set the terminal status of a run that did not stop early."""
    if trace.status == STATUS_RUNNING:
        final = trace.residual_norms()[-1]
        trace.status = STATUS_CONVERGED if final <= stop_norm else STATUS_MAX_ITER
    logger.debug(
        f"{trace.algorithm}: {trace.status} after {trace.iterations} iterations, "
        f"residual {trace.residual_norms()[-1]:.3e} (from {trace.initial_norm:.3e})"
    )
    return trace


def trace_rows(trace: Trace) -> List[List[str]]:
    return [
        [str(r.m), format_signed_index(r.selected_index), format_real(r.residual_norm), format_real(r.coeff_l1)]
        for r in trace.records
    ]


def write_trace_csv(trace: Trace, path: str):
    """Write `iter,selected_index,residual_norm,coeff_l1` rows, one per iteration."""
    write_table(path, TRACE_CSV_HEADER, trace_rows(trace))
    logger.debug(f"Wrote {trace.algorithm} trace ({trace.iterations} rows) to {path}")


def read_trace_csv(path: str) -> List[Tuple[int, int, float, float]]:
    """
    Parse a trace CSV.

    Returns:
        List of (iter, selected_index, residual_norm, coeff_l1)

    Raises:
        ConfigError: If the header is not the trace header
    """
    _, header, rows = read_table(path)
    if header != TRACE_CSV_HEADER:
        raise ConfigError(path, f"expected header {','.join(TRACE_CSV_HEADER)}")
    return [(int(a), int(b), float(c), float(d)) for a, b, c, d in rows]
