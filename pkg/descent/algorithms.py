"""Greedy convex minimization over dictionaries: WCGA(co) and WGAFR(co)."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from config.constants import (
    ALGO_WCGA_CO, ALGO_WGAFR_CO, DESCENT_CSV_HEADER, MONOTONE_SLACK,
    STATUS_CONVERGED, STATUS_MAX_ITER, STATUS_OPTIMUM, STATUS_RUNNING
)
from descent.energy import Energy
from dictionary.atoms import Dictionary
from greedy.config import GreedyConfig
from greedy.projection import relaxation_step
from greedy.selection import select_by_covector
from spaces.norms import dual_norm
from spaces.space import SmoothSpace
from utils.errors import DimensionMismatchError, GradientUndefinedError, InnerSolverError
from utils.formatters import format_real, format_signed_index
from utils.io import write_table

logger = logging.getLogger(__name__)


@dataclass
class DescentRecord:
    m: int
    selected_index: int
    energy: float
    energy_gap: Optional[float]
    value: float
    margin: float = 1.0


@dataclass
class DescentTrace:
    """
    E(G_0), E(G_1), ... of a greedy descent run.

    proof_B is filled in when a certified beta is supplied; lambda1 is the
    first-step length (t beta a_0 / (8 gamma C0))^(1/(q-1)).
    """

    algorithm: str
    initial_energy: float
    known_min: Optional[float]
    coefficients: np.ndarray
    approximant: np.ndarray
    records: List[DescentRecord] = field(default_factory=list)
    status: str = STATUS_RUNNING
    beta: Optional[float] = None
    proof_B: Optional[float] = None
    lambda1: Optional[float] = None

    def energies(self) -> np.ndarray:
        return np.array([self.initial_energy] + [r.energy for r in self.records])

    def gaps(self) -> Optional[np.ndarray]:
        """a_m = E(G_m) - E*, or None without a known minimum."""
        if self.known_min is None:
            return None
        return self.energies() - self.known_min

    def selected_indices(self) -> List[int]:
        return [r.selected_index for r in self.records]

    @property
    def iterations(self) -> int:
        return len(self.records)

    def summary(self) -> dict:
        gaps = self.gaps()
        return {
            "algorithm": self.algorithm,
            "status": self.status,
            "iterations": self.iterations,
            "initial_energy": self.initial_energy,
            "final_energy": float(self.energies()[-1]),
            "final_gap": None if gaps is None else float(gaps[-1]),
            "beta": self.beta,
            "proof_B": self.proof_B,
            "lambda1": self.lambda1,
        }


def write_descent_csv(trace: DescentTrace, path: str):
    """Write `iter,selected_index,energy,energy_gap`; energy_gap is empty without a known minimum."""
    rows = [
        [str(r.m), format_signed_index(r.selected_index), format_real(r.energy), format_real(r.energy_gap)]
        for r in trace.records
    ]
    write_table(path, DESCENT_CSV_HEADER, rows)


def proof_B(t: float, beta: float, gamma: float, q: float, C0: float) -> float:
    """B with B^-1 = (t beta / (4 C0))^(q/(q-1)) (2 gamma)^(-1/(q-1))."""
    inverse = (t * beta / (4.0 * C0)) ** (q / (q - 1.0)) * (2.0 * gamma) ** (-1.0 / (q - 1.0))
    return 1.0 / inverse


def first_step_length(t: float, beta: float, gamma: float, q: float, C0: float, gap: float) -> float:
    """lambda_1 = (t beta a_{m-1} / (8 gamma C0))^(1/(q-1))."""
    return (t * beta * gap / (8.0 * gamma * C0)) ** (1.0 / (q - 1.0))


def proof_step_violations(gaps, B: float, q: float, tol: float = 1e-12) -> List[Tuple[int, float, float]]:
    """
    Steps breaking a_m <= a_{m-1} (1 - a_{m-1}^(1/(q-1)) / B).

    Returns:
        List of (m, bound, observed a_m)
    """
    violations = []
    for m in range(1, len(gaps)):
        previous = max(float(gaps[m - 1]), 0.0)
        bound = previous * (1.0 - previous ** (1.0 / (q - 1.0)) / B)
        if gaps[m] > bound + tol * max(1.0, previous):
            violations.append((m, bound, float(gaps[m])))
    return violations


def _safe_gradient(E: Energy, x: np.ndarray) -> np.ndarray:
    try:
        return E.grad(x)
    except GradientUndefinedError:
        return np.zeros_like(x)


def minimize_on_span(E: Energy, Phi: np.ndarray, inner_tol: float, inner_max_iter: int,
                     start: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Coefficients c minimizing E(Phi c).

    Quadratic energies are solved by least squares; others by BFGS with
    gradient Phi^T E'(Phi c) to stationarity inner_tol.

    Raises:
        InnerSolverError: If the iteration cap is reached
    """
    if E.quadratic_target is not None:
        coefficients, *_ = np.linalg.lstsq(Phi, E.quadratic_target, rcond=None)
        return coefficients

    def objective(c):
        x = Phi @ c
        return E(x), Phi.T @ _safe_gradient(E, x)

    x0 = np.zeros(Phi.shape[1]) if start is None else np.asarray(start, dtype=float)
    result = optimize.minimize(
        objective, x0, jac=True, method="BFGS", options={"gtol": inner_tol, "maxiter": inner_max_iter}
    )
    if result.nit >= inner_max_iter:
        _, gradient = objective(result.x)
        raise InnerSolverError(int(result.nit), float(np.linalg.norm(gradient)))
    return result.x


def _relaxation_co(E: Energy, G: np.ndarray, phi: np.ndarray, sp: SmoothSpace, cfg: GreedyConfig):
    """(w, lam) minimizing E((1 - w) G + lam phi)."""
    if E.quadratic_target is not None:
        return relaxation_step(E.quadratic_target, G, phi, SmoothSpace.euclidean(sp.d), cfg.inner_tol,
                               cfg.inner_max_iter)
    B = np.column_stack([-G, phi])
    w, lam = minimize_on_span(
        Energy(
            evaluate=lambda v: E(G + v), gradient=lambda v: E.grad(G + v),
            q=E.q, gamma=E.gamma, C0=E.C0,
        ),
        B, cfg.inner_tol, cfg.inner_max_iter,
    )
    return float(w), float(lam)


def _start(algorithm: str, E: Energy, D: Dictionary, sp: SmoothSpace, beta: Optional[float],
           cfg: GreedyConfig) -> DescentTrace:
    if D.d != sp.d:
        raise DimensionMismatchError(f"dictionary has d={D.d}, space has d={sp.d}")
    origin = np.zeros(sp.d)
    trace = DescentTrace(
        algorithm=algorithm,
        initial_energy=E(origin),
        known_min=E.known_min,
        coefficients=np.zeros(D.N),
        approximant=origin,
    )
    if beta is not None and beta > 0:
        trace.beta = beta
        trace.proof_B = proof_B(cfg.t, beta, E.gamma, E.q, E.C0)
        gap = E.gap(trace.initial_energy)
        if gap is not None:
            trace.lambda1 = first_step_length(cfg.t, beta, E.gamma, E.q, E.C0, max(gap, 0.0))
    return trace


def _descent_direction(E: Energy, G: np.ndarray, sp: SmoothSpace, cfg: GreedyConfig, trace: DescentTrace):
    """-E'(G), or None when the run should stop (optimum or stationarity)."""
    try:
        gradient = E.grad(G)
    except GradientUndefinedError as e:
        logger.info(f"{trace.algorithm}: {e}; treating G_m as optimal")
        trace.status = STATUS_OPTIMUM
        return None
    if dual_norm(gradient, sp) <= cfg.stop_norm:
        trace.status = STATUS_CONVERGED
        return None
    return -gradient


def _finish(trace: DescentTrace) -> DescentTrace:
    if trace.status == STATUS_RUNNING:
        trace.status = STATUS_MAX_ITER
    logger.debug(
        f"{trace.algorithm}: {trace.status} after {trace.iterations} iterations, "
        f"energy {trace.energies()[-1]:.6e}"
    )
    return trace


def run_wcga_co(E: Energy, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None,
                beta: Optional[float] = None) -> DescentTrace:
    """
    WCGA(co): select by |<-E'(G_{m-1}), g>|, then minimize E over the selected span.

    Args:
        E: Energy
        D: Dictionary
        sp: Ambient space
        cfg: Greedy parameters; stop_norm bounds the dual norm of E'
        beta: Certified beta lower bound for the proof constant

    Returns:
        DescentTrace with non-increasing energies
    """
    cfg = cfg or GreedyConfig()
    trace = _start(ALGO_WCGA_CO, E, D, sp, beta, cfg)
    selected: List[int] = []
    span_coefficients = np.zeros(0)
    G = trace.approximant
    energy = trace.initial_energy

    for m in range(1, cfg.max_iter + 1):
        direction = _descent_direction(E, G, sp, cfg, trace)
        if direction is None:
            break
        index, value, sup, margin = select_by_covector(direction, D, cfg.t, cfg.scan_mode, cfg.tie_tol)
        if sup <= 0:
            trace.status = STATUS_OPTIMUM
            break
        column = abs(index) - 1
        if column not in selected:
            selected.append(column)
            span_coefficients = np.append(span_coefficients, 0.0)
        Phi = D.atoms[:, selected]
        candidate = minimize_on_span(E, Phi, cfg.inner_tol, cfg.inner_max_iter, start=span_coefficients)
        candidate_G = Phi @ candidate
        candidate_energy = E(candidate_G)
        if candidate_energy > energy + MONOTONE_SLACK * max(1.0, abs(energy)):
            logger.debug(f"wcga_co: span minimization worsened the energy at m={m}, keeping G_(m-1)")
            candidate = span_coefficients
            candidate_G = Phi @ candidate
            candidate_energy = E(candidate_G)
        span_coefficients, G, energy = candidate, candidate_G, candidate_energy
        trace.records.append(DescentRecord(
            m=m, selected_index=index, energy=energy, energy_gap=E.gap(energy), value=value, margin=margin
        ))
        logger.debug(f"wcga_co m={m} index={index:+d} energy={energy:.6e}")

    trace.coefficients = np.zeros(D.N)
    trace.coefficients[selected] = span_coefficients
    trace.approximant = G
    return _finish(trace)


def run_wgafr_co(E: Energy, D: Dictionary, sp: SmoothSpace, cfg: Optional[GreedyConfig] = None,
                 beta: Optional[float] = None) -> DescentTrace:
    """
    WGAFR(co): G_m = (1 - w_m) G_{m-1} + lam_m phi_m with (w_m, lam_m) minimizing E(G_m).

    (w, lam) = (0, 0) is feasible, so energies never increase; a worse
    inner solution is discarded.
    """
    cfg = cfg or GreedyConfig()
    trace = _start(ALGO_WGAFR_CO, E, D, sp, beta, cfg)
    coefficients = np.zeros(D.N)
    G = trace.approximant
    energy = trace.initial_energy

    for m in range(1, cfg.max_iter + 1):
        direction = _descent_direction(E, G, sp, cfg, trace)
        if direction is None:
            break
        index, value, sup, margin = select_by_covector(direction, D, cfg.t, cfg.scan_mode, cfg.tie_tol)
        if sup <= 0:
            trace.status = STATUS_OPTIMUM
            break
        phi = D.signed_atom(index)
        w, lam = _relaxation_co(E, G, phi, sp, cfg)
        candidate = (1.0 - w) * coefficients
        candidate[abs(index) - 1] += np.sign(index) * lam
        candidate_G = D.atoms @ candidate
        candidate_energy = E(candidate_G)
        if candidate_energy <= energy:
            coefficients, G, energy = candidate, candidate_G, candidate_energy
        trace.records.append(DescentRecord(
            m=m, selected_index=index, energy=energy, energy_gap=E.gap(energy), value=value, margin=margin
        ))
        logger.debug(f"wgafr_co m={m} index={index:+d} w={w:.4f} lam={lam:.4f} energy={energy:.6e}")

    trace.coefficients = coefficients
    trace.approximant = G
    return _finish(trace)
