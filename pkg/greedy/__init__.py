"""Greedy approximation algorithms over dictionaries."""
from .config import GreedyConfig
from .trace import IterationRecord, Trace, write_trace_csv, read_trace_csv
from .selection import select_atom, select_by_covector, choose_from_scores
from .projection import minimize_norm, relaxation_step
from .chebyshev import run_wcga, run_woga
from .relaxed import run_wgafr
from .pursuit import run_wga, run_hybrid, default_switch_iter
from .dga import run_dga, dga_step_length, dga_decrease_violations
from .guarantees import guaranteed_contraction, contraction_kappa, lambda_one, attach_guarantee

__all__ = [
    'GreedyConfig', 'IterationRecord', 'Trace', 'write_trace_csv', 'read_trace_csv',
    'select_atom', 'select_by_covector', 'choose_from_scores',
    'minimize_norm', 'relaxation_step',
    'run_wcga', 'run_woga', 'run_wgafr', 'run_wga', 'run_hybrid', 'default_switch_iter',
    'run_dga', 'dga_step_length', 'dga_decrease_violations',
    'guaranteed_contraction', 'contraction_kappa', 'lambda_one', 'attach_guarantee',
]
