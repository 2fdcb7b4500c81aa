"""Dictionaries and their geometry."""
from .atoms import (
    Dictionary, build_canonical, build_random_sphere, build_equiangular, build_incoherent
)
from .metrics import (
    BetaEstimate, coherence, coherence_report, beta_bruteforce, beta_upper, beta_canonical,
    best_beta, beta_cardinality_bound
)
from .covering import (
    CoveringSpec, CoveringReport, covering_from_beta, dictionary_from_covering,
    equispaced_circle_covering, verify_covering
)
from .atomic_norm import (
    AtomicNormConfig, AtomicNormBracket, R1BetaReport, atomic_norm_bounds,
    exact_atomic_norm, l1_oracle, check_R1_beta
)
from .io import save_dictionary, load_dictionary, save_covering, load_covering, load_matrix

__all__ = [
    'Dictionary', 'build_canonical', 'build_random_sphere', 'build_equiangular', 'build_incoherent',
    'BetaEstimate', 'coherence', 'coherence_report', 'beta_bruteforce', 'beta_upper', 'beta_canonical',
    'best_beta', 'beta_cardinality_bound',
    'CoveringSpec', 'CoveringReport', 'covering_from_beta', 'dictionary_from_covering',
    'equispaced_circle_covering', 'verify_covering',
    'AtomicNormConfig', 'AtomicNormBracket', 'R1BetaReport', 'atomic_norm_bounds',
    'exact_atomic_norm', 'l1_oracle', 'check_R1_beta',
    'save_dictionary', 'load_dictionary', 'save_covering', 'load_covering', 'load_matrix',
]
