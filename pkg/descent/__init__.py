"""Greedy convex optimization over dictionaries."""
from .energy import (
    Energy, Potential, make_quadratic_energy, make_norm_composite_energy,
    energy_modulus_estimate, check_energy, EnergyCheckReport, sample_level_set
)
from .lasso import LassoInstance, lasso_recast, coefficients_to_x, make_lasso_instance
from .algorithms import (
    DescentRecord, DescentTrace, run_wcga_co, run_wgafr_co, proof_B, first_step_length,
    proof_step_violations, minimize_on_span, write_descent_csv
)
from .equivalence import EquivalenceReport, check_equivalence_co

__all__ = [
    'Energy', 'Potential', 'make_quadratic_energy', 'make_norm_composite_energy',
    'energy_modulus_estimate', 'check_energy', 'EnergyCheckReport', 'sample_level_set',
    'LassoInstance', 'lasso_recast', 'coefficients_to_x', 'make_lasso_instance',
    'DescentRecord', 'DescentTrace', 'run_wcga_co', 'run_wgafr_co', 'proof_B', 'first_step_length',
    'proof_step_violations', 'minimize_on_span', 'write_descent_csv',
    'EquivalenceReport', 'check_equivalence_co',
]
