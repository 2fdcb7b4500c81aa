"""Oracles, rate fits and named verification suites."""
from .rates import RateFit, fit_rate, fit_exponential, classify_decay, check_exponential
from .oracles import IncoherenceProfile, PropertyAReport, sigma_m_bruteforce, check_property_A
from .experiments import a1_target, perturb, sparse_target, gaussian_target
from .checks import LebesgueReport, check_lebesgue, property_A_iterations, explore_property_A_lebesgue
from .suites import SUITES, SuiteBudget, SuiteReport, run_theorem_suite, run_trials

__all__ = [
    'RateFit', 'fit_rate', 'fit_exponential', 'classify_decay', 'check_exponential',
    'IncoherenceProfile', 'PropertyAReport', 'sigma_m_bruteforce', 'check_property_A',
    'a1_target', 'perturb', 'sparse_target', 'gaussian_target',
    'LebesgueReport', 'check_lebesgue', 'property_A_iterations', 'explore_property_A_lebesgue',
    'SUITES', 'SuiteBudget', 'SuiteReport', 'run_theorem_suite', 'run_trials',
]
