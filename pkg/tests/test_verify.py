import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config.constants import SUITE_CANONICAL_GUARANTEE, SUITE_EQUIVALENCE, SUITE_HYBRID
from descent.algorithms import run_wcga_co
from descent.energy import make_quadratic_energy
from dictionary.atomic_norm import l1_oracle
from dictionary.atoms import Dictionary, build_canonical, build_incoherent, build_random_sphere
from greedy.chebyshev import run_woga
from greedy.config import GreedyConfig
from spaces.space import SmoothSpace
from utils.errors import BudgetExceededError, InvalidParameterError, WindowTooSmallError
from verify.checks import check_lebesgue, property_A_iterations
from verify.experiments import a1_target, perturb, power_law_target, sparse_target
from verify.oracles import IncoherenceProfile, check_property_A, sigma_m_bruteforce
from verify.rates import (
    DECAY_EXPONENTIAL, DECAY_POWER, check_exponential, classify_decay, fit_exponential, fit_rate
)
from verify.suites import SUITES, WIDE_D, WIDE_N, WIDE_WINDOW, SuiteBudget, run_theorem_suite

WINDOW = (16, 256)
POWER_SEQUENCE = [1.0] + [m ** -0.5 for m in range(1, 300)]
GEOMETRIC_SEQUENCE = [0.9 ** m for m in range(300)]


def test_fit_rate_recovers_power():
    fit = fit_rate(POWER_SEQUENCE, WINDOW)
    assert fit.slope == pytest.approx(-0.5)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.window == WINDOW
    assert fit.points == 241


def test_fit_rate_truncates_at_floor():
    fit = fit_rate(POWER_SEQUENCE, WINDOW, floor=0.1)
    assert fit.window == (16, 99)


def test_fit_rate_window_too_small():
    with pytest.raises(WindowTooSmallError):
        fit_rate(POWER_SEQUENCE[:20], WINDOW)
    with pytest.raises(WindowTooSmallError):
        fit_rate(POWER_SEQUENCE, WINDOW, floor=0.25)


def test_fit_rate_needs_positive_start():
    with pytest.raises(InvalidParameterError, match="window"):
        fit_rate(POWER_SEQUENCE, (0, 256))


def test_fit_exponential_rate():
    assert fit_exponential(GEOMETRIC_SEQUENCE, WINDOW).rate == pytest.approx(0.9)


def test_classify_decay():
    assert classify_decay(GEOMETRIC_SEQUENCE, WINDOW) == DECAY_EXPONENTIAL
    assert classify_decay(POWER_SEQUENCE, WINDOW) == DECAY_POWER


def test_check_exponential():
    assert check_exponential(GEOMETRIC_SEQUENCE, 0.9).passed
    report = check_exponential([1.0, 0.5, 0.3], 0.5)
    assert not report.passed
    assert report.first_violation == 2
    assert report.worst_ratio == pytest.approx(1.2)
    with pytest.raises(InvalidParameterError):
        check_exponential(GEOMETRIC_SEQUENCE, 1.0)


def test_sigma_m_on_canonical():
    D = build_canonical(SmoothSpace.euclidean(3))
    f0 = np.array([3.0, 2.0, 1.0])
    assert sigma_m_bruteforce(f0, D, 0) == pytest.approx(math.sqrt(14))
    assert sigma_m_bruteforce(f0, D, 1) == pytest.approx(math.sqrt(5))
    assert sigma_m_bruteforce(f0, D, 2) == pytest.approx(1.0)
    assert sigma_m_bruteforce(f0, D, 3) == pytest.approx(0.0, abs=1e-12)


def test_sigma_m_in_lp():
    sp = SmoothSpace.lp(3, 3.0)
    f0 = np.array([3.0, 2.0, 1.0])
    assert sigma_m_bruteforce(f0, build_canonical(sp), 1) == pytest.approx(9 ** (1 / 3), rel=1e-6)


def test_sigma_m_budget():
    D = build_random_sphere(SmoothSpace.euclidean(4), 30, seed=0)
    with pytest.raises(BudgetExceededError):
        sigma_m_bruteforce(np.ones(4), D, 3, budget=100)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), rank=st.integers(min_value=1, max_value=5))
def test_sigma_m_decreases_to_zero_at_rank(seed, rank):
    rng = np.random.default_rng(seed)
    raw = np.zeros((5, 7))
    raw[:rank] = rng.standard_normal((rank, 7))
    D = Dictionary(atoms=raw / np.linalg.norm(raw, axis=0), ambient=SmoothSpace.euclidean(5))
    f0 = D.atoms @ rng.standard_normal(7)
    errors = [sigma_m_bruteforce(f0, D, m) for m in range(rank + 1)]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] == pytest.approx(0.0, abs=1e-10 * max(1.0, errors[0]))


def test_property_A_on_orthonormal_dictionary():
    D = build_canonical(SmoothSpace.euclidean(4))
    profile = IncoherenceProfile(K=2, Dmax=4, V=1.0 + 1e-9, r=0.5)
    report = check_property_A(D, profile, [0, 1], [1.0, 1.0])
    assert report.min_V == pytest.approx(1.0)
    assert report.passed
    assert report.pairs > 0


def test_property_A_profile_validation():
    with pytest.raises(InvalidParameterError):
        IncoherenceProfile(K=3, Dmax=2)
    with pytest.raises(InvalidParameterError, match="profile.r"):
        IncoherenceProfile(K=1, Dmax=2, r=1.5)


def _sparse_incoherent_instance(seed: int, d: int, N: int, mu: float):
    rng = np.random.default_rng(seed)
    D = build_incoherent(d, N, mu, max_attempts=200_000, seed=seed)
    support = np.sort(rng.choice(D.N, size=3, replace=False))
    coefficients = rng.choice([-1.0, 1.0], size=3) * rng.uniform(1.0, 2.0, size=3)
    return D, support, coefficients, rng


def _relabelled(D, support, coefficients, rng):
    """Same f with atoms permuted and sign-flipped, coefficients flipped to match."""
    order = rng.permutation(D.N)
    signs = rng.choice([-1.0, 1.0], size=D.N)
    atoms = D.atoms[:, order] * signs
    position = np.argsort(order)
    new_support = position[support]
    new_coefficients = coefficients * signs[new_support]
    return D.with_atoms(atoms, label="relabelled"), new_support, new_coefficients


def test_property_A_worked_example_ignores_atom_order():
    D, support, coefficients, rng = _sparse_incoherent_instance(3, 8, 12, 0.3)
    profile = IncoherenceProfile(K=3, Dmax=6, r=0.5)
    base = check_property_A(D, profile, support, coefficients)
    assert math.isfinite(base.min_V)
    order = rng.permutation(D.N)
    permuted = check_property_A(
        D.with_atoms(D.atoms[:, order], label="permuted"), profile, np.argsort(order)[support], coefficients
    )
    assert permuted.min_V == pytest.approx(base.min_V, rel=1e-9)
    assert permuted.pairs == base.pairs


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_property_A_ignores_atom_order_and_signs(seed):
    D, support, coefficients, rng = _sparse_incoherent_instance(seed, 6, 8, 0.5)
    profile = IncoherenceProfile(K=2, Dmax=4, r=0.5)
    base = check_property_A(D, profile, support, coefficients)
    D_relabelled, support_relabelled, coefficients_relabelled = _relabelled(D, support, coefficients, rng)
    relabelled = check_property_A(D_relabelled, profile, support_relabelled, coefficients_relabelled)
    assert relabelled.min_V == pytest.approx(base.min_V, rel=1e-9)


def test_property_A_iterations():
    assert property_A_iterations(1.0, 1, 0.5) == 1
    assert property_A_iterations(2.0, 4, 0.5) == math.ceil(4 * math.log(8) * 4)


def test_lebesgue_on_sparse_target():
    D = build_canonical(SmoothSpace.euclidean(6))
    f0, support, _ = sparse_target(D, 2, np.random.default_rng(0))
    report = check_lebesgue(D, f0, 2)
    assert report.in_regime
    assert report.sigma == pytest.approx(0.0, abs=1e-12)
    assert report.residual <= 1e-10
    assert report.passed
    assert report.steps == 4


def test_a1_target_has_unit_atomic_norm_budget():
    D = build_random_sphere(SmoothSpace.euclidean(3), 6, seed=1)
    f0 = a1_target(D, 4, budget=2.0, rng=np.random.default_rng(1))
    assert l1_oracle(f0, D) <= 2.0 + 1e-9
    with pytest.raises(InvalidParameterError):
        a1_target(D, 7)


def test_sparse_target_and_perturb():
    D = build_canonical(SmoothSpace.euclidean(5))
    rng = np.random.default_rng(2)
    f0, support, coefficients = sparse_target(D, 3, rng)
    assert list(support) == sorted(support)
    assert np.count_nonzero(f0) == 3
    assert np.all(np.abs(coefficients) >= 1.0)
    noisy = perturb(f0, 1e-3, rng)
    assert np.linalg.norm(noisy - f0) == pytest.approx(1e-3)
    assert np.array_equal(perturb(f0, 0.0, rng), f0)


def test_power_law_target_spends_its_budget():
    D = build_canonical(SmoothSpace.euclidean(4))
    f0 = power_law_target(D, budget=2.0, rng=np.random.default_rng(0))
    weights = np.array([1.0, 1 / 2, 1 / 3, 1 / 4])
    assert np.sort(np.abs(f0)) == pytest.approx(np.sort(2.0 * weights / weights.sum()))
    with pytest.raises(InvalidParameterError, match="exponent"):
        power_law_target(D, exponent=0.5)


def test_finite_termination_rate_is_measured_below_dimension():
    sp = SmoothSpace.euclidean(WIDE_D)
    D = build_random_sphere(sp, WIDE_N, seed=0)
    f0 = power_law_target(D, rng=np.random.default_rng(0))
    cfg = GreedyConfig(max_iter=WIDE_WINDOW[1])

    trace = run_woga(f0, D, cfg)
    assert trace.iterations == WIDE_WINDOW[1]
    fit = fit_rate(trace.residual_norms(), WIDE_WINDOW)
    assert fit.window == WIDE_WINDOW
    assert fit.slope <= -0.4

    descent = run_wcga_co(make_quadratic_energy(f0), D, sp, cfg)
    assert fit_rate(descent.gaps(), WIDE_WINDOW).slope <= -0.8


def test_suite_budget_validation():
    with pytest.raises(InvalidParameterError, match="seeds"):
        SuiteBudget(seeds=0)
    with pytest.raises(InvalidParameterError, match="workers"):
        SuiteBudget(workers=0)


def test_unknown_suite():
    with pytest.raises(InvalidParameterError, match="suite"):
        run_theorem_suite("no_such_suite")


def test_suite_names():
    assert {"T1_1", "T1_2", "T3_1", "T2_4", "T3_3", "eq_2_6", "eq_2_8", "lemma_2_1", "lemma_2_2",
            "sec_3_1_equiv", "beta_canonical"} <= set(SUITES)


def test_equivalence_suite_passes():
    report = run_theorem_suite(SUITE_EQUIVALENCE, SuiteBudget(seeds=3, workers=1), seed=5)
    assert report.passed
    assert report.metrics["launched"] == 3
    assert report.metrics["completed"] == 3
    assert list(report.as_dict()) == ["suite", "spec", "seed", "metrics", "pass", "artifacts", "created_at"]


def test_suite_results_do_not_depend_on_workers():
    serial = run_theorem_suite(SUITE_EQUIVALENCE, SuiteBudget(seeds=4, workers=1), seed=1).as_dict()
    parallel = run_theorem_suite(SUITE_EQUIVALENCE, SuiteBudget(seeds=4, workers=3), seed=1).as_dict()
    serial.pop("created_at")
    parallel.pop("created_at")
    assert serial == parallel


def test_expired_deadline_skips_trials():
    report = run_theorem_suite(SUITE_EQUIVALENCE, SuiteBudget(seeds=3, max_seconds=1e-9, workers=1))
    assert report.metrics["launched"] == 3
    assert report.metrics["completed"] == 0
    assert report.passed is False


def test_suite_writes_trace_artifact(tmp_path):
    report = run_theorem_suite(SUITE_CANONICAL_GUARANTEE, SuiteBudget(seeds=2, workers=2), out_dir=str(tmp_path))
    assert report.passed
    assert len(report.artifacts) == 1
    assert (tmp_path / "eq_2_6_wcga_seed0.csv").exists()


@pytest.mark.slow
def test_hybrid_suite_is_exploratory():
    report = run_theorem_suite(SUITE_HYBRID, SuiteBudget(seeds=2))
    assert report.passed is None
    assert report.metrics["completed"] == 2
