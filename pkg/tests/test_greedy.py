import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config.constants import (
    PHASE_WGA, PHASE_WOGA, SCAN_FIRST_ACCEPTABLE, STATUS_CONVERGED, STATUS_MAX_ITER,
    STATUS_STAGNATED,
)
from dictionary.atoms import Dictionary, build_canonical, build_random_sphere
from dictionary.metrics import beta_bruteforce, beta_canonical
from greedy.chebyshev import run_wcga, run_woga
from greedy.config import GreedyConfig
from greedy.dga import dga_decrease_violations, dga_step_length, run_dga
from greedy.guarantees import attach_guarantee, contraction_kappa, guaranteed_contraction
from greedy.pursuit import default_switch_iter, run_hybrid, run_wga
from greedy.relaxed import run_wgafr
from greedy.selection import choose_from_scores, select_atom
from greedy.trace import read_trace_csv, write_trace_csv
from spaces.space import SmoothSpace
from utils.errors import ConfigError, DimensionMismatchError, InvalidParameterError
from verify.rates import check_exponential

PLANE = SmoothSpace.euclidean(2)
MONOTONE_TOL = 1e-12

seeds = st.integers(min_value=0, max_value=10_000)


def _gaussian(d, seed):
    return np.random.default_rng(seed).standard_normal(d)


def _non_increasing(values):
    values = np.asarray(values)
    return bool(np.all(np.diff(values) <= MONOTONE_TOL * max(1.0, values[0])))


def test_ties_go_to_lowest_index():
    index, value, sup, margin = choose_from_scores(np.array([0.5, -0.5, 0.2]))
    assert index == 1
    assert value == 0.5
    assert margin == 0.0


def test_negative_score_selects_negated_atom():
    index, value, sup, _ = choose_from_scores(np.array([0.1, -0.9, 0.3]))
    assert index == -2
    assert value == pytest.approx(0.9)
    assert sup == pytest.approx(0.9)


def test_first_acceptable_scan():
    index, value, sup, _ = choose_from_scores(np.array([0.2, 0.6, 1.0]), t=0.5, scan_mode=SCAN_FIRST_ACCEPTABLE)
    assert index == 2
    assert value >= 0.5 * sup


def test_tie_tolerance_is_relative():
    index, _, _, margin = choose_from_scores(np.array([1.0 - 1e-13, 1.0]), tie_tol=1e-12)
    assert index == 1
    assert margin < 1e-12


def test_select_atom_uses_norming_functional():
    index, value = select_atom(np.array([0.2, -3.0]), build_canonical(PLANE), PLANE)
    assert index == -2
    assert value == pytest.approx(3.0 / math.hypot(0.2, 3.0))


def test_config_rejects_bad_weakness():
    with pytest.raises(InvalidParameterError, match="params.t"):
        GreedyConfig(t=1.5)


def test_config_rejects_unknown_scan_mode():
    with pytest.raises(InvalidParameterError, match="params.scan_mode"):
        GreedyConfig(scan_mode="random")


def test_woga_on_canonical_plane():
    trace = run_woga(np.array([1.0, 1.0]), build_canonical(PLANE))
    assert trace.selected_indices() == [1, 2]
    assert trace.residual_norms()[-1] == pytest.approx(0.0, abs=1e-15)
    assert trace.status == STATUS_CONVERGED
    assert trace.iterations == 2


def test_zero_target_converges_immediately():
    trace = run_wcga(np.zeros(2), build_canonical(PLANE), PLANE)
    assert trace.iterations == 0
    assert trace.status == STATUS_CONVERGED


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        run_wcga(np.ones(3), build_canonical(PLANE), PLANE)


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_woga_recovers_target_after_d_steps(seed):
    d = 6
    D = build_random_sphere(SmoothSpace.euclidean(d), 18, seed=seed)
    f0 = _gaussian(d, seed)
    trace = run_woga(f0, D, GreedyConfig(max_iter=d))
    norms = trace.residual_norms()
    assert _non_increasing(norms)
    assert norms[-1] <= 1e-10 * max(1.0, norms[0])


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_wcga_matches_woga_in_l2(seed):
    sp = SmoothSpace.euclidean(5)
    D = build_random_sphere(sp, 12, seed=seed)
    f0 = _gaussian(5, seed)
    cfg = GreedyConfig(max_iter=4)
    chebyshev = run_wcga(f0, D, sp, cfg)
    orthogonal = run_woga(f0, D, cfg)
    assert chebyshev.selected_indices() == orthogonal.selected_indices()
    assert chebyshev.residual_norms() == pytest.approx(orthogonal.residual_norms())


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_wcga_is_monotone_in_lp(p):
    sp = SmoothSpace.lp(4, p)
    D = build_random_sphere(sp, 8, seed=5)
    trace = run_wcga(_gaussian(4, 5), D, sp, GreedyConfig(max_iter=6))
    assert _non_increasing(trace.residual_norms())
    assert trace.residual_norms()[-1] < trace.initial_norm


@pytest.mark.parametrize("p", [2.0, 1.5, 4.0])
@settings(max_examples=8, deadline=None)
@given(seed=seeds)
def test_wgafr_is_monotone(p, seed):
    sp = SmoothSpace.lp(3, p)
    D = build_random_sphere(sp, 7, seed=seed)
    trace = run_wgafr(_gaussian(3, seed), D, sp, GreedyConfig(max_iter=15))
    assert _non_increasing(trace.residual_norms())


def test_woga_rejects_lp():
    sp = SmoothSpace.lp(2, 3.0)
    with pytest.raises(InvalidParameterError):
        run_woga(np.ones(2), build_canonical(sp))
    with pytest.raises(InvalidParameterError):
        run_wga(np.ones(2), build_canonical(sp))


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_wga_energy_identity(seed):
    D = build_random_sphere(SmoothSpace.euclidean(4), 10, seed=seed)
    trace = run_wga(_gaussian(4, seed), D, GreedyConfig(max_iter=30))
    norms = trace.residual_norms()
    for record in trace.records:
        expected = norms[record.m - 1] ** 2 - record.step_coefficient ** 2
        assert norms[record.m] ** 2 == pytest.approx(expected, abs=1e-10 * norms[0] ** 2)


def test_wga_recomputes_residual_from_coefficients():
    D = build_random_sphere(SmoothSpace.euclidean(3), 9, seed=1)
    f0 = _gaussian(3, 1)
    trace = run_wga(f0, D, GreedyConfig(max_iter=64, recompute_every=8))
    assert trace.residual == pytest.approx(f0 - D.atoms @ trace.coefficients, abs=1e-12)


def test_hybrid_phases():
    d = 9
    D = build_random_sphere(SmoothSpace.euclidean(d), 27, seed=2)
    trace = run_hybrid(_gaussian(d, 2), D, GreedyConfig(max_iter=20))
    switch = default_switch_iter(d)
    assert switch == 3
    phases = [r.phase for r in trace.records]
    assert phases[:switch] == [PHASE_WOGA] * switch
    assert set(phases[switch:]) == {PHASE_WGA}
    assert _non_increasing(trace.residual_norms())


def test_hybrid_without_head_is_wga():
    D = build_random_sphere(SmoothSpace.euclidean(4), 10, seed=3)
    f0 = _gaussian(4, 3)
    cfg = GreedyConfig(max_iter=12)
    hybrid = run_hybrid(f0, D, cfg, switch_iter=0)
    pursuit = run_wga(f0, D, cfg)
    assert hybrid.selected_indices() == pursuit.selected_indices()
    assert hybrid.residual_norms() == pytest.approx(pursuit.residual_norms())


def test_canonical_contraction_factor():
    beta = beta_canonical(2).lower
    assert contraction_kappa(PLANE, beta, 1.0) == pytest.approx(beta / 4)
    assert guaranteed_contraction(PLANE, beta) == pytest.approx(0.875)


def test_contraction_needs_positive_beta():
    with pytest.raises(InvalidParameterError):
        guaranteed_contraction(PLANE, 0.0)


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_exponential_guarantee_on_canonical(seed):
    D = build_canonical(PLANE)
    beta = beta_canonical(2).lower
    f0 = _gaussian(2, seed)
    cfg = GreedyConfig(max_iter=50)
    for trace in (run_woga(f0, D, cfg), run_wcga(f0, D, PLANE, cfg), run_wgafr(f0, D, PLANE, cfg)):
        attach_guarantee(trace, PLANE, beta)
        assert trace.factor == pytest.approx(0.875)
        assert check_exponential(trace.residual_norms(), trace.factor).passed


@settings(max_examples=5, deadline=None)
@given(seed=seeds)
def test_exponential_guarantee_on_random_plane_dictionary(seed):
    D = build_random_sphere(PLANE, 5, seed=seed)
    beta = beta_bruteforce(D).lower
    f0 = _gaussian(2, seed)
    trace = attach_guarantee(run_wgafr(f0, D, PLANE, GreedyConfig(max_iter=40)), PLANE, beta)
    assert check_exponential(trace.residual_norms(), trace.factor).passed


def test_dga_step_length_in_l2():
    assert dga_step_length(2.0, 0.8, PLANE, 1.0, 0.5) == pytest.approx(2.0 * 0.5 * 0.8)


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_dga_decrease_inequality(seed):
    sp = SmoothSpace.euclidean(8)
    D = build_random_sphere(sp, 32, seed=seed)
    f0 = _gaussian(8, seed)
    target = 1e-3 * np.linalg.norm(f0)
    trace = run_dga(f0, D, sp, GreedyConfig(max_iter=10000, stop_norm=target))
    assert trace.residual_norms()[-1] <= target
    assert trace.status == STATUS_CONVERGED
    assert dga_decrease_violations(trace, 1.0, 0.5) == []
    assert trace.coeff_sum == pytest.approx(sum(c for c, _ in trace.expansion))


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_dga_coefficient_sum_on_canonical(seed):
    f0 = _gaussian(2, seed)
    trace = run_dga(f0, build_canonical(PLANE), PLANE, GreedyConfig(max_iter=10000, stop_norm=1e-10))
    bound = np.linalg.norm(f0) * math.sqrt(2) / (1.0 - 0.5)
    assert trace.coeff_sum <= bound + 1e-6


def test_dga_in_lp_decreases():
    sp = SmoothSpace.lp(3, 3.0)
    D = build_random_sphere(sp, 9, seed=0)
    trace = run_dga(_gaussian(3, 0), D, sp, GreedyConfig(max_iter=200))
    assert dga_decrease_violations(trace, 1.0, 0.5) == []
    assert trace.residual_norms()[-1] < trace.initial_norm


def test_dga_stops_when_atoms_miss_residual():
    D = Dictionary(atoms=np.array([[1.0], [0.0]]), ambient=PLANE)
    trace = run_dga(np.array([0.0, 1.0]), D, PLANE, GreedyConfig(max_iter=5))
    assert trace.status == STATUS_STAGNATED
    assert trace.iterations == 0


def test_max_iter_status():
    D = build_random_sphere(SmoothSpace.euclidean(4), 10, seed=0)
    trace = run_wga(_gaussian(4, 0), D, GreedyConfig(max_iter=3))
    assert trace.status == STATUS_MAX_ITER
    assert trace.iterations == 3


def test_trace_csv_round_trip(tmp_path):
    D = build_random_sphere(SmoothSpace.euclidean(3), 6, seed=4)
    trace = run_woga(_gaussian(3, 4), D, GreedyConfig(max_iter=3))
    path = str(tmp_path / "trace.csv")
    write_trace_csv(trace, path)
    rows = read_trace_csv(path)
    assert [row[0] for row in rows] == [1, 2, 3]
    assert [row[1] for row in rows] == trace.selected_indices()
    assert [row[2] for row in rows] == [r.residual_norm for r in trace.records]
    assert (tmp_path / "trace.csv").read_text().splitlines()[0] == "iter,selected_index,residual_norm,coeff_l1"


def test_trace_csv_bad_header(tmp_path):
    path = tmp_path / "trace.csv"
    path.write_text("a,b,c,d\n1,1,0.5,0.5\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_trace_csv(str(path))
