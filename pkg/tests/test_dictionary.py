import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dictionary.atomic_norm import (
    AtomicNormConfig, atomic_norm_bounds, check_R1_beta, exact_atomic_norm, l1_oracle
)
from dictionary.atoms import (
    Dictionary, build_canonical, build_equiangular, build_incoherent, build_random_sphere
)
from dictionary.covering import (
    CoveringSpec, covering_from_beta, dictionary_from_covering, equispaced_circle_covering,
    verify_covering
)
from dictionary.io import load_covering, load_dictionary, save_covering, save_dictionary
from dictionary.metrics import (
    beta_bruteforce, beta_canonical, beta_cardinality_bound, beta_upper, coherence, coherence_report
)
from spaces.space import SmoothSpace
from utils.errors import (
    BudgetExceededError, ConfigError, DictionaryInvariantError, HypothesisViolationError,
    InvalidParameterError, OutsideSpanError
)

PLANE = SmoothSpace.euclidean(2)
BRACKET_TOL = 1e-9


def test_canonical_is_orthonormal():
    D = build_canonical(SmoothSpace.euclidean(4))
    assert D.N == 4
    assert coherence(D) == 0.0
    assert D.spans_space()


def test_signed_atoms():
    D = build_canonical(PLANE)
    assert D.signed_atom(2) == pytest.approx([0.0, 1.0])
    assert D.signed_atom(-1) == pytest.approx([-1.0, 0.0])
    with pytest.raises(InvalidParameterError):
        D.signed_atom(0)
    assert D.symmetrized().shape == (2, 4)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_random_sphere_has_unit_columns(p):
    D = build_random_sphere(SmoothSpace.lp(5, p), 12, seed=4)
    assert D.column_norms() == pytest.approx(np.ones(12))


def test_random_sphere_is_seeded():
    first = build_random_sphere(SmoothSpace.euclidean(3), 7, seed=11)
    second = build_random_sphere(SmoothSpace.euclidean(3), 7, seed=11)
    assert np.array_equal(first.atoms, second.atoms)


def test_column_norm_invariant_names_column():
    atoms = np.array([[1.0, 0.0, 1.2], [0.0, 1.0, 0.0]])
    with pytest.raises(DictionaryInvariantError) as info:
        Dictionary(atoms=atoms, ambient=PLANE)
    assert info.value.column == 3


def test_atoms_are_read_only():
    D = build_canonical(PLANE)
    with pytest.raises(ValueError):
        D.atoms[0, 0] = 0.5


def test_equiangular_coherence():
    assert coherence(build_equiangular(3)) == pytest.approx(0.5)


def test_incoherent_respects_cap():
    D = build_incoherent(8, 16, 0.5, seed=3)
    assert D.N == 16
    assert coherence(D) <= 0.5 + 1e-12


def test_incoherent_reports_shortfall():
    D = build_incoherent(2, 10, 0.1, max_attempts=1000, seed=0)
    assert D.metadata["shortfall"] > 0
    assert D.metadata["achieved"] == D.N
    assert coherence(D) <= 0.1 + 1e-12


def test_coherence_renormalizes_without_touching_dictionary():
    D = Dictionary(atoms=np.array([[0.5, 0.0], [0.0, 0.5]]), ambient=PLANE)
    assert coherence_report(D) == (0.0, True)
    assert coherence(D) == 0.0
    assert D.metadata == {}
    assert coherence_report(build_equiangular(3)) == (pytest.approx(0.5), False)


def test_beta_canonical_plane():
    estimate = beta_bruteforce(build_canonical(PLANE), grid_resolution=100000)
    exact = 2 ** -0.5
    assert abs(estimate.upper - exact) <= 1e-4
    assert estimate.lower <= exact <= estimate.upper + 1e-12


def test_beta_canonical_space():
    estimate = beta_bruteforce(build_canonical(SmoothSpace.euclidean(3)))
    exact = 3 ** -0.5
    assert abs(estimate.upper - exact) <= 1e-3
    assert estimate.lower <= exact


@pytest.mark.parametrize("d", [4, 16])
def test_beta_upper_canonical(d):
    estimate = beta_upper(build_canonical(SmoothSpace.euclidean(d)), restarts=16, seed=0)
    assert estimate.lower is None
    assert estimate.upper == pytest.approx(d ** -0.5, abs=1e-3)


def test_beta_zero_when_atoms_do_not_span():
    D = Dictionary(atoms=np.array([[1.0], [0.0]]), ambient=PLANE)
    estimate = beta_bruteforce(D)
    assert estimate.upper == pytest.approx(0.0, abs=1e-12)
    assert estimate.lower == 0.0
    assert not D.spans_space()


def test_beta_grid_scope():
    with pytest.raises(InvalidParameterError):
        beta_bruteforce(build_canonical(SmoothSpace.euclidean(4)))


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_beta_never_drops_as_atoms_are_added(seed):
    chain = build_random_sphere(PLANE, 8, seed=seed)
    D = chain.with_atoms(chain.atoms[:, :2], label="chain_2")
    previous = beta_bruteforce(D, grid_resolution=4096, polish=False)
    for size in range(3, chain.N + 1):
        D = D.with_atoms(np.hstack([D.atoms, chain.atoms[:, size - 1:size]]), label=f"chain_{size}")
        current = beta_bruteforce(D, grid_resolution=4096, polish=False)
        assert current.upper >= previous.upper - 1e-12
        assert current.lower >= previous.lower - 1e-12
        previous = current


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), N=st.integers(min_value=2, max_value=6))
def test_beta_ignores_symmetrization(seed, N):
    D = build_random_sphere(PLANE, N, seed=seed)
    plain = beta_bruteforce(D, grid_resolution=4096)
    signed = beta_bruteforce(D.with_atoms(D.symmetrized(), label="signed"), grid_resolution=4096)
    assert signed.lower == pytest.approx(plain.lower, abs=1e-12)
    assert signed.upper == pytest.approx(plain.upper, abs=plain.grid_tol)


def test_beta_cardinality_bound():
    assert beta_cardinality_bound(3, 2) == pytest.approx(math.sqrt(2 * (2 * math.log(3) + math.log(2)) / 3))
    assert beta_cardinality_bound(3, 2) > 1.0
    assert beta_cardinality_bound(10000, 1) < 0.05


@pytest.mark.parametrize("radius", [0.3, 0.5, 0.7])
def test_circle_covering_certifies_beta(radius):
    cov = equispaced_circle_covering(radius)
    assert verify_covering(cov, n_samples=20000, seed=1).passed
    D = dictionary_from_covering(cov)
    claim = D.metadata["beta_lower_claim"]
    assert claim == pytest.approx(math.sqrt(1 - radius ** 2))
    assert beta_bruteforce(D).lower >= claim - 1e-3


def test_circle_covering_center_count():
    assert equispaced_circle_covering(0.5).centers.shape[0] == 7
    with pytest.raises(HypothesisViolationError):
        equispaced_circle_covering(0.5, count=4)


@pytest.mark.parametrize("d", [2, 3])
def test_covering_from_canonical_beta(d):
    cov = covering_from_beta(build_canonical(SmoothSpace.euclidean(d)), beta=beta_canonical(d).lower)
    assert cov.radius == pytest.approx(math.sqrt(1 - 1 / d))
    assert verify_covering(cov, n_samples=20000, seed=2).passed


def test_covering_from_beta_caps_large_beta():
    D = build_equiangular(6)
    cov = covering_from_beta(D, beta=0.9)
    assert cov.metadata["beta"] == pytest.approx(2 ** -0.5)
    with pytest.raises(HypothesisViolationError):
        covering_from_beta(D, beta=0.9, cap=False)


def test_too_small_radius_misses_points():
    cov = CoveringSpec(centers=np.array([[1.0, 0.0], [-1.0, 0.0]]), radius=0.5)
    report = verify_covering(cov, n_samples=5000, seed=0)
    assert not report.passed
    assert report.worst_gap > 0


def test_unit_radius_is_accepted():
    assert CoveringSpec(centers=np.array([[0.0, 0.0]]), radius=1.0).radius == 1.0


def test_atomic_norm_of_canonical_is_l1():
    D = build_canonical(PLANE)
    x = np.array([0.3, -0.4])
    bracket = atomic_norm_bounds(x, D)
    assert bracket.lower <= 0.7 + BRACKET_TOL
    assert bracket.upper >= 0.7 - BRACKET_TOL
    assert bracket.width <= 1e-6
    value, coefficients, covector = exact_atomic_norm(x, D)
    assert value == pytest.approx(0.7)
    assert coefficients == pytest.approx([0.3, -0.4])
    assert covector is not None
    assert l1_oracle(x, D) == pytest.approx(0.7)


def test_atomic_norm_of_zero():
    bracket = atomic_norm_bounds(np.zeros(2), build_canonical(PLANE))
    assert bracket.lower == 0.0
    assert bracket.upper == 0.0


def test_atomic_norm_outside_span():
    D = Dictionary(atoms=np.array([[1.0], [0.0]]), ambient=PLANE)
    with pytest.raises(OutsideSpanError):
        atomic_norm_bounds(np.array([0.0, 1.0]), D)
    with pytest.raises(OutsideSpanError):
        l1_oracle(np.array([0.0, 1.0]), D)


def test_l1_oracle_budget():
    D = build_random_sphere(PLANE, 13, seed=0)
    with pytest.raises(BudgetExceededError):
        l1_oracle(np.array([1.0, 0.0]), D)


def test_atomic_norm_without_lp_uses_beta_tail():
    D = build_canonical(PLANE)
    cfg = AtomicNormConfig(exact_lp=False, beta_lower=2 ** -0.5)
    bracket = atomic_norm_bounds(np.array([0.5, 0.5]), D, cfg)
    assert bracket.lp_upper is None
    assert bracket.lower <= 1.0 + BRACKET_TOL <= bracket.upper + 2 * BRACKET_TOL


def test_overstated_beta_inverts_bracket():
    cfg = AtomicNormConfig(exact_lp=False, beta_lower=1.0, max_iter=1)
    with pytest.raises(HypothesisViolationError, match="inverted"):
        atomic_norm_bounds(np.array([1.0, 1.0]), build_canonical(PLANE), cfg)


@settings(max_examples=20, deadline=None)
@given(
    x=arrays(np.float64, (3,), elements=st.floats(min_value=-2.0, max_value=2.0)).filter(
        lambda v: np.linalg.norm(v) > 1e-3
    ),
    seed=st.integers(min_value=0, max_value=1000),
)
def test_atomic_bracket_contains_oracle(x, seed):
    D = build_random_sphere(SmoothSpace.euclidean(3), 6, seed=seed)
    exact = l1_oracle(x, D)
    bracket = atomic_norm_bounds(x, D, AtomicNormConfig(max_iter=2000))
    assert bracket.lower <= exact * (1 + 1e-7) + BRACKET_TOL
    assert bracket.upper >= exact * (1 - 1e-7) - BRACKET_TOL


def test_R1_times_beta_is_one_for_canonical():
    report = check_R1_beta(build_canonical(PLANE), n_samples=16, seed=0)
    lo, hi = report.product_bracket
    assert report.passed
    assert lo <= 1.0 + 1e-9
    assert hi >= 1.0 - 1e-6
    assert report.product_width <= 0.1


def test_R1_check_scope():
    with pytest.raises(InvalidParameterError):
        check_R1_beta(build_canonical(SmoothSpace.euclidean(4)))


def test_dictionary_csv_round_trip(tmp_path):
    D = build_random_sphere(SmoothSpace.lp(3, 3.0), 5, seed=2)
    path = str(tmp_path / "dict.csv")
    save_dictionary(D, path)
    loaded = load_dictionary(path)
    assert np.array_equal(loaded.atoms, D.atoms)
    assert loaded.ambient.p == 3.0
    assert loaded.label == D.label


def test_dictionary_csv_bad_header(tmp_path):
    path = tmp_path / "dict.csv"
    path.write_text("1,0\n0,1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_dictionary(str(path))


def test_dictionary_csv_wrong_shape(tmp_path):
    path = tmp_path / "dict.csv"
    path.write_text("# d=2 N=3 p=2\n1,0\n0,1\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="found shape"):
        load_dictionary(str(path))


def test_dictionary_csv_oversized_column(tmp_path):
    path = tmp_path / "dict.csv"
    path.write_text("# d=2 N=2 p=2\n1,0\n1.2,0\n", encoding="utf-8")
    with pytest.raises(DictionaryInvariantError) as info:
        load_dictionary(str(path))
    assert info.value.column == 2


def test_covering_csv_round_trip(tmp_path):
    cov = covering_from_beta(build_canonical(PLANE), beta=0.5)
    path = str(tmp_path / "cov.csv")
    save_covering(cov, path)
    loaded = load_covering(path)
    assert loaded.radius == cov.radius
    assert loaded.target == cov.target
    assert np.array_equal(loaded.centers, cov.centers)
