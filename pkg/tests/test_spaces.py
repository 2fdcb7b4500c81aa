import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spaces.modulus import estimate_modulus, fit_power_exponent
from spaces.norms import (
    convexity_defect, directional_derivative, dual_norm, norm, norming_functional, pair
)
from spaces.space import SmoothSpace, default_smoothness, dual_exponent
from utils.errors import (
    DimensionMismatchError, InvalidParameterError, SmoothnessViolationError, ZeroVectorError
)

DIMENSION = 5
EXPONENTS = [1.25, 1.5, 2.0, 3.0, 4.0]
IDENTITY_TOL = 1e-10
FD_TOL = 1e-4
U_GRID = [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5]

vectors = arrays(
    np.float64,
    (DIMENSION,),
    elements=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False),
).filter(lambda x: np.max(np.abs(x)) > 1e-3)

# |entries| >= 0.1
separated = arrays(
    np.float64,
    (DIMENSION,),
    elements=st.one_of(st.floats(min_value=-10.0, max_value=-0.1), st.floats(min_value=0.1, max_value=10.0)),
)


def test_euclidean_declares_half_square():
    sp = SmoothSpace.euclidean(3)
    assert sp.q == 2.0
    assert sp.gamma == 0.5
    assert sp.is_euclidean


@pytest.mark.parametrize("p,expected", [(1.5, (1.5, 1 / 1.5)), (2.0, (2.0, 0.5)), (4.0, (2.0, 1.5))])
def test_default_smoothness(p, expected):
    assert default_smoothness(p) == pytest.approx(expected)


@pytest.mark.parametrize("p", [1.0, 0.5, math.inf, float("nan")])
def test_rejects_bad_exponent(p):
    with pytest.raises(InvalidParameterError):
        SmoothSpace(d=2, p=p)


def test_rejects_bad_smoothness_power():
    with pytest.raises(InvalidParameterError, match="space.q"):
        SmoothSpace(d=2, p=2.0, q=2.5)


def test_dual_exponent_is_conjugate():
    for p in EXPONENTS:
        assert 1 / p + 1 / dual_exponent(p) == pytest.approx(1.0)


def test_norm_values():
    assert norm([3.0, 4.0], SmoothSpace.euclidean(2)) == pytest.approx(5.0)
    assert norm([1.0, 1.0], SmoothSpace.lp(2, 4.0)) == pytest.approx(2 ** 0.25)
    assert norm([0.0, 0.0], SmoothSpace.lp(2, 3.0)) == 0.0


def test_norm_handles_large_entries():
    sp = SmoothSpace.lp(2, 3.0)
    assert norm([1e200, 1e200], sp) == pytest.approx(1e200 * 2 ** (1 / 3))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        norm([1.0, 2.0, 3.0], SmoothSpace.euclidean(2))


@pytest.mark.parametrize("p", EXPONENTS)
@settings(max_examples=50, deadline=None)
@given(x=vectors)
def test_norming_functional_identities(p, x):
    sp = SmoothSpace.lp(DIMENSION, p)
    F = norming_functional(x, sp)
    size = norm(x, sp)
    assert abs(pair(F, x) - size) <= IDENTITY_TOL * max(1.0, size)
    assert abs(dual_norm(F, sp) - 1.0) <= IDENTITY_TOL


@pytest.mark.parametrize("p", EXPONENTS)
@settings(max_examples=30, deadline=None)
@given(x=separated, y=separated)
def test_directional_derivative_matches_functional(p, x, y):
    sp = SmoothSpace.lp(DIMENSION, p)
    unit_x = x / norm(x, sp)
    unit_y = y / norm(y, sp)
    expected = pair(norming_functional(unit_x, sp), unit_y)
    assert directional_derivative(unit_x, unit_y, sp) == pytest.approx(expected, abs=FD_TOL)


@pytest.mark.parametrize("p", EXPONENTS)
@settings(max_examples=30, deadline=None)
@given(x=vectors, y=vectors)
def test_norm_is_convex_along_lines(p, x, y):
    sp = SmoothSpace.lp(DIMENSION, p)
    scale = max(norm(x, sp), norm(y, sp))
    assert convexity_defect(x / scale, y / scale, sp, np.linspace(-1.0, 1.0, 9)) >= -1e-8


def test_norming_functional_undefined_at_zero():
    with pytest.raises(ZeroVectorError):
        norming_functional([0.0, 0.0], SmoothSpace.euclidean(2))


def test_euclidean_functional_is_unit_vector():
    F = norming_functional([3.0, 4.0], SmoothSpace.euclidean(2))
    assert F == pytest.approx([0.6, 0.8])


@pytest.mark.parametrize("p", EXPONENTS)
def test_declared_modulus_dominates(p):
    estimate = estimate_modulus(SmoothSpace.lp(4, p), U_GRID, n_samples=300, seed=7)
    assert estimate.dominated
    assert estimate.rows[0] == (0.0, 0.0)


def test_euclidean_modulus_exponent_is_two():
    estimate = estimate_modulus(SmoothSpace.euclidean(3), [0.01, 0.02, 0.05, 0.1], n_samples=500, seed=1)
    assert estimate.fit_exponent() == pytest.approx(2.0, abs=0.05)


def test_understated_majorant_is_reported():
    sp = SmoothSpace(d=3, p=2.0, q=2.0, gamma=0.1)
    estimate = estimate_modulus(sp, [0.1, 0.5], n_samples=200, seed=0)
    assert not estimate.dominated
    with pytest.raises(SmoothnessViolationError, match="exceeds declared bound"):
        estimate.require_dominated()


def test_declared_smoothness_overrides_euclidean_default():
    sp = SmoothSpace(d=3, p=2.0, q=1.5, gamma=0.75)
    assert (sp.q, sp.gamma) == (1.5, 0.75)
    assert sp.majorant(1.0) == 0.75
    assert SmoothSpace(d=3, p=2.0).describe() == {"d": 3, "p": 2.0, "q": 2.0, "gamma": 0.5}
    # an overstated majorant is still a valid bound on (0, 1]
    assert estimate_modulus(sp, [0.1, 0.5, 1.0], n_samples=200, seed=0).dominated


def test_negative_step_rejected():
    with pytest.raises(InvalidParameterError):
        estimate_modulus(SmoothSpace.euclidean(2), [-0.1], n_samples=10)


def test_fit_power_exponent_exact():
    xs = [0.1, 0.2, 0.4, 0.8]
    assert fit_power_exponent(xs, [x ** 1.5 for x in xs]) == pytest.approx(1.5)
