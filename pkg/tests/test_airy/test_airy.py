"""Tests for Airy functions and the Fredholm evaluation of F_GUE."""
import numpy as np
import pytest

from geodist.airy import (
    AIRY_RANGE,
    FredholmConfig,
    airy,
    airy_kernel,
    airy_pair,
    airy_prime,
    fgue,
    nystrom_matrix,
)
from geodist.exceptions import ValidationError


def test_values_at_the_origin():
    """Ai(0) and Ai'(0) from their Maclaurin series."""
    assert airy(0.0) == pytest.approx(0.355028053887817, abs=1e-10)
    assert airy_prime(0.0) == pytest.approx(-0.258819403792807, abs=1e-10)


@pytest.mark.parametrize("x", [-6.0, -1.5, 1.0, 4.0])
def test_airy_equation(x):
    """Second differences of Ai match x Ai(x)."""
    h = 1e-3
    second = (airy(x + h) - 2 * airy(x) + airy(x - h)) / h**2
    assert second == pytest.approx(x * airy(x), abs=1e-6)


@pytest.mark.parametrize("x", [-3.0, 0.5, 2.0])
def test_derivative_against_differences(x):
    """Ai' agrees with a central difference of Ai."""
    h = 1e-5
    assert airy_prime(x) == pytest.approx((airy(x + h) - airy(x - h)) / (2 * h), abs=1e-8)


def test_array_input():
    """Arrays are evaluated elementwise."""
    xs = np.array([[0.0, 1.0], [-1.0, 2.0]])
    ai, aip = airy_pair(xs)
    assert ai.shape == (2, 2)
    assert ai[0, 0] == pytest.approx(airy(0.0))
    assert aip[1, 1] == pytest.approx(airy_prime(2.0))


def test_range():
    """Evaluation is limited to |x| <= 20."""
    airy(AIRY_RANGE)
    with pytest.raises(ValidationError):
        airy(AIRY_RANGE + 0.5)


@pytest.mark.parametrize(("x", "y"), [(0.5, 1.5), (-2.0, 3.0), (0.0, -0.7)])
def test_kernel_is_symmetric(x, y):
    """K(x, y) = K(y, x)."""
    assert airy_kernel(x, y) == pytest.approx(airy_kernel(y, x), rel=1e-12)


@pytest.mark.parametrize("x", [-2.0, 0.0, 1.3])
def test_kernel_diagonal_is_continuous(x):
    """The diagonal limit joins the off-diagonal formula."""
    assert abs(airy_kernel(x, x + 1e-7) - airy_kernel(x, x)) < 1e-6


def test_nystrom_matrix_is_positive_semidefinite():
    """The Airy kernel is a positive operator."""
    matrix = nystrom_matrix(-2.0, FredholmConfig(order=40))
    assert np.allclose(matrix, matrix.T)
    assert np.linalg.eigvalsh(matrix).min() >= -1e-10


def test_fgue_far_right():
    """F_GUE(6) = 1 to quadrature precision."""
    assert fgue(6.0) == pytest.approx(1.0, abs=1e-10)


def test_fgue_is_a_distribution_function():
    """Values lie in [0, 1] and do not decrease."""
    values = np.array([fgue(s) for s in np.linspace(-6.0, 4.0, 30)])
    assert np.all((values >= 0) & (values <= 1 + 1e-12))
    assert np.all(np.diff(values) >= -1e-12)


@pytest.mark.parametrize("s", [-6.0, -2.0, 0.0, 4.0])
def test_fgue_order_doubling(s):
    """Orders 40 and 80 agree."""
    assert fgue(s, FredholmConfig(order=40)) == pytest.approx(
        fgue(s, FredholmConfig(order=80)), abs=1e-10
    )


@pytest.mark.parametrize("kwargs", [{"order": 4}, {"scale": 0.0}])
def test_invalid_fredholm_config(kwargs):
    """Order at least 8 and a positive map scale."""
    with pytest.raises(ValidationError):
        FredholmConfig(**kwargs)


def test_fgue_left_limit():
    """F_GUE is evaluated for s >= -10."""
    with pytest.raises(ValidationError):
        fgue(-10.5)
