"""Tests for the closed contour formulas of the finite-time density."""
import math

import pytest

from geodist.exceptions import ValidationError
from geodist.finite import formula01, formula02
from geodist.params import FiniteParams

SINGLE_ROW = FiniteParams(1, 1, 2, 1)


@pytest.mark.parametrize(("s1", "s2"), [(0.3, 0.7), (1.0, 1.0), (2.0, 0.5)])
def test_formula01_of_a_forced_step(s1, s2):
    """Independent unit exponentials when N = 1."""
    assert formula01(s1, s2, SINGLE_ROW).value.real == pytest.approx(math.exp(-s1 - s2), rel=1e-6)


@pytest.mark.parametrize(("s1", "s2"), [(0.3, 0.7), (1.0, 1.0), (2.0, 0.5)])
def test_formula02_of_a_forced_step(s1, s2):
    """Independent unit exponentials when N = 1."""
    assert formula02(s1, s2, SINGLE_ROW).value.real == pytest.approx(math.exp(-s1 - s2), rel=1e-6)


@pytest.mark.parametrize(("R1", "R2"), [(2.0, 1.3), (3.0, 2.2)])
def test_formula01_radius_deformation(R1, R2):
    """Any R1 > R2 > 1 gives the same value."""
    reference = formula01(0.6, 1.1, SINGLE_ROW).value
    assert formula01(0.6, 1.1, SINGLE_ROW, R1=R1, R2=R2).value == pytest.approx(
        reference, rel=1e-6
    )


@pytest.mark.parametrize(
    ("center", "radii"),
    [(-0.5, (2.4, 1.4, 0.8)), (-0.4, (3.0, 2.0, 1.0))],
)
def test_formula02_circle_deformation(center, radii):
    """Nested circles enclosing 0 and -1 are interchangeable."""
    reference = formula02(0.6, 1.1, SINGLE_ROW).value
    assert formula02(0.6, 1.1, SINGLE_ROW, center=center, radii=radii).value == pytest.approx(
        reference, rel=1e-6
    )


def test_formula02_z_circle():
    """The z-circle radius does not matter."""
    reference = formula02(0.6, 1.1, SINGLE_ROW).value
    assert formula02(0.6, 1.1, SINGLE_ROW, z_radius=0.25).value == pytest.approx(
        reference, rel=1e-8
    )


@pytest.mark.parametrize(("R1", "R2"), [(1.5, 1.6), (2.0, 1.0)])
def test_formula01_needs_nested_radii(R1, R2):
    """R1 > R2 > 1 is required."""
    with pytest.raises(ValidationError):
        formula01(1.0, 1.0, SINGLE_ROW, R1=R1, R2=R2)


@pytest.mark.parametrize("radii", [(1.0, 2.0, 3.0), (2.0, 1.0, 0.4)])
def test_formula02_needs_enclosing_circles(radii):
    """The inner circle must enclose both 0 and -1."""
    with pytest.raises(ValidationError):
        formula02(1.0, 1.0, SINGLE_ROW, radii=radii)


@pytest.mark.slow
def test_formulas_agree_on_a_square_grid():
    """Bordered-minor and nested-circle formulas give the same density for N = 2."""
    params = FiniteParams(1, 1, 2, 2)
    first = formula01(0.8, 1.2, params).value
    second = formula02(0.8, 1.2, params).value
    assert first == pytest.approx(second, rel=1e-6)


@pytest.mark.slow
def test_square_grid_density_is_symmetric():
    """On a 2x2 grid the right and up steps out of (1, 1) have the same density."""
    right = formula02(0.8, 1.2, FiniteParams(1, 1, 2, 2)).value
    assert formula02(0.8, 1.2, FiniteParams(1, 1, 2, 2, "up")).value == pytest.approx(
        right, rel=1e-8
    )
