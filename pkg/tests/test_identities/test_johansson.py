"""Tests for the geometric model: transition probabilities and the split event."""
import math

import pytest

from geodist.exceptions import ValidationError
from geodist.identities import johansson_transition, probability_A
from geodist.params import FiniteParams


@pytest.mark.parametrize(("x", "m", "q"), [(0, 1, 0.5), (3, 1, 0.3), (2, 3, 0.6), (5, 2, 0.25)])
def test_single_row_is_negative_binomial(x, m, q):
    """G(m, 1) is a sum of m geometric weights."""
    expected = math.comb(x + m - 1, m - 1) * (1 - q) ** m * q**x
    assert johansson_transition([x], m, q) == pytest.approx(expected, rel=1e-9)


def test_two_rows_sum_to_one():
    """Probabilities of G(1) over all vectors up to a high level sum to one."""
    q = 0.2
    total = sum(
        johansson_transition([a, b], 1, q) for b in range(0, 30) for a in range(0, b + 1)
    )
    assert total == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
def test_two_rows_far_in_the_tail(q):
    """G(1) = (w11, w11 + w12), so every vector X = (a, b) has probability (1 - q)^2 q^b."""
    for b in range(0, 60, 3):
        for a in range(0, b + 1, 2):
            value = johansson_transition([a, b], 1, q)
            assert value >= 0.0
            assert value == pytest.approx((1 - q) ** 2 * q**b, rel=1e-12)


def test_three_rows_are_a_distribution():
    """Every row of the transition law is non-negative and sums to one."""
    q, m, top = 0.2, 2, 25
    values = [
        johansson_transition([a, b, c], m, q)
        for c in range(top)
        for b in range(c + 1)
        for a in range(b + 1)
    ]
    assert min(values) >= 0.0
    assert sum(values) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize(("xs", "m", "q"), [([1, 2], 2, 0.5), ([0, 3], 1, 0.4), ([2], 3, 0.6)])
def test_transition_on_a_circle(xs, m, q):
    """For small X the contour form on any circle of radius > 1 agrees with the residue sum."""
    exact = johansson_transition(xs, m, q)
    for radius in (1.2, 1.5, 2.0):
        assert johansson_transition(xs, m, q, radius=radius) == pytest.approx(exact, rel=1e-9)


def test_transition_rejects_a_small_circle():
    with pytest.raises(ValidationError):
        johansson_transition([1], 1, 0.5, radius=0.9)


@pytest.mark.parametrize(
    ("xs", "m", "q"),
    [
        ([2, 1], 1, 0.5),
        ([1.5], 1, 0.5),
        ([1], 0, 0.5),
        ([1], 1, 1.0),
    ],
)
def test_transition_rejects_bad_input(xs, m, q):
    """Vectors are weakly increasing integers, m is positive and q lies in (0, 1)."""
    with pytest.raises(ValidationError):
        johansson_transition(xs, m, q)


@pytest.mark.parametrize(("x", "y", "q"), [(0, 0, 0.5), (1, 0, 0.5), (2, 3, 0.3)])
def test_split_event_of_a_forced_step(x, y, q):
    """On a single row A has probability (1 - q)^2 q^(x + y)."""
    report = probability_A(x, y, FiniteParams(1, 1, 2, 1), q)
    assert report.value.real == pytest.approx((1 - q) ** 2 * q ** (x + y), rel=1e-8)


@pytest.mark.parametrize(
    ("x", "y", "q", "R1", "R2"),
    [
        (-1, 0, 0.5, 2.4, 1.6),
        (0, 0, 1.2, 2.4, 1.6),
        (0, 0, 0.5, 1.6, 1.6),
        (0, 0, 0.5, 0.9, 1.6),
    ],
)
def test_split_event_rejects_bad_input(x, y, q, R1, R2):
    """Negative splits, q outside (0, 1) and bad radii are rejected."""
    with pytest.raises(ValidationError):
        probability_A(x, y, FiniteParams(1, 1, 2, 1), q, R1=R1, R2=R2)


@pytest.mark.slow
def test_split_event_of_a_square_grid():
    """With x = y = 0 on a 2x2 grid all four weights must vanish."""
    q = 0.4
    report = probability_A(0, 0, FiniteParams(1, 1, 2, 2), q)
    assert report.value.real == pytest.approx((1 - q) ** 4, rel=1e-6)


def test_split_event_below_its_rounding_floor():
    """Far in the tail the circles cannot resolve q^(x + y), and the report says so."""
    report = probability_A(20, 20, FiniteParams(1, 1, 2, 1), 0.3)
    assert report.diagnostic == "cancellation"


def test_split_event_above_its_rounding_floor():
    report = probability_A(2, 3, FiniteParams(1, 1, 2, 1), 0.3)
    assert report.diagnostic is None
