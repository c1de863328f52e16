"""Tests for passage times, geodesics and cut paths."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from geodist.exceptions import ValidationError
from geodist.lattice import WeightField
from geodist.lattice.passage import (
    LatticePath,
    PathKind,
    antidiagonal,
    backward_table,
    backward_values,
    cut_path,
    exit_point,
    forward_table,
    geodesic,
    on_geodesic,
    passage_values,
)

fields = st.integers(1, 6).flatmap(
    lambda cols: st.integers(1, 6).flatmap(
        lambda rows: arrays(
            float, (cols, rows), elements=st.floats(0.0, 10.0, allow_nan=False, width=32)
        )
    )
)


def test_passage_values_small_grid():
    """Forward times of a 2x3 field, weights indexed (col, row)."""
    w = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    expected = np.array([[1.0, 3.0, 6.0], [5.0, 10.0, 16.0]])
    assert np.array_equal(passage_values(w), expected)


def test_passage_values_batch():
    """A leading sample axis is processed sample by sample."""
    rng = np.random.default_rng(3)
    stack = rng.exponential(size=(5, 4, 3))
    batch = passage_values(stack)
    for k in range(5):
        assert np.allclose(batch[k], passage_values(stack[k]))


@settings(max_examples=60, deadline=None)
@given(fields)
def test_backward_total_matches_forward_total(w):
    """Both tables hold the same total passage time."""
    field = WeightField(w)
    assert forward_table(field).total == pytest.approx(backward_table(field).total)


@settings(max_examples=60, deadline=None)
@given(fields)
def test_geodesic_collects_the_total_weight(w):
    """The backtracked path is an up/right path whose weight is the passage time."""
    field = WeightField(w)
    path = geodesic(field)
    assert path.points[0] == (1, 1)
    assert path.points[-1] == (field.cols, field.rows)
    assert len(path) == field.cols + field.rows - 1
    weight = sum(field.weight(p) for p in path.points)
    assert weight == pytest.approx(forward_table(field).total)


@settings(max_examples=60, deadline=None)
@given(fields)
def test_split_identity_along_the_geodesic(w):
    """Consecutive geodesic points satisfy the split identity."""
    field = WeightField(w)
    forward, backward = forward_table(field), backward_table(field)
    path = geodesic(field, forward)
    for r, r_plus in zip(path.points[:-1], path.points[1:]):
        assert on_geodesic(forward, backward, r, r_plus)


def test_split_identity_off_the_geodesic():
    """A step leaving a unique geodesic fails the identity."""
    w = np.array([[1.0, 5.0], [1.0, 1.0]])
    field = WeightField(w)
    forward, backward = forward_table(field), backward_table(field)
    assert on_geodesic(forward, backward, (1, 1), (1, 2))
    assert not on_geodesic(forward, backward, (1, 1), (2, 1))


def test_ties_prefer_the_vertical_step():
    """Equal predecessors resolve to (i, j - 1)."""
    field = WeightField(np.ones((2, 2)))
    assert geodesic(field).points == ((1, 1), (2, 1), (2, 2))


def test_on_geodesic_needs_a_neighbour():
    """r+ must be the right or upper neighbour of r."""
    field = WeightField(np.ones((3, 3)))
    with pytest.raises(ValidationError):
        on_geodesic(forward_table(field), backward_table(field), (1, 1), (2, 2))


def test_backward_values_is_reversed_forward():
    """L_(i,j)(M, N) computed directly for a small grid."""
    w = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(backward_values(w), np.array([[8.0, 6.0], [7.0, 4.0]]))


@pytest.mark.parametrize(
    ("c", "cols", "rows", "expected"),
    [
        (2, 3, 3, ((1, 1),)),
        (4, 3, 3, ((3, 1), (2, 2), (1, 3))),
        (5, 3, 2, ((3, 2),)),
        (4, 2, 5, ((2, 2), (1, 3))),
    ],
)
def test_antidiagonal(c, cols, rows, expected):
    """Cells i + j = c from the lower right to the upper left."""
    assert antidiagonal(c, cols, rows).points == expected


@pytest.mark.parametrize("c", [1, 7])
def test_antidiagonal_outside_grid(c):
    """Antidiagonals missing the grid are rejected."""
    with pytest.raises(ValidationError):
        antidiagonal(c, 3, 3)


def test_paths_reject_invalid_steps():
    """A cut path only steps left or up."""
    with pytest.raises(ValidationError):
        cut_path([(2, 1), (3, 1)])
    with pytest.raises(ValidationError):
        LatticePath(((1, 1), (2, 2)), PathKind.GEODESIC)


def test_exit_point():
    """Last geodesic point on the cut, None when they miss each other."""
    w = np.array([[1.0, 5.0, 0.0], [0.0, 5.0, 5.0], [0.0, 0.0, 1.0]])
    field = WeightField(w)
    assert geodesic(field).points == ((1, 1), (1, 2), (2, 2), (2, 3), (3, 3))
    assert exit_point(field, antidiagonal(4, 3, 3)) == (2, 2)
    assert exit_point(field, cut_path([(3, 1), (2, 1), (2, 2), (2, 3)])) == (2, 3)
    assert exit_point(field, cut_path([(2, 1)])) is None


def test_exit_point_of_a_known_geodesic():
    """A geodesic passed in is used as is; other path kinds are rejected."""
    field = WeightField(np.ones((3, 3)))
    path = LatticePath(((1, 1), (1, 2), (2, 2), (3, 2), (3, 3)), PathKind.GEODESIC)
    assert exit_point(field, antidiagonal(4, 3, 3), path=path) == (2, 2)
    assert exit_point(field, cut_path([(3, 1), (2, 1), (2, 2), (2, 3)]), path=path) == (2, 2)
    with pytest.raises(ValidationError):
        exit_point(field, path, path=antidiagonal(4, 3, 3))
