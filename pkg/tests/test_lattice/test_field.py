"""Tests for random weight fields."""
import numpy as np
import pytest

from geodist.exceptions import ValidationError
from geodist.lattice import WeightDistribution, WeightField, make_generator, sample_weights


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("exp", WeightDistribution.EXPONENTIAL),
        ("exponential", WeightDistribution.EXPONENTIAL),
        ("geom", WeightDistribution.GEOMETRIC),
        ("Geometric", WeightDistribution.GEOMETRIC),
        (WeightDistribution.GEOMETRIC, WeightDistribution.GEOMETRIC),
    ],
)
def test_parse_distribution(name, expected):
    """Distribution names and their aliases."""
    assert WeightDistribution.parse(name) is expected


def test_unknown_distribution():
    """Unknown names are rejected."""
    with pytest.raises(ValidationError):
        WeightDistribution.parse("uniform")


def test_same_key_same_field():
    """Fields are reproducible from (seed, stream)."""
    a = sample_weights(4, 3, seed=11, stream=2)
    b = sample_weights(4, 3, seed=11, stream=2)
    c = sample_weights(4, 3, seed=11, stream=3)
    assert np.array_equal(a.weights, b.weights)
    assert not np.array_equal(a.weights, c.weights)
    assert (a.cols, a.rows) == (3, 4)


def test_chunks_are_independent_of_each_other():
    """Generator of chunk k does not depend on the other chunks."""
    first = make_generator(5, 0, 7).standard_exponential(10)
    make_generator(5, 0, 6).standard_exponential(1000)
    assert np.array_equal(first, make_generator(5, 0, 7).standard_exponential(10))


def test_geometric_support_and_mean():
    """Geometric weights live on {0, 1, ...} with mean q / (1 - q)."""
    field = sample_weights(200, 200, dist="geom", q=0.25, seed=1)
    w = field.weights
    assert w.min() == 0.0
    assert np.array_equal(w, np.floor(w))
    assert w.mean() == pytest.approx(1.0 / 3.0, rel=0.03)


def test_exponential_mean():
    """Exponential weights have mean one."""
    assert sample_weights(200, 200, seed=2).weights.mean() == pytest.approx(1.0, rel=0.02)


@pytest.mark.parametrize("q", [None, 0.0, 1.0, 1.5])
def test_geometric_needs_q(q):
    """q must lie strictly between 0 and 1."""
    with pytest.raises(ValidationError):
        sample_weights(2, 2, dist="geom", q=q)


@pytest.mark.parametrize("weights", [np.ones(3), np.zeros((0, 2)), -np.ones((2, 2))])
def test_invalid_fields(weights):
    """Fields are non-empty, two-dimensional and non-negative."""
    with pytest.raises(ValidationError):
        WeightField(weights)


def test_negative_seed():
    """Seeds and stream keys are non-negative."""
    with pytest.raises(ValidationError):
        make_generator(-1)
