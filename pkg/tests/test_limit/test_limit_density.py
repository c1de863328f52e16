"""Tests for the limiting density, its tail and the F_GUE consistency check."""
import numpy as np
import pytest

from geodist.exceptions import ValidationError
from geodist.limit import (
    LimitConfig,
    LimitKernel,
    LimitQuadConfig,
    cdf_over_x,
    density_grid,
    fgue_consistency,
    limit_density,
    limit_tail,
    term_rmT,
)

# coarse rays with a fixed length, for checks that do not need converged values
COARSE = LimitConfig(kmax=1, quad=LimitQuadConfig(tiers={2: (2, 6, 20.0)}, cutoff=5.0))


@pytest.mark.parametrize(("s1", "s2", "x", "gamma"), [(0.5, 1.0, 0.8, 0.5), (1.5, 0.2, 1.3, 0.3)])
def test_density_is_even_in_the_location(s1, s2, x, gamma):
    """Mirroring the contours maps x to -x term by term."""
    right = limit_density(s1, s2, x, gamma, COARSE).value
    left = limit_density(s1, s2, -x, gamma, COARSE).value
    assert left == pytest.approx(right, rel=1e-7)


def test_single_term_report():
    """kmax = 1 sums the (1, 1) term only and records the configuration."""
    report = limit_density(1.0, 1.0, 0.0, 0.5, COARSE)
    assert [(t.k1, t.k2) for t in report.terms] == [(1, 1)]
    assert report.quantity == "limit-density"
    assert report.config["kmax"] == 1
    assert report.config["quadrature"]["cutoff"] == 5.0


def test_grid_matches_pointwise_evaluation():
    """One pass over the nodes gives the pointwise values on the whole grid."""
    s1_grid = np.array([0.5, 1.0, 1.5])
    s2_grid = np.array([0.25, 1.25])
    grid = density_grid(s1_grid, s2_grid, 0.4, 0.5, COARSE)
    assert grid.shape == (3, 2)
    for i, s1 in enumerate(s1_grid):
        for j, s2 in enumerate(s2_grid):
            value = limit_density(s1, s2, 0.4, 0.5, COARSE).value
            assert grid[i, j] == pytest.approx(value, rel=1e-7, abs=1e-12)


def test_term_at_a_point_of_the_z_circle():
    """The (1, 1) term is conjugation symmetric in z."""
    kernel = LimitKernel(1.0, 1.0, 0.2, 0.5)
    family = COARSE.quad.family(2, [kernel])
    z = 0.5 * np.exp(0.7j)
    value = term_rmT(1, 1, z, 1.0, 1.0, 0.2, 0.5, family)
    assert term_rmT(1, 1, np.conj(z), 1.0, 1.0, 0.2, 0.5, family) == pytest.approx(
        np.conj(value), rel=1e-9
    )


@pytest.mark.parametrize("kwargs", [{"kmax": 0}, {"threads": 0}])
def test_invalid_limit_config(kwargs):
    """Truncation and thread counts are positive."""
    with pytest.raises(ValidationError):
        LimitConfig(**kwargs)


def test_fgue_check_needs_a_symmetric_window():
    """The location window is symmetric around zero."""
    with pytest.raises(ValidationError):
        fgue_consistency(0.0, 0.5, COARSE, x_range=(-2.0, 3.0))


def test_cdf_over_a_symmetric_window():
    """A window [-a, a] carries twice the probability of [0, a]."""
    full = cdf_over_x(0.5, 0.5, -1.0, 1.0, 0.5, step=0.5, config=COARSE)
    half = cdf_over_x(0.5, 0.5, 0.0, 1.0, 0.5, step=0.5, config=COARSE)
    assert full == pytest.approx(2.0 * half, rel=1e-12)


def test_cdf_over_x_needs_a_range():
    """Empty location windows are rejected."""
    with pytest.raises(ValidationError):
        cdf_over_x(0.0, 0.0, 1.0, 1.0, 0.5, config=COARSE)


@pytest.mark.slow
@pytest.mark.parametrize(("s1", "s2", "x"), [(1.0, 1.0, 0.0), (0.5, 2.0, 0.7)])
def test_anchor_deformation(s1, s2, x):
    """Other admissible ray anchors give the same single-term density."""
    base = LimitConfig(kmax=1)
    moved = LimitConfig(kmax=1, quad=LimitQuadConfig(left_anchors=(-1.2, -0.8, -0.4)))
    assert limit_density(s1, s2, x, 0.5, moved).value == pytest.approx(
        limit_density(s1, s2, x, 0.5, base).value, rel=1e-6
    )


@pytest.mark.slow
def test_tail_decreases_with_the_thresholds():
    """Raising a threshold lowers the tail, which stays a probability."""
    config = LimitConfig(kmax=1)
    low = limit_tail(0.5, 0.5, 0.0, 0.5, config).value.real
    high = limit_tail(1.5, 0.5, 0.0, 0.5, config).value.real
    assert 0.0 < high < low < 1.0


@pytest.mark.slow
def test_fgue_consistency():
    """Integrating the limiting density over locations and times reproduces F_GUE."""
    check = fgue_consistency(0.0, 0.5, LimitConfig(kmax=2))
    assert check.difference < 2e-2
    assert abs(check.mass - 1.0) < 2e-2


@pytest.mark.slow
def test_terms_decay_with_their_order():
    """The largest term of each order k1 + k2 shrinks as the order grows."""
    report = limit_density(0.0, 0.0, 0.0, 0.5, LimitConfig(kmax=2))
    largest = {}
    for term in report.terms:
        order = term.k1 + term.k2
        largest[order] = max(largest.get(order, 0.0), abs(term.value))
    assert sorted(largest) == [2, 3, 4]
    assert largest[2] > largest[3] > largest[4]


@pytest.mark.slow
def test_tail_is_monotone_on_a_grid():
    """Over a 5x5 grid of thresholds the tail decreases along both axes."""
    config = LimitConfig(kmax=2)
    levels = [-1.0, -0.5, 0.0, 0.5, 1.0]
    values = np.array(
        [[limit_tail(t1, t2, 0.3, 0.5, config).value.real for t2 in levels] for t1 in levels]
    )
    assert np.all((values > 0.0) & (values < 1.0))
    assert np.all(np.diff(values, axis=0) < 0.0)
    assert np.all(np.diff(values, axis=1) < 0.0)


@pytest.mark.slow
@pytest.mark.parametrize(("t1", "t2", "x"), [(0.0, 0.0, 0.0), (0.5, -0.3, 0.3)])
def test_tail_is_the_integrated_density(t1, t2, x):
    """Closed-form tail against Gauss-Legendre integration of the density over [t, t + 8]."""
    config = LimitConfig(kmax=1)
    nodes, weights = np.polynomial.legendre.leggauss(48)
    s1 = t1 + 4.0 * (nodes + 1.0)
    s2 = t2 + 4.0 * (nodes + 1.0)
    grid = density_grid(s1, s2, x, 0.5, config).real
    integrated = 16.0 * weights @ grid @ weights
    assert limit_tail(t1, t2, x, 0.5, config).value.real == pytest.approx(integrated, abs=1e-3)
