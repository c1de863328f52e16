"""Tests for the cubic weights, quartic coupling and ray contours of the limiting series."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geodist.exceptions import ValidationError
from geodist.limit import LimitKernel, LimitQuadConfig, rm_f, rm_H, s_ell
from geodist.quadrature.series import Side

values = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize(("level", "s", "x", "gamma"), [(1, 1.0, 0.5, 0.5), (2, -2.0, 1.5, 0.3)])
def test_weight_at_origin(level, s, x, gamma):
    """Both weights equal one at the origin."""
    assert rm_f(level, 0.0, s, x, gamma) == pytest.approx(1.0)


def test_weight_formula():
    """f2 with g = 1 - gamma and a positive quadratic term."""
    zeta, s, x, gamma = 0.4 - 0.7j, 0.3, 1.2, 0.25
    g = 1 - gamma
    expected = np.exp(-g * zeta**3 / 3 + x * zeta**2 / 2 + (s - x * x / (4 * g)) * zeta)
    assert rm_f(2, zeta, s, x, gamma) == pytest.approx(expected)


@pytest.mark.parametrize("gamma", [0.0, 1.0, -0.2])
def test_gamma_range(gamma):
    """gamma lies strictly between 0 and 1."""
    with pytest.raises(ValidationError):
        rm_f(1, 0.5, 0.0, 0.0, gamma)


@settings(max_examples=100)
@given(values, values)
def test_coupling_vanishes_for_a_single_pair(xi, eta):
    """With one entry in the first group and none in the second, H = 0."""
    empty = np.zeros(0)
    assert abs(rm_H([xi], [eta], empty, empty)) < 1e-9 * (1 + abs(xi) + abs(eta)) ** 4


@settings(max_examples=100)
@given(st.lists(values, min_size=4, max_size=4))
def test_coupling_is_symmetric_in_the_groups(entries):
    """Swapping the two groups flips every power sum and leaves H unchanged."""
    a, b, c, d = ([e] for e in entries)
    assert rm_H(a, b, c, d) == pytest.approx(rm_H(c, d, a, b), rel=1e-9, abs=1e-9)


def test_power_sums():
    """sum(xi1^l - eta1^l) - sum(xi2^l - eta2^l)."""
    assert s_ell(2, [1.0, 2.0], [1.0], [3.0], [0.5]) == pytest.approx(4.0 - 9.0 + 0.25)


@pytest.mark.parametrize(
    ("s1", "s2", "gamma", "expected"),
    [
        (1.0, 2.0, 0.5, 0.0),
        (-2.0, 1.0, 0.5, 2.0),
        (0.5, -4.0, 0.2, np.sqrt(5.0)),
    ],
)
def test_lift(s1, s2, gamma, expected):
    """Negative thresholds lift the rays by sqrt(-min(s) / max(gamma, 1 - gamma))."""
    assert LimitKernel(s1, s2, 0.0, gamma).lift == pytest.approx(expected)


def test_kernel_sides_invert_each_other():
    """Right-side exponents are the negated left-side ones."""
    kernel = LimitKernel(0.5, -0.3, 0.7, 0.4)
    nodes = np.array([0.1 + 0.5j, -1.0])
    for level in (1, 2):
        assert np.allclose(
            kernel.exponent(level, Side.LEFT, nodes), -kernel.exponent(level, Side.RIGHT, nodes)
        )
    assert kernel.algebraic(1, Side.LEFT, nodes) is None


@pytest.mark.parametrize(
    "kwargs",
    [
        {"left_anchors": (-0.5, -1.0, -1.5)},
        {"left_anchors": (-1.5, -1.0, 0.5), "right_anchors": (1.0, 0.6, 0.2)},
        {"tiers": {}},
        {"cutoff": 0.0},
    ],
)
def test_invalid_limit_quadrature(kwargs):
    """Anchors are ordered and the two families do not cross."""
    with pytest.raises(ValidationError):
        LimitQuadConfig(**kwargs)


def test_right_anchors_mirror_the_left_ones():
    """Without explicit right anchors the families are mirror images."""
    config = LimitQuadConfig(left_anchors=(-2.0, -1.0, -0.25))
    assert config.right_anchors == (2.0, 1.0, 0.25)


@pytest.mark.parametrize(
    ("order", "expected"),
    [
        (2, (4, 8, 37.0)),
        (3, (2, 6, 30.0)),
        (7, (1, 6, 16.0)),
    ],
)
def test_tiers(order, expected):
    """Orders beyond the last tier use the last tier."""
    assert LimitQuadConfig().tier(order) == expected


def test_quadrature_config_round_trip():
    """A configuration survives its dictionary form."""
    config = LimitQuadConfig(cutoff=6.0, tiers={2: (3, 7, 25.0)})
    assert LimitQuadConfig.from_dict(config.to_dict()) == config


def test_auto_cutoff_grows_with_the_drop():
    """Deeper drops need longer rays, up to the maximal length."""
    config = LimitQuadConfig()
    kernels = [LimitKernel(1.0, 1.0, 0.0, 0.5)]
    short = config.auto_cutoff(kernels, 10.0, 0.0)
    long = config.auto_cutoff(kernels, 37.0, 0.0)
    assert 1.0 <= short < long <= config.max_cutoff


def test_family_is_mirror_symmetric():
    """Right contours are the negated left contours, traversed the same way round."""
    family = LimitQuadConfig().family(2, [LimitKernel(0.5, 0.5, 0.0, 0.5)])
    mirrored = np.sort_complex(-family.left_in.nodes)
    assert np.allclose(mirrored, np.sort_complex(family.right_in.nodes))


def test_deep_lift_keeps_segment_panels_bounded():
    """The vertical segment of a deep lift gets no more panels than a ray."""
    config = LimitQuadConfig()
    family = config.family(4, [LimitKernel(-8.0, -8.0, 0.0, 0.5)])
    panels, nodes_per_panel, _ = config.tier(4)
    assert len(family.left_mid) <= 3 * panels * nodes_per_panel
