"""Discretized contours and tensor-product quadrature

Contours carry their nodes together with weights that already absorb dw/(2 pi i), so that an
integral is simply sum(f(nodes) * weights). Circles use the trapezoid rule; ray pairs use
composite Gauss-Legendre panels along anchor + t exp(+-i angle).

>>> c = circle(0.0, 0.5, 16)
>>> abs(integrate(lambda w: 1 / w, c) - 1) < 1e-15
True
"""

from typing import Any, Callable, Iterator, List, NamedTuple, Sequence, Tuple, Union

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from geodist.exceptions import QuadratureError, ValidationError
from geodist.io import logger

DEFAULT_BLOCK_SIZE = 2**17


class CircleSpec(NamedTuple):
    center: complex
    radius: float
    n: int


class RayPairSpec(NamedTuple):
    anchor: float
    angle: float
    cutoff: float
    panels: int
    nodes_per_panel: int
    lift: float


@dataclass(frozen=True)
class Contour:
    """Quadrature nodes on a contour with weights absorbing dw/(2 pi i)"""

    nodes: np.ndarray
    weights: np.ndarray
    descriptor: Union[CircleSpec, RayPairSpec]

    def __len__(self) -> int:
        return int(self.nodes.shape[0])


@dataclass(frozen=True)
class QuadratureAxis:
    """One factor of a tensor-product rule

    `nodes` has shape (n, d): each of the n points is a d-tuple of coordinates, which is how
    symmetric powers of a contour are represented. Plain contours give d = 1.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.nodes.shape[1])

    @classmethod
    def from_contour(cls, contour: Contour) -> "QuadratureAxis":
        return cls(nodes=contour.nodes[:, None], weights=contour.weights)

    @classmethod
    def point(cls, nodes: Sequence[complex], weights: Sequence[complex]) -> "QuadratureAxis":
        """Axis of scalar nodes with explicit weights"""
        return cls(
            nodes=np.asarray(nodes, dtype=complex)[:, None],
            weights=np.asarray(weights, dtype=complex),
        )


class IntegralResult(NamedTuple):
    value: complex
    peak: float
    evaluations: int


def circle(center: complex, radius: float, n: int) -> Contour:
    """Counter-clockwise circle discretized by the trapezoid rule

    The angles are offset by half a step, which keeps the node set symmetric under complex
    conjugation for real centers and away from the real axis.

    Parameters
    ----------
    center : `complex`
        Center of the circle

    radius : `float`
        Radius, must be positive

    n : `int`
        Number of nodes, even and at least 4

    Returns
    -------
    contour : `Contour`
    """

    if not radius > 0:
        raise ValidationError(f"circle radius must be positive, got {radius}")
    if n < 4 or n % 2:
        raise ValidationError(f"circle needs an even number of nodes >= 4, got {n}")

    theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    offsets = radius * np.exp(1j * theta)
    nodes = complex(center) + offsets
    weights = offsets / n

    return Contour(nodes=nodes, weights=weights, descriptor=CircleSpec(complex(center), radius, n))


def _panel_rule(length: float, panels: int, nodes_per_panel: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, length]"""
    x, w = leggauss(nodes_per_panel)
    h = length / panels
    starts = h * np.arange(panels)
    t = (starts[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    wt = np.tile(0.5 * h * w, panels)
    return t, wt


def ray_pair(
    anchor: float,
    angle: float,
    cutoff: float,
    panels: int,
    nodes_per_panel: int,
    lift: float = 0.0,
    segment_panel_length: float = 0.25,
) -> Contour:
    """Pair of rays leaving the real axis at `anchor` towards exp(-+ i angle) infinity

    The contour runs from exp(-i angle) infinity to exp(+i angle) infinity. With `lift` > 0 the
    rays start at anchor -+ i lift and are joined by the vertical segment through the anchor.

    Parameters
    ----------
    anchor : `float`
        Real intercept

    angle : `float`
        Ray angle in (0, pi): 2 pi / 3 for the left family, pi / 3 for the right one

    cutoff : `float`
        Length at which the rays are truncated

    panels : `int`
        Number of Gauss-Legendre panels on each ray

    nodes_per_panel : `int`
        Gauss-Legendre order of each panel

    lift : `float`
        Half-height of the vertical segment

    segment_panel_length : `float`
        Target panel length on the vertical segment

    Returns
    -------
    contour : `Contour`
    """

    if not 0.0 < angle < np.pi:
        raise ValidationError(f"ray angle must lie in (0, pi), got {angle}")
    if cutoff <= 0 or panels < 1 or nodes_per_panel < 1:
        raise ValidationError("ray_pair needs a positive cutoff, panels and nodes per panel")
    if lift < 0:
        raise ValidationError(f"lift must be non-negative, got {lift}")

    t, wt = _panel_rule(cutoff, panels, nodes_per_panel)
    up = np.exp(1j * angle)
    down = np.exp(-1j * angle)
    two_pi_i = 2j * np.pi

    # lower ray is traversed inwards, hence reversed order and sign
    lower_nodes = (anchor - 1j * lift + t * down)[::-1]
    lower_weights = (-down * wt / two_pi_i)[::-1]
    upper_nodes = anchor + 1j * lift + t * up
    upper_weights = up * wt / two_pi_i

    pieces_nodes = [lower_nodes]
    pieces_weights = [lower_weights]
    if lift > 0:
        seg_panels = max(1, int(math.ceil(2.0 * lift / segment_panel_length)))
        y, wy = _panel_rule(2.0 * lift, seg_panels, nodes_per_panel)
        pieces_nodes.append(anchor + 1j * (y - lift))
        pieces_weights.append(wy / (2.0 * np.pi) + 0j)
    pieces_nodes.append(upper_nodes)
    pieces_weights.append(upper_weights)

    nodes = np.concatenate(pieces_nodes).astype(complex)
    weights = np.concatenate(pieces_weights).astype(complex)
    descriptor = RayPairSpec(
        float(anchor), float(angle), float(cutoff), panels, nodes_per_panel, float(lift)
    )

    return Contour(nodes=nodes, weights=weights, descriptor=descriptor)


def integrate(f: Callable[[np.ndarray], Any], contour: Contour) -> complex:
    """Integrate f over a single contour"""

    values = np.asarray(f(contour.nodes), dtype=complex)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise QuadratureError("non-finite integrand value", node=(contour.nodes[bad],))
    return complex(np.sum(values * contour.weights))


def symmetric_power(contour: Contour, k: int) -> QuadratureAxis:
    """k-fold product of a contour restricted to increasing index tuples

    Valid for integrands symmetric in the k copies that vanish when two copies coincide; the
    k! ordered tuples of distinct nodes are folded into one node with weight k! prod(w).
    """

    if k < 0:
        raise ValidationError(f"symmetric power needs k >= 0, got {k}")
    n = len(contour)
    if k == 0:
        return QuadratureAxis(nodes=np.zeros((1, 0), dtype=complex), weights=np.ones(1, complex))

    index = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)), dtype=np.intp
    ).reshape(-1, k)
    nodes = contour.nodes[index]
    weights = math.factorial(k) * np.prod(contour.weights[index], axis=1)
    return QuadratureAxis(nodes=nodes, weights=weights)


def power_axis(contour: Contour, k: int) -> QuadratureAxis:
    """Plain k-fold tensor power of a contour as one axis"""

    if k == 0:
        return QuadratureAxis(nodes=np.zeros((1, 0), dtype=complex), weights=np.ones(1, complex))
    n = len(contour)
    index = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.intp).reshape(-1, k)
    return QuadratureAxis(
        nodes=contour.nodes[index], weights=np.prod(contour.weights[index], axis=1)
    )


def z_coefficient_axis(power: int, degree: int, radius: float = 1.0) -> QuadratureAxis:
    """Axis extracting the coefficient of z**(power - 1) from a polynomial of degree `degree`

    Integrating P(z) against this axis gives the contour integral of P(z) / z**power dz/(2 pi i),
    which the trapezoid rule computes exactly with degree + 2 nodes.
    """

    count = degree + 2
    theta = 2.0 * np.pi * np.arange(count) / count
    z = radius * np.exp(1j * theta)
    return QuadratureAxis.point(z, z ** (1 - power) / count)


def z_series_integral(g: Callable[[np.ndarray], Any], radius: float = 0.5, n: int = 64) -> complex:
    """Trapezoid evaluation of the integral of g(z)/(1 - z)**2 dz/(2 pi i) over |z| = radius

    >>> round(z_series_integral(lambda z: 1 - 1 / z).real, 12)
    -1.0
    """

    if not 0.0 < radius < 1.0:
        raise ValidationError(f"z-circle radius must lie in (0, 1), got {radius}")
    return integrate(lambda z: np.asarray(g(z)) / (1.0 - z) ** 2, circle(0.0, radius, n))


def _split_axes(sizes: Sequence[int], block_size: int) -> int:
    """Index of the first axis of the longest suffix that fits inside one block"""
    split = len(sizes)
    inner = 1
    while split > 0 and inner * sizes[split - 1] <= block_size:
        inner *= sizes[split - 1]
        split -= 1
    return split


def _chunks(outer: int, per_chunk: int) -> Iterator[Tuple[int, int]]:
    for start in range(0, outer, per_chunk):
        yield start, min(outer, start + per_chunk)


def tensor_blocks(
    axes: Sequence[QuadratureAxis], block_size: int = DEFAULT_BLOCK_SIZE
) -> List[Tuple[Tuple[int, int], int]]:
    """Chunk layout of a tensor grid: ranges over the flattened outer axes plus the split index"""

    sizes = [len(axis) for axis in axes]
    split = _split_axes(sizes, block_size)
    inner = int(np.prod(sizes[split:], dtype=np.int64)) if split < len(sizes) else 1
    outer = int(np.prod(sizes[:split], dtype=np.int64)) if split > 0 else 1
    per_chunk = max(1, block_size // max(inner, 1))
    return [(chunk, split) for chunk in _chunks(outer, per_chunk)]


def _block_coordinates(
    axes: Sequence[QuadratureAxis], split: int, start: int, stop: int
) -> Tuple[List[np.ndarray], np.ndarray]:
    """Coordinates and weight products of one block, broadcast over (chunk, inner axes...)"""

    sizes = [len(axis) for axis in axes]
    n_inner = len(axes) - split
    flat = np.arange(start, stop)
    outer_index = np.unravel_index(flat, sizes[:split]) if split > 0 else ()

    coords: List[np.ndarray] = []
    weight = np.ones((stop - start,) + (1,) * n_inner, dtype=complex)
    for a, axis in enumerate(axes):
        if a < split:
            idx = outer_index[a]
            shape = (stop - start,) + (1,) * n_inner + (axis.dimension,)
            coords.append(axis.nodes[idx].reshape(shape))
            weight = weight * axis.weights[idx].reshape((stop - start,) + (1,) * n_inner)
        else:
            position = a - split
            shape = [1] * (1 + n_inner)
            shape[1 + position] = len(axis)
            coords.append(axis.nodes.reshape(tuple(shape) + (axis.dimension,)))
            weight = weight * axis.weights.reshape(tuple(shape))

    return coords, weight


def tensor_map(
    block_fn: Callable[[List[np.ndarray], np.ndarray], Any],
    axes: Sequence[QuadratureAxis],
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> List[Any]:
    """Apply `block_fn(coords, weights)` to every block of a tensor grid

    Blocks are formed in lexicographic order of the flattened index and the results are
    returned in that order whatever the number of threads, so any reduction done by the caller
    is reproducible bit for bit.
    """

    blocks = tensor_blocks(axes, block_size)
    logger.debug(
        f"tensor grid of sizes {[len(a) for a in axes]}: {len(blocks)} block(s), "
        f"split at axis {blocks[0][1] if blocks else 0}"
    )

    def work(block: Tuple[Tuple[int, int], int]) -> Any:
        (start, stop), split = block
        coords, weight = _block_coordinates(axes, split, start, stop)
        return block_fn(coords, weight)

    if threads <= 1 or len(blocks) == 1:
        return [work(block) for block in blocks]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, blocks))


def tensor_integrate_detailed(
    f: Callable[[List[np.ndarray]], Any],
    axes: Sequence[QuadratureAxis],
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> IntegralResult:
    """Like `tensor_integrate`, also reporting the peak integrand magnitude and evaluation count"""

    def block_fn(coords: List[np.ndarray], weight: np.ndarray) -> Tuple[complex, float, int]:
        values = np.asarray(f(coords), dtype=complex)
        values = np.broadcast_to(values, np.broadcast_shapes(values.shape, weight.shape))
        finite = np.isfinite(values)
        if not np.all(finite):
            where = np.unravel_index(int(np.flatnonzero(~finite)[0]), values.shape)
            node: List[complex] = []
            for c in coords:
                point = c[tuple(0 if c.shape[i] == 1 else where[i] for i in range(len(where)))]
                node.extend(complex(z) for z in np.atleast_1d(point))
            raise QuadratureError("non-finite integrand value", node=node)
        return (
            complex(np.sum(values * weight)),
            float(np.max(np.abs(values))) if values.size else 0.0,
            int(values.size),
        )

    partials = tensor_map(block_fn, axes, threads=threads, block_size=block_size)
    total = 0j
    peak = 0.0
    evaluations = 0
    for value, block_peak, count in partials:
        total += value
        peak = max(peak, block_peak)
        evaluations += count

    return IntegralResult(total, peak, evaluations)


def tensor_integrate(
    f: Callable[[List[np.ndarray]], Any],
    axes: Sequence[Union[QuadratureAxis, Contour]],
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> complex:
    """Integrate f over the tensor product of the given axes

    `f` receives one coordinate array per axis, each shaped (..., d) and broadcastable against
    the others; it must return the integrand on the broadcast shape.

    >>> c0 = circle(0.0, 0.5, 8)
    >>> value = tensor_integrate(lambda x: 1 / (x[0][..., 0] * x[1][..., 0]), [c0, c0])
    >>> abs(value - 1) < 1e-14
    True
    """

    normalized = [QuadratureAxis.from_contour(a) if isinstance(a, Contour) else a for a in axes]
    return tensor_integrate_detailed(f, normalized, threads=threads, block_size=block_size).value


def leading_shape(coords: Sequence[np.ndarray]) -> Tuple[int, ...]:
    """Broadcast shape of the coordinate arrays, ignoring their last (tuple) axis"""
    return tuple(np.broadcast_shapes(*[c.shape[:-1] for c in coords])) if coords else ()


def gather(coords: Sequence[np.ndarray], shape: Tuple[int, ...]) -> np.ndarray:
    """Concatenate coordinate arrays along their last axis after broadcasting to `shape`"""
    if not coords:
        return np.zeros(shape + (0,), dtype=complex)
    return np.concatenate([np.broadcast_to(c, shape + c.shape[-1:]) for c in coords], axis=-1)
