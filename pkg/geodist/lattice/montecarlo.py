"""Monte Carlo estimators of geodesic events

Samples are processed in chunks of a fixed size that only depends on the grid. Chunk k draws its
fields from the generator keyed by (seed, stream, k), chunks run on a thread pool and their
partial counts are reduced in chunk order, so results do not depend on the thread count.
"""

from typing import Any, Callable, List, NamedTuple, Optional, Tuple, Union

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.scaling import expected_distance, scaled_location, time_scale
from geodist.params import FiniteParams

from .field import WeightDistribution, check_geometric_parameter, draw_weights, make_generator
from .passage import SPLIT_RTOL, antidiagonal, backward_values, passage_values

# cells per chunk, bounds the memory of one batch of fields
CHUNK_CELLS = 2**21
MAX_CHUNK_SAMPLES = 4096


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Frequency of an indicator event"""

    value: float
    stderr: float
    samples: int
    seed: int

    @classmethod
    def from_hits(cls, hits: int, samples: int, seed: int) -> "MonteCarloEstimate":
        p = hits / samples
        stderr = math.sqrt(max(p * (1.0 - p), 0.0) / samples)
        return cls(value=p, stderr=stderr, samples=samples, seed=seed)


class Tail(NamedTuple):
    """Event L_(1,1)(r) >= t1 and L_(r+)(M, N) >= t2"""

    t1: float
    t2: float


class Interval(NamedTuple):
    """Event L_(1,1)(r) in [t1, t1 + eps1] and L_(r+)(M, N) in [t2, t2 + eps2]"""

    t1: float
    eps1: float
    t2: float
    eps2: float


def chunk_size(cols: int, rows: int) -> int:
    return max(1, min(MAX_CHUNK_SAMPLES, CHUNK_CELLS // (cols * rows)))


def chunk_layout(samples: int, size: int) -> List[Tuple[int, int]]:
    """(chunk index, number of samples) pairs covering `samples`"""
    return [(k, min(size, samples - start)) for k, start in enumerate(range(0, samples, size))]


def run_chunks(
    fn: Callable[[int, int], Any], samples: int, size: int, threads: int = 1
) -> List[Any]:
    """Evaluate fn(chunk_index, count) over all chunks, results in chunk order"""

    if samples < 1:
        raise ValidationError(f"number of samples must be positive, got {samples}")
    layout = chunk_layout(samples, size)
    logger.debug(f"monte carlo: {samples} samples in {len(layout)} chunk(s) of {size}")

    if threads <= 1 or len(layout) == 1:
        return [fn(k, count) for k, count in layout]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda item: fn(*item), layout))


def _fields(
    seed: int,
    stream: int,
    chunk: int,
    count: int,
    cols: int,
    rows: int,
    dist: WeightDistribution,
    q: Optional[float],
) -> np.ndarray:
    generator = make_generator(seed, stream, chunk)
    return draw_weights(generator, (count, cols, rows), dist, q)


def _split_members(
    forward: np.ndarray, backward: np.ndarray, r: Tuple[int, int], r_plus: Tuple[int, int]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split-identity membership of (r, r+) for a batch, plus the two passage times"""
    total = forward[:, -1, -1]
    first = forward[:, r[0] - 1, r[1] - 1]
    second = backward[:, r_plus[0] - 1, r_plus[1] - 1]
    member = np.isclose(first + second, total, rtol=SPLIT_RTOL, atol=0.0)
    return member, first, second


def mc_joint_probability(
    params: FiniteParams,
    mode: Union[Tail, Interval],
    samples: int,
    seed: int,
    dist: WeightDistribution = WeightDistribution.EXPONENTIAL,
    q: Optional[float] = None,
    stream: int = 0,
    threads: int = 1,
) -> MonteCarloEstimate:
    """Frequency of {r, r+ on the geodesic} with the passage times in the given windows"""

    dist = WeightDistribution.parse(dist)
    if dist is WeightDistribution.GEOMETRIC:
        q = check_geometric_parameter(q)
    if isinstance(mode, Interval):
        if mode.t1 < 0 or mode.t2 < 0 or mode.eps1 <= 0 or mode.eps2 <= 0:
            raise ValidationError("interval windows need t >= 0 and positive widths")

    r = (params.m, params.n)
    r_plus = params.neighbour
    cols, rows = params.M, params.N

    def work(chunk: int, count: int) -> int:
        w = _fields(seed, stream, chunk, count, cols, rows, dist, q)
        member, first, second = _split_members(passage_values(w), backward_values(w), r, r_plus)
        if isinstance(mode, Interval):
            inside = (
                (first >= mode.t1)
                & (first <= mode.t1 + mode.eps1)
                & (second >= mode.t2)
                & (second <= mode.t2 + mode.eps2)
            )
        else:
            inside = (first >= mode.t1) & (second >= mode.t2)
        return int(np.count_nonzero(member & inside))

    hits = sum(run_chunks(work, samples, chunk_size(cols, rows), threads))
    logger.info(f"joint probability: {hits} hits out of {samples} samples")

    return MonteCarloEstimate.from_hits(hits, samples, seed)


def mc_event_A(
    params: FiniteParams,
    q: float,
    x: int,
    y: int,
    samples: int,
    seed: int,
    stream: int = 0,
    threads: int = 1,
) -> MonteCarloEstimate:
    """Frequency of the geometric event: some geodesic passes (r, r+) with G(r) = x, G'(r+) = y"""

    q = check_geometric_parameter(q)
    if int(x) != x or int(y) != y or x < 0 or y < 0:
        raise ValidationError(f"x and y must be non-negative integers, got x={x}, y={y}")

    r = (params.m, params.n)
    r_plus = params.neighbour
    cols, rows = params.M, params.N

    def work(chunk: int, count: int) -> int:
        w = _fields(seed, stream, chunk, count, cols, rows, WeightDistribution.GEOMETRIC, q)
        member, first, second = _split_members(passage_values(w), backward_values(w), r, r_plus)
        return int(np.count_nonzero(member & (first == x) & (second == y)))

    hits = sum(run_chunks(work, samples, chunk_size(cols, rows), threads))
    logger.info(f"event A: {hits} hits out of {samples} samples")

    return MonteCarloEstimate.from_hits(hits, samples, seed)


@dataclass(frozen=True)
class VisitFrequencies:
    """Per-cell frequency of geodesic membership, arrays of shape (M, N)"""

    value: np.ndarray
    stderr: np.ndarray
    samples: int
    seed: int

    def antidiagonal_total(self, c: int) -> Tuple[float, float]:
        """Summed frequency over the cells i + j = c and its combined standard error"""
        cols, rows = self.value.shape
        cells = antidiagonal(c, cols, rows).points
        total = float(sum(self.value[i - 1, j - 1] for i, j in cells))
        err = math.sqrt(sum(float(self.stderr[i - 1, j - 1]) ** 2 for i, j in cells))
        return total, err


def mc_visit_frequencies(
    cols: int,
    rows: int,
    samples: int,
    seed: int,
    dist: WeightDistribution = WeightDistribution.EXPONENTIAL,
    q: Optional[float] = None,
    stream: int = 0,
    threads: int = 1,
) -> VisitFrequencies:
    """Frequency with which each cell lies on a geodesic (L(1,1)->p + L p->(M,N) - w(p) = total)"""

    dist = WeightDistribution.parse(dist)
    if dist is WeightDistribution.GEOMETRIC:
        q = check_geometric_parameter(q)

    def work(chunk: int, count: int) -> np.ndarray:
        w = _fields(seed, stream, chunk, count, cols, rows, dist, q)
        forward = passage_values(w)
        through = forward + backward_values(w) - w
        member = np.isclose(through, forward[:, -1:, -1:], rtol=SPLIT_RTOL, atol=0.0)
        return np.count_nonzero(member, axis=0)

    counts = np.zeros((cols, rows), dtype=np.int64)
    for partial in run_chunks(work, samples, chunk_size(cols, rows), threads):
        counts += partial

    p = counts / samples
    return VisitFrequencies(
        value=p, stderr=np.sqrt(p * (1.0 - p) / samples), samples=samples, seed=seed
    )


@dataclass(frozen=True)
class CrossingSamples:
    """Scaled crossing location and passage times, one entry per sample"""

    location: np.ndarray
    first_time: np.ndarray
    second_time: np.ndarray
    seed: int

    @property
    def samples(self) -> int:
        return int(self.location.size)

    def mean_location(self) -> Tuple[float, float]:
        """Sample mean of the location and its standard error"""
        n = self.samples
        std = float(np.std(self.location, ddof=1)) if n > 1 else 0.0
        return float(np.mean(self.location)), std / math.sqrt(n)

    def bin_probabilities(self, edges: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Empirical probabilities of the location bins and their standard errors"""
        counts, _ = np.histogram(self.location, bins=np.asarray(edges, dtype=float))
        p = counts / self.samples
        return p, np.sqrt(p * (1.0 - p) / self.samples)


def mc_corollary_crossing(
    N: int,
    alpha: float,
    gamma: float,
    samples: int,
    seed: int,
    stream: int = 0,
    threads: int = 1,
) -> CrossingSamples:
    """Where the geodesic from (1, 1) to (floor(alpha N), N) crosses the antidiagonal
    i + j = floor(gamma (1 + alpha) N), in scaled coordinates

    The location is x = x2 - x1 for the crossing point r = (i, j); the times are the passage
    times to r and from its successor r+, centered by the expected distance and divided by
    the fluctuation scale.
    """

    if N < 10:
        raise ValidationError(f"crossing statistics need N >= 10, got {N}")
    if not alpha > 0 or not 0.0 < gamma < 1.0:
        raise ValidationError(f"need alpha > 0 and gamma in (0, 1), got {alpha}, {gamma}")

    cols, rows = int(math.floor(alpha * N)), N
    c = int(math.floor(gamma * (1.0 + alpha) * N))
    if c >= cols + rows:
        raise ValidationError("the cut must leave room for a successor of the crossing point")
    cells = np.array(antidiagonal(c, cols, rows).points)
    ci, cj = cells[:, 0] - 1, cells[:, 1] - 1
    sigma = time_scale(N, alpha)

    def work(chunk: int, count: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        w = _fields(seed, stream, chunk, count, cols, rows, WeightDistribution.EXPONENTIAL, None)
        forward = passage_values(w)
        backward = backward_values(w)
        through = forward[:, ci, cj] + backward[:, ci, cj] - w[:, ci, cj]
        pick = np.argmax(through, axis=1)
        i, j = ci[pick], cj[pick]
        rows_idx = np.arange(count)

        # successor is the neighbour with the larger backward passage time
        right = np.where(i + 1 < cols, backward[rows_idx, np.minimum(i + 1, cols - 1), j], -np.inf)
        up = np.where(j + 1 < rows, backward[rows_idx, i, np.minimum(j + 1, rows - 1)], -np.inf)
        go_right = right > up
        ni = np.where(go_right, i + 1, i)
        nj = np.where(go_right, j, j + 1)

        x1, x2 = scaled_location(i + 1, j + 1, N, alpha, gamma)
        d_first = np.array([expected_distance((1, 1), (a + 1, b + 1)) for a, b in zip(i, j)])
        d_second = np.array(
            [expected_distance((a + 1, b + 1), (cols, rows)) for a, b in zip(ni, nj)]
        )
        first = (forward[rows_idx, i, j] - d_first) / sigma
        second = (backward[rows_idx, ni, nj] - d_second) / sigma
        return x2 - x1, first, second

    parts = run_chunks(work, samples, chunk_size(cols, rows), threads)
    logger.info(f"crossing statistics: {samples} samples on a {cols}x{rows} grid, cut i + j = {c}")

    return CrossingSamples(
        location=np.concatenate([p[0] for p in parts]),
        first_time=np.concatenate([p[1] for p in parts]),
        second_time=np.concatenate([p[2] for p in parts]),
        seed=seed,
    )
