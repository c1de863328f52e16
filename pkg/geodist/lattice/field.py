"""Random weight fields

Weights are stored as arrays of shape (cols, rows) = (M, N), so that `weights[i - 1, j - 1]` is
the weight of the lattice point (i, j). Batches of fields add a leading sample axis.
"""

from typing import Optional

import enum
from dataclasses import dataclass

import numpy as np

from geodist.exceptions import ValidationError


class WeightDistribution(enum.Enum):
    EXPONENTIAL = "exp"
    GEOMETRIC = "geom"

    @classmethod
    def parse(cls, value: object) -> "WeightDistribution":
        if isinstance(value, cls):
            return value
        aliases = {"exponential": "exp", "geometric": "geom"}
        key = str(value).lower()
        try:
            return cls(aliases.get(key, key))
        except ValueError as e:
            raise ValidationError(f"unknown weight distribution `{value}`") from e


def make_generator(seed: int, stream: int = 0, chunk: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream, chunk)

    Philox streams derived from a SeedSequence spawn key do not depend on how many other
    chunks exist or on the order in which they are drawn.
    """

    if seed < 0 or stream < 0 or chunk < 0:
        raise ValidationError("seed, stream and chunk index must be non-negative")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(chunk)))
    return np.random.Generator(np.random.Philox(sequence))


def check_geometric_parameter(q: Optional[float]) -> float:
    if q is None or not 0.0 < float(q) < 1.0:
        raise ValidationError(f"geometric weights need q in (0, 1), got {q}")
    return float(q)


def draw_weights(
    generator: np.random.Generator,
    shape: tuple,
    dist: WeightDistribution = WeightDistribution.EXPONENTIAL,
    q: Optional[float] = None,
) -> np.ndarray:
    """Draw i.i.d. weights: mean-one exponentials, or geometric P(w = k) = (1 - q) q^k"""

    if dist is WeightDistribution.EXPONENTIAL:
        return generator.standard_exponential(size=shape)
    q = check_geometric_parameter(q)
    # numpy's geometric counts trials, so shift its support from {1, 2, ...} to {0, 1, ...}
    return (generator.geometric(1.0 - q, size=shape) - 1).astype(float)


@dataclass(frozen=True)
class WeightField:
    """Weights on the M x N grid {1..M} x {1..N}"""

    weights: np.ndarray
    dist: WeightDistribution = WeightDistribution.EXPONENTIAL
    q: Optional[float] = None
    seed: Optional[int] = None
    stream: int = 0

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ValidationError(f"weights must be a non-empty 2D array, got shape {w.shape}")
        if np.any(w < 0):
            raise ValidationError("weights must be non-negative")
        object.__setattr__(self, "weights", w)

    @property
    def cols(self) -> int:
        return int(self.weights.shape[0])

    @property
    def rows(self) -> int:
        return int(self.weights.shape[1])

    def weight(self, point: tuple) -> float:
        i, j = point
        return float(self.weights[i - 1, j - 1])


def sample_weights(
    rows: int,
    cols: int,
    dist: WeightDistribution = WeightDistribution.EXPONENTIAL,
    seed: int = 0,
    stream: int = 0,
    q: Optional[float] = None,
) -> WeightField:
    """Sample a single weight field with N = `rows` rows and M = `cols` columns"""

    if rows < 1 or cols < 1:
        raise ValidationError(f"grid needs at least one row and column, got {rows}x{cols}")
    dist = WeightDistribution.parse(dist)
    if dist is WeightDistribution.GEOMETRIC:
        q = check_geometric_parameter(q)

    generator = make_generator(seed, stream)
    weights = draw_weights(generator, (cols, rows), dist, q)

    return WeightField(weights=weights, dist=dist, q=q, seed=seed, stream=stream)
