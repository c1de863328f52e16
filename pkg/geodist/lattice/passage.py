"""Last passage times, geodesics and cut paths

Points are 1-based (col, row) pairs (i, j). Forward tables hold L_(1,1)(i, j), backward tables
hold L_(i,j)(M, N); both include the weight of (i, j) itself.

>>> w = np.array([[1.0, 3.0], [2.0, 4.0]])
>>> forward_table(WeightField(w)).total
8.0
>>> geodesic(WeightField(w)).points
((1, 1), (1, 2), (2, 2))
"""

from typing import Optional, Sequence, Tuple

import enum
from dataclasses import dataclass

import numpy as np

from geodist.exceptions import ValidationError

from .field import WeightField

Point = Tuple[int, int]

SPLIT_RTOL = 1e-9


class TableDirection(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class PathKind(enum.Enum):
    GEODESIC = "geodesic"
    CUT = "cut"
    ANTIDIAGONAL = "antidiagonal"


_STEPS = {
    PathKind.GEODESIC: {(1, 0), (0, 1)},
    PathKind.CUT: {(-1, 0), (0, 1)},
    PathKind.ANTIDIAGONAL: {(-1, 1)},
}


@dataclass(frozen=True)
class PassageTable:
    direction: TableDirection
    values: np.ndarray

    def __getitem__(self, point: Point) -> float:
        i, j = point
        cols, rows = self.values.shape
        if not (1 <= i <= cols and 1 <= j <= rows):
            raise ValidationError(f"point {point} outside the {cols}x{rows} grid")
        return float(self.values[i - 1, j - 1])

    @property
    def total(self) -> float:
        """L_(1,1)(M, N), read from whichever corner holds it"""
        if self.direction is TableDirection.FORWARD:
            return float(self.values[-1, -1])
        return float(self.values[0, 0])


@dataclass(frozen=True)
class LatticePath:
    points: Tuple[Point, ...]
    kind: PathKind

    def __post_init__(self) -> None:
        points = tuple((int(i), int(j)) for i, j in self.points)
        object.__setattr__(self, "points", points)
        allowed = _STEPS[self.kind]
        for a, b in zip(points[:-1], points[1:]):
            if (b[0] - a[0], b[1] - a[1]) not in allowed:
                raise ValidationError(f"step {a} -> {b} not allowed in a {self.kind.value} path")

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def __len__(self) -> int:
        return len(self.points)


def passage_values(weights: np.ndarray) -> np.ndarray:
    """Forward passage times of a field or of a stack of fields (leading sample axis)

    The recurrence is swept one antidiagonal at a time, vectorized over the cells of the
    antidiagonal and over the samples.
    """

    w = np.asarray(weights, dtype=float)
    single = w.ndim == 2
    if single:
        w = w[None]
    batch, cols, rows = w.shape

    padded = np.full((batch, cols + 1, rows + 1), -np.inf)
    padded[:, 0, 1] = 0.0
    for d in range(cols + rows - 1):
        i = np.arange(max(0, d - rows + 1), min(d, cols - 1) + 1)
        j = d - i
        padded[:, i + 1, j + 1] = w[:, i, j] + np.maximum(padded[:, i, j + 1], padded[:, i + 1, j])

    out = padded[:, 1:, 1:]
    return out[0] if single else out


def backward_values(weights: np.ndarray) -> np.ndarray:
    """Backward passage times L_(i,j)(M, N) of a field or of a stack of fields"""
    w = np.asarray(weights, dtype=float)
    return passage_values(w[..., ::-1, ::-1])[..., ::-1, ::-1]


def forward_table(field: WeightField) -> PassageTable:
    return PassageTable(TableDirection.FORWARD, passage_values(field.weights))


def backward_table(field: WeightField) -> PassageTable:
    return PassageTable(TableDirection.BACKWARD, backward_values(field.weights))


def geodesic(field: WeightField, forward: Optional[PassageTable] = None) -> LatticePath:
    """Backtracked maximizing path from (1, 1) to (M, N)

    On ties (geometric weights) the vertical predecessor (i, j - 1) is preferred.
    """

    table = forward if forward is not None else forward_table(field)
    values = table.values
    i, j = field.cols, field.rows
    points = [(i, j)]
    while (i, j) != (1, 1):
        if i == 1:
            j -= 1
        elif j == 1:
            i -= 1
        elif values[i - 1, j - 2] >= values[i - 2, j - 1]:
            j -= 1
        else:
            i -= 1
        points.append((i, j))

    return LatticePath(tuple(reversed(points)), PathKind.GEODESIC)


def on_geodesic(forward: PassageTable, backward: PassageTable, r: Point, r_plus: Point) -> bool:
    """Split identity L_(1,1)(r) + L_(r+)(M, N) = L_(1,1)(M, N)"""

    step = (r_plus[0] - r[0], r_plus[1] - r[1])
    if step not in _STEPS[PathKind.GEODESIC]:
        raise ValidationError(f"{r_plus} is not the right or upper neighbour of {r}")
    lhs = forward[r] + backward[r_plus]
    return bool(np.isclose(lhs, forward.total, rtol=SPLIT_RTOL, atol=0.0))


def cut_path(points: Sequence[Point]) -> LatticePath:
    """Up/left lattice path used as a cut"""
    return LatticePath(tuple(points), PathKind.CUT)


def antidiagonal(c: int, cols: int, rows: int) -> LatticePath:
    """Points (i, j) of the grid with i + j = c, from the lower right to the upper left"""

    if not 2 <= c <= cols + rows:
        raise ValidationError(f"antidiagonal i + j = {c} misses the {cols}x{rows} grid")
    top = min(cols, c - 1)
    bottom = max(1, c - rows)
    return LatticePath(
        tuple((i, c - i) for i in range(top, bottom - 1, -1)), PathKind.ANTIDIAGONAL
    )


def exit_point(
    field: WeightField, cut: LatticePath, path: Optional[LatticePath] = None
) -> Optional[Point]:
    """Last point of the geodesic of `field` lying on `cut`, None when they do not meet

    Parameters
    ----------
    field : `WeightField`
        Weights whose geodesic is followed

    cut : `LatticePath`
        Cut path, e.g. an antidiagonal

    path : `LatticePath`
        Geodesic of `field` when it is already known; backtracked from `field` otherwise
    """

    if path is None:
        path = geodesic(field)
    elif path.kind is not PathKind.GEODESIC:
        raise ValidationError("exit_point expects a geodesic as path")
    members = set(cut.points)
    last = None
    for point in path.points:
        if point in members:
            last = point
    return last
