"""Lattice indices shared by the finite-time evaluators"""

from typing import Any, Dict, Tuple

import enum
from dataclasses import asdict, dataclass

from geodist.exceptions import ValidationError


class Direction(enum.Enum):
    """Direction of the geodesic step leaving r = (m, n)"""

    RIGHT = "right"
    UP = "up"

    @classmethod
    def parse(cls, value: Any) -> "Direction":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as e:
            raise ValidationError(f"direction must be `right` or `up`, got `{value}`") from e


@dataclass(frozen=True)
class FiniteParams:
    """End point q = (M, N) of the grid, point r = (m, n) and the direction of the step r -> r+

    Right steps need 1 <= m <= M-1 and 1 <= n <= N; up steps need 1 <= m <= M and
    1 <= n <= N-1.
    """

    m: int
    n: int
    M: int
    N: int
    direction: Direction = Direction.RIGHT

    def __post_init__(self) -> None:
        for name in ("m", "n", "M", "N"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "direction", Direction.parse(self.direction))

        if self.M < 1 or self.N < 1:
            raise ValidationError(f"grid size must be positive, got M={self.M}, N={self.N}")
        if self.direction is Direction.RIGHT:
            ok = 1 <= self.m <= self.M - 1 and 1 <= self.n <= self.N
        else:
            ok = 1 <= self.m <= self.M and 1 <= self.n <= self.N - 1
        if not ok:
            raise ValidationError(
                f"(m, n) = ({self.m}, {self.n}) is not admissible for a {self.direction.value} "
                f"step inside a {self.M}x{self.N} grid"
            )

    @property
    def neighbour(self) -> Tuple[int, int]:
        """The point r+ following r along the geodesic"""
        if self.direction is Direction.RIGHT:
            return (self.m + 1, self.n)
        return (self.m, self.n + 1)

    def oriented(self) -> Tuple[int, int, int, int]:
        """Indices (m, n, M, N) in the orientation used by the right-step formulas

        An up step is the right step of the transposed grid.
        """
        if self.direction is Direction.RIGHT:
            return (self.m, self.n, self.M, self.N)
        return (self.n, self.m, self.N, self.M)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["direction"] = self.direction.value
        return d
