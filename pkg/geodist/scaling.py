"""KPZ scaling between lattice indices and the variables of the limiting density

With M = floor(alpha N), the point r = (m, n) and the thresholds are

    m = floor(gamma alpha N + x1 alpha^(2/3) (1 + sqrt(alpha))^(2/3) N^(2/3))
    n = floor(gamma N + x2 alpha^(-1/3) (1 + sqrt(alpha))^(2/3) N^(2/3))
    L_(1,1)(r) >= d((1,1), r) + t1 alpha^(-1/6) (1 + sqrt(alpha))^(4/3) N^(1/3)
    L_(r+)(M, N) >= d(r+, (M, N)) + t2 alpha^(-1/6) (1 + sqrt(alpha))^(4/3) N^(1/3)

and only x = x2 - x1 survives in the limit.
"""

from typing import Tuple

import math
from dataclasses import dataclass

from geodist.exceptions import ValidationError
from geodist.params import Direction, FiniteParams


def expected_distance(p: Tuple[int, int], q: Tuple[int, int]) -> float:
    """Leading-order passage time (sqrt(q1 - p1) + sqrt(q2 - p2))^2 between two lattice points

    >>> expected_distance((1, 1), (4, 4))
    12.0
    """

    d1 = q[0] - p[0]
    d2 = q[1] - p[1]
    if d1 < 0 or d2 < 0:
        raise ValidationError(f"{q} is not up/right of {p}")
    return float((math.sqrt(d1) + math.sqrt(d2)) ** 2)


def _check(N: int, alpha: float) -> None:
    if N < 1:
        raise ValidationError(f"N must be positive, got {N}")
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")


def location_scales(N: int, alpha: float) -> Tuple[float, float]:
    """Transversal scales of the column and row coordinates"""
    _check(N, alpha)
    root = (1.0 + math.sqrt(alpha)) ** (2.0 / 3.0) * N ** (2.0 / 3.0)
    return alpha ** (2.0 / 3.0) * root, alpha ** (-1.0 / 3.0) * root


def time_scale(N: int, alpha: float) -> float:
    """Fluctuation scale of passage times"""
    _check(N, alpha)
    return alpha ** (-1.0 / 6.0) * (1.0 + math.sqrt(alpha)) ** (4.0 / 3.0) * N ** (1.0 / 3.0)


def critical_point(alpha: float) -> float:
    """Point w_c = -1 / (1 + sqrt(alpha)) around which the contours are localized"""
    return -1.0 / (1.0 + math.sqrt(alpha))


def scaled_location(i: float, j: float, N: int, alpha: float, gamma: float) -> Tuple[float, float]:
    """Scaled coordinates (x1, x2) of the lattice point (i, j)"""
    c1, c2 = location_scales(N, alpha)
    return (i - gamma * alpha * N) / c1, (j - gamma * N) / c2


@dataclass(frozen=True)
class ScaledPoint:
    """Finite parameters matching a point of the limiting picture"""

    params: FiniteParams
    t1: float
    t2: float
    x: float

    @property
    def r(self) -> Tuple[int, int]:
        return (self.params.m, self.params.n)


def scaling_map(
    N: int,
    alpha: float,
    gamma: float,
    x1: float,
    x2: float,
    t1: float,
    t2: float,
    direction: Direction = Direction.RIGHT,
) -> ScaledPoint:
    """Lattice point and centered thresholds corresponding to (x1, x2, t1, t2)

    >>> p = scaling_map(100, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0)
    >>> p.r, p.params.M, p.t1
    ((50, 50), 100, 196.0)
    """

    if not 0.0 < gamma < 1.0:
        raise ValidationError(f"gamma must lie in (0, 1), got {gamma}")
    c1, c2 = location_scales(N, alpha)
    sigma = time_scale(N, alpha)

    M = int(math.floor(alpha * N))
    m = int(math.floor(gamma * alpha * N + x1 * c1))
    n = int(math.floor(gamma * N + x2 * c2))
    params = FiniteParams(m=m, n=n, M=M, N=N, direction=Direction.parse(direction))

    r_plus = params.neighbour
    return ScaledPoint(
        params=params,
        t1=expected_distance((1, 1), (m, n)) + t1 * sigma,
        t2=expected_distance(r_plus, (M, N)) + t2 * sigma,
        x=x2 - x1,
    )
