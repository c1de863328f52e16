"""Weights, coupling functions and contours of the finite-time density

All formulas are written for a right step r = (m, n) -> (m + 1, n); up steps are handled by
transposing the grid (see `FiniteParams.oriented`).
"""

from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from dataclasses import dataclass, field

import numpy as np

from geodist.exceptions import ValidationError
from geodist.params import FiniteParams
from geodist.quadrature.contour import circle
from geodist.quadrature.series import ContourFamily, Side


def f_weight(level: int, w: Any, s: float, params: FiniteParams) -> Any:
    """f1(w) = (w+1)^(-m) w^n e^(sw) and f2(w) = (w+1)^(-M+m) w^(N-n) e^(sw)

    >>> f_weight(1, 1.0, 0.0, FiniteParams(1, 1, 2, 1))
    (0.5+0j)
    """

    m, n, M, N = params.oriented()
    w = np.asarray(w, dtype=complex)
    if level == 1:
        value = (w + 1.0) ** (-m) * w**n * np.exp(s * w)
    elif level == 2:
        value = (w + 1.0) ** (m - M) * w ** (N - n) * np.exp(s * w)
    else:
        raise ValidationError(f"level must be 1 or 2, got {level}")
    if not np.all(np.isfinite(value)):
        raise ValidationError(f"f{level} has a pole at w = {w}")
    return complex(value) if value.ndim == 0 else value


def big_H(u1: Any, u2: Any, v1: Any, v2: Any) -> Any:
    """Coupling of the finite-time series

    With S = sum(u1 - v1) - sum(u2 - v2), Q = -sum(u1^2 - v1^2) + sum(u2^2 - v2^2) and
    P = prod(v1 / u1) prod(u2 / v2), H = S^2 (1 + P) / 2 + Q (1 - P) / 2.

    >>> big_H([2], [1], [1], [2])
    (0.25+0j)
    """

    u1, u2, v1, v2 = (np.asarray(a, dtype=complex) for a in (u1, u2, v1, v2))
    s = np.sum(u1, -1) - np.sum(v1, -1) - np.sum(u2, -1) + np.sum(v2, -1)
    q = -np.sum(u1**2, -1) + np.sum(v1**2, -1) + np.sum(u2**2, -1) - np.sum(v2**2, -1)
    p = np.prod(v1, -1) / np.prod(u1, -1) * np.prod(u2, -1) / np.prod(v2, -1)
    value = 0.5 * s**2 * (1.0 + p) + 0.5 * q * (1.0 - p)
    return complex(value) if np.ndim(value) == 0 else value


def hat_H(w: Any, w_prime: Any) -> Any:
    """(sum(w) - sum(w'))^2 / 2 - (sum(w^2) - sum(w'^2)) / 2

    >>> hat_H([3.0], [1.0])
    (-2+0j)
    """

    w = np.asarray(w, dtype=complex)
    w_prime = np.asarray(w_prime, dtype=complex)
    first = np.sum(w, -1) - np.sum(w_prime, -1)
    second = np.sum(w**2, -1) - np.sum(w_prime**2, -1)
    value = 0.5 * first**2 - 0.5 * second
    return complex(value) if np.ndim(value) == 0 else value


class FiniteKernel:
    """Series kernel of the finite-time density (or of its tail when `tail` is set)

    Parameters
    ----------
    params : `FiniteParams`
        Lattice indices

    s1, s2 : `float`
        Passage-time arguments, or tail thresholds when `tail` is True

    tail : `bool`
        Integrate the density over [s1, inf) x [s2, inf)
    """

    def __init__(self, params: FiniteParams, s1: float, s2: float, tail: bool = False) -> None:
        self.params = params
        self.m, self.n, self.M, self.N = params.oriented()
        self.s = {1: float(s1), 2: float(s2)}
        self.tail = tail

    def exponent(self, level: int, side: Side, nodes: np.ndarray) -> np.ndarray:
        sign = 1.0 if side is Side.LEFT else -1.0
        return sign * self.s[level] * nodes

    def algebraic(self, level: int, side: Side, nodes: np.ndarray) -> Optional[np.ndarray]:
        if level == 1:
            a, b = -self.m, self.n
        else:
            a, b = self.m - self.M, self.N - self.n
        if side is Side.RIGHT:
            a, b = -a, -b
        return (nodes + 1.0) ** a * nodes**b

    def coupling(
        self, u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray
    ) -> np.ndarray:
        return np.asarray(big_H(u1, u2, v1, v2))


@dataclass(frozen=True)
class FiniteQuadConfig:
    """Circles of the finite-time series

    The left family is centered at `left_center` (-1), the right one at `right_center` (0);
    `radii` lists (outer, middle, inner) radii shared by both families and `nodes` maps the
    total order k1 + k2 to the number of nodes per circle.
    """

    left_center: float = -1.0
    right_center: float = 0.0
    radii: Tuple[float, float, float] = (0.28, 0.11, 0.045)
    nodes: Mapping[int, int] = field(default_factory=lambda: {2: 32, 3: 16, 4: 10})
    z_radius: float = 0.5
    z_nodes: int = 64

    def __post_init__(self) -> None:
        out, mid, inner = (float(r) for r in self.radii)
        if not out > mid > inner > 0:
            raise ValidationError(f"radii must satisfy out > mid > in > 0, got {self.radii}")
        gap = abs(self.right_center - self.left_center)
        if not 2.0 * out < gap:
            raise ValidationError("outer circles intersect or overlap in real part")
        if not self.left_center < self.right_center:
            raise ValidationError("the left family must lie left of the right family")
        if not self.nodes:
            raise ValidationError("node tiers cannot be empty")
        object.__setattr__(self, "radii", (out, mid, inner))
        object.__setattr__(self, "nodes", {int(k): int(v) for k, v in self.nodes.items()})

    @classmethod
    def from_dict(cls, d: Optional[Mapping[str, Any]]) -> "FiniteQuadConfig":
        d = dict(d or {})
        if "radii" in d:
            d["radii"] = tuple(d["radii"])
        return cls(**d)

    def nodes_for(self, order: int) -> int:
        """Nodes per circle for a term of total order k1 + k2"""
        tiers = sorted(self.nodes)
        eligible = [k for k in tiers if k >= order]
        return self.nodes[eligible[0]] if eligible else self.nodes[tiers[-1]]

    def family(self, order: int) -> ContourFamily:
        n = self.nodes_for(order)
        out, mid, inner = self.radii
        return ContourFamily(
            left_out=circle(self.left_center, out, n),
            left_mid=circle(self.left_center, mid, n),
            left_in=circle(self.left_center, inner, n),
            right_out=circle(self.right_center, out, n),
            right_mid=circle(self.right_center, mid, n),
            right_in=circle(self.right_center, inner, n),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "left_center": self.left_center,
            "right_center": self.right_center,
            "radii": list(self.radii),
            "nodes": dict(self.nodes),
            "z_radius": self.z_radius,
            "z_nodes": self.z_nodes,
        }


def check_radii(radii: Sequence[float], count: int) -> Tuple[float, ...]:
    values = tuple(float(r) for r in radii)
    if len(values) != count or any(r <= 0 for r in values):
        raise ValidationError(f"expected {count} positive radii, got {radii}")
    return values
