"""Cubic weights, quartic coupling and ray contours of the limiting density"""

from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import math
from dataclasses import dataclass, field

import numpy as np

from geodist.exceptions import ValidationError
from geodist.quadrature.contour import ray_pair
from geodist.quadrature.series import ContourFamily, Side

LEFT_ANGLE = 2.0 * math.pi / 3.0
RIGHT_ANGLE = math.pi / 3.0


def check_gamma(gamma: float) -> float:
    if not 0.0 < gamma < 1.0:
        raise ValidationError(f"gamma must lie in (0, 1), got {gamma}")
    return float(gamma)


def log_rm_f(level: int, zeta: Any, s: float, x: float, gamma: float) -> Any:
    """Exponent of the cubic weight f1 (level 1) or f2 (level 2)"""

    zeta = np.asarray(zeta, dtype=complex)
    if level == 1:
        g, sign = gamma, -1.0
    elif level == 2:
        g, sign = 1.0 - gamma, 1.0
    else:
        raise ValidationError(f"level must be 1 or 2, got {level}")
    return -g / 3.0 * zeta**3 + sign * 0.5 * x * zeta**2 + (s - x * x / (4.0 * g)) * zeta


def rm_f(level: int, zeta: Any, s: float, x: float, gamma: float) -> Any:
    """f1 = exp(-g z^3/3 - x z^2/2 + (s - x^2/(4g)) z) with g = gamma; f2 flips the sign of the
    quadratic term and uses g = 1 - gamma

    >>> rm_f(1, 0.0, 1.0, 0.5, 0.5)
    (1+0j)
    """

    check_gamma(gamma)
    value = np.exp(log_rm_f(level, zeta, s, x, gamma))
    return complex(value) if np.ndim(value) == 0 else value


def s_ell(ell: int, xi1: Any, eta1: Any, xi2: Any, eta2: Any) -> Any:
    """sum(xi1^l - eta1^l) - sum(xi2^l - eta2^l)"""

    xi1, eta1, xi2, eta2 = (np.asarray(a, dtype=complex) for a in (xi1, eta1, xi2, eta2))
    value = (
        np.sum(xi1**ell, -1) - np.sum(eta1**ell, -1) - np.sum(xi2**ell, -1) + np.sum(eta2**ell, -1)
    )
    return complex(value) if np.ndim(value) == 0 else value


def rm_H(xi1: Any, eta1: Any, xi2: Any, eta2: Any) -> Any:
    """S1^4/12 + S2^2/4 - S1 S3/3

    >>> abs(rm_H([0.3 + 1j], [2.0], np.zeros(0), np.zeros(0))) < 1e-14
    True
    """

    s1 = np.asarray(s_ell(1, xi1, eta1, xi2, eta2))
    s2 = np.asarray(s_ell(2, xi1, eta1, xi2, eta2))
    s3 = np.asarray(s_ell(3, xi1, eta1, xi2, eta2))
    value = s1**4 / 12.0 + s2**2 / 4.0 - s1 * s3 / 3.0
    return complex(value) if np.ndim(value) == 0 else value


class LimitKernel:
    """Series kernel of the limiting density, or of its tail when `tail` is set"""

    def __init__(
        self, s1: float, s2: float, x: float, gamma: float, tail: bool = False
    ) -> None:
        self.gamma = check_gamma(gamma)
        self.x = float(x)
        self.s = {1: float(s1), 2: float(s2)}
        self.tail = tail

    def exponent(self, level: int, side: Side, nodes: np.ndarray) -> np.ndarray:
        value = log_rm_f(level, nodes, self.s[level], self.x, self.gamma)
        return value if side is Side.LEFT else -value

    def algebraic(self, level: int, side: Side, nodes: np.ndarray) -> Optional[np.ndarray]:
        return None

    def coupling(
        self, u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray
    ) -> np.ndarray:
        return np.asarray(rm_H(u1, v1, u2, v2))

    @property
    def lift(self) -> float:
        """Half-height of the vertical segment through the anchors for negative thresholds"""
        low = min(self.s.values())
        return math.sqrt(max(0.0, -low) / max(self.gamma, 1.0 - self.gamma))


# (level, side) carried by each contour of the family
_CONTOUR_ROLES = {
    "left_out": (1, Side.LEFT),
    "left_mid": (2, Side.LEFT),
    "left_in": (1, Side.LEFT),
    "right_out": (1, Side.RIGHT),
    "right_mid": (2, Side.RIGHT),
    "right_in": (1, Side.RIGHT),
}


@dataclass(frozen=True)
class LimitQuadConfig:
    """Ray contours of the limiting series

    `left_anchors` are the real intercepts (in, mid, out) of the left family; the right family
    mirrors them unless `right_anchors` is given. `tiers` maps the total order k1 + k2 to
    (panels per ray, Gauss-Legendre nodes per panel, log-magnitude drop); the rays are cut where
    every weight has dropped by that much below its peak, unless `cutoff` fixes the length.
    """

    left_anchors: Tuple[float, float, float] = (-1.5, -1.0, -0.5)
    right_anchors: Optional[Tuple[float, float, float]] = None
    tiers: Mapping[int, Tuple[int, int, float]] = field(
        default_factory=lambda: {2: (4, 8, 37.0), 3: (2, 6, 30.0), 4: (1, 6, 16.0)}
    )
    cutoff: Optional[float] = None
    max_cutoff: float = 40.0
    segment_panel_length: float = 1.0
    z_radius: float = 0.5
    z_nodes: int = 64

    def __post_init__(self) -> None:
        left = tuple(float(a) for a in self.left_anchors)
        right = (
            tuple(-a for a in left)
            if self.right_anchors is None
            else tuple(float(a) for a in self.right_anchors)
        )
        if len(left) != 3 or len(right) != 3:
            raise ValidationError("anchors are (in, mid, out) triples")
        if not left[0] < left[1] < left[2]:
            raise ValidationError(f"left anchors must satisfy in < mid < out, got {left}")
        if not right[0] > right[1] > right[2]:
            raise ValidationError(f"right anchors must satisfy in > mid > out, got {right}")
        if not left[2] < right[2]:
            raise ValidationError("the left family must lie left of the right family")
        if not self.tiers:
            raise ValidationError("quadrature tiers cannot be empty")
        if self.cutoff is not None and not self.cutoff > 0:
            raise ValidationError(f"cutoff must be positive, got {self.cutoff}")
        object.__setattr__(self, "left_anchors", left)
        object.__setattr__(self, "right_anchors", right)
        object.__setattr__(
            self,
            "tiers",
            {int(k): (int(v[0]), int(v[1]), float(v[2])) for k, v in self.tiers.items()},
        )

    @classmethod
    def from_dict(cls, d: Optional[Mapping[str, Any]]) -> "LimitQuadConfig":
        d = dict(d or {})
        for key in ("left_anchors", "right_anchors"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        if "tiers" in d:
            d["tiers"] = {int(k): tuple(v) for k, v in d["tiers"].items()}
        return cls(**d)

    def tier(self, order: int) -> Tuple[int, int, float]:
        keys = sorted(self.tiers)
        eligible = [k for k in keys if k >= order]
        return self.tiers[eligible[0] if eligible else keys[-1]]

    def anchors(self) -> Dict[str, float]:
        left_in, left_mid, left_out = self.left_anchors
        right_in, right_mid, right_out = self.right_anchors  # type: ignore[misc]
        return {
            "left_out": left_out,
            "left_mid": left_mid,
            "left_in": left_in,
            "right_out": right_out,
            "right_mid": right_mid,
            "right_in": right_in,
        }

    def auto_cutoff(self, kernels: Sequence[LimitKernel], drop: float, lift: float) -> float:
        """Shortest ray length beyond which every weight stays `drop` below its peak"""

        t = np.linspace(0.0, self.max_cutoff, int(self.max_cutoff / 0.05) + 1)
        cutoff = 0.0
        for name, anchor in self.anchors().items():
            level, side = _CONTOUR_ROLES[name]
            angle = LEFT_ANGLE if side is Side.LEFT else RIGHT_ANGLE
            zeta = anchor + 1j * lift + t * np.exp(1j * angle)
            for kernel in kernels:
                log_mag = np.real(kernel.exponent(level, side, zeta))
                above = np.flatnonzero(log_mag > np.max(log_mag) - drop)
                cutoff = max(cutoff, float(t[above[-1]]) + 0.05)
        return min(max(cutoff, 1.0), self.max_cutoff)

    def family(self, order: int, kernels: Sequence[LimitKernel]) -> ContourFamily:
        """Contour family for a term of total order k1 + k2, valid for all given kernels"""

        panels, nodes_per_panel, drop = self.tier(order)
        lift = max(kernel.lift for kernel in kernels)
        # the lifting segment never gets more panels than one ray of the tier
        segment = max(self.segment_panel_length, 2.0 * lift / panels)
        cutoff = self.cutoff if self.cutoff is not None else self.auto_cutoff(kernels, drop, lift)
        contours = {}
        for name, anchor in self.anchors().items():
            angle = LEFT_ANGLE if name.startswith("left") else RIGHT_ANGLE
            contours[name] = ray_pair(
                anchor,
                angle,
                cutoff,
                panels,
                nodes_per_panel,
                lift=lift,
                segment_panel_length=segment,
            )
        return ContourFamily(**contours)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "left_anchors": list(self.left_anchors),
            "right_anchors": list(self.right_anchors),  # type: ignore[arg-type]
            "tiers": {k: list(v) for k, v in self.tiers.items()},
            "cutoff": self.cutoff,
            "max_cutoff": self.max_cutoff,
            "segment_panel_length": self.segment_panel_length,
            "z_radius": self.z_radius,
            "z_nodes": self.z_nodes,
        }
