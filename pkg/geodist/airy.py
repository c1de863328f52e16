"""Airy functions and the GUE Tracy-Widom distribution

Ai and Ai' are evaluated from their contour integrals over the same ray contours as the
limiting density:

    Ai(x) = oint exp(-z^3/3 + x z) dz/(2 pi i),   Ai'(x) = oint z exp(-z^3/3 + x z) dz/(2 pi i)

along rays leaving the real axis at angles -+ 2 pi/3. F_GUE(s) = det(I - K_Airy) on L^2(s, inf)
is computed by Nystrom discretization after mapping (s, inf) onto (-1, 1).

>>> round(airy(0.0), 12)
0.355028053888
"""

from typing import Any, Tuple

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.quadrature.contour import ray_pair
from geodist.quadrature.multilinear import determinant

AIRY_RANGE = 20.0

_ANGLE = 2.0 * math.pi / 3.0
_CUTOFF = 8.0
_PANEL_LENGTH = 0.25
_PANEL_NODES = 10


def _contour(x: float) -> Any:
    if x >= 0:
        anchor, lift = -math.sqrt(x), 0.0
    else:
        anchor, lift = 0.0, math.sqrt(-x)
    panels = int(math.ceil(_CUTOFF / _PANEL_LENGTH))
    return ray_pair(
        anchor, _ANGLE, _CUTOFF, panels, _PANEL_NODES, lift=lift, segment_panel_length=_PANEL_LENGTH
    )


def _airy_scalar(x: float) -> Tuple[float, float]:
    if not abs(x) <= AIRY_RANGE:
        raise ValidationError(f"Airy functions are evaluated for |x| <= {AIRY_RANGE:g}, got {x}")
    contour = _contour(x)
    z = contour.nodes
    values = np.exp(-(z**3) / 3.0 + x * z) * contour.weights
    return float(np.sum(values).real), float(np.sum(z * values).real)


def airy_pair(x: Any) -> Tuple[Any, Any]:
    """Ai(x) and Ai'(x) from one contour evaluation, elementwise for arrays"""

    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return _airy_scalar(float(arr))
    ai = np.empty(arr.shape)
    aip = np.empty(arr.shape)
    for index, value in np.ndenumerate(arr):
        ai[index], aip[index] = _airy_scalar(float(value))
    return ai, aip


def airy(x: Any) -> Any:
    """Airy function Ai"""
    return airy_pair(x)[0]


def airy_prime(x: Any) -> Any:
    """Derivative Ai' of the Airy function

    >>> round(airy_prime(0.0), 12)
    -0.258819403793
    """
    return airy_pair(x)[1]


# |x - y| below which the kernel switches to its diagonal limit
DIAGONAL_GAP = 1e-6


def _kernel_from_values(
    x: np.ndarray, y: np.ndarray, ai_x: np.ndarray, aip_x: np.ndarray, ai_y: np.ndarray,
    aip_y: np.ndarray,
) -> np.ndarray:
    diff = x - y
    close = np.abs(diff) < DIAGONAL_GAP
    safe = np.where(close, 1.0, diff)
    off = (ai_x * aip_y - aip_x * ai_y) / safe
    diagonal = aip_x**2 - x * ai_x**2
    return np.where(close, diagonal, off)


def airy_kernel(x: Any, y: Any) -> Any:
    """(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y), with the limit Ai'(x)^2 - x Ai(x)^2 on the diagonal

    >>> abs(airy_kernel(0.5, 1.5) - airy_kernel(1.5, 0.5)) < 1e-15
    True
    """

    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ai_x, aip_x = airy_pair(xa)
    ai_y, aip_y = airy_pair(ya)
    value = _kernel_from_values(
        xa, ya, np.asarray(ai_x), np.asarray(aip_x), np.asarray(ai_y), np.asarray(aip_y)
    )
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class FredholmConfig:
    """Gauss-Legendre order and scale L of the map x = s + L (1 + u)/(1 - u)"""

    order: int = 60
    scale: float = 4.0

    def __post_init__(self) -> None:
        if self.order < 8:
            raise ValidationError(f"Fredholm quadrature order must be at least 8, got {self.order}")
        if not self.scale > 0:
            raise ValidationError(f"map scale must be positive, got {self.scale}")


def nystrom_matrix(s: float, config: FredholmConfig = FredholmConfig()) -> np.ndarray:
    """Symmetric Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j) of the Airy kernel on (s, inf)

    Nodes beyond the supported Airy range carry Ai = Ai' = 0.
    """

    u, weights = leggauss(config.order)
    L = config.scale
    x = s + L * (1.0 + u) / (1.0 - u)
    w = weights * 2.0 * L / (1.0 - u) ** 2

    ai = np.zeros_like(x)
    aip = np.zeros_like(x)
    inside = x <= AIRY_RANGE
    ai[inside], aip[inside] = airy_pair(x[inside])

    kernel = _kernel_from_values(
        x[:, None], x[None, :], ai[:, None], aip[:, None], ai[None, :], aip[None, :]
    )
    root = np.sqrt(w)
    return root[:, None] * kernel * root[None, :]


def fgue(s: float, config: FredholmConfig = FredholmConfig()) -> float:
    """GUE Tracy-Widom distribution function F_GUE(s) = det(I - K_Airy) on (s, inf)

    >>> round(fgue(8.0), 10)
    1.0
    """

    if s < -10.0:
        raise ValidationError(f"F_GUE is evaluated for s >= -10, got {s}")
    matrix = nystrom_matrix(s, config)
    value = complex(determinant(np.eye(config.order) - matrix)).real
    logger.debug(f"F_GUE({s}) = {value} at order {config.order}")
    return float(value)
