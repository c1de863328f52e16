"""Double series over (k1, k2) shared by the finite-time and the limiting densities

Both densities have the shape

    oint dz / (2 pi i (1 - z)^2)  sum_{k1, k2 >= 1}  T_{k1,k2}(z) / (k1! k2!)^2

where T integrates U1 (k1 entries, left family), V1 (k1 entries, right family), U2 and V2 (k2
entries each, middle contours) against

    f1(U1) f2(U2) / (f1(V1) f2(V2)) * H * C(U1;V1)^2 C(U2;V2)^2
        * D(U1;V2) D(V1;U2) / (D(U1;U2) D(V1;V2))

and every U1/V1 entry sits on a weighted alternative: 1/(1-z) times the inner contour minus
z/(1-z) times the outer one. Expanding the alternatives splits T into configurations (a, b) with
a entries of U1 and b entries of V1 on the outer contours; the integral of a configuration does
not depend on z, so the z-integral reduces to a scalar coefficient per configuration.
"""

from typing import Dict, List, NamedTuple, Optional, Protocol, Sequence, Tuple

import enum
import math
from dataclasses import dataclass

import numpy as np

from geodist.io import logger
from geodist.report import TermRecord

from .contour import (
    DEFAULT_BLOCK_SIZE,
    Contour,
    IntegralResult,
    QuadratureAxis,
    gather,
    leading_shape,
    symmetric_power,
    tensor_integrate_detailed,
    tensor_map,
    z_series_integral,
)
from .multilinear import cauchy_factor, delta_cross

# z-coefficients below this are zero up to trapezoid aliasing
COEFFICIENT_FLOOR = 1e-13


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class SeriesKernel(Protocol):
    """Model-specific pieces of the series integrand

    `exponent` and `algebraic` give the per-entry factor of f1 (level 1) or f2 (level 2) on the
    LEFT side, and of 1/f on the RIGHT side, split into an exponent (summed and exponentiated
    once) and an optional algebraic factor.
    """

    tail: bool

    def exponent(self, level: int, side: Side, nodes: np.ndarray) -> np.ndarray:
        ...

    def algebraic(self, level: int, side: Side, nodes: np.ndarray) -> Optional[np.ndarray]:
        ...

    def coupling(
        self, u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray
    ) -> np.ndarray:
        ...


@dataclass(frozen=True)
class ContourFamily:
    """Six nested contours: outer, middle and inner ones on each side"""

    left_out: Contour
    left_mid: Contour
    left_in: Contour
    right_out: Contour
    right_mid: Contour
    right_in: Contour

    def describe(self) -> Dict[str, str]:
        return {
            name: repr(getattr(self, name).descriptor)
            for name in ("left_out", "left_mid", "left_in", "right_out", "right_mid", "right_in")
        }


class FamilyProvider(Protocol):
    def __call__(self, order: int) -> ContourFamily:
        ...


class Configuration(NamedTuple):
    k1: int
    k2: int
    a: int
    b: int


def configuration_coefficient(config: Configuration, z: np.ndarray) -> np.ndarray:
    """z-dependence of one in/out configuration, without the 1/(1-z)^2 of the outer integral"""

    k1, k2, a, b = config
    z = np.asarray(z, dtype=complex)
    return (
        math.comb(k1, a)
        * math.comb(k1, b)
        * (1.0 - z) ** k2
        * (1.0 - 1.0 / z) ** k1
        * (1.0 - z) ** (-(2 * k1))
        * (-z) ** (a + b)
    )


def z_coefficient(config: Configuration, radius: float = 0.5, nodes: int = 64) -> complex:
    """Outer z-integral of a configuration coefficient"""
    return z_series_integral(lambda z: configuration_coefficient(config, z), radius, nodes)


def configuration_axes(family: ContourFamily, config: Configuration) -> List[QuadratureAxis]:
    """Axes [L_out^a, L_in^(k1-a), R_out^b, R_in^(k1-b), L_mid^k2, R_mid^k2]"""

    k1, k2, a, b = config
    return [
        symmetric_power(family.left_out, a),
        symmetric_power(family.left_in, k1 - a),
        symmetric_power(family.right_out, b),
        symmetric_power(family.right_in, k1 - b),
        symmetric_power(family.left_mid, k2),
        symmetric_power(family.right_mid, k2),
    ]


def _split(coords: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    shape = leading_shape(coords)
    u1 = gather(coords[0:2], shape)
    v1 = gather(coords[2:4], shape)
    u2 = gather(coords[4:5], shape)
    v2 = gather(coords[5:6], shape)
    return u1, u2, v1, v2


def _differences(
    u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    a1 = np.sum(u1, axis=-1) - np.sum(v1, axis=-1)
    a2 = np.sum(u2, axis=-1) - np.sum(v2, axis=-1)
    return a1, a2


def series_integrand(
    kernel: SeriesKernel, coords: Sequence[np.ndarray], tail: Optional[bool] = None
) -> np.ndarray:
    """Integrand of one configuration evaluated on a block of node tuples"""

    u1, u2, v1, v2 = _split(coords)
    exponent = (
        np.sum(kernel.exponent(1, Side.LEFT, u1), axis=-1)
        + np.sum(kernel.exponent(1, Side.RIGHT, v1), axis=-1)
        + np.sum(kernel.exponent(2, Side.LEFT, u2), axis=-1)
        + np.sum(kernel.exponent(2, Side.RIGHT, v2), axis=-1)
    )
    value = np.exp(exponent)
    for level, side, nodes in (
        (1, Side.LEFT, u1),
        (1, Side.RIGHT, v1),
        (2, Side.LEFT, u2),
        (2, Side.RIGHT, v2),
    ):
        factor = kernel.algebraic(level, side, nodes)
        if factor is not None:
            value = value * np.prod(factor, axis=-1)

    value = value * kernel.coupling(u1, u2, v1, v2)
    value = value * np.asarray(cauchy_factor(u1, v1)) ** 2 * np.asarray(cauchy_factor(u2, v2)) ** 2
    value = value * np.asarray(delta_cross(u1, v2)) * np.asarray(delta_cross(v1, u2))
    value = value / (np.asarray(delta_cross(u1, u2)) * np.asarray(delta_cross(v1, v2)))

    use_tail = kernel.tail if tail is None else tail
    if use_tail:
        a1, a2 = _differences(u1, u2, v1, v2)
        value = value / (a1 * a2)

    return value


def configurations(
    k1: int, k2: int, radius: float, nodes: int
) -> List[Tuple[Configuration, complex]]:
    """Configurations of a term with a non-vanishing z-coefficient"""

    out = []
    for a in range(k1 + 1):
        for b in range(k1 + 1):
            config = Configuration(k1, k2, a, b)
            coefficient = z_coefficient(config, radius, nodes)
            if abs(coefficient) > COEFFICIENT_FLOOR:
                out.append((config, coefficient))
    return out


def configuration_integral(
    kernel: SeriesKernel,
    family: ContourFamily,
    config: Configuration,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> IntegralResult:
    """Tensor integral of one configuration"""

    axes = configuration_axes(family, config)
    return tensor_integrate_detailed(
        lambda coords: series_integrand(kernel, coords),
        axes,
        threads=threads,
        block_size=block_size,
    )


def series_term(
    kernel: SeriesKernel,
    family: ContourFamily,
    k1: int,
    k2: int,
    z_radius: float = 0.5,
    z_nodes: int = 64,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> TermRecord:
    """z-integrated term (k1, k2), divided by (k1! k2!)^2"""

    total = 0j
    peak = 0.0
    evaluations = 0
    for config, coefficient in configurations(k1, k2, z_radius, z_nodes):
        result = configuration_integral(kernel, family, config, threads, block_size)
        logger.debug(
            f"configuration {tuple(config)}: coefficient {coefficient:.6g}, "
            f"integral {result.value:.6g} ({result.evaluations} evaluations)"
        )
        total += coefficient * result.value
        peak = max(peak, result.peak)
        evaluations += result.evaluations

    scale = float(math.factorial(k1) * math.factorial(k2)) ** 2
    return TermRecord(k1=k1, k2=k2, value=total / scale, peak=peak, evaluations=evaluations)


def term_at(
    kernel: SeriesKernel,
    family: ContourFamily,
    k1: int,
    k2: int,
    z: complex,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> complex:
    """The term T_{k1,k2} at a single point z of the z-circle (before the z-integral)"""

    total = 0j
    for a in range(k1 + 1):
        for b in range(k1 + 1):
            config = Configuration(k1, k2, a, b)
            coefficient = complex(configuration_coefficient(config, np.asarray(z)))
            result = configuration_integral(kernel, family, config, threads, block_size)
            total += coefficient * result.value
    return total


def sum_series(
    kernel: SeriesKernel,
    family_for: FamilyProvider,
    kmax: int,
    z_radius: float = 0.5,
    z_nodes: int = 64,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> Tuple[complex, List[TermRecord]]:
    """Sum all terms with 1 <= k1, k2 <= kmax

    Parameters
    ----------
    kernel : `SeriesKernel`
        Model-specific weights and coupling

    family_for : `callable`
        Returns the contour family to use for a given total order k1 + k2

    kmax : `int`
        Truncation order

    Returns
    -------
    value, terms : `complex`, `list`
        Series value and the per-term records
    """

    terms: List[TermRecord] = []
    for k1 in range(1, kmax + 1):
        for k2 in range(1, kmax + 1):
            family = family_for(k1 + k2)
            term = series_term(kernel, family, k1, k2, z_radius, z_nodes, threads, block_size)
            logger.info(f"term ({k1},{k2}) = {term.value:.10g} [{term.evaluations} evaluations]")
            terms.append(term)

    return complex(sum(t.value for t in terms)), terms


def truncation_evidence(terms: Sequence[TermRecord]) -> Optional[float]:
    """Largest magnitude among the terms of the highest total order"""
    if not terms:
        return None
    top = max(t.k1 + t.k2 for t in terms)
    return max(float(abs(t.value)) for t in terms if t.k1 + t.k2 == top)


def series_grid(
    kernel: SeriesKernel,
    family_for: FamilyProvider,
    kmax: int,
    s1_grid: np.ndarray,
    s2_grid: np.ndarray,
    z_radius: float = 0.5,
    z_nodes: int = 64,
    threads: int = 1,
    block_size: int = 2**13,
) -> np.ndarray:
    """Series value on a whole (s1, s2) grid from a single pass over the nodes

    The kernel must be built at s1 = s2 = 0: the s-dependence of the integrand is exactly
    exp(s1 A1 + s2 A2) with A_l = sum(U_l) - sum(V_l), so each block contributes
    E1 diag(values) E2^T with E_l = exp(s_l A_l).
    """

    s1_grid = np.asarray(s1_grid, dtype=float)
    s2_grid = np.asarray(s2_grid, dtype=float)
    total = np.zeros((s1_grid.size, s2_grid.size), dtype=complex)

    for k1 in range(1, kmax + 1):
        for k2 in range(1, kmax + 1):
            family = family_for(k1 + k2)
            scale = float(math.factorial(k1) * math.factorial(k2)) ** 2
            for config, coefficient in configurations(k1, k2, z_radius, z_nodes):

                def block_fn(coords: List[np.ndarray], weight: np.ndarray) -> np.ndarray:
                    values = np.broadcast_to(series_integrand(kernel, coords), weight.shape)
                    u1, u2, v1, v2 = _split(coords)
                    a1, a2 = _differences(u1, u2, v1, v2)
                    c = (values * weight).ravel()
                    e1 = np.exp(np.outer(s1_grid, np.broadcast_to(a1, weight.shape).ravel()))
                    e2 = np.exp(np.outer(s2_grid, np.broadcast_to(a2, weight.shape).ravel()))
                    return (e1 * c[None, :]) @ e2.T

                axes = configuration_axes(family, config)
                for partial in tensor_map(block_fn, axes, threads=threads, block_size=block_size):
                    total += coefficient * partial / scale

    return total
