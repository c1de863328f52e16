"""Closed contour-integral formulas for the finite-time density

Both are exact for every N but their cost grows like nodes^(2N), so they serve as
cross-checks of the series at small N.
"""

from typing import Any, List, Optional

import math
import time

import numpy as np

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.params import FiniteParams
from geodist.quadrature.contour import (
    DEFAULT_BLOCK_SIZE,
    QuadratureAxis,
    circle,
    symmetric_power,
    tensor_integrate_detailed,
    z_coefficient_axis,
    z_series_integral,
)
from geodist.quadrature.multilinear import delta, delta_cross, minor_sum
from geodist.report import EstimateReport

from .kernel import check_radii, hat_H


def _pair_matrix(w1: np.ndarray, w2: np.ndarray) -> Any:
    """Views of w1 along rows and w2 along columns of an N x N matrix"""
    return w1[..., :, None], w2[..., None, :]


def formula01_matrix(
    w1: np.ndarray, w2: np.ndarray, z: np.ndarray, s1: float, s2: float, n: int, N: int
) -> np.ndarray:
    """C_z(w1_i, w2_j) + D_z(w1_i, w2_j) as an N x N matrix"""

    a, b = _pair_matrix(w1, w2)
    zz = np.asarray(z)[..., None, None]
    e1 = np.exp(s1 * (a - b))
    e12 = np.exp((s1 + s2) * (a - b))
    ratio = a / b
    c_part = zz / (a - b) * ratio ** (n - 1) * e1 + 1.0 / (b - a) * ratio ** (n + 1) * e1
    d_part = zz / (b - a) * ratio + 1.0 / (a - b) * ratio**N * e12
    return c_part + d_part


def formula01(
    s1: float,
    s2: float,
    params: FiniteParams,
    R1: float = 2.4,
    R2: float = 1.6,
    nodes: int = 64,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> EstimateReport:
    """Density as a (2N + 1)-fold integral with a bordered minor determinant

    W1 runs over |w| = R1 and W2 over |w| = R2 with R1 > R2 > 1; z is extracted exactly as the
    coefficient of z^(n-1) of a polynomial of degree N - 1.
    """

    if not R1 > R2 > 1.0:
        raise ValidationError(f"formula01 needs R1 > R2 > 1, got R1={R1}, R2={R2}")
    m, n, M, N = params.oriented()
    start = time.perf_counter()

    prefactor = (-1) ** (N * (N - 1) // 2) / math.factorial(N) ** 2
    s12 = s1 + s2

    def integrand(coords: List[np.ndarray]) -> np.ndarray:
        w1, w2, z = coords
        shape = np.broadcast_shapes(w1.shape[:-1], w2.shape[:-1], z.shape[:-1])
        w1 = np.broadcast_to(w1, shape + w1.shape[-1:])
        w2 = np.broadcast_to(w2, shape + w2.shape[-1:])
        z = np.broadcast_to(z[..., 0], shape)

        weight1 = np.prod(w1 ** (-N) * (w1 + 1.0) ** (-m), axis=-1)
        weight2 = np.prod((w2 + 1.0) ** (m - M) * np.exp(s12 * w2), axis=-1)
        rows = w1**n * np.exp(s1 * w1)
        cols = 1.0 / (w2 ** (n - 1) * np.exp(s1 * w2))
        matrix = formula01_matrix(w1, w2, z, s1, s2, n, N)
        bordered = np.asarray(minor_sum(matrix, rows, cols))
        return np.asarray(delta(w1)) * np.asarray(delta(w2)) * weight1 * weight2 * bordered

    axes = [
        symmetric_power(circle(0.0, R1, nodes), N),
        symmetric_power(circle(0.0, R2, nodes), N),
        z_coefficient_axis(power=n, degree=N - 1),
    ]
    result = tensor_integrate_detailed(integrand, axes, threads=threads, block_size=block_size)
    logger.info(f"formula01: {result.evaluations} evaluations, peak {result.peak:.3g}")

    report = EstimateReport(
        quantity="formula01",
        value=prefactor * result.value,
        runtime_ms=1e3 * (time.perf_counter() - start),
        config={**params.to_dict(), "s1": s1, "s2": s2, "R1": R1, "R2": R2, "nodes": nodes},
    )
    report.check_realness()
    return report


def formula02(
    s1: float,
    s2: float,
    params: FiniteParams,
    center: float = -0.5,
    radii: Optional[Any] = None,
    nodes: int = 48,
    z_radius: float = 0.5,
    z_nodes: int = 64,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> EstimateReport:
    """Density as a 2N-fold integral over three nested circles enclosing both 0 and -1

    W2 sits on the middle circle; each entry of W1 takes the weighted alternative 1/(1-z) on the
    inner circle minus z/(1-z) on the outer one, which reduces to one z-coefficient per number
    a of entries on the outer circle.
    """

    out, mid, inner = check_radii(radii if radii is not None else (2.8, 1.6, 0.9), 3)
    if not out > mid > inner:
        raise ValidationError(f"radii must satisfy out > mid > in, got {(out, mid, inner)}")
    if inner <= max(abs(center), abs(center + 1.0)):
        raise ValidationError("the inner circle must enclose both 0 and -1")
    m, n, M, N = params.oriented()
    start = time.perf_counter()

    def integrand_for(shifted: bool) -> Any:
        def integrand(coords: List[np.ndarray]) -> np.ndarray:
            shape = np.broadcast_shapes(*[c.shape[:-1] for c in coords])
            w1 = np.concatenate([np.broadcast_to(c, shape + c.shape[-1:]) for c in coords[:2]], -1)
            w2 = np.broadcast_to(coords[2], shape + coords[2].shape[-1:])

            value = np.prod((w1 + 1.0) ** (-m) * w1 ** (n - N) * np.exp(s1 * w1), axis=-1)
            value = value * np.prod((w2 + 1.0) ** (m - M) * w2 ** (-n) * np.exp(s2 * w2), axis=-1)
            value = value * np.asarray(delta(w1)) ** 2 * np.asarray(delta(w2)) ** 2
            value = value / np.asarray(delta_cross(w2, w1))
            if shifted:
                ratio = np.prod(w2, axis=-1) / np.prod(w1, axis=-1)
                return value * ratio * np.asarray(hat_H(w2, w1))
            return value * np.asarray(hat_H(w1, w2))

        return integrand

    outer_circle = circle(center, out, nodes)
    middle_circle = circle(center, mid, nodes)
    inner_circle = circle(center, inner, nodes)

    total = 0j
    evaluations = 0
    for a in range(N + 1):
        c0 = z_series_integral(lambda z: z ** (-n) * (-z) ** a, z_radius, z_nodes)
        c1 = z_series_integral(lambda z: z ** (1 - n) * (-z) ** a, z_radius, z_nodes)
        axes: List[QuadratureAxis] = [
            symmetric_power(outer_circle, a),
            symmetric_power(inner_circle, N - a),
            symmetric_power(middle_circle, N),
        ]
        for coefficient, shifted in ((c0, False), (c1, True)):
            if abs(coefficient) < 1e-13:
                continue
            result = tensor_integrate_detailed(
                integrand_for(shifted), axes, threads=threads, block_size=block_size
            )
            total += math.comb(N, a) * coefficient * result.value
            evaluations += result.evaluations

    logger.info(f"formula02: {evaluations} evaluations")
    report = EstimateReport(
        quantity="formula02",
        value=total / math.factorial(N) ** 2,
        runtime_ms=1e3 * (time.perf_counter() - start),
        config={
            **params.to_dict(),
            "s1": s1,
            "s2": s2,
            "center": center,
            "radii": [out, mid, inner],
            "nodes": nodes,
        },
    )
    report.check_realness()
    return report
