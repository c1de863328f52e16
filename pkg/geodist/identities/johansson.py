"""Geometric last passage percolation: transition probabilities and the split event

The geometric model (weights P(w = i) = (1 - q) q^i) is the discrete ancestor of the exponential
one; its split event

    A = {G(m, n) + G_(m+1, n)(M, N) = G(M, N), G(m, n) = x, G_(m+1, n)(M, N) = y}

has an exact (2N + 1)-fold contour integral whose q -> 1 limit is the finite-time density.
"""

from typing import List, Optional, Sequence

import math
import time
from fractions import Fraction

import numpy as np

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.params import FiniteParams
from geodist.quadrature.contour import (
    DEFAULT_BLOCK_SIZE,
    circle,
    symmetric_power,
    tensor_integrate_detailed,
    z_coefficient_axis,
)
from geodist.quadrature.multilinear import delta, determinant, minor_sum
from geodist.report import EstimateReport

from .summation import geometric_borders, geometric_matrix

# largest tolerated ratio of the quadrature rounding floor to the value of A
CANCELLATION_THRESHOLD = 1e-6


def _check_q(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ValidationError(f"q must lie in (0, 1), got {q}")


def _expansion_coefficient(a: int, d: int, m: int, q: Fraction) -> Fraction:
    """Sum of the finite residues of u^a (u - 1)^d (u - q)^(-m), read off at infinity

    It is the coefficient of v^(a + d - m + 1) in (1 - v)^d (1 - q v)^(-m).
    """

    order = a + d - m + 1
    total = Fraction(0)
    for r in range(order + 1):
        if d >= 0:
            first = (-1) ** r * math.comb(d, r)
        else:
            first = math.comb(r - d - 1, r)
        if first:
            s = order - r
            total += first * math.comb(m + s - 1, s) * q**s
    return total


def _exact_determinant(matrix: List[List[Fraction]]) -> Fraction:
    rows = [list(row) for row in matrix]
    size = len(rows)
    value = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            value = -value
        value *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return value


def johansson_transition(
    xs: Sequence[int], m: int, q: float, radius: Optional[float] = None, nodes: int = 96
) -> float:
    """P(G(m) = X) for the vector G(m) = (G(m, 1), ..., G(m, N)) of the geometric model

    det[(1 - q)^m oint (w+1)^(x_j + m - 1) w^(j - i) (w + 1 - q)^(-m) dw/(2 pi i)] on |w| = R > 1.

    Without `radius` every entry is the exact residue sum and the determinant is taken in
    rational arithmetic, so the result stays a probability for any X. With `radius` the entries
    come from `nodes` trapezoid points on |w| = radius; that rounding grows like radius^x_N.

    >>> round(johansson_transition([1], 2, 0.5), 12)
    0.25
    """

    values = [int(x) for x in xs]
    if any(x != v for x, v in zip(xs, values)):
        raise ValidationError(f"X must hold integers, got {list(xs)}")
    if not values or values[0] < 0 or any(a > b for a, b in zip(values, values[1:])):
        raise ValidationError(f"X must satisfy 0 <= x_1 <= ... <= x_N, got {values}")
    if m < 1:
        raise ValidationError(f"m must be positive, got {m}")
    _check_q(q)
    if radius is not None and not radius > 1.0:
        raise ValidationError(f"the contour radius must exceed 1, got {radius}")

    N = len(values)
    if radius is None:
        exact_q = Fraction(q)
        scale = (1 - exact_q) ** m
        exact = _exact_determinant(
            [
                [
                    scale * _expansion_coefficient(values[j] + m - 1, j - i, m, exact_q)
                    for j in range(N)
                ]
                for i in range(N)
            ]
        )
        logger.debug(f"transition probability at X={values}, m={m}, q={q}: {float(exact)}")
        return float(exact)

    contour = circle(0.0, radius, nodes)
    w = contour.nodes
    weights = contour.weights * (1.0 - q) ** m * (w + 1.0 - q) ** (-m)

    matrix = np.empty((N, N), dtype=complex)
    for j in range(N):
        column = (w + 1.0) ** (values[j] + m - 1)
        for i in range(N):
            matrix[i, j] = np.sum(column * w ** (j - i) * weights)

    value = complex(determinant(matrix))
    logger.debug(f"transition probability at X={values}, m={m}, q={q}, R={radius}: {value}")
    return float(value.real)


def probability_A(
    x: int,
    y: int,
    params: FiniteParams,
    q: float,
    R1: float = 2.4,
    R2: float = 1.6,
    nodes: int = 64,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> EstimateReport:
    """Probability of the split event A of the geometric model

    Parameters
    ----------
    x, y : `int`
        Split of the passage time, non-negative

    params : `FiniteParams`
        Lattice indices; up steps are evaluated on the transposed grid

    q : `float`
        Parameter of the geometric weights

    R1, R2 : `float`
        Distinct radii, both larger than 1, of the W1 and W2 circles

    Returns
    -------
    report : `EstimateReport`
    """

    if int(x) != x or int(y) != y or x < 0 or y < 0:
        raise ValidationError(f"x and y must be non-negative integers, got ({x}, {y})")
    x, y = int(x), int(y)
    _check_q(q)
    if not (R1 > 1.0 and R2 > 1.0) or R1 == R2:
        raise ValidationError(f"R1 and R2 must be distinct and larger than 1, got ({R1}, {R2})")

    m, n, M, N = params.oriented()
    start = time.perf_counter()
    prefactor = (-1) ** (N * (N - 1) // 2) * (1.0 - q) ** (M * N) / math.factorial(N) ** 2

    def integrand(coords: List[np.ndarray]) -> np.ndarray:
        w1, w2, z = coords
        shape = np.broadcast_shapes(w1.shape[:-1], w2.shape[:-1], z.shape[:-1])
        w1 = np.broadcast_to(w1, shape + w1.shape[-1:])
        w2 = np.broadcast_to(w2, shape + w2.shape[-1:])
        z = np.broadcast_to(z[..., 0], shape)

        weight1 = np.prod((w1 + 1.0) ** (m - 1) * w1 ** (-N) * (w1 + 1.0 - q) ** (-m), axis=-1)
        weight2 = np.prod((w2 + 1.0) ** (x + y + M - m) * (w2 + 1.0 - q) ** (m - M), axis=-1)
        rows, cols = geometric_borders(w1, w2, x, n)
        bordered = np.asarray(minor_sum(geometric_matrix(w1, w2, z, x, y, n, N), rows, cols))
        return np.asarray(delta(w1)) * np.asarray(delta(w2)) * weight1 * weight2 * bordered

    axes = [
        symmetric_power(circle(0.0, R1, nodes), N),
        symmetric_power(circle(0.0, R2, nodes), N),
        z_coefficient_axis(power=n, degree=N - 1),
    ]
    result = tensor_integrate_detailed(integrand, axes, threads=threads, block_size=block_size)
    logger.info(f"probability of A: {result.evaluations} evaluations, peak {result.peak:.3g}")

    report = EstimateReport(
        quantity="probability-A",
        value=prefactor * result.value,
        runtime_ms=1e3 * (time.perf_counter() - start),
        config={**params.to_dict(), "x": x, "y": y, "q": q, "R1": R1, "R2": R2, "nodes": nodes},
    )
    report.check_realness()

    # |w + 1|^(x + y) on the circles outgrows q^(x + y) and the rounding swamps the sum
    floor = np.finfo(float).eps * result.peak * abs(prefactor) * (R1 * R2) ** N
    if floor > CANCELLATION_THRESHOLD * abs(complex(report.value)):
        logger.warning(f"probability of A at x={x}, y={y} is below its rounding floor {floor:.3g}")
        report.diagnostic = "cancellation"
    return report
