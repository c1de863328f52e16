"""Finite summations of determinants and their closed forms

`sab_direct`/`sab_det` and `sw_direct`/`sw_closed` are the two summations over weakly increasing
integer vectors that turn the product of two transition probabilities into a single contour
integrand; `sum_y_check` is the telescoping sum over the second vector.
"""

from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import itertools

import numpy as np

from geodist.exceptions import ValidationError
from geodist.quadrature.contour import circle, z_coefficient_axis
from geodist.quadrature.multilinear import determinant, minor_sum


def weakly_increasing(k: int, lo: int, hi: int) -> Iterator[Tuple[int, ...]]:
    """All integer vectors lo <= x_1 <= ... <= x_k <= hi

    >>> list(weakly_increasing(2, 0, 1))
    [(0, 0), (0, 1), (1, 1)]
    """
    return itertools.combinations_with_replacement(range(lo, hi + 1), k)


def _pair(w: Sequence[complex], w_prime: Sequence[complex]) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(w, dtype=complex)
    b = np.asarray(w_prime, dtype=complex)
    if a.shape[-1] != b.shape[-1]:
        raise ValidationError(f"vectors must have equal sizes, got {a.shape[-1]} and {b.shape[-1]}")
    if np.any(np.isclose(a[..., :, None], b[..., None, :], rtol=0.0, atol=1e-14)):
        raise ValidationError("the two vectors share an entry")
    return a, b


def sab_direct(w: Sequence[complex], w_prime: Sequence[complex], a: int, b: int) -> complex:
    """Sum over a <= x_1 <= ... <= x_k <= b of det[(w_i+1)^x_j w_i^j] det[(w'_i+1)^-x_j w'_i^-j]

    >>> round(sab_direct([1.0], [2.0], 0, 1).real, 12)
    0.833333333333
    """

    u, v = _pair(w, w_prime)
    if a > b:
        raise ValidationError(f"need a <= b, got a={a}, b={b}")
    k = u.size
    powers = np.arange(1, k + 1)

    total = 0j
    for x in weakly_increasing(k, a, b):
        xs = np.asarray(x)
        left = (u[:, None] + 1.0) ** xs[None, :] * u[:, None] ** powers[None, :]
        right = (v[:, None] + 1.0) ** (-xs[None, :]) * v[:, None] ** (-powers[None, :])
        total += complex(determinant(left)) * complex(determinant(right))
    return total


def sab_det(w: Sequence[complex], w_prime: Sequence[complex], a: int, b: int) -> complex:
    """Closed form of `sab_direct` as a single k x k determinant

    >>> round(sab_det([1.0], [2.0], 0, 1).real, 12)
    0.833333333333
    """

    u, v = _pair(w, w_prime)
    if a > b:
        raise ValidationError(f"need a <= b, got a={a}, b={b}")
    k = u.size
    x = u[:, None]
    y = v[None, :]
    matrix = (
        1.0 / (y - x) * x * (x + 1.0) ** a / (y * (y + 1.0) ** (a - 1))
        + 1.0 / (x - y) * x**k * (x + 1.0) ** (b + 1) / (y**k * (y + 1.0) ** b)
    )
    return complex(determinant(matrix))


def _check_sw(w1: np.ndarray, x: int, y: int, n: int) -> int:
    N = int(w1.shape[-1])
    if not 1 <= n <= N:
        raise ValidationError(f"n must lie in [1, {N}], got {n}")
    if x < 0 or y < 0:
        raise ValidationError(f"x and y must be non-negative, got ({x}, {y})")
    return N


def sw_direct(w1: Sequence[complex], w2: Sequence[complex], x: int, y: int, n: int) -> complex:
    """Sum over 0 <= x_1 <= ... <= x_N <= x + y with x_n = x of the two geometric determinants"""

    u, v = _pair(w1, w2)
    N = _check_sw(u, x, y, n)
    j = np.arange(1, N + 1)
    shift = (j == n).astype(int)

    total = 0j
    for xs in weakly_increasing(N, 0, x + y):
        if xs[n - 1] != x:
            continue
        xa = np.asarray(xs)
        left = (u[:, None] + 1.0) ** xa[None, :] * u[:, None] ** j[None, :]
        right = (v[:, None] + 1.0) ** (-xa - shift)[None, :] * v[:, None] ** (shift - j)[None, :]
        total += complex(determinant(left)) * complex(determinant(right))
    return total


def geometric_matrix(
    w1: np.ndarray, w2: np.ndarray, z: np.ndarray, x: int, y: int, n: int, N: int
) -> np.ndarray:
    """Four-term kernel of the geometric summation, (w1_i, w2_j) entries of an N x N matrix

    The same matrix is C_z + D_z of the geometric-model probability.
    """

    a = np.asarray(w1, dtype=complex)[..., :, None]
    b = np.asarray(w2, dtype=complex)[..., None, :]
    zz = np.asarray(z, dtype=complex)[..., None, None]
    ratio = a / b
    shifted = (a + 1.0) / (b + 1.0)
    return (
        zz / (b - a) * ratio * (b + 1.0)
        + zz / (a - b) * ratio ** (n - 1) * shifted**x * (a + 1.0)
        + 1.0 / (b - a) * ratio ** (n + 1) * shifted**x * (b + 1.0)
        + 1.0 / (a - b) * ratio**N * shifted ** (x + y) * (a + 1.0)
    )


def geometric_borders(
    w1: np.ndarray, w2: np.ndarray, x: int, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Row weights (w1+1)^x w1^n and column weights 1/((w2+1)^(x+1) w2^(n-1))"""
    rows = (w1 + 1.0) ** x * w1**n
    cols = 1.0 / ((w2 + 1.0) ** (x + 1) * w2 ** (n - 1))
    return rows, cols


def sw_closed(
    w1: Sequence[complex],
    w2: Sequence[complex],
    x: int,
    y: int,
    n: int,
    z_radius: float = 1.0,
) -> complex:
    """Closed form of `sw_direct`: bordered minors of the geometric matrix and a z-coefficient

    The determinant is a polynomial of degree N - 1 in z, so the z-integral against dz/z^n is
    computed exactly on N + 1 points of any circle.
    """

    u, v = _pair(w1, w2)
    N = _check_sw(u, x, y, n)
    if not z_radius > 0:
        raise ValidationError(f"z-circle radius must be positive, got {z_radius}")

    axis = z_coefficient_axis(power=n, degree=N - 1, radius=z_radius)
    z = axis.nodes[:, 0]
    rows, cols = geometric_borders(u, v, x, n)
    matrix = geometric_matrix(u[None, :], v[None, :], z, x, y, n, N)
    values = np.asarray(minor_sum(matrix, rows[None, :], cols[None, :]))
    return complex(np.sum(values * axis.weights))


def default_weight(w: np.ndarray) -> np.ndarray:
    return (w + 1.0) / (w + 0.5) ** 2


class _Moments:
    """Contour integrals E(p, k) = oint (w+1)^p w^k F(w) dw/(2 pi i) on |w| = radius"""

    def __init__(self, F: Callable[[np.ndarray], np.ndarray], radius: float, nodes: int) -> None:
        contour = circle(0.0, radius, nodes)
        self.nodes = contour.nodes
        self.weights = contour.weights * np.asarray(F(contour.nodes), dtype=complex)
        self.cache: Dict[Tuple[int, int], complex] = {}

    def __call__(self, p: int, k: int) -> complex:
        key = (p, k)
        if key not in self.cache:
            values = (self.nodes + 1.0) ** p * self.nodes**k
            self.cache[key] = complex(np.sum(values * self.weights))
        return self.cache[key]

    def matrix(self, columns: Sequence[Tuple[int, int]]) -> np.ndarray:
        """N x N matrix with entries E(p_j, i - j + d_j) for columns (p_j, d_j)"""
        N = len(columns)
        out = np.empty((N, N), dtype=complex)
        for j, (p, d) in enumerate(columns):
            for i in range(N):
                out[i, j] = self(p, i - j + d)
        return out


def _y_vectors(xs: Sequence[int], y: int, n: int) -> Iterator[List[int]]:
    """Vectors (y_1, ..., y_N) with y_n = y and y_(j+1) <= y_j <= x + y - x_j otherwise"""

    N = len(xs)
    top = xs[n - 1] + y

    def extend(j: int, lower: int, tail: List[int]) -> Iterator[List[int]]:
        if j == 0:
            yield tail
            return
        if j == n:
            yield from extend(j - 1, y, [y] + tail)
            return
        for value in range(lower, top - xs[j - 1] + 1):
            yield from extend(j - 1, value, [value] + tail)

    yield from extend(N, 0, [])


def sum_y_check(
    xs: Sequence[int],
    y: int,
    n: int,
    F: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    radius: float = 1.5,
    nodes: int = 96,
) -> Tuple[complex, complex]:
    """Nested sum of det[E(y_j, i - j)] over the admissible y vectors and its telescoped form

    Parameters
    ----------
    xs : `list`
        Weakly increasing non-negative integers; x = xs[n - 1] and all entries are <= x + y

    y : `int`
        Fixed value of y_n

    n : `int`
        Position of the fixed entries, 1-based

    F : `callable`
        Weight analytic outside the circle and vanishing at infinity,
        (w + 1)/(w + 1/2)^2 by default

    Returns
    -------
    lhs, rhs : `complex`
    """

    xs = [int(v) for v in xs]
    N = len(xs)
    if not 1 <= n <= N:
        raise ValidationError(f"n must lie in [1, {N}], got {n}")
    if y < 0 or xs[0] < 0 or any(a > b for a, b in zip(xs, xs[1:])):
        raise ValidationError(f"x must be weakly increasing and non-negative, got {xs}")
    x = xs[n - 1]
    if xs[-1] > x + y:
        raise ValidationError(f"entries of x must not exceed x + y = {x + y}")

    moments = _Moments(F or default_weight, radius, nodes)

    lhs = 0j
    for ys in _y_vectors(xs, y, n):
        lhs += complex(determinant(moments.matrix([(p, 0) for p in ys])))

    columns = []
    for j in range(1, N + 1):
        bump = 0 if j == n else 1
        columns.append((x + y - xs[j - 1] + bump, -bump))
    rhs = complex(determinant(moments.matrix(columns)))

    return lhs, rhs
