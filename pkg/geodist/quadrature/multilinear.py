"""Vandermonde products, Cauchy-type factors and determinants

Every function accepts plain sequences as well as stacked numpy arrays whose *last* axis holds the
vector entries (last two axes for matrices), so that integrands can be evaluated on whole blocks
of quadrature nodes at once. Scalar inputs give Python complex numbers back.

>>> delta([1, 2, 3])
(2+0j)
>>> delta_cross([1, 2], [3, 4])
(12+0j)
>>> cauchy_factor([1], [2]).real
-1.0
"""

from typing import Any, Callable, Union

import numpy as np

from geodist.exceptions import ValidationError

ComplexLike = Union[complex, np.ndarray]


def _vector(w: Any) -> np.ndarray:
    arr = np.asarray(w, dtype=complex)
    if arr.ndim == 0:
        raise ValidationError("expected a vector of complex entries, got a scalar")
    return arr


def _out(value: np.ndarray) -> ComplexLike:
    if np.ndim(value) == 0:
        return complex(value)
    return value


def delta(w: Any) -> ComplexLike:
    """Vandermonde product prod_{i<j} (w_j - w_i), equal to 1 for vectors of length <= 1"""

    arr = _vector(w)
    k = arr.shape[-1]
    out = np.ones(arr.shape[:-1], dtype=complex)
    for j in range(1, k):
        for i in range(j):
            out = out * (arr[..., j] - arr[..., i])
    return _out(out)


def delta_cross(w: Any, w_prime: Any) -> ComplexLike:
    """Cross product prod_i prod_j (w_i - w'_j), equal to 1 when either vector is empty"""

    a = _vector(w)
    b = _vector(w_prime)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.ones(shape, dtype=complex)
    for i in range(a.shape[-1]):
        for j in range(b.shape[-1]):
            out = out * (a[..., i] - b[..., j])
    return _out(out)


def prod_apply(f: Callable[[np.ndarray], Any], w: Any) -> ComplexLike:
    """Product of f over the entries of w, 1 for an empty vector"""

    arr = _vector(w)
    if arr.shape[-1] == 0:
        return _out(np.ones(arr.shape[:-1], dtype=complex))
    return _out(np.prod(np.asarray(f(arr), dtype=complex), axis=-1))


def power_sum(w: Any, power: int) -> ComplexLike:
    """Sum of w_i**power over the entries of w"""

    arr = _vector(w)
    if arr.shape[-1] == 0:
        return _out(np.zeros(arr.shape[:-1], dtype=complex))
    return _out(np.sum(arr**power, axis=-1))


def cauchy_factor(w: Any, w_prime: Any) -> ComplexLike:
    """Cauchy-type factor delta(W) delta(W') / delta_cross(W, W')

    Raises
    ------
    ZeroDivisionError
        When W and W' share an entry
    """

    denominator = np.asarray(delta_cross(w, w_prime))
    if np.any(denominator == 0):
        raise ZeroDivisionError("Cauchy-type factor of overlapping vectors")
    numerator = np.asarray(delta(w)) * np.asarray(delta(w_prime))
    return _out(numerator / denominator)


def determinant(matrix: Any) -> ComplexLike:
    """Determinant of a (stack of) square complex matrices

    LAPACK's LU factorization with partial pivoting is used; a 0x0 matrix has determinant 1 and
    singular matrices give 0.

    >>> determinant([[1, 1j], [1j, 1]]).real
    2.0
    >>> determinant(np.zeros((0, 0)))
    (1+0j)
    """

    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ValidationError(f"determinant needs square matrices, got shape {arr.shape}")
    if arr.shape[-1] == 0:
        return _out(np.ones(arr.shape[:-2], dtype=complex))
    return _out(np.linalg.det(arr))


def minor_sum(matrix: Any, row_weights: Any, col_weights: Any) -> ComplexLike:
    """Weighted sum of all first minors

    sum_{l1, l2} (-1)^(l1 + l2) r_l1 c_l2 det(K with row l1 and column l2 removed)

    >>> minor_sum(np.zeros((1, 1)), [2.0], [3.0])
    (6+0j)
    """

    k_mat = np.asarray(matrix, dtype=complex)
    r = np.asarray(row_weights, dtype=complex)
    c = np.asarray(col_weights, dtype=complex)
    size = k_mat.shape[-1]
    if k_mat.shape[-2] != size or r.shape[-1] != size or c.shape[-1] != size:
        raise ValidationError("minor_sum needs an NxN matrix and two length-N weight vectors")

    shape = np.broadcast_shapes(k_mat.shape[:-2], r.shape[:-1], c.shape[:-1])
    total = np.zeros(shape, dtype=complex)
    for l1 in range(size):
        rows = np.delete(k_mat, l1, axis=-2)
        for l2 in range(size):
            minor = np.delete(rows, l2, axis=-1)
            sign = -1.0 if (l1 + l2) % 2 else 1.0
            total = total + sign * r[..., l1] * c[..., l2] * np.asarray(determinant(minor))
    return _out(total)
