"""Bordered Cauchy-type determinants

`cauchy_gen_check` compares the weighted sum of first minors of the z-deformed Cauchy matrix with
its closed form; `cpq_check` compares residue sums C_{p,q} over the roots of X(w) and Y(w) with
their closed values.
"""

from typing import Callable, Dict, Sequence, Tuple

import enum

import numpy as np

from geodist.exceptions import ValidationError
from geodist.finite.kernel import hat_H
from geodist.quadrature.multilinear import determinant, minor_sum


def _vectors(xs: Sequence[complex], ys: Sequence[complex]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=complex)
    y = np.asarray(ys, dtype=complex)
    if x.ndim != 1 or x.shape != y.shape or x.size == 0:
        raise ValidationError("X and Y must be non-empty vectors of equal size")
    if np.any(x[:, None] == y[None, :]):
        raise ValidationError("X and Y share an entry")
    return x, y


def cauchy_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """[1/(y_j - x_i)]"""
    return 1.0 / (y[None, :] - x[:, None])


def cauchy_gen_check(
    xs: Sequence[complex], ys: Sequence[complex], z: complex
) -> Tuple[complex, complex]:
    """Both sides of the z-deformed Cauchy identity

    sum_{a,b} (-1)^(a+b) y_b det[z/(x_i - y_j) y_j/x_i + 1/(y_j - x_i) x_i/y_j]_(i != a, j != b)
        = (1 - z)^(N-2) (H(X;Y) + z prod(y/x) H(Y;X)) det[1/(y_j - x_i)]

    >>> lhs, rhs = cauchy_gen_check([2.0], [1.0], 0.3)
    >>> round(lhs.real, 12), round(rhs.real, 12)
    (1.0, 1.0)
    """

    x, y = _vectors(xs, ys)
    if np.any(x == 0) or np.any(y == 0):
        raise ValidationError("entries of X and Y must be non-zero")
    N = x.size
    a = x[:, None]
    b = y[None, :]
    matrix = z / (a - b) * b / a + 1.0 / (b - a) * a / b
    lhs = complex(minor_sum(matrix, np.ones(N), y))

    ratio = complex(np.prod(y / x))
    rhs = (
        (1.0 - z) ** (N - 2)
        * (complex(hat_H(x, y)) + z * ratio * complex(hat_H(y, x)))
        * complex(determinant(cauchy_matrix(x, y)))
    )
    return lhs, complex(rhs)


def c_pq(xs: Sequence[complex], ys: Sequence[complex], p: int, q: int) -> complex:
    """sum_{a,b} x_a^p y_b^q Y(x_a) X(y_b) / ((x_a - y_b) X'(x_a) Y'(y_b))"""

    x, y = _vectors(xs, ys)
    if (p < 0 and np.any(x == 0)) or (q < 0 and np.any(y == 0)):
        raise ValidationError("negative powers need non-zero entries")

    def poly(roots: np.ndarray, at: np.ndarray) -> np.ndarray:
        return np.prod(at[:, None] - roots[None, :], axis=1)

    def derivative(roots: np.ndarray) -> np.ndarray:
        diff = roots[:, None] - roots[None, :]
        np.fill_diagonal(diff, 1.0)
        return np.prod(diff, axis=1)

    left = x**p * poly(y, x) / derivative(x)
    right = y**q * poly(x, y) / derivative(y)
    return complex(np.sum(left[:, None] * right[None, :] / (x[:, None] - y[None, :])))


def c_pq_minors(xs: Sequence[complex], ys: Sequence[complex], p: int, q: int) -> complex:
    """C_{p,q} as bordered minors of the Cauchy matrix divided by its determinant"""

    x, y = _vectors(xs, ys)
    matrix = cauchy_matrix(x, y)
    return complex(minor_sum(matrix, x**p, y**q)) / complex(determinant(matrix))


def _sum_diff(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.sum(x - y))


def _ratio(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.prod(y / x))


class CpqRow(enum.Enum):
    """Combinations of C_{p,q} with a known closed value"""

    C_0_M1 = "C[0,-1]"
    C_M1_0 = "C[-1,0]"
    C_1_0 = "C[1,0]"
    C_0_1 = "C[0,1]"
    C_M1_2 = "C[-1,2]"
    C_M1_1_MINUS_C_0_0 = "C[-1,1]-C[0,0]"
    C_0_2_MINUS_C_1_1 = "C[0,2]-C[1,1]"
    C_M2_1 = "C[-2,1]"

    @classmethod
    def parse(cls, value: object) -> "CpqRow":
        if isinstance(value, cls):
            return value
        for row in cls:
            if value in (row.value, row.name):
                return row
        raise ValidationError(f"unknown C_pq row `{value}`")


# (sign, p, q) terms of each row
_TERMS: Dict[CpqRow, Tuple[Tuple[int, int, int], ...]] = {
    CpqRow.C_0_M1: ((1, 0, -1),),
    CpqRow.C_M1_0: ((1, -1, 0),),
    CpqRow.C_1_0: ((1, 1, 0),),
    CpqRow.C_0_1: ((1, 0, 1),),
    CpqRow.C_M1_2: ((1, -1, 2),),
    CpqRow.C_M1_1_MINUS_C_0_0: ((1, -1, 1), (-1, 0, 0)),
    CpqRow.C_0_2_MINUS_C_1_1: ((1, 0, 2), (-1, 1, 1)),
    CpqRow.C_M2_1: ((1, -2, 1),),
}

_CLOSED: Dict[CpqRow, Callable[[np.ndarray, np.ndarray], complex]] = {
    CpqRow.C_0_M1: lambda x, y: 1.0 - 1.0 / _ratio(x, y),
    CpqRow.C_M1_0: lambda x, y: -1.0 + _ratio(x, y),
    CpqRow.C_1_0: lambda x, y: -complex(hat_H(y, x)),
    CpqRow.C_0_1: lambda x, y: complex(hat_H(x, y)),
    CpqRow.C_M1_2: lambda x, y: _ratio(x, y) * complex(hat_H(x, y)),
    CpqRow.C_M1_1_MINUS_C_0_0: lambda x, y: (1.0 - _ratio(x, y)) * _sum_diff(x, y),
    CpqRow.C_0_2_MINUS_C_1_1: lambda x, y: -_sum_diff(x, y) * complex(hat_H(x, y)),
    CpqRow.C_M2_1: lambda x, y: (
        -1.0 + _ratio(x, y) * (1.0 - complex(np.sum(1.0 / x - 1.0 / y)) * _sum_diff(x, y))
    ),
}


def cpq_check(
    xs: Sequence[complex], ys: Sequence[complex], row: CpqRow
) -> Tuple[complex, complex]:
    """Direct residue sum of a C_{p,q} row and its closed value

    >>> direct, closed = cpq_check([2.0], [1.0], CpqRow.C_0_M1)
    >>> round(direct.real, 12), abs(direct - closed) < 1e-14
    (-1.0, True)
    """

    row = CpqRow.parse(row)
    x, y = _vectors(xs, ys)
    if np.any(x == 0) or np.any(y == 0):
        raise ValidationError("entries of X and Y must be non-zero")
    direct = sum(sign * c_pq(x, y, p, q) for sign, p, q in _TERMS[row])
    return complex(direct), complex(_CLOSED[row](x, y))
