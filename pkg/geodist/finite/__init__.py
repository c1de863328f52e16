from .density import SeriesConfig, density, geodesic_prob, tail_joint, term_hat_T, term_T
from .formulas import formula01, formula02
from .kernel import FiniteKernel, FiniteQuadConfig, big_H, f_weight, hat_H

__all__ = [
    "FiniteKernel",
    "FiniteQuadConfig",
    "SeriesConfig",
    "big_H",
    "density",
    "f_weight",
    "formula01",
    "formula02",
    "geodesic_prob",
    "hat_H",
    "tail_joint",
    "term_T",
    "term_hat_T",
]
