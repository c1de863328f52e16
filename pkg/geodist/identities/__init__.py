from .cauchy import CpqRow, c_pq, c_pq_minors, cauchy_gen_check, cpq_check
from .johansson import johansson_transition, probability_A
from .summation import sab_det, sab_direct, sum_y_check, sw_closed, sw_direct
from .trials import IDENTITIES, random_points, rel_diff, run_trials

__all__ = [
    "CpqRow",
    "IDENTITIES",
    "c_pq",
    "c_pq_minors",
    "cauchy_gen_check",
    "cpq_check",
    "johansson_transition",
    "probability_A",
    "random_points",
    "rel_diff",
    "run_trials",
    "sab_det",
    "sab_direct",
    "sum_y_check",
    "sw_closed",
    "sw_direct",
]
