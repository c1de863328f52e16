from .field import WeightDistribution, WeightField, make_generator, sample_weights
from .montecarlo import (
    Interval,
    MonteCarloEstimate,
    Tail,
    mc_corollary_crossing,
    mc_event_A,
    mc_joint_probability,
    mc_visit_frequencies,
)
from .passage import (
    LatticePath,
    PassageTable,
    PathKind,
    antidiagonal,
    backward_table,
    cut_path,
    exit_point,
    forward_table,
    geodesic,
    on_geodesic,
)

__all__ = [
    "Interval",
    "LatticePath",
    "MonteCarloEstimate",
    "PassageTable",
    "PathKind",
    "Tail",
    "WeightDistribution",
    "WeightField",
    "antidiagonal",
    "backward_table",
    "cut_path",
    "exit_point",
    "forward_table",
    "geodesic",
    "make_generator",
    "mc_corollary_crossing",
    "mc_event_A",
    "mc_joint_probability",
    "mc_visit_frequencies",
    "on_geodesic",
    "sample_weights",
]
