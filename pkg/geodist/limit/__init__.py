from .density import (
    FgueCheck,
    LimitConfig,
    cdf_over_x,
    density_grid,
    fgue_consistency,
    limit_density,
    limit_tail,
    term_rmT,
)
from .kernel import LimitKernel, LimitQuadConfig, log_rm_f, rm_f, rm_H, s_ell

__all__ = [
    "FgueCheck",
    "LimitConfig",
    "LimitKernel",
    "LimitQuadConfig",
    "cdf_over_x",
    "density_grid",
    "fgue_consistency",
    "limit_density",
    "limit_tail",
    "log_rm_f",
    "rm_H",
    "rm_f",
    "s_ell",
    "term_rmT",
]
