"""Limiting joint density of the exit location and the two passage times

p(s1, s2, x; gamma) is the double series of `geodist.quadrature.series` with the cubic weights
and quartic coupling of `geodist.limit.kernel` on ray contours. Integrated forms built on it:

  - `limit_tail`: P(S1 >= t1, S2 >= t2) at location x, closed form in the thresholds
  - `cdf_over_x`: the tail integrated over a window of locations
  - `fgue_consistency`: the location and time integral that must reproduce F_GUE
"""

from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import time
from dataclasses import dataclass, field

import numpy as np

from geodist.airy import FredholmConfig, fgue
from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.quadrature.contour import DEFAULT_BLOCK_SIZE
from geodist.quadrature.series import (
    ContourFamily,
    series_grid,
    sum_series,
    term_at,
    truncation_evidence,
)
from geodist.report import EstimateReport

from .kernel import LimitKernel, LimitQuadConfig, check_gamma


@dataclass(frozen=True)
class LimitConfig:
    """Truncation and quadrature settings of the limiting series"""

    kmax: int = 2
    quad: LimitQuadConfig = field(default_factory=LimitQuadConfig)
    threads: int = 1
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if self.kmax < 1:
            raise ValidationError(f"kmax must be at least 1, got {self.kmax}")
        if self.threads < 1:
            raise ValidationError(f"threads must be at least 1, got {self.threads}")

    def describe(self) -> Dict[str, Any]:
        return {"kmax": self.kmax, "quadrature": self.quad.to_dict()}


def _family_for(config: LimitConfig, kernels: Sequence[LimitKernel]) -> Any:
    return lambda order: config.quad.family(order, kernels)


def _evaluate(
    quantity: str, kernel: LimitKernel, config: LimitConfig, arguments: Dict[str, float]
) -> EstimateReport:
    start = time.perf_counter()
    logger.info(f"{quantity}: {arguments}, kmax = {config.kmax}")

    value, terms = sum_series(
        kernel,
        _family_for(config, [kernel]),
        config.kmax,
        z_radius=config.quad.z_radius,
        z_nodes=config.quad.z_nodes,
        threads=config.threads,
        block_size=config.block_size,
    )

    report = EstimateReport(
        quantity=quantity,
        value=value,
        terms=terms,
        error_estimate=truncation_evidence(terms),
        runtime_ms=1e3 * (time.perf_counter() - start),
        config={**arguments, **config.describe()},
    )
    if not report.check_realness():
        logger.error(f"{quantity}: imaginary residue {report.imag_residue:.3g} in {value}")

    return report


def limit_density(
    s1: float, s2: float, x: float, gamma: float, config: Optional[LimitConfig] = None
) -> EstimateReport:
    """Limiting joint density p(s1, s2, x; gamma)"""

    config = config or LimitConfig()
    kernel = LimitKernel(s1, s2, x, gamma)
    return _evaluate(
        "limit-density", kernel, config, {"s1": s1, "s2": s2, "x": x, "gamma": gamma}
    )


def limit_tail(
    t1: float, t2: float, x: float, gamma: float, config: Optional[LimitConfig] = None
) -> EstimateReport:
    """Integral of the limiting density over s1 >= t1, s2 >= t2 at fixed x"""

    config = config or LimitConfig()
    kernel = LimitKernel(t1, t2, x, gamma, tail=True)
    return _evaluate("limit-tail", kernel, config, {"t1": t1, "t2": t2, "x": x, "gamma": gamma})


def term_rmT(
    k1: int,
    k2: int,
    z: complex,
    s1: float,
    s2: float,
    x: float,
    gamma: float,
    family: ContourFamily,
    threads: int = 1,
) -> complex:
    """Series term of the limiting density at one point of the z-circle"""
    return term_at(LimitKernel(s1, s2, x, gamma), family, k1, k2, z, threads=threads)


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not hi > lo:
        raise ValidationError(f"empty range [{lo}, {hi}]")
    if not step > 0:
        raise ValidationError(f"grid step must be positive, got {step}")
    count = int(round((hi - lo) / step)) + 1
    return np.linspace(lo, hi, max(count, 2))


def _trapezoid(values: np.ndarray, nodes: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.sum(np.diff(nodes) * (values[1:] + values[:-1]) / 2.0))


def cdf_over_x(
    t1: float,
    t2: float,
    x_lo: float,
    x_hi: float,
    gamma: float,
    step: float = 0.25,
    config: Optional[LimitConfig] = None,
) -> float:
    """Probability that the scaled location lies in [x_lo, x_hi] and both times exceed (t1, t2)

    Trapezoid over x of `limit_tail`; the tail is even in x, so each |x| is evaluated once.
    """

    config = config or LimitConfig()
    nodes = _grid(x_lo, x_hi, step)
    cache: Dict[float, float] = {}
    values = []
    for x in nodes:
        key = round(abs(float(x)), 12)
        if key not in cache:
            cache[key] = limit_tail(t1, t2, key, gamma, config).value.real
        values.append(cache[key])

    value = _trapezoid(np.array(values), nodes)
    logger.info(f"P({x_lo} <= x <= {x_hi}, S1 >= {t1}, S2 >= {t2}) = {value:.6g}")
    return value


def density_grid(
    s1_grid: Sequence[float],
    s2_grid: Sequence[float],
    x: float,
    gamma: float,
    config: Optional[LimitConfig] = None,
) -> np.ndarray:
    """Limiting density on the grid s1_grid x s2_grid at a fixed location, in one pass

    The contours are built to be valid at the extreme thresholds of the grid.
    """

    config = config or LimitConfig()
    s1_grid = np.asarray(s1_grid, dtype=float)
    s2_grid = np.asarray(s2_grid, dtype=float)
    extremes = [
        LimitKernel(a, b, x, gamma)
        for a in (s1_grid.min(), s1_grid.max())
        for b in (s2_grid.min(), s2_grid.max())
    ]
    return series_grid(
        LimitKernel(0.0, 0.0, x, gamma),
        _family_for(config, extremes),
        config.kmax,
        s1_grid,
        s2_grid,
        z_radius=config.quad.z_radius,
        z_nodes=config.quad.z_nodes,
        threads=config.threads,
    )


class FgueCheck(NamedTuple):
    """Integrated limiting density against the Fredholm value of F_GUE"""

    value: float
    oracle: float
    mass: float

    @property
    def difference(self) -> float:
        return abs(self.value - self.oracle)


def _sum_distribution(grid: np.ndarray, step: float) -> Tuple[np.ndarray, np.ndarray]:
    """Density of S1 + S2 on the diagonal sums of a square grid, and its running integral"""

    n = grid.shape[0]
    i, j = np.indices(grid.shape)
    density = np.zeros(2 * n - 1)
    np.add.at(density, (i + j).ravel(), grid.ravel())
    density *= step
    cdf = np.concatenate([[0.0], np.cumsum(step * (density[1:] + density[:-1]) / 2.0)])
    return density, cdf


def fgue_consistency(
    s: float,
    gamma: float,
    config: Optional[LimitConfig] = None,
    step: float = 0.25,
    s_range: Tuple[float, float] = (-8.0, 6.0),
    x_range: Tuple[float, float] = (-4.0, 4.0),
    fredholm: FredholmConfig = FredholmConfig(),
) -> FgueCheck:
    """Integral over x of P_x(S1 + S2 <= s + x^2/(4 gamma (1 - gamma))), which equals F_GUE(s)

    P_x is the law with density p(., ., x; gamma). It is obtained from `density_grid` on a
    square s-grid, summed along the diagonals and integrated by the trapezoid rule; thresholds
    beyond the grid take the total mass. The returned `mass` integrates the density over the
    whole (s1, s2, x) box and should be close to one.
    """

    check_gamma(gamma)
    if x_range[0] != -x_range[1]:
        raise ValidationError(f"the location range must be symmetric, got {x_range}")
    config = config or LimitConfig()
    start = time.perf_counter()

    s_nodes = _grid(s_range[0], s_range[1], step)
    ds = float(s_nodes[1] - s_nodes[0])
    sums = 2.0 * s_nodes[0] + ds * np.arange(2 * s_nodes.size - 1)
    x_nodes = _grid(x_range[0], x_range[1], step)

    probability: Dict[float, float] = {}
    mass: Dict[float, float] = {}
    for x in sorted({round(abs(float(x)), 12) for x in x_nodes}):
        grid = density_grid(s_nodes, s_nodes, x, gamma, config).real
        _, cdf = _sum_distribution(grid, ds)
        threshold = s + x * x / (4.0 * gamma * (1.0 - gamma))
        probability[x] = float(np.interp(threshold, sums, cdf, left=0.0, right=cdf[-1]))
        mass[x] = float(cdf[-1])
        logger.info(f"x = {x}: P = {probability[x]:.6g}, mass = {mass[x]:.6g}")

    keys: List[float] = [round(abs(float(x)), 12) for x in x_nodes]
    value = _trapezoid(np.array([probability[k] for k in keys]), x_nodes)
    total = _trapezoid(np.array([mass[k] for k in keys]), x_nodes)
    oracle = fgue(s, fredholm)

    logger.info(
        f"F_GUE identity at s = {s}, gamma = {gamma}: {value:.6g} vs {oracle:.6g}, "
        f"mass {total:.6g} [{time.perf_counter() - start:.1f} sec]"
    )
    return FgueCheck(value=value, oracle=oracle, mass=total)

