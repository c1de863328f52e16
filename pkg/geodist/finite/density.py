"""Finite-time joint density of the two passage times around a geodesic step

The density p(s1, s2) of (L_(1,1)(r), L_(r+)(M, N)) on the event that both r and r+ lie on the
geodesic is the double series of `geodist.quadrature.series` with the finite-time kernel; the
tail probability integrates it over [t1, inf) x [t2, inf) in closed form.
"""

from typing import Any, Dict, Optional

import time
from dataclasses import dataclass, field

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.params import FiniteParams
from geodist.quadrature.contour import DEFAULT_BLOCK_SIZE
from geodist.quadrature.series import ContourFamily, sum_series, term_at, truncation_evidence
from geodist.report import EstimateReport

from .kernel import FiniteKernel, FiniteQuadConfig


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation and quadrature settings of the finite-time series

    `kmax` defaults to N (in the right-step orientation); larger values are capped at N since
    terms with more than N variables per group vanish.
    """

    kmax: Optional[int] = None
    quad: FiniteQuadConfig = field(default_factory=FiniteQuadConfig)
    threads: int = 1
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if self.kmax is not None and self.kmax < 1:
            raise ValidationError(f"kmax must be at least 1, got {self.kmax}")
        if self.threads < 1:
            raise ValidationError(f"threads must be at least 1, got {self.threads}")

    def resolved_kmax(self, params: FiniteParams) -> int:
        N = params.oriented()[3]
        return N if self.kmax is None else min(self.kmax, N)

    def describe(self, params: FiniteParams) -> Dict[str, Any]:
        return {"kmax": self.resolved_kmax(params), "quadrature": self.quad.to_dict()}


def _evaluate(
    quantity: str,
    kernel: FiniteKernel,
    params: FiniteParams,
    config: SeriesConfig,
    arguments: Dict[str, float],
) -> EstimateReport:
    start = time.perf_counter()
    kmax = config.resolved_kmax(params)
    logger.info(f"{quantity}: {params} {arguments}, kmax = {kmax}")

    value, terms = sum_series(
        kernel,
        config.quad.family,
        kmax,
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
        config={**params.to_dict(), **arguments, **config.describe(params)},
    )
    if not report.check_realness():
        logger.error(f"{quantity}: imaginary residue {report.imag_residue:.3g} in {value}")

    return report


def density(
    s1: float, s2: float, params: FiniteParams, config: Optional[SeriesConfig] = None
) -> EstimateReport:
    """Joint density p(s1, s2) on the event {r, r+ on the geodesic}"""

    if not (s1 > 0 and s2 > 0):
        raise ValidationError(f"the density is evaluated at s1, s2 > 0, got ({s1}, {s2})")
    config = config or SeriesConfig()
    kernel = FiniteKernel(params, s1, s2)
    return _evaluate("finite-density", kernel, params, config, {"s1": s1, "s2": s2})


def tail_joint(
    t1: float, t2: float, params: FiniteParams, config: Optional[SeriesConfig] = None
) -> EstimateReport:
    """P(r, r+ on the geodesic, L_(1,1)(r) >= t1, L_(r+)(M, N) >= t2)"""

    if t1 < 0 or t2 < 0:
        raise ValidationError(f"tail thresholds must be non-negative, got ({t1}, {t2})")
    config = config or SeriesConfig()
    kernel = FiniteKernel(params, t1, t2, tail=True)
    return _evaluate("tail", kernel, params, config, {"t1": t1, "t2": t2})


def geodesic_prob(params: FiniteParams, config: Optional[SeriesConfig] = None) -> EstimateReport:
    """Probability that the geodesic goes through r and then r+"""

    config = config or SeriesConfig()
    kernel = FiniteKernel(params, 0.0, 0.0, tail=True)
    return _evaluate("geodesic-prob", kernel, params, config, {})


def term_T(
    k1: int,
    k2: int,
    z: complex,
    s1: float,
    s2: float,
    params: FiniteParams,
    family: ContourFamily,
    threads: int = 1,
) -> complex:
    """Series term T_{k1,k2}(z) of the density at one point of the z-circle"""
    return term_at(FiniteKernel(params, s1, s2), family, k1, k2, z, threads=threads)


def term_hat_T(
    k1: int,
    k2: int,
    z: complex,
    t1: float,
    t2: float,
    params: FiniteParams,
    family: ContourFamily,
    threads: int = 1,
) -> complex:
    """Series term of the tail probability at one point of the z-circle"""
    return term_at(FiniteKernel(params, t1, t2, tail=True), family, k1, k2, z, threads=threads)
