"""Randomized trials of the algebraic identities

Each trial draws its points from its own seed, derived from the run seed and the trial index, so
that any row of the output can be replayed on its own with `random_points`.
"""

from typing import Callable, Dict, List, Tuple

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from geodist.exceptions import ValidationError
from geodist.io import logger
from geodist.report import TableReport

from .cauchy import CpqRow, cauchy_gen_check, cpq_check
from .summation import sab_det, sab_direct, sum_y_check, sw_closed, sw_direct

TRIAL_COLUMNS = ("identity", "size", "seed", "lhs", "rhs", "rel_diff")

# paired sides must agree to this relative precision
TRIAL_TOLERANCE = 1e-8

MAX_SIZE = {"cauchy-gen": 8, "cpq": 6, "sab": 3, "sw": 3, "sum-y": 3}

IDENTITIES = tuple(MAX_SIZE)


def rel_diff(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|)

    >>> rel_diff(1.0, 1.0)
    0.0
    """
    scale = max(abs(lhs), abs(rhs), np.finfo(float).tiny)
    return float(abs(lhs - rhs) / scale)


def trial_seed(seed: int, trial: int) -> int:
    """Seed of a single trial, independent of the number of trials run"""
    sequence = np.random.SeedSequence(seed, spawn_key=(trial,))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def random_points(
    rng: np.random.Generator,
    count: int,
    r_min: float = 0.5,
    r_max: float = 2.0,
    separation: float = 0.05,
    avoid: Tuple[complex, ...] = (-1.0,),
    avoid_distance: float = 0.3,
    max_draws: int = 100_000,
) -> np.ndarray:
    """Points drawn uniformly in the annulus r_min <= |w| <= r_max

    Points closer than `separation` to an accepted one, or than `avoid_distance` to a point of
    `avoid`, are rejected.
    """

    points: List[complex] = []
    draws = 0
    while len(points) < count:
        draws += 1
        if draws > max_draws:
            raise ValidationError(f"could not place {count} separated points in the annulus")
        radius = np.sqrt(rng.uniform(r_min**2, r_max**2))
        w = complex(radius * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
        if any(abs(w - a) < avoid_distance for a in avoid):
            continue
        if any(abs(w - p) < separation for p in points):
            continue
        points.append(w)
    return np.asarray(points, dtype=complex)


def _cauchy_gen(rng: np.random.Generator, size: int, trial: int) -> Tuple[str, complex, complex]:
    points = random_points(rng, 2 * size + 1)
    lhs, rhs = cauchy_gen_check(points[:size], points[size : 2 * size], points[-1])
    return "cauchy-gen", lhs, rhs


def _cpq(rng: np.random.Generator, size: int, trial: int) -> Tuple[str, complex, complex]:
    rows = list(CpqRow)
    row = rows[trial % len(rows)]
    points = random_points(rng, 2 * size)
    direct, closed = cpq_check(points[:size], points[size:], row)
    return f"cpq {row.value}", direct, closed


def _sab(rng: np.random.Generator, size: int, trial: int) -> Tuple[str, complex, complex]:
    a = int(rng.integers(0, 3))
    b = a + int(rng.integers(0, 3))
    points = random_points(rng, 2 * size)
    w, w_prime = points[:size], points[size:]
    return "sab", sab_direct(w, w_prime, a, b), sab_det(w, w_prime, a, b)


def _sw(rng: np.random.Generator, size: int, trial: int) -> Tuple[str, complex, complex]:
    n = int(rng.integers(1, size + 1))
    x = int(rng.integers(0, 3))
    y = int(rng.integers(0, 3))
    points = random_points(rng, 2 * size)
    w1, w2 = points[:size], points[size:]
    return "sw", sw_direct(w1, w2, x, y, n), sw_closed(w1, w2, x, y, n)


def _sum_y(rng: np.random.Generator, size: int, trial: int) -> Tuple[str, complex, complex]:
    n = int(rng.integers(1, size + 1))
    total = int(rng.integers(0, 4))
    x = int(rng.integers(0, total + 1))
    y = total - x
    below = sorted(int(v) for v in rng.integers(0, x + 1, size=n - 1))
    above = sorted(int(v) for v in rng.integers(x, total + 1, size=size - n))
    lhs, rhs = sum_y_check(below + [x] + above, y, n)
    return "sum-y", lhs, rhs


_TRIALS: Dict[str, Callable[[np.random.Generator, int, int], Tuple[str, complex, complex]]] = {
    "cauchy-gen": _cauchy_gen,
    "cpq": _cpq,
    "sab": _sab,
    "sw": _sw,
    "sum-y": _sum_y,
}


def run_trials(
    identity: str, trials: int, size: int, seed: int, threads: int = 1
) -> TableReport:
    """Evaluate both sides of an identity at `trials` random points

    Parameters
    ----------
    identity : `str`
        One of `cauchy-gen`, `cpq`, `sab`, `sw`, `sum-y`

    trials : `int`
        Number of random draws

    size : `int`
        Vector size N (k for `sab`)

    seed : `int`
        Run seed; trial i uses `trial_seed(seed, i)`

    Returns
    -------
    table : `TableReport`
        One row per trial; `diagnostic` is set when a relative difference exceeds the tolerance
    """

    if identity not in _TRIALS:
        raise ValidationError(f"unknown identity `{identity}` (valid: {', '.join(IDENTITIES)})")
    if trials < 1:
        raise ValidationError(f"trials must be positive, got {trials}")
    if not 1 <= size <= MAX_SIZE[identity]:
        raise ValidationError(f"size for `{identity}` must lie in [1, {MAX_SIZE[identity]}]")

    start = time.perf_counter()
    check = _TRIALS[identity]

    def work(trial: int) -> Dict[str, object]:
        s = trial_seed(seed, trial)
        name, lhs, rhs = check(np.random.default_rng(s), size, trial)
        return {
            "identity": name,
            "size": size,
            "seed": s,
            "lhs": lhs,
            "rhs": rhs,
            "rel_diff": rel_diff(lhs, rhs),
        }

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, range(trials)))
    else:
        rows = [work(trial) for trial in range(trials)]

    table = TableReport(
        quantity="verify",
        columns=TRIAL_COLUMNS,
        config={"identity": identity, "trials": trials, "size": size, "seed": seed},
    )
    for row in rows:
        table.append(row)

    worst = max(float(row["rel_diff"]) for row in rows)  # type: ignore[arg-type]
    logger.info(f"{identity}: {trials} trials of size {size}, worst difference {worst:.3g}")
    if worst > TRIAL_TOLERANCE:
        table.diagnostic = "identity_mismatch"
        logger.error(f"{identity}: relative difference {worst:.3g} above {TRIAL_TOLERANCE:g}")
    table.runtime_ms = 1e3 * (time.perf_counter() - start)
    return table
