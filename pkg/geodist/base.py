"""Main driver of geodist

Every option of the Manager is loaded from the command-line interface, falling back to a YAML
configuration file given with -C/--config-file and then to the built-in `defaults.yaml`.
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import argparse
import copy
import math
import os
import sys
import time
from pathlib import Path

from geodist.airy import FredholmConfig, fgue
from geodist.exceptions import DiagnosticError, ValidationError
from geodist.finite import (
    FiniteQuadConfig,
    SeriesConfig,
    density,
    formula01,
    formula02,
    geodesic_prob,
    tail_joint,
)
from geodist.identities import IDENTITIES, probability_A, run_trials
from geodist.io import Database, emit, load_yaml, logger, progress_bar
from geodist.io.io import OUTPUT_FORMATS
from geodist.lattice import (
    Interval,
    Tail,
    WeightDistribution,
    mc_corollary_crossing,
    mc_event_A,
    mc_joint_probability,
    mc_visit_frequencies,
)
from geodist.limit import (
    LimitConfig,
    LimitQuadConfig,
    cdf_over_x,
    fgue_consistency,
    limit_density,
    limit_tail,
)
from geodist.meshgrid import check_for_valid_options, create_meshgrid_from_dict, parse_condition
from geodist.params import FiniteParams
from geodist.report import EstimateReport, TableReport

Report = Union[EstimateReport, TableReport]

DEFAULTS_FILENAME = Path(__file__).parent / "defaults.yaml"

# environment variable holding the default number of worker threads
THREADS_VARIABLE = "GEODIST_THREADS"

# diagnostics that turn a written report into a failed run
FAILING_DIAGNOSTICS = ("imag_residue", "identity_mismatch", "cancellation")

EXACT_QUANTITIES = (
    "finite-density",
    "tail",
    "geodesic-prob",
    "formula01",
    "formula02",
    "probability-a",
)

EVENTS = ("tail", "interval", "event-a", "visits")

# stand-in for t = -inf when the limiting law is compared with crossing frequencies
MINUS_INFINITY_PROXY = -8.0


def default_threads() -> int:
    """Number of worker threads from the environment, 1 when unset"""

    value = os.environ.get(THREADS_VARIABLE, "")
    if value == "":
        return 1
    try:
        threads = int(value)
    except ValueError as e:
        raise ValidationError(f"{THREADS_VARIABLE} must be an integer, got `{value}`") from e
    if threads < 1:
        raise ValidationError(f"{THREADS_VARIABLE} must be at least 1, got {threads}")
    return threads


def _merge(base: Dict[str, Any], update: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Recursively override `base` with `update`, rejecting keys unknown to `base`"""

    merged = copy.deepcopy(base)
    for key, value in update.items():
        if key not in base:
            raise ValidationError(f"unknown configuration option `{prefix}{key}`")
        # node and tier tables are replaced as a whole
        nested = isinstance(base[key], dict) and key not in ("nodes", "tiers")
        if nested and isinstance(value, dict):
            merged[key] = _merge(base[key], value, prefix=f"{prefix}{key}.")
        else:
            merged[key] = value
    return merged


class Manager:
    """Manager class holds the resolved options of one geodist run and dispatches its subcommand

    Parameters
    ----------
    argv : `list`
        Command-line arguments without the program name; `sys.argv[1:]` when None

    version : `str`
        Library version embedded in every output header
    """

    def __init__(self, argv: Optional[Sequence[str]] = None, version: str = "unknown") -> None:
        self.version = version

        # command line arguments
        self.args = self.parse_args(argv)

        # built-in defaults, then the user file, then explicit flags
        self.config = self.load_config_file()
        self.options = self.resolve_options()

    def _common_parser(self) -> argparse.ArgumentParser:
        """Options shared by every subcommand"""

        parser = argparse.ArgumentParser(add_help=False)
        parser.add_argument(
            "--threads",
            type=int,
            dest="threads",
            help=f"number of worker threads (default: ${THREADS_VARIABLE} or 1)",
        )
        parser.add_argument(
            "--format",
            choices=OUTPUT_FORMATS,
            default="json",
            dest="format",
            help="output format",
        )
        parser.add_argument(
            "-o",
            "--output",
            default="-",
            dest="output",
            help="output filename, `-` for standard output",
        )
        parser.add_argument(
            "--timing",
            action="store_true",
            default=False,
            dest="timing",
            help="report wall-clock time in the output",
        )
        parser.add_argument("--seed", type=int, dest="seed", help="seed of random draws")
        return parser

    @staticmethod
    def _lattice_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--m", type=int, dest="m", help="column of the point r")
        parser.add_argument("--n", type=int, dest="n", help="row of the point r")
        parser.add_argument("--M", "--cols", type=int, dest="M", help="columns of the grid")
        parser.add_argument("--N", "--rows", type=int, dest="N", help="rows of the grid")
        parser.add_argument(
            "--direction", choices=("right", "up"), dest="direction", help="step r -> r+"
        )

    @staticmethod
    def _density_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--s1", type=float, dest="s1", help="passage time to r")
        parser.add_argument("--s2", type=float, dest="s2", help="passage time from r+")

    @staticmethod
    def _tail_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--t1", type=float, dest="t1", help="threshold of the first time")
        parser.add_argument("--t2", type=float, dest="t2", help="threshold of the second time")

    @staticmethod
    def _kmax_arg(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--kmax", type=int, dest="kmax", help="series truncation")

    @staticmethod
    def _limit_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--x", type=float, dest="x", help="scaled location")
        parser.add_argument("--gamma", type=float, dest="gamma", help="split fraction in (0, 1)")

    def init_args(self) -> argparse.ArgumentParser:
        """Initialize parser of arguments from the command line"""

        parser = argparse.ArgumentParser(
            prog="geodist",
            description="geodesic location and passage-time distributions in last passage "
            "percolation",
        )

        parser.add_argument(
            "-d",
            "--debug",
            action="store_true",
            default=False,
            dest="debug",
            help="enable debug mode",
        )

        parser.add_argument(
            "-C",
            "--config-file",
            dest="config_fname",
            help="name of YAML configuration file",
        )

        parser.add_argument(
            "--show-log-name",
            action="store_true",
            default=False,
            dest="log_fname",
            help="display log filename and exit",
        )

        common = self._common_parser()
        commands = parser.add_subparsers(dest="command", metavar="command")

        simulate = commands.add_parser(
            "simulate", parents=[common], help="Monte Carlo estimate of a geodesic event"
        )
        self._lattice_args(simulate)
        self._tail_args(simulate)
        simulate.add_argument("--dist", choices=("exp", "geom"), dest="dist", help="weights")
        simulate.add_argument("--q", type=float, dest="q", help="geometric parameter")
        simulate.add_argument("--samples", type=int, dest="samples", help="number of fields")
        simulate.add_argument("--event", choices=EVENTS, dest="event", help="estimated event")
        simulate.add_argument("--eps1", type=float, dest="eps1", help="first window width")
        simulate.add_argument("--eps2", type=float, dest="eps2", help="second window width")
        simulate.add_argument("--x", type=float, dest="x", help="G(r) for the event A")
        simulate.add_argument("--y", type=float, dest="y", help="G'(r+) for the event A")

        exact = commands.add_parser("exact", help="exact finite-time quantities")
        quantities = exact.add_subparsers(dest="quantity", metavar="quantity")
        quantities.required = True
        for name in EXACT_QUANTITIES:
            sub = quantities.add_parser(name, parents=[common])
            self._lattice_args(sub)
            if name in ("finite-density", "formula01", "formula02"):
                self._density_args(sub)
            if name == "tail":
                self._tail_args(sub)
            if name in ("finite-density", "tail", "geodesic-prob"):
                self._kmax_arg(sub)
            if name == "probability-a":
                sub.add_argument("--q", type=float, dest="q", help="geometric parameter")
                sub.add_argument("--x", type=float, dest="x", help="G(r)")
                sub.add_argument("--y", type=float, dest="y", help="G'(r+)")

        limit = commands.add_parser(
            "limit-density", parents=[common], help="limiting joint density"
        )
        self._density_args(limit)
        self._limit_args(limit)
        self._kmax_arg(limit)

        limit_t = commands.add_parser("limit-tail", parents=[common], help="limiting tail")
        self._tail_args(limit_t)
        self._limit_args(limit_t)
        self._kmax_arg(limit_t)

        check = commands.add_parser(
            "fgue-check", parents=[common], help="integrate the limiting density against F_GUE"
        )
        check.add_argument("--s", type=float, dest="s", help="argument of F_GUE")
        check.add_argument("--gamma", type=float, dest="gamma", help="split fraction in (0, 1)")
        self._kmax_arg(check)

        verify = commands.add_parser(
            "verify", parents=[common], help="check an algebraic identity at random points"
        )
        verify.add_argument("--which", choices=IDENTITIES, dest="which", help="identity")
        verify.add_argument("--trials", type=int, dest="trials", help="number of trials")
        verify.add_argument("--size", type=int, dest="size", help="vector size")

        tw = commands.add_parser("tw", parents=[common], help="GUE Tracy-Widom distribution")
        tw.add_argument("--s", type=float, dest="s", help="argument of F_GUE")

        corollary = commands.add_parser(
            "corollary-mc", parents=[common], help="where geodesics cross an antidiagonal"
        )
        corollary.add_argument("--N", type=int, dest="N", help="rows of the grid")
        corollary.add_argument("--alpha", type=float, dest="alpha", help="aspect ratio")
        corollary.add_argument("--gamma", type=float, dest="gamma", help="split fraction")
        corollary.add_argument("--samples", type=int, dest="samples", help="number of fields")
        corollary.add_argument("--bins", type=float, nargs="+", dest="bins", help="bin edges")
        corollary.add_argument(
            "--compare",
            action="store_const",
            const=True,
            dest="compare",
            help="add the limiting probability of each bin",
        )

        sweep = commands.add_parser(
            "sweep", parents=[common], help="evaluate a quantity over a parameter grid"
        )
        sweep.add_argument("grid", help="YAML file with `quantity`, `grid` and `conditions`")
        sweep.add_argument(
            "--database", dest="database", help="also store the rows in this sqlite file"
        )
        sweep.add_argument(
            "--progress",
            action="store_true",
            default=False,
            dest="progress",
            help="show a progress bar on stderr",
        )

        return parser

    def parse_args(self, argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
        """Parse command line arguments"""

        parser = self.init_args()
        argv = list(sys.argv[1:] if argv is None else argv)

        # print help msg if no arguments were given
        if len(argv) == 0:
            parser.print_help()
            sys.exit(2)

        args = parser.parse_args(argv)

        # in case DEBUG flag is wanted
        if args.debug:
            from logging import DEBUG

            logger.setLevel(DEBUG)

        if args.command is None and not args.log_fname:
            parser.print_usage()
            sys.exit(2)

        # print cli arguments to log file
        msg = "command line arguments are: "
        for k, v in sorted(vars(args).items()):
            msg += f"{k}={v} "
        logger.debug(msg[:-1])

        return args

    def load_config_file(self) -> Dict[str, Any]:
        """Built-in defaults overridden by the configuration file, if any"""

        config: Dict[str, Any] = load_yaml(DEFAULTS_FILENAME)
        if self.args.config_fname is None:
            return config

        fname = Path(self.args.config_fname)
        logger.info(f"loading settings from `{fname}`")
        if not fname.exists():
            raise ValidationError(f"no such file found: {fname}")

        user = load_yaml(fname) or {}
        if not isinstance(user, dict):
            raise ValidationError(f"`{fname}` must contain a mapping of options")
        config = _merge(config, user)
        logger.debug(f"configuration after merging `{fname}`: {config}")
        return config

    def resolve_options(self) -> Dict[str, Any]:
        """Flat options with explicit flags taking precedence over the configuration"""

        options = {k: v for k, v in self.config.items() if k != "quadrature"}
        for key, value in vars(self.args).items():
            if key in options and value is not None:
                options[key] = value

        threads = getattr(self.args, "threads", None)
        options["threads"] = default_threads() if threads is None else threads
        if options["threads"] < 1:
            raise ValidationError(f"threads must be at least 1, got {options['threads']}")
        return options

    @property
    def quadrature(self) -> Dict[str, Any]:
        return dict(self.config["quadrature"])

    def _finite_params(self, options: Dict[str, Any]) -> FiniteParams:
        return FiniteParams(
            options["m"], options["n"], options["M"], options["N"], options["direction"]
        )

    def _series_config(self, options: Dict[str, Any]) -> SeriesConfig:
        quad = self.quadrature
        return SeriesConfig(
            kmax=None if options["kmax"] is None else int(options["kmax"]),
            quad=FiniteQuadConfig.from_dict(quad["finite"]),
            threads=options["threads"],
            block_size=int(quad["block_size"]),
        )

    def _limit_config(self, options: Dict[str, Any]) -> LimitConfig:
        quad = self.quadrature
        return LimitConfig(
            kmax=2 if options["kmax"] is None else int(options["kmax"]),
            quad=LimitQuadConfig.from_dict(quad["limit"]),
            threads=options["threads"],
            block_size=int(quad["block_size"]),
        )

    def _fredholm(self) -> FredholmConfig:
        return FredholmConfig(**self.quadrature["fredholm"])

    @staticmethod
    def _integer(options: Dict[str, Any], name: str) -> int:
        value = options[name]
        if isinstance(value, bool) or float(value) != math.floor(float(value)):
            raise ValidationError(f"{name} must be an integer, got {value}")
        return int(value)

    def evaluate(self, quantity: str, options: Dict[str, Any]) -> EstimateReport:
        """Evaluate one exact, limiting or oracle quantity with the given options"""

        quad = self.quadrature
        threads = options["threads"]
        block_size = int(quad["block_size"])

        evaluators: Dict[str, Callable[[], EstimateReport]] = {
            "finite-density": lambda: density(
                float(options["s1"]),
                float(options["s2"]),
                self._finite_params(options),
                self._series_config(options),
            ),
            "tail": lambda: tail_joint(
                float(options["t1"]),
                float(options["t2"]),
                self._finite_params(options),
                self._series_config(options),
            ),
            "geodesic-prob": lambda: geodesic_prob(
                self._finite_params(options), self._series_config(options)
            ),
            "formula01": lambda: formula01(
                float(options["s1"]),
                float(options["s2"]),
                self._finite_params(options),
                threads=threads,
                block_size=block_size,
                **quad["formula01"],
            ),
            "formula02": lambda: formula02(
                float(options["s1"]),
                float(options["s2"]),
                self._finite_params(options),
                threads=threads,
                block_size=block_size,
                **quad["formula02"],
            ),
            "probability-a": lambda: probability_A(
                self._integer(options, "x"),
                self._integer(options, "y"),
                self._finite_params(options),
                float(options["q"]),
                threads=threads,
                block_size=block_size,
                **quad["formula01"],
            ),
            "limit-density": lambda: limit_density(
                float(options["s1"]),
                float(options["s2"]),
                float(options["x"]),
                float(options["gamma"]),
                self._limit_config(options),
            ),
            "limit-tail": lambda: limit_tail(
                float(options["t1"]),
                float(options["t2"]),
                float(options["x"]),
                float(options["gamma"]),
                self._limit_config(options),
            ),
            "tw": lambda: self._tw(options),
        }
        if quantity not in evaluators:
            raise ValidationError(f"unknown quantity `{quantity}`")
        return evaluators[quantity]()

    def _tw(self, options: Dict[str, Any]) -> EstimateReport:
        start = time.perf_counter()
        fredholm = self._fredholm()
        s = float(options["s"])
        value = fgue(s, fredholm)
        return EstimateReport(
            quantity="fgue",
            value=value,
            runtime_ms=1e3 * (time.perf_counter() - start),
            config={"s": s, "order": fredholm.order, "scale": fredholm.scale},
        )

    def simulate(self) -> Report:
        """Monte Carlo estimate of the requested event"""

        o = self.options
        event = o["event"]
        samples = self._integer(o, "samples")
        if samples < 1:
            raise ValidationError(f"samples must be positive, got {samples}")
        dist = WeightDistribution.parse(o["dist"])
        q = float(o["q"]) if dist is WeightDistribution.GEOMETRIC or event == "event-a" else None
        seed = int(o["seed"])
        start = time.perf_counter()

        if event == "visits":
            cols, rows = self._integer(o, "M"), self._integer(o, "N")
            freq = mc_visit_frequencies(cols, rows, samples, seed, dist, q, threads=o["threads"])
            table = TableReport(
                quantity="mc-visits",
                columns=("i", "j", "value", "stderr"),
                config={
                    "M": cols,
                    "N": rows,
                    "dist": dist.value,
                    "q": q,
                    "samples": samples,
                    "seed": seed,
                },
            )
            for i in range(cols):
                for j in range(rows):
                    table.append(
                        {
                            "i": i + 1,
                            "j": j + 1,
                            "value": float(freq.value[i, j]),
                            "stderr": float(freq.stderr[i, j]),
                        }
                    )
            table.runtime_ms = 1e3 * (time.perf_counter() - start)
            return table

        params = self._finite_params(o)
        config: Dict[str, Any] = {**params.to_dict(), "samples": samples, "seed": seed}
        if event == "event-a":
            x, y = self._integer(o, "x"), self._integer(o, "y")
            estimate = mc_event_A(params, float(o["q"]), x, y, samples, seed, threads=o["threads"])
            config.update({"dist": "geom", "q": float(o["q"]), "x": x, "y": y})
        else:
            if event == "tail":
                mode: Union[Tail, Interval] = Tail(float(o["t1"]), float(o["t2"]))
            else:
                mode = Interval(float(o["t1"]), float(o["eps1"]), float(o["t2"]), float(o["eps2"]))
            estimate = mc_joint_probability(
                params, mode, samples, seed, dist, q, threads=o["threads"]
            )
            config.update({"dist": dist.value, "q": q, **mode._asdict()})

        return EstimateReport(
            quantity=f"mc-{event}",
            value=estimate.value,
            stderr=estimate.stderr,
            seed=seed,
            runtime_ms=1e3 * (time.perf_counter() - start),
            config=config,
        )

    def fgue_check(self) -> EstimateReport:
        """Integrated limiting density against the Fredholm value of F_GUE"""

        o = self.options
        grids = self.quadrature["fgue"]
        tolerance = float(grids["tolerance"])
        start = time.perf_counter()
        check = fgue_consistency(
            float(o["s"]),
            float(o["gamma"]),
            self._limit_config(o),
            step=float(grids["step"]),
            s_range=tuple(grids["s_range"]),
            x_range=tuple(grids["x_range"]),
            fredholm=self._fredholm(),
        )
        report = EstimateReport(
            quantity="fgue-check",
            value=check.value,
            error_estimate=check.difference,
            runtime_ms=1e3 * (time.perf_counter() - start),
            config={
                "s": float(o["s"]),
                "gamma": float(o["gamma"]),
                "oracle": check.oracle,
                "mass": check.mass,
                "tolerance": tolerance,
                **self._limit_config(o).describe(),
            },
        )
        if check.difference > tolerance or abs(check.mass - 1.0) > tolerance:
            report.diagnostic = "identity_mismatch"
            logger.error(
                f"F_GUE identity off by {check.difference:.3g} (mass {check.mass:.6g})"
            )
        return report

    def verify(self) -> TableReport:
        o = self.options
        return run_trials(
            str(o["which"]),
            self._integer(o, "trials"),
            self._integer(o, "size"),
            int(o["seed"]),
            threads=o["threads"],
        )

    def corollary_mc(self) -> TableReport:
        """Binned crossing locations, optionally next to the limiting probabilities"""

        o = self.options
        edges = sorted(float(e) for e in o["bins"])
        if len(edges) < 2:
            raise ValidationError("at least two bin edges are needed")
        samples = self._integer(o, "samples")
        start = time.perf_counter()

        crossing = mc_corollary_crossing(
            self._integer(o, "N"),
            float(o["alpha"]),
            float(o["gamma"]),
            samples,
            int(o["seed"]),
            threads=o["threads"],
        )
        probability, stderr = crossing.bin_probabilities(edges)
        mean, mean_err = crossing.mean_location()

        columns: List[str] = ["x_lo", "x_hi", "probability", "stderr"]
        if o["compare"]:
            columns.append("limit")
        table = TableReport(
            quantity="corollary-mc",
            columns=columns,
            config={
                "N": self._integer(o, "N"),
                "alpha": float(o["alpha"]),
                "gamma": float(o["gamma"]),
                "samples": samples,
                "seed": int(o["seed"]),
                "mean_location": mean,
                "mean_stderr": mean_err,
            },
        )
        config = self._limit_config(o)
        for k, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            row = {
                "x_lo": lo,
                "x_hi": hi,
                "probability": float(probability[k]),
                "stderr": float(stderr[k]),
            }
            if o["compare"]:
                row["limit"] = cdf_over_x(
                    MINUS_INFINITY_PROXY, MINUS_INFINITY_PROXY, lo, hi, float(o["gamma"]),
                    config=config,
                )
            table.append(row)

        table.runtime_ms = 1e3 * (time.perf_counter() - start)
        return table

    def sweep(self) -> TableReport:
        """Evaluate one quantity at every point of a YAML parameter grid"""

        fname = Path(self.args.grid)
        if not fname.exists():
            raise ValidationError(f"no such file found: {fname}")
        description = load_yaml(fname) or {}
        quantity = description.get("quantity")
        grid = description.get("grid") or {}

        if not check_for_valid_options(grid, quantity):
            raise ValidationError(f"invalid grid in `{fname}`")
        conditions = [parse_condition(text) for text in description.get("conditions") or []]
        meshgrid = create_meshgrid_from_dict(grid, conditions)
        if not meshgrid:
            raise ValidationError(f"no grid points left in `{fname}`")

        names = list(next(iter(meshgrid.values())))
        table = TableReport(
            quantity="sweep",
            columns=["point", *names, "value_re", "value_im", "diagnostic"],
            config={
                "quantity": quantity,
                "grid": grid,
                "conditions": description.get("conditions"),
            },
        )
        logger.info(f"sweeping `{quantity}` over {len(meshgrid)} grid points")

        start = time.perf_counter()
        total = len(meshgrid)
        for count, (key, point) in enumerate(meshgrid.items(), start=1):
            report = self.evaluate(quantity, {**self.options, **point})
            value = complex(report.value)
            table.append(
                {
                    "point": int(key),
                    **point,
                    "value_re": value.real,
                    "value_im": value.imag,
                    "diagnostic": report.diagnostic,
                }
            )
            if self.args.progress:
                progress_bar(count, total, left_msg=quantity, right_msg=f"{count}/{total}")

        failed = [row["diagnostic"] for row in table.rows if row["diagnostic"] is not None]
        if failed:
            table.diagnostic = failed[0]
        table.runtime_ms = 1e3 * (time.perf_counter() - start)

        if self.args.database:
            self._store(table, self.args.database)

        return table

    @staticmethod
    def _store(table: TableReport, database: str) -> None:
        with Database(database) as db:
            # a rerun replaces the previous sweep
            db.drop_table("sweep")
            db.create_table("sweep", dict(table.rows[0]))
            for row in table.rows:
                db.insert_record("sweep", row)
        logger.info(f"{len(table.rows)} rows stored in `{database}`")

    def execute(self) -> Report:
        """Run the selected subcommand"""

        command = self.args.command
        logger.info(f"running `{command}`")
        if command == "simulate":
            return self.simulate()
        if command == "exact":
            return self.evaluate(self.args.quantity, self.options)
        if command in ("limit-density", "limit-tail", "tw"):
            return self.evaluate(command, self.options)
        if command == "fgue-check":
            return self.fgue_check()
        if command == "verify":
            return self.verify()
        if command == "corollary-mc":
            return self.corollary_mc()
        if command == "sweep":
            return self.sweep()
        raise ValidationError(f"unknown command `{command}`")

    def write(self, report: Report) -> None:
        """Emit the report, then fail the run when it carries a failing diagnostic"""

        emit(
            report,
            fmt=self.args.format,
            path=self.args.output,
            version=self.version,
            timing=self.args.timing,
        )
        if report.diagnostic in FAILING_DIAGNOSTICS:
            raise DiagnosticError(f"`{report.quantity}` failed the {report.diagnostic} check")
