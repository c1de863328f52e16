"""Input/output module"""

from typing import Any, Dict, List, Optional, TextIO, Union

import csv
import json
import sys
from io import StringIO
from pathlib import Path

import yaml

from geodist.exceptions import OutputError, ValidationError
from geodist.report import EstimateReport, TableReport

from .logging import logger

REPORT_COLUMNS = (
    "quantity",
    "value_re",
    "value_im",
    "stderr",
    "k1",
    "k2",
    "term_abs",
    "runtime_ms",
    "seed",
)

OUTPUT_FORMATS = ("csv", "json")


def load_yaml(fname: Union[str, Path]) -> Any:
    """Load configuration file with YAML format

    Parameters
    ----------
    fname : `str / Path`
        YAML filename

    Returns
    -------
    `yaml.load`
    """

    if isinstance(fname, Path):
        fname = str(fname)

    with open(fname) as f:
        return yaml.load(f, Loader=yaml.FullLoader)


def progress_bar(
    count: int,
    total: int,
    mark_count: int = 50,
    mark_char: str = "█",
    unmarked_char: str = ".",
    left_msg: str = "",
    right_msg: str = "",
    stream: Optional[TextIO] = None,
) -> None:
    """Simple progress bar, written to stderr so that it never mixes with results on stdout

    Obtained from:
    https://www.reddit.com/r/learnpython/comments/7hyyvr/python_progress_bar_used_in_conda/

    Parameters
    ----------
    count : `int`
       Iteration number

    total: `int`
       Total number of iterations to perform

    mark_count : `int`
       Length of bar

    mark_char : `misc`
       Character used for marking completion in bar

    unmarked_char : `misc`
       Same as above but for uncompleted part of bar

    left_msg : `string`
       Message of left of progress bar

    right_msg : `string`
       Message on right side of progress bar

    stream : `TextIO`
       Where to draw the bar, defaults to stderr
    """

    stream = sys.stderr if stream is None else stream

    msg_left = left_msg if len(left_msg) <= 30 else left_msg[:30]
    msg_right = right_msg if len(right_msg) <= 30 else right_msg[:30]

    bar_filled = int(round(mark_count * count / float(total)))
    percent_str = str(round(100.0 * count / float(total), 1))
    marked_progress = mark_char * (bar_filled + 1)
    unmarked_progress = unmarked_char * (mark_count - bar_filled)
    progress = marked_progress + unmarked_progress

    stream.write(f"\r{msg_left:<21} |{progress}| {percent_str:>6}% {msg_right:21}")
    if count >= total:
        stream.write("\n")
    stream.flush()


def _number(value: Any) -> str:
    """Deterministic text form of a cell value"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def _header(version: str, config: Dict[str, Any]) -> List[str]:
    return [
        f"# geodist {version}",
        f"# config: {json.dumps(config, sort_keys=True, default=str)}",
    ]


def format_report_csv(report: EstimateReport, version: str, timing: bool = False) -> str:
    """Render a report as CSV: one summary row followed by one row per series term"""

    buffer = StringIO()
    for line in _header(version, report.config):
        buffer.write(line + "\n")
    if report.diagnostic is not None:
        buffer.write(f"# diagnostic: {report.diagnostic}\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    value = complex(report.value)
    runtime = report.runtime_ms if timing else None
    writer.writerow(
        [
            report.quantity,
            _number(float(value.real)),
            _number(float(value.imag)),
            _number(report.stderr),
            "",
            "",
            "",
            _number(runtime),
            _number(report.seed),
        ]
    )
    for term in report.terms:
        writer.writerow(
            [
                "term",
                _number(float(term.value.real)),
                _number(float(term.value.imag)),
                "",
                term.k1,
                term.k2,
                _number(float(abs(term.value))),
                "",
                "",
            ]
        )

    return buffer.getvalue()


def format_report_json(report: EstimateReport, version: str, timing: bool = False) -> str:
    """Render a report as a JSON object mirroring the CSV columns plus config and terms"""

    d = report.to_dict()
    if not timing:
        d["runtime_ms"] = None
    d["version"] = version
    return json.dumps(d, indent=2, sort_keys=True, default=str) + "\n"


def format_table_csv(table: TableReport, version: str, timing: bool = False) -> str:
    """Render a table report as CSV with the usual version/config header lines"""

    buffer = StringIO()
    for line in _header(version, table.config):
        buffer.write(line + "\n")
    if table.diagnostic is not None:
        buffer.write(f"# diagnostic: {table.diagnostic}\n")
    if timing and table.runtime_ms is not None:
        buffer.write(f"# runtime_ms: {_number(table.runtime_ms)}\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(table.columns))
    for row in table.rows:
        writer.writerow([_number(row.get(name)) for name in table.columns])

    return buffer.getvalue()


def format_table_json(table: TableReport, version: str, timing: bool = False) -> str:
    """Render a table report as a JSON object"""

    d = table.to_dict()
    if not timing:
        d["runtime_ms"] = None
    d["version"] = version
    rows = []
    for row in d["rows"]:
        rows.append(
            {
                k: ({"re": v.real, "im": v.imag} if isinstance(v, complex) else v)
                for k, v in row.items()
            }
        )
    d["rows"] = rows
    return json.dumps(d, indent=2, sort_keys=True, default=str) + "\n"


def emit(
    report: Union[EstimateReport, TableReport],
    fmt: str = "json",
    path: Union[str, Path] = "-",
    version: str = "unknown",
    timing: bool = False,
) -> None:
    """Write a report to `path` ("-" for stdout) in the requested format

    Parameters
    ----------
    report : `EstimateReport / TableReport`
        Report to write

    fmt : `str`
        One of `csv` or `json`

    path : `str / Path`
        Output filename, "-" means standard output

    version : `str`
        Library version embedded in the header

    timing : `bool`
        Whether runtime_ms is reported
    """

    if fmt not in OUTPUT_FORMATS:
        raise ValidationError(f"unknown output format `{fmt}` (valid: {', '.join(OUTPUT_FORMATS)})")

    if isinstance(report, TableReport):
        text = (format_table_csv if fmt == "csv" else format_table_json)(report, version, timing)
    else:
        text = (format_report_csv if fmt == "csv" else format_report_json)(report, version, timing)

    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    logger.debug(f"writing {fmt} output to `{path}`")
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise OutputError(f"cannot write output to `{path}`: {e}") from e
