"""Module to manage parameter grids swept by the `sweep` subcommand

Throughout the module, it is assumed that the grid is stored in a dictionary. Each key of the
dictionary is a group name (e.g. `lattice`, `times`, `location`), which is a dictionary in
itself: the parameters that are varied are keys of it and contain lists or single numbers.
Group names only organize the file; the grid itself is flat.
"""

from typing import Any, Callable, Dict, List, Mapping, Sequence, Tuple

import operator
import re

import numpy as np

from geodist.exceptions import ValidationError
from geodist.io import logger

# parameters that each sweepable quantity accepts
SWEEP_QUANTITIES: Dict[str, Tuple[str, ...]] = {
    "finite-density": ("m", "n", "M", "N", "direction", "s1", "s2", "kmax"),
    "tail": ("m", "n", "M", "N", "direction", "t1", "t2", "kmax"),
    "geodesic-prob": ("m", "n", "M", "N", "direction", "kmax"),
    "formula01": ("m", "n", "M", "N", "direction", "s1", "s2"),
    "formula02": ("m", "n", "M", "N", "direction", "s1", "s2"),
    "limit-density": ("s1", "s2", "x", "gamma", "kmax"),
    "limit-tail": ("t1", "t2", "x", "gamma", "kmax"),
    "tw": ("s",),
}

_OPERATORS: Dict[str, Callable[[Any, Any], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}

_CONDITION = re.compile(r"^\s*(\w+)\s*(<=|>=|==|!=|<|>)\s*(\S+)\s*$")


def check_for_valid_options(d: Mapping[str, Any], quantity: str) -> bool:
    """Check that every parameter of a grid is accepted by the swept quantity

    Parameters
    ----------
    d : `dict`
        Dictionary with groups of grid options

    quantity : `str`
        Name of the quantity evaluated at each grid point

    Returns
    -------
    is_okay : `bool`
        False when the quantity is unknown or some option is not one of its parameters
    """

    if quantity not in SWEEP_QUANTITIES:
        logger.critical(f"quantity `{quantity}` cannot be swept")
        return False

    valid = SWEEP_QUANTITIES[quantity]
    for group, options in d.items():
        if not isinstance(options, Mapping):
            logger.critical(f"group `{group}` must be a mapping of options")
            return False
        for option in options:
            if option not in valid:
                logger.critical(f"option `{option}` is not a parameter of `{quantity}`")
                return False

    return True


def parse_condition(text: str) -> Callable[[Mapping[str, Any]], bool]:
    """Turn `name op value` (value being a number or another parameter) into a predicate

    Grid points for which the predicate is True are removed.

    >>> parse_condition("m >= M")({"m": 2, "M": 2})
    True
    >>> parse_condition("s1 < -0.5")({"s1": 0.0})
    False
    """

    match = _CONDITION.match(text)
    if match is None:
        raise ValidationError(f"cannot parse grid condition `{text}`")
    left, symbol, right = match.groups()
    compare = _OPERATORS[symbol]

    try:
        constant = float(right)
    except ValueError:
        constant = None

    def condition(point: Mapping[str, Any]) -> bool:
        if left not in point or (constant is None and right not in point):
            raise ValidationError(f"grid condition `{text}` refers to unknown parameters")
        return bool(compare(point[left], constant if constant is not None else point[right]))

    return condition


def _flatten(d: Mapping[str, Any]) -> Dict[str, List[Any]]:
    options: Dict[str, List[Any]] = dict()
    for group in d:
        for option, values in d[group].items():
            if option in options:
                raise ValidationError(f"option `{option}` appears in more than one group")
            options[option] = list(values) if isinstance(values, (list, tuple)) else [values]
            if not options[option]:
                raise ValidationError(f"option `{option}` has no values")
    return options


def create_meshgrid_from_dict(
    d: Mapping[str, Any], conditions: Sequence[Callable[..., bool]] = ()
) -> Dict[str, Dict[str, Any]]:
    """Function that creates the meshgrid from a dictionary

    Parameters
    ----------
    d : `dict`
        Dictionary with different groups of options of the meshgrid

    conditions : `list`
        Predicates on a grid point; points for which any of them is True are dropped

    Returns
    -------
    meshgrid : `dict`
        Dictionary with the meshgrid, keyed by the string index of each point

    Examples
    --------
    >>> grid = create_meshgrid_from_dict({"times": {"s1": [1, 2], "s2": [0.5, 1.5]}})
    >>> [grid[k]["s1"] for k in grid], [grid[k]["s2"] for k in grid]
    ([1, 1, 2, 2], [0.5, 1.5, 0.5, 1.5])
    """

    estimated_number_gridpoints = get_number_of_gridpoints(d)
    logger.debug(f"estimated number of gridpoints: {estimated_number_gridpoints}")

    options = _flatten(d)
    option_names = list(options)

    # the product is built on indices so that values keep their own types
    index_grid = np.meshgrid(*[np.arange(len(v)) for v in options.values()], indexing="ij")
    grid = np.column_stack([element.ravel() for element in index_grid])
    logger.debug(f"number of elements in the grid: {len(grid)}")

    meshgrid: Dict[str, Dict[str, Any]] = dict()
    for k, row in enumerate(grid):
        meshgrid[f"{k}"] = {name: options[name][int(i)] for name, i in zip(option_names, row)}
        logger.debug(f"meshgrid element ({k}): {meshgrid[f'{k}']}")

    if len(conditions) > 0:
        keys_to_pop = []
        for key, point in meshgrid.items():
            for k, condition in enumerate(conditions):
                if condition(point):
                    logger.debug(f"failed condition {k}: going to remove index {key} from meshgrid")
                    keys_to_pop.append(key)
                    break

        for key in keys_to_pop:
            meshgrid.pop(key)

    return meshgrid


def get_number_of_gridpoints(d: Mapping[str, Any]) -> int:
    """Get the number of points in the meshgrid before conditions are applied

    Parameters
    ----------
    d : `dict`
        Dictionary with meshgrid groups

    Returns
    -------
    n : `int`
        Number of grid points
    """

    n = 1
    for group in d.keys():
        options = d[group]
        for option in options.keys():
            if isinstance(options[option], (list, tuple)):
                n *= len(options[option])
            else:
                logger.debug(f"{option} contains only one element")

    return n
