"""Exceptions raised across geodist

Library code raises these; only the command-line layer turns them into exit codes.
"""

from typing import Optional, Sequence


class GeodistError(Exception):
    """Base class for every error raised by geodist"""

    exit_code = 1


class ValidationError(GeodistError, ValueError):
    """Invalid parameters, indices or option values"""

    exit_code = 2


class QuadratureError(GeodistError):
    """Non-finite integrand value, e.g. a node landing on a pole

    Parameters
    ----------
    message : `str`
        Description of the failure

    node : `sequence`
        Coordinates of the offending node tuple, if known
    """

    exit_code = 3

    def __init__(self, message: str, node: Optional[Sequence[complex]] = None) -> None:
        super().__init__(message)
        self.node = tuple(node) if node is not None else None

    def __str__(self) -> str:
        msg = super().__str__()
        if self.node is not None:
            nodes = ", ".join(f"{complex(z):.6g}" for z in self.node)
            msg += f" (node: {nodes})"
        return msg


class DiagnosticError(GeodistError):
    """A computed quantity failed a numerical sanity check (imaginary residue, tolerance)"""

    exit_code = 3


class OutputError(GeodistError):
    """Output could not be written"""

    exit_code = 4
