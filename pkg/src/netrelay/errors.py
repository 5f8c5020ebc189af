"""Exception hierarchy shared across netrelay."""

from __future__ import annotations


class NetrelayError(Exception):
    """Base class for all netrelay failures."""


class DimensionError(NetrelayError, ValueError):
    """Operand shapes or lengths do not agree."""


class DuplicateEntryError(NetrelayError, ValueError):
    """A sparse matrix was given the same (row, col) position twice."""


class ParameterError(NetrelayError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ConfigurationError(NetrelayError, ValueError):
    """A topology, experiment or observation is inconsistent."""


class DegenerateCodeError(NetrelayError, RuntimeError):
    """The parity-check matrix admits only the zero codeword."""


class ConstructionError(NetrelayError, RuntimeError):
    """A randomized code construction gave up."""

    def __init__(self, message: str, *, attempts: int) -> None:
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class FormatError(NetrelayError, ValueError):
    """A matrix, code or topology file could not be parsed."""
