"""Error types shared across the package.

The CLI maps these onto distinct exit codes, so raising the right class
matters more than the message wording.
"""


class SpinbalanceError(Exception):
    """Base class for package errors."""


class ParseError(SpinbalanceError, ValueError):
    """A document could not be parsed at all (malformed JSON, wrong shape)."""


class ValidationError(SpinbalanceError, ValueError):
    """A well-formed input violates a contract; message names the offending field."""


class SolverError(SpinbalanceError, RuntimeError):
    """A sampler or partitioning run failed to produce a usable result."""
