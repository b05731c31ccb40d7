"""Exception hierarchy.

Every error raised by this package derives from :class:`PanelDagError`. The
``exit_code`` attribute is what the command-line front end reports: 2 for
configuration problems, 3 for data problems, 4 for numerical failures, 5 for
transport failures.
"""


class PanelDagError(Exception):
    exit_code = 1


class ConfigError(PanelDagError):
    """Invalid configuration, unknown enumeration tag, or missing lookup key."""

    exit_code = 2


class DataError(PanelDagError):
    """Problems with supplied data files or with data shapes/values."""

    exit_code = 3


class FormatError(DataError):
    """A file does not have the expected structure (header, columns, layout)."""


class ParseError(FormatError):
    """A cell that should be numeric is not; message carries row/column."""


class DomainError(DataError):
    """A value violates a domain constraint (e.g. negative emissions)."""


class DuplicateKeyError(DataError):
    """The same key (economy, indicator, year, ...) appears twice."""


class EmptyResultError(DataError):
    """An operation that must produce rows produced none."""


class DegenerateDataError(DataError):
    """Data without enough variation to proceed (identical rows, constant column)."""


class LabelMismatchError(DataError):
    """Two objects that must share variable labels do not."""


class NumericalError(PanelDagError):
    """A numerical routine failed (non-finite solve, ill-conditioning)."""

    exit_code = 4


class TransportError(PanelDagError):
    """An external service could not be reached or kept failing."""

    exit_code = 5
