"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-status contract: structural/parse problems
exit 1, validation failures exit 2, violated mathematical preconditions
exit 3.
"""


class GraphAmpError(Exception):
    """Base class for all package errors."""


class GraphParseError(GraphAmpError):
    """A graph file could not be parsed into a graph at all."""


class GraphStructureError(GraphAmpError):
    """Graph data is structurally malformed (bad reference, self-loop, duplicate id)."""


class PlaquetteError(GraphAmpError):
    """A plaquette's signed link list does not form a closed cycle."""


class RowSpaceError(GraphAmpError):
    """A source vector carries a component along the gauge (null) directions.

    The restricted partition function is defined only for sources inside the
    row space of the difference matrix; rejecting out-of-row-space sources is
    how this formalism avoids the infinite gauge-volume factor.
    """


class NullModeError(GraphAmpError):
    """A per-mode operation was asked for a zero-eigenvalue (gauge) mode."""


class RankLimitError(GraphAmpError):
    """Dense quadrature was requested for a row space too large to grid."""


class SingularMatrixError(GraphAmpError):
    """The full-space Gaussian normalization is undefined because det K = 0."""
