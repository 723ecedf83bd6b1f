"""Exception hierarchy shared across the toolkit.

Each error carries a short machine-readable ``code`` used by the CLI to
format ``error[CODE]:`` messages and pick exit statuses.
"""


class FracsolveError(Exception):
    """Base class for all toolkit errors."""

    code = "internal"


class InvalidInputError(FracsolveError):
    """Malformed user input: bad shapes, non-finite values, unparsable files."""

    code = "input"


class DegenerateDesignError(FracsolveError):
    """Design matrix is numerically zero: every singular value fell below the cutoff."""

    code = "degenerate"


class DegenerateTargetError(FracsolveError):
    """Target whose unregularized solution has zero norm; the norm fraction is undefined."""

    code = "degenerate-target"


class UndefinedScoreError(FracsolveError):
    """Coefficient of determination requested against a zero-variance baseline."""

    code = "score"


class InternalInvariantError(FracsolveError):
    """A quantity the algorithm guarantees (e.g. monotone shrinkage) was violated."""

    code = "internal"
