"""Error taxonomy shared by every module.

Two classes only: bad inputs (caller's fault) versus numerical trouble
discovered while computing. The CLI maps them to exit codes 2 and 3.
"""


class QxError(Exception):
    """Base class for all workbench errors."""


class ValidationError(QxError):
    """Invalid argument, malformed input text, or violated precondition."""


class NumericalError(QxError):
    """Computation started but failed a numerical contract or budget."""
