"""Exception hierarchy shared by all relab modules."""


class RelabError(Exception):
    """Base class for all errors raised by relab."""


class EmptyInput(RelabError):
    """An operation received an empty sample or file."""


class BadArgument(RelabError):
    """An argument is out of range or otherwise invalid."""


class BadColumn(BadArgument):
    """A column index does not exist in the table."""


class BadLabel(RelabError):
    """A label token collides with a reserved separator or is empty."""


class BadData(RelabError):
    """Numeric input contains non-finite entries."""


class TooLarge(RelabError):
    """The requested exact computation exceeds the configured size cap."""


class Degenerate(RelabError):
    """Not enough structure in the input to perform the operation."""


class NumericalFailure(RelabError):
    """A numerical routine failed to converge; message carries diagnostics."""
