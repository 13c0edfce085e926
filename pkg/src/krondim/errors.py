"""Exception hierarchy shared by all krondim modules."""


class KrondimError(Exception):
    """Base class for all errors raised by this package."""


class LabelError(KrondimError, KeyError):
    """A row/column label is unknown to the matrix it was used with."""


class ArgumentError(KrondimError, ValueError):
    """An argument is outside its documented range or malformed."""


class PreconditionError(KrondimError, ValueError):
    """A construction hypothesis does not hold for the supplied data."""


class UnsupportedSpecError(KrondimError, ValueError):
    """The model spec is valid but outside what this operation supports."""


class ResourceBudgetError(KrondimError, RuntimeError):
    """An enumeration would exceed the configured budget."""
