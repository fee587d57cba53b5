"""Exception hierarchy shared across the package."""


class DvrTraceError(Exception):
    """Base class for all package errors."""


class InputError(DvrTraceError):
    """Malformed input: unparsable scalar, bad document, invalid range."""


class CapabilityError(DvrTraceError):
    """The requested computation is outside the supported desk-scale paths.

    Raised instead of returning a possibly wrong answer (e.g. structure-table
    decomposition over an imperfect residue field, or an exhausted bounded
    search). Carries enough context to report the limit that was hit.
    """


class InternalError(DvrTraceError):
    """An internally-checked identity failed; indicates a bug, not bad input."""
