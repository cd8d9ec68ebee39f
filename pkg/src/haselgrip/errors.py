"""Exception hierarchy shared by all haselgrip modules.

Every error carries a short machine-readable ``code``. The CLI maps
:class:`ValidationError` to exit status 2 and :class:`ComputationError`
to exit status 3.
"""


class HaselError(Exception):
    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(HaselError, ValueError):
    """Bad input: violated invariant, malformed file, unknown option."""

    code = "validation"


class DomainError(ValidationError):
    """Argument outside the domain where a model is defined."""

    code = "domain"


class ComputationError(HaselError, RuntimeError):
    """A well-formed request whose evaluation failed."""

    code = "computation"


class DegenerateOverlapError(ComputationError):
    """Two curves coincide on their whole common domain."""

    code = "degenerate-overlap"
