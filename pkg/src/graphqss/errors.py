"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain of an operation."""


class UnsupportedError(DomainError):
    """The operation is well-posed but deliberately not implemented for this input."""


class ResourceError(RuntimeError):
    """A request exceeds a configured resource cap (e.g. dense qubit count)."""
