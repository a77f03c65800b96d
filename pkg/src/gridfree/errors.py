class ResourceLimitError(RuntimeError):
    """A configured size/memory/enumeration ceiling would be exceeded."""


class VerificationError(AssertionError):
    """An assertion-grade invariant failed on computed data."""
