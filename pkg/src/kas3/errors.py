"""Exception types shared across the toolkit."""


class ToolkitError(ValueError):
    """Base class for operation failures."""


class SchemaError(ToolkitError):
    """Malformed input document or text form."""


class GuardExceeded(ToolkitError):
    """An explicit enumeration guard was exceeded (no silent truncation)."""


class NotAMatching(ToolkitError):
    """A triangle set violates pairwise edge-disjointness."""


class CertificationError(ToolkitError):
    """A shipped construction failed its own certification suite."""
