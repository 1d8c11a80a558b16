"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A value, configuration, or file failed a semantic check."""


class ParseError(ValidationError):
    """A data file is malformed; the message carries the offending line number."""
