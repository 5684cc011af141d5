class MarioError(Exception):
    """Base for all package errors."""


class ValidationError(MarioError):
    """Bad inputs, violated contracts, malformed files.  CLI exit code 2."""


class NumericsError(MarioError):
    """NaN/Inf or other numerical failure during compute.  CLI exit code 3."""
