"""Exception types. The command-line layer maps these onto its exit codes."""


class FiberphaseError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FiberphaseError):
    """Malformed or out-of-range run configuration (exit code 2)."""


class NumericDomainError(FiberphaseError):
    """Input outside the numeric domain of an operation (exit code 3)."""


class SouthPoleError(NumericDomainError):
    """The momentum direction touches -z, where the phase chart breaks down."""
