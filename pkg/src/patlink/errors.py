"""Exception types shared across pipeline stages."""


class PatlinkError(Exception):
    """Base class for all pipeline errors."""


class ValidationError(PatlinkError):
    """A record violates its schema or an invariant."""


class DuplicateKeyError(ValidationError):
    """Two records claim the same unique key."""


class IntegrityError(PatlinkError):
    """Cross-record consistency is broken (e.g. dangling descriptor id)."""


class EmptyNameError(PatlinkError):
    """Nothing remains of a person name after stripping."""


class NoDescriptionTextError(PatlinkError):
    """A patent family carries no description text in any language."""


class ThresholdUnavailableError(PatlinkError):
    """No group is large enough to estimate a similarity threshold."""


class EmptyDistributionError(PatlinkError):
    """A class distribution was requested over an empty subset."""


class ConfigError(PatlinkError):
    """The run configuration is missing or invalid."""
