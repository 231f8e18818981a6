"""Exception hierarchy. Each CLI exit code maps to one of these."""


class VolterraError(Exception):
    """Base class for all package errors."""


class ParameterError(VolterraError, ValueError):
    """A weight or symbol parameter is outside its admissible range."""


class UnsupportedFamilyError(VolterraError, ValueError):
    """The operation needs closed-form derivatives the weight does not have."""


class DomainCoverageError(VolterraError, ValueError):
    """A grid does not reach far enough to locate a supremum."""


class PreconditionError(VolterraError):
    """A hypothesis of the operator criterion failed on the sampled grid."""

    def __init__(self, condition, report=None):
        self.condition = condition
        self.report = report
        super().__init__(f"hypothesis failed: {condition}")


class InconclusiveError(VolterraError):
    """The criterion curve oscillates too much to read off a trend."""

    def __init__(self, message, curve=None):
        self.curve = curve
        super().__init__(message)


class ConsistencyError(VolterraError):
    """Numeric verdict disagrees with the closed-form degree rule."""


class PartialOracleError(VolterraError):
    """The degree rule only answers compactness for this parameter range."""

    def __init__(self, message, compact):
        self.compact = compact
        super().__init__(message)
