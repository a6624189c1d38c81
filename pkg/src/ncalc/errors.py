"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class WindowError(ValueError):
    """The support of a grid element left the model window."""


class DivergedNormError(ValueError):
    """A norm solver could not bring its feasibility map below 1."""


class OrliczClassError(ValueError):
    """The element does not belong to the Orlicz class of the gauge."""


class ClosureError(ValueError):
    """A derivation basis is not closed under the commutator bracket."""


class ConfigError(ValueError):
    """A run configuration file could not be parsed or validated."""
