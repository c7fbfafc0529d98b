"""Exception and warning types shared across the package."""


class WeakmeasError(Exception):
    """Base class for all package-specific errors."""


class InvalidTruncationError(WeakmeasError, ValueError):
    """Fock-space truncation too small for the requested object."""


class TruncationRiskError(WeakmeasError, ValueError):
    """Parameters push significant amplitude beyond the truncated basis.

    Overridable: the raising operation accepts ``force=True``.
    """


class DimensionMismatchError(WeakmeasError, ValueError):
    """Operands live on different truncated bases."""


class DomainError(WeakmeasError, ValueError):
    """Parameter outside the admissible domain (e.g. squeeze amplitude below r_min)."""


class OrthogonalSelectionError(WeakmeasError, ValueError):
    """Pre- and post-selection are orthogonal; the weak value diverges."""


class DegenerateSelectionError(WeakmeasError, ValueError):
    """Post-selection annihilates the pointer state (norm below threshold)."""


class ConfigError(WeakmeasError, ValueError):
    """Malformed sweep/slice configuration."""


class TruncationWarning(UserWarning):
    """Tail mass of a constructed state exceeds the configured tolerance."""
