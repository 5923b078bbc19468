"""Exceptions raised by the numerical library. All derive from ValueError."""


class DomainError(ValueError):
    """Argument outside an open domain, or a non-finite input/sample."""


class SingularMapError(ValueError):
    """Coordinate map with vanishing or negative dy/dx."""


class DegenerateCubicError(ValueError):
    """Leading cubic coefficient is zero."""


class SpectrumExhaustedError(ValueError):
    """Requested ES level lies beyond the bound-state window."""


class NoAdmissibleRootError(ValueError):
    """The eigenvalue cubic has no root passing the admissibility rule."""


class AmbiguousRootError(ValueError):
    """More than one cubic root passes the admissibility rule."""
