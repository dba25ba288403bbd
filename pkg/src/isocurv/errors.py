"""Exception types shared across the toolkit."""


class IsocurvError(Exception):
    """Base class for all toolkit errors."""


class DomainError(IsocurvError):
    """An evaluation left the mathematical domain of a function
    (division by zero, log/sqrt of a non-positive value, tan at a pole,
    power of a non-positive base with a non-integer exponent)."""


class UnsupportedFunction(IsocurvError):
    """A requested function cannot be differentiated (e.g. abs is not smooth)."""


class NotAdmissible(IsocurvError):
    """The tangent plane at a point is isotropic: EG - F^2 fell below the
    admissibility floor, so curvatures are undefined there."""

    def __init__(self, point, w, message=None):
        self.point = point
        self.w = w
        super().__init__(
            message or f"surface not admissible at (u, v) = {point}: EG - F^2 = {w:g}"
        )


class RegularityError(IsocurvError):
    """A factorable surface lost regularity (f = 0 or g' = 0) at a point."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"regularity lost at (u, v) = {point}")


class InvalidConstants(IsocurvError):
    """Family constants violate the family's constraints."""


class RadicandNonpositive(IsocurvError):
    """The slope-field radicand of an ODE-generated family is not positive."""


class BlowUp(IsocurvError):
    """An ODE trajectory left the trusted region (slope magnitude too large)."""
