"""Exception types raised across the package.

Every error that carries a witness (the offending points, sets or
sections) stores it on the instance so callers and the CLI can report
it without parsing the message.
"""


class AlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class NegativeInput(AlgebraError):
    pass


class NotExact(AlgebraError):
    """An exact result (square root, volume scale) does not exist in the rationals."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


# -- site ------------------------------------------------------------------

class TopologyError(AlgebraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotClosedUnderUnion(TopologyError):
    pass


class NotClosedUnderIntersection(TopologyError):
    pass


class MissingEmptyOrWhole(TopologyError):
    pass


class NotAnOpen(TopologyError):
    pass


class UnknownPoint(AlgebraError):
    pass


class NotASubset(AlgebraError):
    pass


class NotAnOpenCover(AlgebraError):
    pass


# -- sheaves ---------------------------------------------------------------

class NonEnumerableSections(AlgebraError):
    pass


class IncompatibleFamily(AlgebraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# -- modules and matrices ---------------------------------------------------

class DomainMismatch(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotSquare(AlgebraError):
    pass


class NonUnitDeterminant(AlgebraError):
    """Determinant vanishes somewhere; ``points`` lists the labels where it does."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class NonUnitSection(AlgebraError):
    """A section that must be nowhere zero vanishes at ``points``."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


# -- exterior algebra -------------------------------------------------------

class DegreeTooLarge(AlgebraError):
    pass


class DegreeOverflow(AlgebraError):
    pass


class ArityMismatch(AlgebraError):
    pass


class DegenerateMetric(AlgebraError):
    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


# -- symplectic -------------------------------------------------------------

class NotSkewSymmetric(AlgebraError):
    pass


class Degenerate(AlgebraError):
    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class NoUnitPivot(AlgebraError):
    pass


class NonConstantRank(AlgebraError):
    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class NotSymplectic(AlgebraError):
    pass


class DegenerateForm(AlgebraError):
    pass


# -- spectra ----------------------------------------------------------------

class CayleyHamiltonViolation(AlgebraError):
    pass


class NoRationalEigenvalue(AlgebraError):
    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)
