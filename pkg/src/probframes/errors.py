"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ProbFrameError``,
so callers (and the CLI) can separate domain failures from programming bugs.
"""


class ProbFrameError(Exception):
    """Base class for all library errors."""


class InvalidMeasure(ProbFrameError, ValueError):
    """Atoms/weights do not describe a probability measure."""


class DimMismatch(ProbFrameError, ValueError):
    pass


class MapDomainMismatch(ProbFrameError, KeyError):
    """An AtomMap was asked for a point it has no value for."""

    def __str__(self):
        return Exception.__str__(self)


class NotSymmetric(ProbFrameError, ValueError):
    pass


class NonConvergence(ProbFrameError, ArithmeticError):
    pass


class NotPSD(ProbFrameError, ValueError):
    pass


class Singular(ProbFrameError, ArithmeticError):
    pass


class NotAFrame(ProbFrameError, ValueError):
    pass


class KTooSmall(ProbFrameError, ValueError):
    pass


class EtaNotTight(ProbFrameError, ValueError):
    pass


class InvalidCoupling(ProbFrameError, ValueError):
    pass


class NotADual(ProbFrameError, ValueError):
    pass


class NotAReconstruction(ProbFrameError, ValueError):
    pass


class BadExponent(ProbFrameError, ValueError):
    pass


class NotOrthogonal(ProbFrameError, ValueError):
    pass


class NotUnitVector(ProbFrameError, ValueError):
    pass


class NotSphereSupported(ProbFrameError, ValueError):
    pass


class NumericalBreakdown(ProbFrameError, ArithmeticError):
    """The simplex solver could not produce a trustworthy answer."""
