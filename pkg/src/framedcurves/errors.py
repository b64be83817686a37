class FramedCurveError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(FramedCurveError, ValueError):
    pass


class DivisionNearZero(FramedCurveError, ZeroDivisionError):
    pass


class DomainError(FramedCurveError, ValueError):
    pass


class EvaluationError(FramedCurveError):
    pass


class QuadratureFailure(FramedCurveError):
    pass


class ODEFailure(FramedCurveError):
    pass


class FramingUndefined(FramedCurveError):
    """Both arguments of the framing angle vanish (the point is singular)."""


class NotFramed(FramingUndefined):
    pass


class FrameUndefined(FramedCurveError):
    pass


class MNearZero(PreconditionError):
    """m-bar vanishes somewhere on the domain but not identically.

    ``zeros`` lists the located zeros and ``subintervals`` the m-bar-free
    pieces (shrunk by the guard margin) on which a construction can proceed.
    """

    def __init__(self, message, zeros=(), subintervals=()):
        super().__init__(message)
        self.zeros = list(zeros)
        self.subintervals = list(subintervals)


class DegenerateSingularity(FramedCurveError):
    pass


class NotSingular(PreconditionError):
    pass
