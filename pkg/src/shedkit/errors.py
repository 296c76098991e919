"""Exception hierarchy shared by all shedkit modules."""


class ShedkitError(Exception):
    """Base class for every error raised by shedkit."""


class DimensionError(ShedkitError, ValueError):
    pass


class DegenerateInputError(ShedkitError, ValueError):
    pass


class SingularMatrixError(ShedkitError, ValueError):
    pass


class DomainError(ShedkitError, ValueError):
    """A ray or point lies outside the support it was supposed to lie in."""


class IdempotenceError(ShedkitError, ValueError):
    """Subdividing at a ray that is already a ray of the fan."""


class InvalidFanError(ShedkitError, ValueError):
    pass


class DegenerateProjectionError(ShedkitError, ValueError):
    pass


class HypothesisViolation(ShedkitError):
    """A cone has zero or several candidate G-points.

    ``candidates`` holds every lattice point found at the target level.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class NonTermination(ShedkitError):
    """Raised when an iterative procedure exhausts its step budget."""

    def __init__(self, message, fan=None, steps=()):
        super().__init__(message)
        self.fan = fan
        self.steps = list(steps)


class ResourceError(ShedkitError):
    pass


class ContradictionError(ShedkitError):
    """A computed quantity contradicts a claim the construction relies on."""


class CorrespondenceError(ShedkitError):
    pass


class ConsistencyError(ShedkitError):
    pass


class ScheduleError(ShedkitError):
    """Wraps a subdivision failure with the index of the offending step."""

    def __init__(self, step, cause):
        super().__init__(f"schedule step {step}: {cause}")
        self.step = step
        self.cause = cause
