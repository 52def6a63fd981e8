"""Exception hierarchy shared by every module of the package."""


class SceNttError(Exception):
    """Base class for all errors raised by scentt."""


class NotPrime(SceNttError, ValueError):
    pass


class NoRootExists(SceNttError, ValueError):
    pass


class NoPsiExists(SceNttError, ValueError):
    pass


class ModulusTooLarge(SceNttError, ValueError):
    pass


class ContextMismatch(SceNttError, ValueError):
    pass


class IndexOutOfRange(SceNttError, IndexError):
    pass


class CycleOutOfRange(SceNttError, IndexError):
    pass


class ScheduleViolation(SceNttError, RuntimeError):
    """A memory or controller invariant was broken during simulation."""


class CollisionDetected(ScheduleViolation):
    pass


class OverflowDetected(ScheduleViolation):
    pass


class EmptyRead(ScheduleViolation):
    pass


class NotAPermutation(SceNttError, RuntimeError):
    pass


class CyclicGraph(SceNttError, ValueError):
    pass


class InfeasibleK(SceNttError, ValueError):
    pass


class SizeMismatch(SceNttError, ValueError):
    pass


class NotCoprime(SceNttError, ValueError):
    pass


class OutOfRange(SceNttError, ValueError):
    pass
