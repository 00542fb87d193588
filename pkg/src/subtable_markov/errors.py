"""Exception hierarchy.

Every error raised by the package derives from :class:`SubtableError`. The
CLI maps :class:`InvalidInput` subclasses to exit code 2 and
:class:`ResourceBound` subclasses to exit code 3.
"""


class SubtableError(Exception):
    pass


class InvalidInput(SubtableError, ValueError):
    pass


class ResourceBound(SubtableError):
    pass


class ShapeMismatch(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class NegativeCell(InvalidInput):
    def __init__(self, i, j, value):
        super().__init__(f"cell ({i + 1},{j + 1}) would become {value}")
        self.cell = (i, j)
        self.value = value


class MaskDegenerate(InvalidInput):
    pass


class ShapeTooSmall(InvalidInput):
    pass


class InconsistentMarginals(InvalidInput):
    pass


class EmptyMoveSet(InvalidInput):
    pass


class EmptyTable(InvalidInput):
    pass


class SameTable(InvalidInput):
    pass


class DifferentFiber(InvalidInput):
    pass


class WorkBoundExceeded(ResourceBound):
    pass


class NoReductionFound(ResourceBound):
    """No norm-reducing step sequence exists within the search depth."""


class NotConnectedAtDepth(ResourceBound):
    """The connector ran out of depth and no exhaustive certificate was possible."""


class Disconnected(SubtableError):
    """Exhaustive search proved the two tables lie in different components.

    Carries the fiber size and the component sizes as a certificate.
    """

    def __init__(self, message, fiber_size, component_sizes):
        super().__init__(message)
        self.fiber_size = fiber_size
        self.component_sizes = component_sizes
