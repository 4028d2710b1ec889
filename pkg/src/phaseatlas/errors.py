"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (malformed data, bad
parameters) and :class:`NumericalError` (a numerical precondition failed on
otherwise valid data). The command line maps them to exit codes 1 and 2.
"""


class PhaseAtlasError(Exception):
    """Base class for every error raised by this package."""


class InputError(PhaseAtlasError, ValueError):
    """Malformed or inconsistent input."""


class NumericalError(PhaseAtlasError, ArithmeticError):
    """A numerical precondition does not hold."""


# -- input errors -----------------------------------------------------------

class ValidationError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class PointOutsideGrid(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class GridMismatch(InputError):
    pass


class NotCoprime(InputError):
    pass


class GridTooCoarse(InputError):
    pass


class DegreeOutOfRange(InputError):
    pass


class ParseError(InputError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class CochainViolation(InputError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"coboundary d^{k + 1} o d^{k} is not zero")


# -- numerical errors -------------------------------------------------------

class NotHermitian(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateGroundState(NumericalError):
    pass


class GapClosure(NumericalError):
    def __init__(self, k, gap):
        self.k = tuple(int(i) for i in k)
        self.gap = float(gap)
        super().__init__(f"spectral gap {self.gap:.3e} at grid point {self.k}")


class MidpointDegeneracy(NumericalError):
    def __init__(self, k, t):
        self.k = tuple(int(i) for i in k)
        self.t = float(t)
        super().__init__(
            f"interpolated projector is degenerate at grid point {self.k}, t={self.t:g}"
        )


class NonAdmissibleStep(NumericalError):
    pass


class InconsistentWinding(NumericalError):
    pass


class VanishingLink(NumericalError):
    def __init__(self, k, direction, value):
        self.k = tuple(int(i) for i in k)
        self.direction = int(direction)
        self.value = float(value)
        super().__init__(
            f"link |<u,u'>| = {self.value:.3e} at grid point {self.k}, direction {self.direction}"
        )


class SliceDisagreement(NumericalError):
    def __init__(self, i, j, values):
        self.i, self.j = i, j
        self.values = sorted(set(values))
        super().__init__(f"transverse slices of plane ({i},{j}) disagree: {self.values}")


class NotLocalizable(NumericalError):
    pass


class DimensionTooHigh(NumericalError):
    def __init__(self, dim):
        self.dim = dim
        super().__init__(f"complex has dimension {dim} > 3; K~0 is not H^2 there")


class ResidualBreach(PhaseAtlasError):
    """An integer invariant was rounded from a value too far from an integer."""
