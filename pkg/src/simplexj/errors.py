"""Exception types raised across the package."""


class SimplexJError(Exception):
    """Base class for all errors raised by simplexj."""


class NonFiniteInput(SimplexJError, ValueError):
    pass


class Unsupported(SimplexJError, ValueError):
    """Requested order or dimension lies outside the supported range."""


class LengthMismatch(SimplexJError, ValueError):
    pass


class NonPositiveParameter(SimplexJError, ValueError):
    pass


class ToleranceNotMet(SimplexJError, ArithmeticError):
    """Adaptive quadrature ran out of subdivision depth."""


class Degenerate(SimplexJError, ValueError):
    """A simplex has (numerically) zero volume or repeated vertices."""


class UnassignedPoint(SimplexJError, ValueError):
    """A sample point lies outside every simplex of the triangulation."""


class NotConverged(SimplexJError, RuntimeError):
    pass
