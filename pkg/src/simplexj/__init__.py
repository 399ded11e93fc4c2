"""Stable evaluation of the simplex log-linear integral J and its use in
maximum-likelihood estimation of piecewise log-linear densities."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    Degenerate,
    LengthMismatch,
    NonFiniteInput,
    NonPositiveParameter,
    NotConverged,
    SimplexJError,
    ToleranceNotMet,
    UnassignedPoint,
    Unsupported,
)
from .jfun import (  # noqa: E402
    ArgVector,
    CenteredForm,
    EvalConfig,
    center,
    eval_j,
    eval_j_d1,
    eval_j_d2,
    eval_series,
    eval_taylor,
)
from .jderiv import d2_partials, grad_j, hess_j, j_ab  # noqa: E402
