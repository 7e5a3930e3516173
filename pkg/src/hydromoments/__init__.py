"""Exact radial moments <r^k> of d-dimensional hydrogen-like bound states.

Moments are computed along two independent routes: the Kramers-Pasternack
three-term recurrence, with the two-term inversion relation bootstrapping
the negative orders, and direct term-by-term integration of the squared
radial wavefunction. Both run entirely in exact rational arithmetic, so
agreement between them is literal equality, not a tolerance.
"""

from .core import (
    InvalidStateError,
    Moment,
    MomentTable,
    NonexistentMomentError,
    QuantumState,
    SpectralParams,
    angular_coefficient,
    existence_bound,
    moment_exists,
    spectral_params,
)
from .oracle import RadialPolynomial, laguerre_coefficients, oracle_moment
from .recurrence import (
    KramersResidual,
    TwoTermRangeError,
    ascend,
    closed_form_r,
    descend,
    full_table,
    invert_two_term,
    kramers_residual,
    seeds,
)

__version__ = "0.1.0"

__all__ = [
    "InvalidStateError",
    "NonexistentMomentError",
    "TwoTermRangeError",
    "QuantumState",
    "SpectralParams",
    "Moment",
    "MomentTable",
    "KramersResidual",
    "RadialPolynomial",
    "spectral_params",
    "existence_bound",
    "moment_exists",
    "angular_coefficient",
    "seeds",
    "ascend",
    "invert_two_term",
    "descend",
    "closed_form_r",
    "kramers_residual",
    "full_table",
    "laguerre_coefficients",
    "oracle_moment",
    "__version__",
]
