"""Independent exact ground truth for radial moments, by direct integration.

In the dimensionless radial variable x = Zr/a0 the bound-state solution of
the d-dimensional Coulomb problem is

    R(x)  proportional to  x^l exp(-x/N) P(2x/N),

where P is the generalized Laguerre polynomial of degree n - l - 1 with
parameter 2l + d - 2 and N = n + (d-3)/2. Squaring P term by term turns
every moment integral against the radial density x^(2l+d-1) |R/x^l ... |
into Gamma functions evaluated at positive integers, i.e. factorials, so
the whole computation stays inside the rationals. Moments are normalized
by the k = 0 integral, which cancels the overall amplitude of R and avoids
square roots.

This module deliberately knows nothing about the recurrence route; it is
the second, independent path to the same numbers and must stay that way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    NonexistentMomentError,
    QuantumState,
    existence_bound,
    factorial,
    moment_exists,
    spectral_params,
)

__all__ = ["RadialPolynomial", "laguerre_coefficients", "oracle_moment"]


@dataclass(frozen=True)
class RadialPolynomial:
    """Exact coefficients of the Laguerre factor, lowest order first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a polynomial needs at least one coefficient")
        if self.coefficients[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def laguerre_coefficients(n_r: int, alpha: int) -> RadialPolynomial:
    """Generalized Laguerre polynomial L_{n_r}^{(alpha)} as exact coefficients.

    The j-th coefficient is (-1)^j binom(n_r + alpha, n_r - j) / j!.
    """
    if n_r < 0:
        raise ValueError(f"polynomial degree must be nonnegative, got {n_r}")
    if alpha < 0:
        raise ValueError(f"Laguerre parameter must be nonnegative, got {alpha}")
    coeffs = tuple(
        Fraction((-1) ** j * math.comb(n_r + alpha, n_r - j), factorial(j))
        for j in range(n_r + 1)
    )
    return RadialPolynomial(coeffs)


def _density_integral(state: QuantumState, k: int) -> Fraction:
    """Integral of x^k against the unnormalized radial density of the state.

    Term by term the integrand x^(2l+d-1+k) exp(-2x/N) P(2x/N)^2 gives
    Gamma(2l+d+k+i+j) (N/2)^(2l+d+k+i+j) (2/N)^(i+j) for the (i, j)
    coefficient pair of P. The (N/2) powers telescope against the (2/N)
    factors from the polynomial argument, leaving one overall prefactor.
    """
    params = spectral_params(state)
    poly = laguerre_coefficients(state.n - state.l - 1, params.L)
    base = 2 * state.l + state.d + k  # Gamma argument at i = j = 0, >= 1 here
    total = Fraction(0)
    for i, ci in enumerate(poly.coefficients):
        for j, cj in enumerate(poly.coefficients):
            total += ci * cj * factorial(base + i + j - 1)
    return (params.N / 2) ** base * total


def oracle_moment(state: QuantumState, k: int) -> Fraction:
    """M_k by exact integration, the reference value for any other route."""
    if not moment_exists(state, k):
        raise NonexistentMomentError(
            f"<r^{k}> diverges for {state}; "
            f"lowest existing order is {existence_bound(state)}"
        )
    return _density_integral(state, k) / _density_integral(state, 0)
