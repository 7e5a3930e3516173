"""Exact domain types and spectral parameters for d-dimensional hydrogenic states.

Everything here is dimensionless. Lengths are measured in units of a0/Z, so
the moment of order k is M_k = <(Zr/a0)^k> and every stored value is an
exact rational. Physical values are recovered by scaling with (a0/Z)^k at
the output layer only; no floating point enters the computation.

All types are immutable values and all operations are pure functions, so
results are bit-identical no matter how calls are scheduled across threads
or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

__all__ = [
    "InvalidStateError",
    "NonexistentMomentError",
    "QuantumState",
    "SpectralParams",
    "Moment",
    "MomentTable",
    "spectral_params",
    "existence_bound",
    "moment_exists",
    "angular_coefficient",
    "factorial",
]

# Grid sweeps evaluate the same small factorial arguments over and over.
factorial = cache(math.factorial)


class InvalidStateError(ValueError):
    """Quantum numbers violate n >= 1, d >= 2 or 0 <= l <= n - 1."""


class NonexistentMomentError(ValueError):
    """The requested moment diverges: its order lies below the existence bound."""


def _exact(value, what: str) -> Fraction:
    # Fraction(float) would silently encode binary roundoff as an exact value.
    if isinstance(value, float):
        raise TypeError(f"{what} must be exact (int, Fraction or string), got float")
    return Fraction(value)


@dataclass(frozen=True)
class QuantumState:
    """A bound state labelled by principal n, orbital l and dimension d.

    The labelling is uniform in d: n starts at 1 and l is a nonnegative
    integer below n, in two dimensions as well (where l plays the role of
    the magnitude of the magnetic quantum number).
    """

    n: int
    l: int
    d: int

    def __post_init__(self) -> None:
        for name in ("n", "l", "d"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidStateError(f"{name} must be an integer, got {value!r}")
        if self.n < 1:
            raise InvalidStateError(f"n must be >= 1, got {self.n}")
        if self.d < 2:
            raise InvalidStateError(f"d must be >= 2, got {self.d}")
        if not 0 <= self.l <= self.n - 1:
            raise InvalidStateError(
                f"l must satisfy 0 <= l <= n-1 = {self.n - 1}, got {self.l}"
            )


@dataclass(frozen=True)
class SpectralParams:
    """Exact spectral quantities derived from one bound state.

    N is the effective principal number n + (d-3)/2, a half-integer when d
    is even. L = 2l + d - 2 is the grand angular index. Lambda is the
    centrifugal bracket (d-1)(d-3) + 4l(l+d-2), identically L**2 - 1.
    energy is the dimensionless eigenvalue -1/(2 N**2), in units of
    hbar^2 Z^2 / (mu a0^2).
    """

    N: Fraction
    L: int
    Lambda: int
    energy: Fraction

    def __post_init__(self) -> None:
        if self.N <= 0:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.L < 0:
            raise ValueError(f"L must be nonnegative, got {self.L}")
        if self.Lambda != self.L**2 - 1:
            raise ValueError(
                f"Lambda = {self.Lambda} does not equal L**2 - 1 = {self.L**2 - 1}"
            )
        if self.energy >= 0:
            raise ValueError(f"bound states have negative energy, got {self.energy}")


@dataclass(frozen=True)
class Moment:
    """One dimensionless moment M_k = <(Zr/a0)^k>, held exactly."""

    k: int
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _exact(self.value, "moment value"))
        if self.value <= 0:
            raise ValueError(
                f"moments of a positive density are positive, got M_{self.k} = {self.value}"
            )


@dataclass(frozen=True)
class MomentTable:
    """Contiguous map from order k to M_k for one state, over [kmin, kmax].

    Orders inside the range whose moment diverges are flagged rather than
    stored: missing_orders() lists them and moment() raises
    NonexistentMomentError for them. Construction checks that exactly the
    existing orders are present and that M_0, when covered, equals 1.
    """

    state: QuantumState
    kmin: int
    kmax: int
    entries: dict[int, Moment]

    def __post_init__(self) -> None:
        if self.kmin > self.kmax:
            raise ValueError(f"kmin {self.kmin} exceeds kmax {self.kmax}")
        object.__setattr__(self, "entries", dict(self.entries))
        for k, moment in self.entries.items():
            if moment.k != k:
                raise ValueError(f"moment of order {moment.k} filed under {k}")
        for k in range(self.kmin, self.kmax + 1):
            if moment_exists(self.state, k) != (k in self.entries):
                raise ValueError(
                    f"table must hold exactly the existing orders; order {k} is mismatched"
                )
        if len(self.entries) != len(
            [k for k in self.entries if self.kmin <= k <= self.kmax]
        ):
            raise ValueError("table holds entries outside its declared range")
        if self.kmin <= 0 <= self.kmax and self.entries[0].value != 1:
            raise ValueError("normalization requires M_0 = 1")

    def covers(self, k: int) -> bool:
        return self.kmin <= k <= self.kmax

    def exists(self, k: int) -> bool:
        return moment_exists(self.state, k)

    def moment(self, k: int) -> Moment:
        if not self.covers(k):
            raise LookupError(
                f"order {k} outside table range [{self.kmin}, {self.kmax}]"
            )
        if k not in self.entries:
            raise NonexistentMomentError(
                f"<r^{k}> does not exist for {self.state}; "
                f"lowest existing order is {existence_bound(self.state)}"
            )
        return self.entries[k]

    def value(self, k: int) -> Fraction:
        return self.moment(k).value

    def moments(self) -> list[Moment]:
        return [self.entries[k] for k in sorted(self.entries)]

    def missing_orders(self) -> list[int]:
        return [k for k in range(self.kmin, self.kmax + 1) if k not in self.entries]


def spectral_params(state: QuantumState) -> SpectralParams:
    """Exact N, L, Lambda and dimensionless energy of a valid state."""
    effective_n = Fraction(2 * state.n + state.d - 3, 2)
    grand_l = 2 * state.l + state.d - 2
    bracket = (state.d - 1) * (state.d - 3) + 4 * state.l * (state.l + state.d - 2)
    return SpectralParams(
        N=effective_n,
        L=grand_l,
        Lambda=bracket,
        energy=Fraction(-1) / (2 * effective_n**2),
    )


def existence_bound(state: QuantumState) -> int:
    """Smallest order k for which <r^k> converges.

    The radial density behaves like r^(2l+d-1) at the origin, so the moment
    integral converges exactly when 2l + d + k >= 1.
    """
    return -(2 * state.l + state.d - 1)


def moment_exists(state: QuantumState, k: int) -> bool:
    """True iff the moment integral of order k converges."""
    return k >= existence_bound(state)


def angular_coefficient(state: QuantumState, k: int) -> Fraction:
    """Coefficient c_k = (k/4)(Lambda - (k^2 - 1)) of M_{k-2} in the three-term step.

    Because Lambda = L**2 - 1 this equals (k/4)(L^2 - k^2), so it vanishes
    exactly at k = 0 and |k| = L and nowhere else.
    """
    bracket = spectral_params(state).Lambda
    return Fraction(k, 4) * (bracket - (k * k - 1))
