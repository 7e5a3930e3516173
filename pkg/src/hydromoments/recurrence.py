"""Moment tables from the Kramers-Pasternack relations.

Positive orders climb from the seeds M_{-1} = 1/N^2 and M_0 = 1 through the
three-term recurrence

    (k+1)/N^2 M_k - (2k+1) M_{k-1} + c_k M_{k-2} = 0,
    c_k = (k/4)(Lambda - (k^2 - 1)).

Negative orders descend through the same relation solved for M_{k-2}, but
the chain has to be bootstrapped by the two-term inversion relation because
c_0 = 0 leaves the k = 0 step silent about M_{-2}. Within the existence
bound every division is by a nonzero exact rational, so tables are exact
and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Moment,
    MomentTable,
    NonexistentMomentError,
    QuantumState,
    angular_coefficient,
    existence_bound,
    factorial,
    spectral_params,
)

__all__ = [
    "TwoTermRangeError",
    "KramersResidual",
    "seeds",
    "ascend",
    "invert_two_term",
    "descend",
    "closed_form_r",
    "kramers_residual",
    "full_table",
]


class TwoTermRangeError(ValueError):
    """The two-term inversion was asked for an index outside [0, L-1]."""


@dataclass(frozen=True)
class KramersResidual:
    """Left-hand side of the hypervirial identity; zero on consistent tables."""

    state: QuantumState
    k: int
    residual: Fraction


def seeds(state: QuantumState) -> tuple[Moment, Moment]:
    """The two seed moments (M_{-1}, M_0) = (1/N^2, 1)."""
    params = spectral_params(state)
    return Moment(-1, 1 / params.N**2), Moment(0, Fraction(1))


def _seed_values(state: QuantumState) -> dict[int, Fraction]:
    low, norm = seeds(state)
    return {low.k: low.value, norm.k: norm.value}


def _climb(state: QuantumState, values: dict[int, Fraction], kmax: int) -> None:
    n_squared = spectral_params(state).N ** 2
    for k in range(1, kmax + 1):
        coeff = angular_coefficient(state, k)
        values[k] = n_squared / (k + 1) * ((2 * k + 1) * values[k - 1] - coeff * values[k - 2])


def _sink(state: QuantumState, values: dict[int, Fraction], kmin: int) -> None:
    # Callers guarantee kmin >= -(L+1) and kmin <= -2, hence L >= 1 and the
    # bootstrap index 0 is inside the two-term validity range [0, L-1].
    values[-2] = invert_two_term(state, 0, Moment(-1, values[-1])).value
    n_squared = spectral_params(state).N ** 2
    for target in range(-3, kmin - 1, -1):
        j = target + 2
        # j runs through (-L, 0) exclusive because kmin >= -(L+1), and
        # c_j only vanishes at j = 0 and |j| = L, so the division is safe.
        coeff = angular_coefficient(state, j)
        values[target] = (
            (2 * j + 1) * values[j - 1] - (j + 1) / n_squared * values[j]
        ) / coeff


def _table(
    state: QuantumState, values: dict[int, Fraction], kmin: int, kmax: int
) -> MomentTable:
    entries = {k: Moment(k, v) for k, v in values.items() if kmin <= k <= kmax}
    return MomentTable(state=state, kmin=kmin, kmax=kmax, entries=entries)


def ascend(state: QuantumState, kmax: int) -> MomentTable:
    """Table of M_{-1} .. M_kmax by upward recurrence from the seeds."""
    if kmax < 1:
        raise ValueError(f"ascend needs kmax >= 1, got {kmax}")
    values = _seed_values(state)
    _climb(state, values, kmax)
    return _table(state, values, -1, kmax)


def invert_two_term(state: QuantumState, k: int, m_km1: Moment) -> Moment:
    """M_{-k-2} from M_{k-1} through the two-term inversion relation.

    Valid for 0 <= k <= L - 1, which is exactly the range in which the
    produced order -k-2 still exists. The factor is
    (2/N)^(2k+1) (L-1-k)! / (L+k)!.
    """
    params = spectral_params(state)
    if not 0 <= k <= params.L - 1:
        if params.L == 0:
            raise TwoTermRangeError(
                f"two-term inversion has an empty valid range for {state} (L = 0)"
            )
        raise TwoTermRangeError(
            f"two-term inversion needs 0 <= k <= L-1 = {params.L - 1}, got k = {k}"
        )
    if m_km1.k != k - 1:
        raise ValueError(f"expected the moment of order k-1 = {k - 1}, got {m_km1.k}")
    ratio = Fraction(factorial(params.L - 1 - k), factorial(params.L + k))
    value = (2 / params.N) ** (2 * k + 1) * ratio * m_km1.value
    return Moment(-k - 2, value)


def descend(state: QuantumState, kmin: int) -> MomentTable:
    """Table of M_kmin .. M_0 by downward recurrence.

    M_{-2} comes from the two-term inversion at k = 0; every deeper order
    follows from the three-term relation solved for M_{k-2}. Orders below
    the existence bound are refused, not computed.
    """
    if kmin > -2:
        raise ValueError(f"descend needs kmin <= -2, got {kmin}")
    bound = existence_bound(state)
    if kmin < bound:
        raise NonexistentMomentError(
            f"<r^{kmin}> does not exist for {state}; lowest existing order is {bound}"
        )
    values = _seed_values(state)
    _sink(state, values, kmin)
    return _table(state, values, kmin, 0)


def closed_form_r(state: QuantumState) -> Moment:
    """First moment M_1 = (3/2) N^2 - Lambda/8 in closed form.

    The equivalent expanded polynomial in (n, l, d) is evaluated as well;
    the two expressions are the same rational function and must agree.
    """
    params = spectral_params(state)
    bracket = Fraction(3, 2) * params.N**2 - Fraction(params.Lambda, 8)
    n, l, d = state.n, state.l, state.d
    polynomial = Fraction(
        d * d + d * (6 * n - 2 * l - 7) + 2 * (3 * n * n - 9 * n - l * l + 2 * l + 6), 4
    )
    assert bracket == polynomial
    return Moment(1, bracket)


def kramers_residual(state: QuantumState, k: int, table: MomentTable) -> KramersResidual:
    """Hypervirial identity residual at order k, evaluated on a table.

    The identity reads, for a potential v with dimensionless energy e,

        2(k+1) e M_k + [ -<x^{k+1} v'(x)> - 2(k+1) <x^k v(x)> ] - c_k M_{k-2},

    and is zero for any eigenstate. Here the Coulomb case v(x) = -1/x is
    wired in, so both potential averages collapse onto M_{k-1}; other
    potentials would need their own averages at this extension point.
    Orders k, k-1, k-2 must all be covered by the table and exist.
    """
    params = spectral_params(state)
    m_k = table.value(k)
    m_km1 = table.value(k - 1)
    m_km2 = table.value(k - 2)
    v_prime_average = m_km1  # <x^{k+1} * (1/x^2)>
    v_average = -m_km1  # <x^k * (-1/x)>
    residual = (
        2 * (k + 1) * params.energy * m_k
        - v_prime_average
        - 2 * (k + 1) * v_average
        - angular_coefficient(state, k) * m_km2
    )
    return KramersResidual(state=state, k=k, residual=residual)


def full_table(state: QuantumState, kmin: int, kmax: int) -> MomentTable:
    """Table over [kmin, kmax] with overlapping orders computed once.

    Orders below the existence bound are flagged as missing instead of
    raising, so callers can request any window.
    """
    if kmin > kmax:
        raise ValueError(f"kmin {kmin} exceeds kmax {kmax}")
    values = _seed_values(state)
    lowest = max(kmin, existence_bound(state))
    if kmax >= 1:
        _climb(state, values, kmax)
    if lowest <= -2 and lowest <= kmax:
        _sink(state, values, lowest)
    return _table(state, values, kmin, kmax)
