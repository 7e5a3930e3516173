from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from conftest import quantum_states
from hypothesis import given, settings

from hydromoments import (
    Moment,
    NonexistentMomentError,
    QuantumState,
    TwoTermRangeError,
    ascend,
    closed_form_r,
    descend,
    existence_bound,
    full_table,
    invert_two_term,
    kramers_residual,
    oracle_moment,
    seeds,
    spectral_params,
)


def test_seed_reference_values():
    assert [m.value for m in seeds(QuantumState(1, 0, 3))] == [1, 1]
    assert [m.value for m in seeds(QuantumState(2, 1, 3))] == [Fraction(1, 4), 1]
    assert [m.value for m in seeds(QuantumState(1, 0, 2))] == [4, 1]


@given(quantum_states(max_n=10, max_d=10))
def test_seed_consistency_identity(state):
    # the k = 0 step of the three-term relation ties the two seeds together
    low, norm = seeds(state)
    p = spectral_params(state)
    assert norm.value / p.N**2 - low.value == 0


def test_ascend_reference_tables():
    t = ascend(QuantumState(1, 0, 3), 2)
    assert (t.value(1), t.value(2)) == (Fraction(3, 2), 3)
    t = ascend(QuantumState(2, 1, 3), 2)
    assert (t.value(1), t.value(2)) == (5, 30)
    assert ascend(QuantumState(1, 0, 2), 1).value(1) == Fraction(1, 2)
    assert ascend(QuantumState(1, 0, 5), 1).value(1) == 5


def test_ascend_requires_positive_kmax():
    with pytest.raises(ValueError):
        ascend(QuantumState(1, 0, 3), 0)


def test_two_term_inversion_reference_values():
    state = QuantumState(2, 1, 3)
    low, _ = seeds(state)
    m2 = invert_two_term(state, 0, low)
    assert (m2.k, m2.value) == (-2, Fraction(1, 12))
    m3 = invert_two_term(state, 1, Moment(0, 1))
    assert (m3.k, m3.value) == (-3, Fraction(1, 24))


def test_two_term_inversion_range_errors():
    state = QuantumState(1, 0, 2)  # L = 0: no valid k at all
    with pytest.raises(TwoTermRangeError):
        invert_two_term(state, 0, Moment(-1, 4))
    state = QuantumState(2, 1, 3)  # L = 3
    with pytest.raises(TwoTermRangeError):
        invert_two_term(state, 3, Moment(2, 30))
    with pytest.raises(ValueError):
        invert_two_term(state, 1, Moment(1, 5))  # wrong source order


def test_descend_reference_tables():
    t = descend(QuantumState(2, 1, 3), -3)
    assert (t.value(-2), t.value(-3)) == (Fraction(1, 12), Fraction(1, 24))
    t = descend(QuantumState(3, 2, 3), -4)
    assert t.value(-2) == Fraction(2, 135)
    assert t.value(-3) == Fraction(1, 405)  # fixed by the oracle up front
    assert t.value(-4) == Fraction(2, 3645)
    inverted = invert_two_term(QuantumState(3, 2, 3), 1, Moment(0, Fraction(1)))
    assert inverted.value == t.value(-3)


def test_descend_refuses_orders_below_the_bound():
    with pytest.raises(NonexistentMomentError):
        descend(QuantumState(2, 1, 3), -6)  # bound is -4
    with pytest.raises(NonexistentMomentError):
        descend(QuantumState(1, 0, 2), -2)  # bound is -1, chain never starts
    with pytest.raises(ValueError):
        descend(QuantumState(2, 1, 3), 0)


def test_closed_form_first_moment():
    assert closed_form_r(QuantumState(1, 0, 3)).value == Fraction(3, 2)
    assert closed_form_r(QuantumState(2, 1, 3)).value == 5
    assert closed_form_r(QuantumState(1, 0, 2)).value == Fraction(1, 2)


@given(quantum_states(max_n=9, max_d=9))
def test_closed_form_matches_recurrence(state):
    assert closed_form_r(state).value == ascend(state, 1).value(1)


def test_residual_reference_cases():
    state = QuantumState(1, 0, 3)
    assert kramers_residual(state, 1, ascend(state, 1)).residual == 0
    state = QuantumState(2, 1, 3)
    assert kramers_residual(state, 2, ascend(state, 2)).residual == 0
    state = QuantumState(2, 0, 4)
    assert kramers_residual(state, 3, ascend(state, 3)).residual == 0


def test_residual_holds_for_negative_orders_too():
    state = QuantumState(3, 2, 3)
    table = full_table(state, existence_bound(state), 2)
    for k in range(existence_bound(state) + 2, 3):
        assert kramers_residual(state, k, table).residual == 0


def test_residual_error_paths():
    state = QuantumState(2, 1, 3)
    table = ascend(state, 2)
    with pytest.raises(LookupError):
        kramers_residual(state, 5, table)  # table too short
    wide = full_table(state, -6, 2)
    with pytest.raises(NonexistentMomentError):
        kramers_residual(state, -3, wide)  # M_{-5} does not exist


def test_full_table_reference_windows():
    t = full_table(QuantumState(2, 1, 3), -4, 2)
    expected = {
        -4: Fraction(1, 24),  # fixed by the oracle up front
        -3: Fraction(1, 24),
        -2: Fraction(1, 12),
        -1: Fraction(1, 4),
        0: Fraction(1),
        1: Fraction(5),
        2: Fraction(30),
    }
    assert {m.k: m.value for m in t.moments()} == expected
    assert t.missing_orders() == []

    t = full_table(QuantumState(1, 0, 3), -3, 0)
    assert t.missing_orders() == [-3]
    assert t.value(-2) == 2
    assert t.value(-1) == 1
    assert t.value(0) == 1

    t = full_table(QuantumState(1, 0, 3), 0, 0)
    assert {m.k: m.value for m in t.moments()} == {0: 1}


def test_full_table_windows_that_skip_the_seeds():
    t = full_table(QuantumState(2, 1, 3), 3, 5)
    assert sorted(m.k for m in t.moments()) == [3, 4, 5]
    t = full_table(QuantumState(2, 1, 3), -4, -3)
    assert {m.k: m.value for m in t.moments()} == {
        -4: Fraction(1, 24),
        -3: Fraction(1, 24),
    }
    t = full_table(QuantumState(2, 1, 3), -8, -6)
    assert t.moments() == []
    assert t.missing_orders() == [-8, -7, -6]
    with pytest.raises(ValueError):
        full_table(QuantumState(2, 1, 3), 2, -2)


@given(quantum_states(max_n=6, max_d=7))
@settings(deadline=None, max_examples=40)
def test_every_table_entry_matches_the_oracle(state):
    table = full_table(state, existence_bound(state) - 2, 6)
    for m in table.moments():
        assert m.value == oracle_moment(state, m.k)
    for k in table.missing_orders():
        with pytest.raises(NonexistentMomentError):
            oracle_moment(state, k)


@given(quantum_states(max_n=7, max_d=8))
@settings(deadline=None, max_examples=40)
def test_two_term_matches_descend_chain(state):
    p = spectral_params(state)
    if p.L == 0:
        return
    table = full_table(state, existence_bound(state), max(1, p.L - 2))
    for k in range(p.L):
        inverted = invert_two_term(state, k, table.moment(k - 1))
        assert inverted.value == table.value(-k - 2)


@given(quantum_states(max_n=7, max_d=8), st.integers(1, 8))
@settings(deadline=None, max_examples=40)
def test_positivity_and_log_convexity_of_tables(state, kmax):
    table = full_table(state, existence_bound(state), kmax)
    values = {m.k: m.value for m in table.moments()}
    assert all(v > 0 for v in values.values())
    for k in sorted(values)[1:-1]:
        assert values[k - 1] * values[k + 1] >= values[k] ** 2


def test_tables_are_deterministic_under_threading():
    states = [QuantumState(n, l, d) for n in (2, 3, 4) for l in range(n) for d in (2, 3, 5)]
    serial = [full_table(s, existence_bound(s), 6) for s in states]
    with ThreadPoolExecutor(max_workers=4) as pool:
        threaded = list(pool.map(lambda s: full_table(s, existence_bound(s), 6), states))
    assert serial == threaded
