import hypothesis.strategies as st

from hydromoments import QuantumState


@st.composite
def quantum_states(draw, max_n=8, max_d=8):
    n = draw(st.integers(1, max_n))
    l = draw(st.integers(0, n - 1))
    d = draw(st.integers(2, max_d))
    return QuantumState(n, l, d)
