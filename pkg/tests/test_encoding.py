"""Round-trip and injectivity of the state codec."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from amortcheck.encoding import decode, encode

plain = st.recursive(
    st.none()
    | st.booleans()
    | st.integers(min_value=-10**6, max_value=10**6)
    | st.text(alphabet='ab"\\x', max_size=6)
    | st.fractions(max_denominator=50),
    lambda inner: st.tuples(inner) | st.tuples(inner, inner) | st.tuples(),
    max_leaves=12,
)


@given(plain)
def test_round_trip(value):
    assert decode(encode(value)) == value


@given(plain, plain)
def test_injective_on_distinct_values(a, b):
    if a != b:
        assert encode(a) != encode(b)


def test_specific_encodings_stay_distinct():
    # int vs string vs fraction look-alikes
    assert encode(1) != encode("1")
    assert encode(Fraction(1, 2)) != encode("1/2")
    assert encode(()) != encode("")
    assert encode((1, 2)) != encode((12,))
    assert encode(True) != encode(1)


def test_decode_rejects_garbage():
    for bad in ["", "z", "i", 't(i1', 's"ab', "i1junk"]:
        with pytest.raises(ValueError):
            decode(bad)
