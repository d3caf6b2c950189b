from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckenorm.field import QSqrtP

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def elements(p):
    return st.builds(lambda a, b: QSqrtP(p, a, b), rationals, rationals)


def test_sqrt_squares_to_p():
    r = QSqrtP.sqrt_p(5)
    assert r * r == 5


def test_half_powers():
    assert QSqrtP.p_half_power(3, 2) == 3
    assert QSqrtP.p_half_power(3, -1) == QSqrtP(3, 0, Fraction(1, 3))
    assert QSqrtP.p_half_power(3, 3) == QSqrtP(3, 0, 3)


def test_json_round_trip():
    x = QSqrtP(7, Fraction(-3, 4), Fraction(5, 9))
    assert x.to_json() == {"rat": "-3/4", "irr": "5/9"}
    assert QSqrtP.from_json(7, x.to_json()) == x


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        QSqrtP(2, 1) + QSqrtP(3, 1)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        QSqrtP(3).inverse()


@given(elements(3), elements(3), elements(3))
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@given(elements(5))
def test_inverse(a):
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert a ** -2 * a ** 2 == 1
