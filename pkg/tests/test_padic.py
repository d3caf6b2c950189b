from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckenorm.padic import (
    Mat2,
    hermite_form,
    in_gl2_zp,
    iwasawa_decompose,
    ord_p,
    smith_normal_form,
    solve_double_coset,
    spread,
    to_residue,
    unit_part,
    valuation,
)


@pytest.mark.parametrize("p,q,v", [(3, 1, 0), (3, F(9, 2), 2), (5, F(3, 25), -2)])
def test_valuation(p, q, v):
    assert valuation(p, q) == v


def test_valuation_of_zero_is_a_domain_error():
    with pytest.raises(ValueError):
        valuation(3, 0)
    with pytest.raises(ValueError):
        unit_part(3, 0)
    assert ord_p(3, 0) == float("inf")


def test_residue_of_fraction():
    # 1/2 mod 9 is 5
    assert to_residue(3, F(1, 2), 2) == 5
    with pytest.raises(ValueError):
        to_residue(3, F(1, 3), 2)


@pytest.mark.parametrize(
    "m,expected",
    [(Mat2.identity(), True), (Mat2.diag(3, 1), False), (Mat2(1, F(1, 3), 0, 1), False)],
)
def test_in_gl2_zp(m, expected):
    assert in_gl2_zp(3, m) is expected


def _check_iwasawa(p, g):
    t1, t2, y, k = iwasawa_decompose(p, g)
    assert in_gl2_zp(p, k)
    b = g @ k.inv()
    assert b.c == 0
    assert valuation(p, b.a) == t1 and valuation(p, b.d) == t2
    return t1, t2, y, k


def test_iwasawa_examples():
    assert iwasawa_decompose(3, Mat2.identity()) == (0, 0, 0, Mat2.identity())
    for p in (2, 3, 5):
        assert iwasawa_decompose(p, Mat2(p, 1, 0, 1)) == (1, 0, 1, Mat2.identity())
    t1, t2, _, _ = _check_iwasawa(3, Mat2(1, 0, 1, 1))
    assert (t1, t2) == (0, 0)


def test_smith_and_hermite_examples():
    assert smith_normal_form(3, Mat2.diag(3, 1))[:2] == (0, 1)
    assert smith_normal_form(3, Mat2(9, 1, 0, 3))[:2] == (0, 3)
    assert smith_normal_form(3, Mat2.identity())[:2] == (0, 0)
    assert hermite_form(3, Mat2(9, 1, 0, 3)) == (2, 1, F(1))


def test_solve_double_coset():
    assert solve_double_coset(3, Mat2.identity(), Mat2.identity()) is not None
    assert solve_double_coset(3, Mat2.diag(3, 1), Mat2.identity()) is None
    a, b = Mat2.diag(3, 1), Mat2.diag(F(1, 3), 1)
    k = solve_double_coset(3, a, b)
    assert in_gl2_zp(3, k) and in_gl2_zp(3, a @ k @ b)


def test_spread_of_integral_unit_is_zero():
    assert spread(3, Mat2(1, 2, 3, 7)) == 0
    assert spread(3, Mat2.diag(9, 1)) == 2


entry = st.fractions(min_value=-30, max_value=30, max_denominator=9)


@given(entry, entry, entry, entry, st.sampled_from([2, 3, 5]))
def test_iwasawa_property(a, b, c, d, p):
    g = Mat2(a, b, c, d)
    if g.det() != 0:
        _check_iwasawa(p, g)


@given(entry, entry, entry, entry, st.sampled_from([2, 3]))
def test_smith_divisors_property(a, b, c, d, p):
    g = Mat2(a, b, c, d)
    if g.det() == 0:
        return
    lo, hi, k1, k2 = smith_normal_form(p, g)
    assert lo <= hi
    assert lo == g.minval(p) and lo + hi == valuation(p, g.det())
    assert in_gl2_zp(p, k1) and in_gl2_zp(p, k2)
