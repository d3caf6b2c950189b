import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckenorm.cosets import CanonicalCoset, PGCosetFunction, hecke_act
from heckenorm.field import QSqrtP
from heckenorm.hecke import HeckeElement, dual
from heckenorm.schwartz import SchwartzFunction
from heckenorm.whittaker import (
    DegenerateSatakeError,
    FormalSeries,
    RationalFunctionX,
    cauchy_closed_form,
    gauss_unit_integral,
    gen_l_inverse_poly,
    jpss_period,
    jpss_zeta,
    l_factor,
    lambda_closed_form,
    lambda_closed_form_function,
    lambda_series,
    lambda_value,
    random_satake,
    schur_value,
    theta_x_eval,
    whittaker_sph,
)
from helpers import sat_of

C = CanonicalCoset


def q(p, v):
    return QSqrtP(p, v)


def test_schur_values():
    a, b = q(3, 2), q(3, 1)
    assert schur_value(0, a, b) == 1
    assert schur_value(2, a, b) == 7
    assert schur_value(-2, a, b) == F(-1, 2)
    assert schur_value(-1, a, b) == 0
    assert schur_value(3, a, a) == 4 * a ** 3
    with pytest.raises(ValueError):
        schur_value(-3, a, b)


def test_spherical_whittaker():
    sat = sat_of(3, 2, 1, 3, 1)
    assert whittaker_sph(1, sat, 0) == 1
    assert whittaker_sph(1, sat, -1) == 0
    assert whittaker_sph(1, sat, 1) == QSqrtP.sqrt_p(3)


def test_gauss_unit_integral():
    p = 3
    assert gauss_unit_integral(p, 0, float("inf")) == 1
    assert gauss_unit_integral(p, 0, 0) == 1
    assert gauss_unit_integral(p, 0, -1) == F(-1, p - 1)
    assert gauss_unit_integral(p, 0, -3) == 0
    assert gauss_unit_integral(p, 2, -3) == F(-1, p - 1)


def test_gauss_unit_integral_by_character_sum():
    # average of exp(2 pi i a / p^j) over units a mod p^j: Ramanujan sum / phi(p^j)
    import cmath
    for p in (2, 3, 5):
        for j in range(1, 4):
            units = [a for a in range(p ** j) if a % p]
            avg = sum(cmath.exp(2j * cmath.pi * a / p ** j) for a in units) / len(units)
            assert abs(avg - float(gauss_unit_integral(p, 0, -j))) < 1e-12


def test_l_factors():
    sat = sat_of(3, 2, 5, 3, 7)
    assert l_factor("rankin", sat).series(0).coeffs[0] == 1
    assert l_factor("omega2s", sat).series(2).coeffs == [1, 0, sat.omega]
    gen = l_factor(("gen", 1, 1), sat)
    assert gen == RationalFunctionX(3, [q(3, 1)], [q(3, 1), q(3, 0), -sat.omega])
    with pytest.raises(ValueError):
        l_factor("nope", sat)
    with pytest.raises(DegenerateSatakeError):
        l_factor("rankin", sat_of(3, 2, 1, 3, 1))


def test_gen_polynomial_example():
    sat = sat_of(3, 2, 1, 3, 1)
    assert gen_l_inverse_poly(sat, 1, 3) == [q(3, 7), q(3, -24), q(3, 12)]


def test_series_matches_closed_form_example(sat3):
    x = C(0, 0, 1, 1)
    s = lambda_series(x, sat3, 12)
    assert s == lambda_closed_form(x, sat3).series(12, s.start)


def test_series_order_cap(sat3):
    with pytest.raises(ValueError):
        lambda_series(C(0, 0, 0, 0), sat3, 20)


def test_spherical_closed_form(sat3):
    lam = lambda_closed_form(C(0, 0, 0, 0), sat3)
    expected = l_factor("rankin", sat3) * RationalFunctionX(
        3, [q(3, 1), q(3, 0), -sat3.omega], [q(3, 1)]
    )
    assert lam == expected


def test_lambda_value_examples(sat3):
    assert lambda_value(PGCosetFunction.f0(3), sat3) == 1 - sat3.omega
    assert lambda_value(PGCosetFunction(3), sat3) == 0


def test_theta_x_eval_examples():
    sat = sat_of(3, 2, 1, 3, 1)
    one = theta_x_eval(HeckeElement.one(3), sat)
    assert one == RationalFunctionX.const(3, 1)
    assert theta_x_eval(HeckeElement.S(3, 2), sat) == RationalFunctionX(3, [q(3, 3)], [q(3, 1)], 2)
    tt = HeckeElement.T(3, 1) * HeckeElement.T(3, 2)
    assert theta_x_eval(tt, sat) == RationalFunctionX(3, [q(3, 3 * 3 * 4)], [q(3, 1)], 1)


def test_cauchy_identity():
    # sum_n s_n(a1, b1) s_n(a2, b2) X^n, summed directly
    sat = sat_of(5, 2, F(1, 3), -1, 4)
    direct = [schur_value(n, sat.a1, sat.b1) * schur_value(n, sat.a2, sat.b2) for n in range(10)]
    assert cauchy_closed_form(sat).series(9).coeffs == direct


def test_jpss_examples(sat3):
    phi0 = SchwartzFunction.indicator_lattice(3, 0)
    assert jpss_zeta(phi0, sat3) == l_factor("rankin", sat3)
    assert jpss_zeta(SchwartzFunction.zero(3), sat3) == RationalFunctionX.const(3, 0)
    assert jpss_period(phi0, sat3) == 1
    assert jpss_period(phi0 * 2, sat3) == 2


def test_jpss_zeta_of_shrunken_lattice(sat3):
    # ch(p Z_p^2) = phi0 minus the unit shell: Z = omega X^2 L
    f = jpss_zeta(SchwartzFunction.indicator_lattice(3, 1), sat3)
    assert f == l_factor("rankin", sat3) * RationalFunctionX(3, [sat3.omega], [q(3, 1)], 2)


def test_formal_series_equality_respects_start():
    a = FormalSeries(3, [q(3, 1)], 4, 0)
    b = FormalSeries(3, [q(3, 1)], 4, 2)
    assert a != b


def test_random_satake_is_generic_and_seeded():
    a = random_satake(3, random.Random(4))
    b = random_satake(3, random.Random(4))
    assert a.is_generic() and (a.a1, a.b2) == (b.a1, b.b2)


# -- properties

cosets = st.builds(
    lambda r0, r1, m, n: C(r0, r1, m if n == 0 or m > -n else 1 - n, n),
    st.integers(-2, 2), st.integers(-2, 2), st.integers(-3, 3), st.integers(0, 3),
)
seeds = st.integers(0, 10 ** 6)


@given(cosets, seeds, st.sampled_from([2, 3, 5]))
def test_series_equals_closed_form(x, seed, p):
    sat = random_satake(p, random.Random(seed))
    s = lambda_series(x, sat, 12)
    assert s == lambda_closed_form(x, sat).series(12, s.start)


@given(st.dictionaries(cosets, st.integers(-3, 3), max_size=3), seeds,
       st.sampled_from(["S1", "S2", "T1", "T2", "S1inv"]))
def test_equivariance(support, seed, name):
    p = 3
    theta = {
        "S1": HeckeElement.S(p, 1), "S2": HeckeElement.S(p, 2), "T1": HeckeElement.T(p, 1),
        "T2": HeckeElement.T(p, 2), "S1inv": HeckeElement.S(p, 1, -1),
    }[name]
    f = PGCosetFunction(p, support)
    sat = random_satake(p, random.Random(seed))
    lhs = lambda_closed_form_function(hecke_act(theta, f), sat)
    rhs = theta_x_eval(dual(theta), sat) * lambda_closed_form_function(f, sat)
    assert lhs == rhs
