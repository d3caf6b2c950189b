import json
import random
from fractions import Fraction as F

import pytest

from heckenorm.cosets import CanonicalCoset, PGCosetFunction, hecke_act, trace_level, xi_c
from heckenorm.hecke import HeckeElement, LocalizedHecke, dual, euler_at_one, is_integral, theta_eval
from heckenorm.norm_relations import (
    Falsification,
    IdealCertificate,
    PreconditionError,
    apply_to_f0,
    certificate,
    check_against,
    delta0,
    delta1,
    independence_check,
    integral_delta1_scale,
    mod_ell_certificate,
    operator_of_function,
    p_delta,
    phi_p2,
    nonintegral_delta1_scale,
    q_operator,
    split_function,
)
from heckenorm.padic import GElement, Mat2
from heckenorm.schwartz import LatticeElement, LevelSubgroup, SchwartzFunction, volume_stab_intersection
from heckenorm.whittaker import lambda_value, random_satake

C = CanonicalCoset
FULL = LevelSubgroup.Full


def phi0(p):
    return SchwartzFunction.indicator_lattice(p, 0)


def test_q_operator_at_origin(sat3):
    assert theta_eval(q_operator(3, C(0, 0, 0, 0)), sat3) == 1 - sat3.omega


@pytest.mark.parametrize("x", [C(0, 0, 0, 0), C(1, -1, 2, 0), C(0, 0, -2, 0), C(0, 1, 1, 2), C(0, 0, -1, 3)])
def test_q_operator_evaluates_lambda(x):
    rng = random.Random(7)
    for p in (2, 3):
        sat = random_satake(p, rng)
        assert is_integral(q_operator(p, x))
        assert theta_eval(q_operator(p, x), sat) == lambda_value(PGCosetFunction.indicator(p, x), sat)


def test_p_delta_examples():
    p = 3
    assert p_delta([LatticeElement(1, phi0(p), GElement.identity(), FULL)]) == LocalizedHecke(
        HeckeElement.one(p), 0
    )
    central = GElement(Mat2.scalar(p), Mat2.scalar(p))
    # xi_c of the central translate is ch(1,0,0,0) = S_p^{-1} f0 under the right action
    assert p_delta([(1, phi0(p), central)]) == LocalizedHecke(HeckeElement.S_p(p, -1), 0)


def test_p_delta_of_phi_p2_is_integral():
    p = 3
    vol = volume_stab_intersection(phi_p2(p), GElement.identity(), FULL)
    P = p_delta([LatticeElement(1 / vol, phi_p2(p), GElement.identity(), FULL)])
    assert P.denom_power == 0 and is_integral(P.numer)


def test_operator_reproduces_function():
    p = 3
    f = PGCosetFunction(p, {C(0, 0, 1, 1): 2, C(1, 0, 0, 0): -1, C(0, 1, -1, 2): F(1, 3)})
    assert check_against(operator_of_function(f), f)


def test_check_against_examples():
    p = 3
    assert apply_to_f0(LocalizedHecke(HeckeElement.one(p), 0)) == PGCosetFunction.f0(p)
    f = xi_c(trace_level(delta0(p)))
    assert check_against(LocalizedHecke(HeckeElement.one(p) * (p - 1), 0), f)
    assert not check_against(LocalizedHecke(HeckeElement.one(p), 0), f)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_delta0_certificate(p):
    c = certificate(delta0(p), "S")
    assert c.target == LocalizedHecke(HeckeElement.one(p) * (p - 1), 0)
    assert c.A == HeckeElement.one(p) and c.B.is_zero() and c.verified


def test_frozen_xi_c_of_traced_delta1_at_two():
    # computed by enumeration mod 2^2 and equal to dual(P_2(1)) f0
    f = xi_c(trace_level(delta1(2)))
    assert f == PGCosetFunction(2, {
        C(0, 0, 0, 0): F(1, 2), C(0, 0, 0, 1): F(-1, 2),
        C(1, 0, 0, 0): F(-1, 2), C(1, 0, 0, 1): F(1, 2),
    })
    assert f == hecke_act(dual(euler_at_one(2)), PGCosetFunction.f0(2))


def test_delta1_certificate_and_scale():
    assert integral_delta1_scale(2) == 6 and integral_delta1_scale(3) == 48
    # ratio to the nonintegral coefficient is p (p-1)^4 (p+1)^2
    assert integral_delta1_scale(3) / nonintegral_delta1_scale(3) == 768
    c = certificate(delta1(2), "S0")
    assert c.target == LocalizedHecke(dual(euler_at_one(2)), 0)
    assert c.A.is_zero() and c.B == HeckeElement.one(2)


def test_certificate_preconditions():
    p = 3
    with pytest.raises(PreconditionError):
        certificate([LatticeElement(1, phi0(p), GElement.identity(), FULL)], "S")
    bad = LatticeElement(F(1, 7), phi0(p), GElement.identity(), LevelSubgroup.DetP)
    with pytest.raises(PreconditionError):
        certificate([bad], "S")
    with pytest.raises(ValueError):
        certificate(delta0(p), "T")


def test_split_function_needs_p_minus_one_on_n_zero():
    p = 3
    with pytest.raises(Falsification):
        split_function(PGCosetFunction.f0(p))
    A, B = split_function(PGCosetFunction.f0(p) * (p - 1))
    assert A == q_operator(p, C(0, 0, 0, 0)) and B.is_zero()


def test_mod_ell_examples():
    c0 = certificate(delta0(3), "S")
    red = mod_ell_certificate(c0, 2)
    assert red["target"] == {} and red["B"] == {}
    c1 = certificate(delta1(3), "S0")
    red = mod_ell_certificate(c1, 2)
    assert red["target"] == red["P'"]
    with pytest.raises(ValueError):
        mod_ell_certificate(c1, 5)


def test_certificate_json_round_trip():
    c = certificate(delta0(3), "S")
    obj = json.loads(c.to_json())
    back = IdealCertificate.from_json_obj(obj, delta=c.delta)
    assert back.target == c.target and back.A == c.A and back.B == c.B and back.verified


def test_independence_examples():
    p = 3
    assert independence_check(p, [C(0, 1, 2, 1)])
    assert not independence_check(p, [C(0, 0, 1, 1), C(0, 0, 1, 1)])


def test_q_part_vanishes_without_conductor():
    from heckenorm.norm_relations import _parts
    _, _, Q = _parts(3, C(0, 0, 1, 0))
    assert Q.is_zero()
    _, _, Q = _parts(3, C(0, 0, 0, 2))
    assert not Q.is_zero() and is_integral(q_operator(3, C(0, 0, 0, 2)))


def test_certificate_reverifies_after_round_trip():
    rng = random.Random(31)
    from heckenorm.sampling import random_certified_delta
    d = random_certified_delta(3, rng, LevelSubgroup.DetP, "S")
    c = certificate(d, "S")
    back = IdealCertificate.from_json_obj(json.loads(c.to_json()), delta=d)
    assert back.identity_holds()
    assert check_against(back.target, xi_c(trace_level(d)))


def test_lambda_of_xi_c_is_operator_image():
    # Lambda(P f0) = Theta(dual P) Lambda(f0) and Lambda(f0) = 1 - omega
    from heckenorm.sampling import random_certified_delta
    rng = random.Random(17)
    for _ in range(20):
        d = random_certified_delta(3, rng, FULL, "S")
        sat = random_satake(3, rng)
        P = p_delta(d)
        assert lambda_value(xi_c(d), sat) == P.dual().theta(sat) * (1 - sat.omega)
