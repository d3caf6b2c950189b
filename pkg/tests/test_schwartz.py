import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckenorm.norm_relations import delta1, phi_p2, nonintegral_delta1_scale
from heckenorm.padic import GElement, Mat2
from heckenorm.residues import ResourceLimitError
from heckenorm.schwartz import (
    Box,
    LatticeElement,
    LevelSubgroup,
    SchwartzFunction,
    act,
    evaluate,
    lattice_membership,
    membership_report,
    stabilizer_contains,
    volume_stab_intersection,
)

FULL, DETP = LevelSubgroup.Full, LevelSubgroup.DetP


def phi0(p):
    return SchwartzFunction.indicator_lattice(p, 0)


def test_evaluate_standard_functions():
    assert evaluate(phi0(3), (0, 0)) == 1
    assert evaluate(phi0(3), (F(1, 3), 0)) == 0
    assert evaluate(phi_p2(3), (9, 10)) == 1
    assert evaluate(phi_p2(3), (9, 4)) == 0


def test_box_sum_and_refinement_agree():
    p = 3
    phi = SchwartzFunction.from_boxes(p, [(2, Box(F(1, 3), 1, 0, 0)), (-1, Box(0, 0, 0, 0))])
    for v in [(F(1, 3), 5), (F(4, 3), 2), (0, 0), (F(2, 3), 1)]:
        assert evaluate(phi.refine(phi.R + 1, phi.d + 1), v) == evaluate(phi, v)
    assert phi.refine(phi.R + 1, phi.d + 1) == phi


def test_stabilizer():
    p = 3
    assert stabilizer_contains(phi0(p), Mat2(1, 2, 4, 9))
    assert not stabilizer_contains(phi0(p), Mat2.diag(p, 1))
    rng = random.Random(1)
    for _ in range(5):
        m = Mat2(*(rng.randint(-5, 5) for _ in range(4)))
        k = Mat2(1 + 9 * m.a, 9 * m.b, 9 * m.c, 1 + 9 * m.d)
        assert stabilizer_contains(phi_p2(p), k)


def test_action_composes_as_representation():
    # act(phi, h)(v) = phi(v h), so acting by h then g is acting by g h
    p = 3
    phi = phi_p2(p)
    g, h = Mat2(1, 1, 0, 1), Mat2(2, 0, 3, 1)
    assert act(act(phi, h), g) == act(phi, g @ h)
    v = (F(1, 3), 2)
    vg = (v[0] * g.a + v[1] * g.c, v[0] * g.b + v[1] * g.d)
    assert evaluate(act(phi, g), v) == evaluate(phi, vg)


def test_volume_stab_intersection_examples():
    assert volume_stab_intersection(phi0(3), GElement.identity(), FULL) == 1
    for p in (2, 3):
        assert volume_stab_intersection(phi0(p), GElement.identity(), DETP) == F(1, p - 1)
    # stabiliser of phi_{p,2} in the det = 1 mod p subgroup: index p^2 (p-1)^2 (p+1)
    assert volume_stab_intersection(phi_p2(3), GElement.identity(), DETP) == F(1, 144)
    assert volume_stab_intersection(phi_p2(2), GElement.identity(), DETP) == F(1, 12)


def test_volume_ceiling_is_enforced():
    with pytest.raises(ResourceLimitError):
        volume_stab_intersection(phi_p2(3), GElement.identity(), DETP, ceiling=100)


def test_membership_examples():
    p = 3
    assert lattice_membership([LatticeElement(1, phi0(p), GElement.identity(), FULL)], "S")
    bad = LatticeElement(F(1, p - 1), phi0(p), GElement.identity(), FULL)
    assert not lattice_membership([bad], "S")
    # S0 requires vanishing at the origin
    assert not lattice_membership([LatticeElement(1, phi0(p), GElement.identity(), FULL)], "S0")
    with pytest.raises(ValueError):
        lattice_membership([LatticeElement(1, phi0(p), GElement.identity(), FULL),
                            LatticeElement(1, phi0(p), GElement.identity(), DETP)])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_delta1_membership_depends_on_scale(p):
    assert lattice_membership(delta1(p), "S0")
    ok, reasons = membership_report(delta1(p, scale=nonintegral_delta1_scale(p)), "S0")
    assert not ok and reasons


def test_json_boxes_round_trip():
    phi = SchwartzFunction.from_boxes(3, [(F(1, 2), Box(F(1, 3), 1, 2, 1)), (3, Box(0, 2, 1, 2))])
    assert SchwartzFunction.from_json_obj(3, phi.to_json_obj()) == phi


coords = st.fractions(min_value=-4, max_value=4, max_denominator=9)


@given(st.integers(-1, 2), st.integers(-1, 2), coords, coords, coords, coords)
def test_evaluate_matches_box_membership(k, l, a, b, x, y):  # noqa: E741
    p = 3
    phi = SchwartzFunction.from_boxes(p, [(1, Box(a, k, b, l))])

    def in_coset(t, c, e):
        diff = (t - c) / F(p) ** e
        return diff.denominator % p != 0

    expected = int(in_coset(x, a, k) and in_coset(y, b, l))
    assert evaluate(phi, (x, y)) == expected


@pytest.mark.parametrize("p", [2, 3])
def test_full_volume_is_p_minus_one_times_detp(p):
    # holds when the stabiliser surjects onto det residues, as for these two
    for phi in (phi0(p), phi_p2(p)):
        full = volume_stab_intersection(phi, GElement.identity(), FULL)
        assert full == (p - 1) * volume_stab_intersection(phi, GElement.identity(), DETP)
