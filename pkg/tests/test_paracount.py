from fractions import Fraction

import pytest

from artifact.bundle import BundleShape, Divisor, divisor_for_profile
from artifact.ff import field_of_size
from artifact.ffmat import enumerate_flags, gl_order, unipotent_invariant
from artifact.paracount import (
    NoTwistCharacter, check_multipartition, class_count_H, count_A_direct, count_A_twist,
    count_I_direct, count_M, count_M_orbits, end_algebra, full_flags, is_geom_indecomposable,
    is_indecomposable, position_check, unipotent_histogram,
)

F2, F3 = field_of_size(2), field_of_size(3)
FULL = (2, 1, 0)


def div(Q, profile):
    return divisor_for_profile(field_of_size(Q), profile, allow_infinity=True)


def shape(text):
    return BundleShape.parse(text)


def test_count_M_one_point_is_transitive():
    assert count_M(shape("0,0"), div(2, (1,)), ((1, 1),)) == 1


@pytest.mark.parametrize("text,Q,profile", [("0,0", 2, (1, 1, 1)), ("1,0", 3, (2, 1)), ("0,0,0", 2, (1, 1))])
def test_count_M_no_flags_is_one(text, Q, profile):
    sh = shape(text)
    mu = tuple((sh.rank,) for _ in profile)
    assert count_M(sh, div(Q, profile), mu) == 1


def test_count_M_split_one_point():
    # Aut acts on the three lines at t=0 through [[1, b], [0, 1]]: orbits {e1}, {e2, e1+e2}
    assert count_M(shape("1,0"), div(2, (1,)), ((1, 1),)) == 2


@pytest.mark.parametrize("text,Q,profile", [
    ("0,0", 2, (1, 1, 1)), ("1,0", 2, (1, 1, 1)), ("0,0", 3, (1, 1, 1)), ("0,0", 2, (2, 1)),
    ("1,-1", 2, (1, 1, 1)), ("0,0,0", 2, (1, 1)),
])
def test_burnside_matches_orbit_enumeration(text, Q, profile):
    sh = shape(text)
    mu = full_flags(sh.rank, len(profile))
    D = div(Q, profile)
    assert count_M(sh, D, mu) == count_M_orbits(sh, D, mu)


def test_end_algebra_examples():
    sh = shape("0,0")
    F = F3
    D = divisor_for_profile(F, (1, 1, 1))
    lines = enumerate_flags(2, FULL, F)
    assert end_algebra(sh, Divisor(F, ()), []).dim == 4
    one = end_algebra(sh, Divisor(F, D.points[:1]), lines[:1])
    assert one.dim == 3
    assert not is_geom_indecomposable(one) and not is_indecomposable(one)
    three = end_algebra(sh, D, lines[:3])
    assert three.dim == 1
    assert is_geom_indecomposable(three) and is_indecomposable(three)


def test_full_matrix_algebra_decomposes():
    alg = end_algebra(shape("0,0"), Divisor(F2, ()), [])
    assert not is_geom_indecomposable(alg) and not is_indecomposable(alg)


@pytest.mark.parametrize("Q", [2, 3])
def test_two_points_never_indecomposable(Q):
    assert count_A_direct(shape("0,0"), div(Q, (1, 1)), full_flags(2, 2)) == 0


@pytest.mark.parametrize("Q,profile,value", [
    (3, (1, 1, 1, 1), 7), (2, (2, 1, 1), 4), (3, (2, 1, 1), 5), (2, (3, 1), 3), (3, (2, 2), 3), (2, (4,), 2),
])
def test_trivial_rank_two_table(Q, profile, value):
    assert count_A_direct(shape("0,0"), div(Q, profile), full_flags(2, len(profile))) == value


@pytest.mark.parametrize("Q", [2, 3])
def test_split_three_points(Q):
    assert count_A_direct(shape("1,0"), div(Q, (1, 1, 1)), full_flags(2, 3)) == 1


@pytest.mark.parametrize("Q,text,profile,value", [
    (3, "0,0", (1, 1, 1, 1), 7), (3, "0,0", (1, 1), 0), (5, "1,0", (1, 1, 1), 1), (3, "1,-1", (1, 1, 1, 1), 1),
])
def test_twist_route(Q, text, profile, value):
    sh = shape(text)
    D = div(Q, profile)
    mu = full_flags(2, len(profile))
    assert count_A_twist(sh, D, mu) == value
    assert count_A_direct(sh, D, mu) == value


def test_twist_needs_character():
    with pytest.raises(NoTwistCharacter):
        count_A_twist(shape("0,0"), div(2, (1, 1, 1)), full_flags(2, 3))


@pytest.mark.parametrize("Q,profile", [(2, (1, 1, 1)), (3, (1, 1, 1)), (2, (2, 1))])
def test_gap_vanishing(Q, profile):
    # gap + 1 >= l kills everything
    l = sum(profile)
    sh = BundleShape((l - 1, 0), (1, 1))
    assert count_A_direct(sh, div(Q, profile), full_flags(2, len(profile))) == 0


@pytest.mark.parametrize("Q", [2, 3])
def test_rational_points_give_A_equal_I(Q):
    sh = shape("0,0")
    D = div(Q, (1, 1, 1))
    for mu in [full_flags(2, 3), ((1, 1), (2,), (1, 1))]:
        assert count_A_direct(sh, D, mu) == count_I_direct(sh, D, mu)


@pytest.mark.parametrize("Q", [2, 3])
def test_identity_class(Q):
    F = field_of_size(Q)
    D = divisor_for_profile(F, (1,))
    got = class_count_H(shape("0,0"), D, [unipotent_invariant(F, (1, 1))])
    assert got == Fraction(1, gl_order(2, Q))


@pytest.mark.parametrize("Q", [2, 3])
def test_regular_unipotent_type_on_split_bundle_three_points(Q):
    F = field_of_size(Q)
    D = divisor_for_profile(F, (1, 1, 1), allow_infinity=True)
    cls = [unipotent_invariant(F, (2,))] * 3
    assert class_count_H(shape("1,0"), D, cls, method="direct") == class_count_H(shape("1,0"), D, cls, method="levi")


def test_histogram_totals_count_unipotent_automorphisms():
    sh = shape("1,0")
    D = div(3, (1, 1))
    hist = unipotent_histogram(sh, D)
    direct = class_count_H(sh, D, [unipotent_invariant(F3, (2,))] * 2) * sh.aut_order(3)
    assert hist[((2,), (2,))] == direct


def test_check_multipartition():
    with pytest.raises(ValueError):
        check_multipartition(((1, 1), (2, 1)), 2, 2)


@pytest.mark.parametrize("text,Q,profile", [("0,0", 2, (1, 1, 1)), ("0,0", 3, (1, 1, 1)), ("1,0", 3, (2, 1))])
def test_position_independence(text, Q, profile):
    rep = position_check(shape(text), profile, full_flags(2, len(profile)), Q)
    assert rep["ok"]


def test_twist_invariance():
    D = div(3, (1, 1, 1, 1))
    mu = full_flags(2, 4)
    assert count_A_direct(shape("1,0"), D, mu) == count_A_direct(shape("2,1"), D, mu)
