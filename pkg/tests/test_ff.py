import pytest
from hypothesis import given, settings, strategies as st

from artifact.ff import (
    ClosedPoint, InsufficientPoints, base_change_point, closed_points, divisors,
    field_of_size, make_field, necklace_count, prime_field,
)


def test_prime_field_modulus():
    F = make_field(2, 1)
    assert F.size == 2 and F.base is None


def test_f4_modulus_is_unique_quadratic():
    F = make_field(2, 2)
    assert tuple(F.modulus) == (1, 1, 1)


def test_f9_frobenius_fixes_everything():
    F = make_field(3, 2)
    assert F.size == 9
    assert all(F.pow(x, 9) == x for x in range(9))


@pytest.mark.parametrize("p,k", [(0, 1), (4, 1), (2, 0)])
def test_make_field_rejects_bad_input(p, k):
    with pytest.raises(Exception):
        make_field(p, k)


def test_closed_points_degree_one_f2():
    pts = closed_points(prime_field(2), 1, 2)
    assert [tuple(pt.poly) for pt in pts] == [(0, 1), (1, 1)]


def test_closed_points_unique_quadratic_f2():
    (pt,) = closed_points(prime_field(2), 2, 1)
    assert tuple(pt.poly) == (1, 1, 1)


def test_two_cubics_over_f2():
    assert necklace_count(2, 3) == 2
    assert len(closed_points(prime_field(2), 3, 2)) == 2
    with pytest.raises(InsufficientPoints):
        closed_points(prime_field(2), 3, 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("d", range(1, 7))
def test_necklace_identity(q, d):
    assert sum(e * necklace_count(q, e) for e in divisors(d)) == q ** d


@pytest.mark.parametrize("poly,e,expect", [
    ((1, 1, 1), 2, [1, 1]),
    ((0, 1), 3, [1]),
    ((1, 1, 0, 1), 2, [3]),
])
def test_base_change_degrees(poly, e, expect):
    pt = ClosedPoint(prime_field(2), poly)
    got = sorted(p.degree for p in base_change_point(pt, e))
    assert got == sorted(expect)
    assert sum(got) == pt.degree


@pytest.mark.parametrize("q", [4, 8, 9, 25])
def test_frobenius_is_a_ring_map(q):
    F = field_of_size(q)
    p = F.p
    for x in range(F.size):
        for y in range(0, F.size, 3):
            assert F.pow(F.add(x, y), p) == F.add(F.pow(x, p), F.pow(y, p))
            assert F.pow(F.mul(x, y), p) == F.mul(F.pow(x, p), F.pow(y, p))


@pytest.mark.parametrize("q", [4, 9, 8])
def test_trace_is_linear_and_onto(q):
    F = field_of_size(q)
    images = {F.trace_to_prime(x) for x in range(F.size)}
    assert images == set(range(F.p))
    for x in range(F.size):
        for y in range(F.size):
            assert F.trace_to_prime(F.add(x, y)) == (F.trace_to_prime(x) + F.trace_to_prime(y)) % F.p


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.data())
def test_field_axioms(q, data):
    F = field_of_size(q)
    x, y, z = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg(x)) == 0
    if x:
        assert F.mul(x, F.inv(x)) == 1


def test_tower_residue_field():
    F4 = field_of_size(4)
    (pt,) = [p for p in closed_points(F4, 2, 1)]
    K = pt.residue_field
    assert K.size == 16
    assert K.trace_to(pt.t_image, F4) in range(4)
