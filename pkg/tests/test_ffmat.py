import random

import pytest

from artifact.cyclo import Cyclo
from artifact.ff import field_of_size
from artifact.ffmat import (
    classify, companion, enumerate_flags, enumerate_gl, fixed_flag_count, flag_count_formula,
    gl_order, hc_value, inverse, jordan_unipotent, mat_mul, unipotent_class,
)
from artifact.partitions import column_of, partitions

F2, F3 = field_of_size(2), field_of_size(3)


def conj(F, g, x):
    return mat_mul(F, mat_mul(F, inverse(F, g), x), g)


def test_zero_matrix_is_nilpotent():
    info = classify(F2, ((0, 0, 0),) * 3)
    assert info.nilpotent and info.semisimple
    assert info.invariant == (((0, 1), (1, 1, 1)),)


def test_jordan_block_nilpotent_type_two():
    info = classify(F2, ((0, 1), (0, 0)))
    assert info.nilpotent and not info.semisimple
    assert info.invariant[0][1] == (2,)


def test_companion_of_irreducible_quadratic():
    info = classify(F2, companion(F2, (1, 1, 1)))
    assert info.semisimple and info.invertible and not info.unipotent


@pytest.mark.parametrize("q,n,column,count", [
    (2, 2, (2, 1, 0), 3),
    (4, 2, (2, 1, 0), 5),
    (2, 3, (3, 1), 7),
    (3, 3, (3, 2, 1, 0), 13 * 4),
])
def test_flag_counts(q, n, column, count):
    F = field_of_size(q)
    assert len(enumerate_flags(n, column, F)) == count == flag_count_formula(n, column, q)


def test_fixed_flags_examples():
    assert fixed_flag_count(F2, ((1, 0), (0, 1)), (2, 1, 0)) == 3
    assert fixed_flag_count(F2, jordan_unipotent((2,)), (2, 1, 0)) == 1
    assert fixed_flag_count(F3, ((1, 0), (0, 2)), (2, 1, 0)) == 2


@pytest.mark.parametrize("q", [2, 3])
def test_fixed_flags_are_class_functions(q):
    F = field_of_size(q)
    rng = random.Random(q)
    G = enumerate_gl(F, 2)
    for x in rng.sample(G, min(len(G), 10)):
        base = fixed_flag_count(F, x, (2, 1, 0))
        for g in rng.sample(G, min(len(G), 5)):
            assert fixed_flag_count(F, conj(F, g, x), (2, 1, 0)) == base
            assert classify(F, conj(F, g, x)).invariant == classify(F, x).invariant


@pytest.mark.parametrize("lam,n,q,size", [((1, 1), 2, 2, 1), ((2,), 2, 2, 3), ((2, 1), 3, 2, 21)])
def test_unipotent_class_sizes(lam, n, q, size):
    rep, got = unipotent_class(lam, n, field_of_size(q))
    assert got == size
    assert unipotent_class(lam, n, field_of_size(q), brute=True)[1] == size


@pytest.mark.parametrize("q", [2, 3])
def test_class_sizes_sum_to_unipotent_count(q):
    # Steinberg: q^{n(n-1)} unipotent elements
    F = field_of_size(q)
    assert sum(unipotent_class(lam, 3, F)[1] for lam in partitions(3)) == q ** 6


def test_hc_full_levi_is_the_function():
    assert hc_value("group", 2, F2, (2,), lambda blocks: 1, ((1, 1), (0, 1))) == 1


def test_hc_torus_at_identity():
    assert hc_value("group", 2, F2, (1, 1), lambda blocks: 1, ((1, 0), (0, 1))) == 3


def test_hc_torus_at_regular_unipotent_f3():
    assert hc_value("group", 2, F3, (1, 1), lambda blocks: 1, jordan_unipotent((2,))) == 1


@pytest.mark.parametrize("mu", [(1, 1), (2,)])
def test_hc_trivial_matches_flag_count(mu):
    for x in enumerate_gl(F3, 2)[:12]:
        assert hc_value("group", 2, F3, mu, lambda b: 1, x) == fixed_flag_count(F3, x, column_of(mu))


def test_hc_lie_mode_returns_cyclotomic():
    psi = lambda blocks: Cyclo.root(3, blocks[0][0][0])
    v = hc_value("lie", 2, F3, (1, 1), psi, ((0, 0), (0, 0)))
    assert v.rational() == 4


def test_gl_order():
    assert gl_order(2, 2) == 6 and gl_order(3, 2) == 168
