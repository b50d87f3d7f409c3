from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.ff import field_of_size
from artifact.ffmat import fixed_flag_count, unipotent_class
from artifact.partitions import column_of, partitions, z_value
from artifact.qfunc import QF, evaluate, from_coeffs, int_coeffs, q
from artifact.symfunc import (
    SymExpr, TruncSeries, charge, character, convert, hall_pair, kostka, kostka_foulkes,
    kostka_oracle, modified_hl, plethysm_power, pleth_exp, pleth_log,
)

h = lambda lam: SymExpr.basis_element("h", lam)
s = lambda lam: SymExpr.basis_element("s", lam)
p = lambda lam: SymExpr.basis_element("p", lam)


def test_h11_in_schur_basis():
    assert h((1, 1)).coefficients("s") == {(2,): 1, (1, 1): 1}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_schur_orthonormal(n):
    for a in partitions(n):
        for b in partitions(n):
            assert hall_pair(s(a), s(b)) == (1 if a == b else 0)


def test_power_sum_norm():
    assert hall_pair(p((2, 1)), p((2, 1))) == z_value((2, 1)) == 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kostka_unitriangular(n):
    parts = partitions(n)
    for i, a in enumerate(parts):
        assert kostka(a, a) == 1
        for b in parts:
            assert kostka(a, b) >= 0


def test_character_orthogonality():
    parts = partitions(4)
    for a in parts:
        for b in parts:
            total = sum(Fraction(character(a, rho) * character(b, rho), z_value(rho)) for rho in parts)
            assert total == (1 if a == b else 0)


def test_charge_examples():
    assert charge([1, 2]) == 1
    assert charge([2, 1]) == 0
    assert charge([1, 1, 1]) == 0


def test_kostka_foulkes_small():
    assert kostka_foulkes((1,), (1,)) == 1
    assert kostka_foulkes((1, 1), (2,)) == 1
    assert kostka_foulkes((1, 1), (1, 1)) == q
    assert kostka_foulkes((2,), (2,)) == 1
    assert kostka_foulkes((2,), (1, 1)) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_charge_matches_oracle(n):
    oracle = kostka_oracle(n)
    for (nu, lam), f in oracle.items():
        assert kostka_foulkes(nu, lam) == f


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kostka_foulkes_nonnegative(n):
    for nu in partitions(n):
        for lam in partitions(n):
            f = kostka_foulkes(nu, lam)
            cs = int_coeffs(f)
            assert all(c >= 0 for c in cs)
            assert evaluate(f, 1) == kostka(lam, nu)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("Q", [2, 3])
def test_hall_littlewood_counts_full_flags(n, Q):
    F = field_of_size(Q)
    for nu in partitions(n):
        g = unipotent_class(nu, n, F)[0]
        want = fixed_flag_count(F, g, column_of((1,) * n))
        assert evaluate(hall_pair(modified_hl(nu), h((1,) * n)), Q) == want


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pairing_with_h_is_integral(n):
    for nu in partitions(n):
        for mu in partitions(n):
            int_coeffs(hall_pair(modified_hl(nu), h(mu)))


def test_plethysm_examples():
    assert plethysm_power(p((1,)), 2) == p((2,))
    assert plethysm_power(h((1,)), 2) == p((2,))
    assert plethysm_power(p((1,)).scale(q), 3) == p((3,)).scale(q ** 3)


def test_plethysm_is_multiplicative():
    a, b = h((2,)), s((1, 1))
    assert plethysm_power(a * b, 2) == plethysm_power(a, 2) * plethysm_power(b, 2)


def test_convert_round_trip():
    x = s((2, 1)) + h((1, 1, 1)).scale(3)
    assert convert(convert(x, "m"), "s") == x


def test_variable_sets_do_not_mix():
    with pytest.raises(ValueError):
        SymExpr.basis_element("p", (1,), var=0) + SymExpr.basis_element("p", (1,), var=1)


def _series(coeffs):
    return TruncSeries.from_m_basis(2, 1, 1, coeffs)


def test_log_exp_inverse():
    S = _series({((1,), ((1,),)): from_coeffs([1, 1]), ((2,), ((1, 1),)): q ** 2, ((2,), ((2,),)): QF(3)})
    one = TruncSeries.one(2, 1, 1)
    assert pleth_exp(pleth_log(one + S)) == one + S
    assert pleth_log(pleth_exp(S)) == S


def test_top_degree_term_is_fixed_by_log():
    T = _series({((2,), ((2,),)): QF(5)})
    assert pleth_log(TruncSeries.one(2, 1, 1) + T) == T


def test_log_needs_constant_one():
    with pytest.raises(ValueError):
        pleth_log(_series({((1,), ((1,),)): QF(1)}))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_log_exp_random(cs):
    S = _series({
        ((1,), ((1,),)): QF(cs[0]) + q * cs[1],
        ((2,), ((1, 1),)): QF(cs[2]),
        ((2,), ((2,),)): q * cs[3],
    })
    assert pleth_log(pleth_exp(S)) == S
