"""Exact rational functions in the formal variable q (sympy's sparse field)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.fields import field

QF, q = field("q", QQ)
QR = QF.ring
_t = QR.gens[0]


def const(x) -> "QF.dtype":
    if isinstance(x, Fraction):
        return QF(x.numerator) / QF(x.denominator)
    return QF(x)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def from_coeffs(coeffs: Sequence) -> "QF.dtype":
    """Polynomial from ascending coefficients (ints or Fractions)."""
    out = QF(0)
    for i, c in enumerate(coeffs):
        if c:
            out += const(c) * q ** i
    return out


def subs_power(f, e: int):
    """f(q) -> f(q^e)."""
    if e == 1:
        return f
    num = f.numer.compose(_t, _t ** e)
    den = f.denom.compose(_t, _t ** e)
    return QF(num) / QF(den)


def evaluate(f, x) -> Fraction:
    x = Fraction(x)
    num = sum((_to_fraction(c) * x ** m[0] for m, c in f.numer.terms()), Fraction(0))
    den = sum((_to_fraction(c) * x ** m[0] for m, c in f.denom.terms()), Fraction(0))
    return num / den


def is_polynomial(f) -> bool:
    return f.denom.degree() <= 0


def coeffs(f) -> list:
    """Ascending Fraction coefficients of a polynomial (raises otherwise)."""
    if not is_polynomial(f):
        raise ValueError(f"not a polynomial: {f}")
    dc = _to_fraction(f.denom.LC)
    n = f.numer
    if n == 0:
        return []
    out = [Fraction(0)] * (n.degree() + 1)
    for m, c in n.terms():
        out[m[0]] = _to_fraction(c) / dc
    return out


def int_coeffs(f) -> list:
    cs = coeffs(f)
    if any(c.denominator != 1 for c in cs):
        raise ValueError(f"non-integer coefficients: {f}")
    return [int(c) for c in cs]


def interpolate(points: Iterable) -> "QF.dtype":
    """Lagrange interpolation through (x, y) pairs with exact arithmetic."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    out = QF(0)
    for i, (xi, yi) in enumerate(pts):
        if yi == 0:
            continue
        term = const(yi)
        for j, (xj, _) in enumerate(pts):
            if j != i:
                term = term * (q - const(xj)) / const(xi - xj)
        out += term
    return out


def to_json(f):
    """Ascending coefficient list; integers stay ints, rationals become [num, den]."""
    out = []
    for c in coeffs(f):
        out.append(int(c) if c.denominator == 1 else [c.numerator, c.denominator])
    return out


def to_str(f) -> str:
    return str(f.as_expr())
