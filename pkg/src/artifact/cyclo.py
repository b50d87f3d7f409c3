"""Exact arithmetic in Q(zeta_n), stored in the group ring Q[C_n] and reduced
modulo the n-th cyclotomic polynomial for comparisons."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def _phi(n: int) -> tuple:
    cs = Poly(cyclotomic_poly(n, _x), _x).all_coeffs()
    return tuple(int(c) for c in reversed(cs))


class Cyclo:
    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs=None):
        self.n = n
        self.c = list(coeffs) if coeffs is not None else [0] * n

    @classmethod
    def root(cls, n: int, k: int, coeff=1) -> "Cyclo":
        out = cls(n)
        out.c[k % n] = coeff
        return out

    @classmethod
    def rational_value(cls, n: int, x) -> "Cyclo":
        return cls.root(n, 0, x)

    def _coerce(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.n != self.n:
                raise ValueError("mixing cyclotomic fields of different order")
            return other
        return Cyclo.root(self.n, 0, other)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        o = self._coerce(other)
        return Cyclo(self.n, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.n, [a * other for a in self.c])
        o = self._coerce(other)
        n = self.n
        out = [0] * n
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[(i + j) % n] += a * b
        return Cyclo(n, out)

    __rmul__ = __mul__

    def reduced(self) -> tuple:
        """Coefficients of the remainder modulo Phi_n (degree < phi(n))."""
        phi = _phi(self.n)
        d = len(phi) - 1
        r = [Fraction(a) for a in self.c]
        for k in range(len(r) - 1, d - 1, -1):
            a = r[k]
            if a:
                for j in range(d + 1):
                    r[k - d + j] -= a * phi[j]
        return tuple(r[:d])

    def is_rational(self) -> bool:
        return not any(self.reduced()[1:])

    def rational(self) -> Fraction:
        r = self.reduced()
        if any(r[1:]):
            raise ValueError(f"cyclotomic number is not rational: {r}")
        return r[0]

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return NotImplemented
        return self.reduced() == o.reduced()

    def __hash__(self):
        return hash((self.n, self.reduced()))

    def __repr__(self):
        return f"Cyclo({self.n}, {self.reduced()})"
