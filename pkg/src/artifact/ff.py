"""Finite fields as towers of simple extensions over a prime field.

Elements are plain ints.  In an extension ``B[t]/(pi)`` of degree ``d`` the
int ``x`` encodes the element ``sum c_j t^j`` where ``c_j`` are the base-|B|
digits of ``x``.  Elements of ``B`` therefore embed as the same ints, and the
prime subfield is always ``0 .. p-1``.

Polynomials over a field are tuples of elements, lowest degree first, with
no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from sympy import factorint, isprime

Poly = tuple


class FieldError(ValueError):
    pass


class InsufficientPoints(FieldError):
    """Not enough closed points of a requested degree over the base field."""


class Field:
    """F_p, or a simple extension ``base[t]/(modulus)``."""

    def __init__(self, p: int, base: Optional["Field"] = None, modulus: Optional[Poly] = None):
        self.p = p
        self.base = base
        self.modulus = modulus
        if base is None:
            self.rel_degree = 1
            self.size = p
            self.degree = 1
            self.key = ("F", p)
        else:
            self.rel_degree = len(modulus) - 1
            self.size = base.size ** self.rel_degree
            self.degree = base.degree * self.rel_degree
            self.key = (base.key, tuple(modulus))
        self._tables = None
        self._lock = threading.Lock()

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.size})[{poly_str(self.modulus)} over GF({self.base.size})]"

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def is_prime(self) -> bool:
        return self.base is None

    def elements(self) -> range:
        return range(self.size)

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    # -- tables ------------------------------------------------------------

    def _digits(self, x: int) -> list:
        qb = self.base.size
        out = []
        for _ in range(self.rel_degree):
            x, r = divmod(x, qb)
            out.append(r)
        return out

    def _from_digits(self, ds: Sequence[int]) -> int:
        qb = self.base.size
        v = 0
        for c in reversed(ds):
            v = v * qb + c
        return v

    def _slow_mul(self, x: int, y: int) -> int:
        B = self.base
        d = self.rel_degree
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = B.add(prod[i + j], B.mul(ai, bj))
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] = B.sub(prod[k - d + j], B.mul(c, mod[j]))
                prod[k] = 0
        return self._from_digits(prod[:d])

    def _times_t(self, x: int) -> int:
        B = self.base
        qb = B.size
        d = self.rel_degree
        top, low = divmod(x, qb ** (d - 1))
        x = low * qb
        if top:
            digits = self._digits(x)
            for j in range(d):
                digits[j] = B.sub(digits[j], B.mul(top, self.modulus[j]))
            x = self._from_digits(digits)
        return x

    def _slow_pow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, x)
            x = self._slow_mul(x, x)
            e >>= 1
        return r

    def _build_tables(self):
        Q = self.size
        order = Q - 1
        primes = list(factorint(order)) if order > 1 else []
        candidates = [self.base.size] + list(range(2, Q)) if self.rel_degree > 1 else range(2, Q)
        gen = None
        for g in candidates:
            if all(self._slow_pow(g, order // r) != 1 for r in primes):
                gen = g
                break
        if gen is None:  # Q == 2 cannot happen for extensions
            gen = 1
        exp = [0] * (2 * order)
        log = [0] * Q
        step = self._times_t if gen == self.base.size else (lambda v: self._slow_mul(v, gen))
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = step(x)
        exp[order:] = exp[:order]
        zech = None
        if self.p != 2:
            zech = [-1] * order
            qb = self.base.size
            B = self.base
            for n in range(order):
                v = exp[n]
                c0 = v % qb
                w = v - c0 + B.add(c0, 1)
                zech[n] = log[w] if w else -1
        self._tables = (exp, log, zech, gen)

    def tables(self):
        if self._tables is None:
            with self._lock:
                if self._tables is None:
                    self._build_tables()
        return self._tables

    @property
    def generator(self) -> int:
        """A primitive element (least one in the search order)."""
        if self.base is None:
            return primitive_root(self.p)
        return self.tables()[3]

    # -- arithmetic on ints ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.base is None:
            s = a + b
            return s - self.p if s >= self.p else s
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech, _ = self.tables()
        la = log[a]
        z = zech[(log[b] - la) % (self.size - 1)]
        return 0 if z < 0 else exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.base is None:
            return self.p - a
        exp, log, _, _ = self.tables()
        return exp[log[a] + (self.size - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.base is None:
            return a * b % self.p
        exp, log, _, _ = self.tables()
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        exp, log, _, _ = self.tables()
        return exp[(self.size - 1 - log[a]) % (self.size - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.base is None:
            return pow(a, e % (self.p - 1), self.p)
        exp, log, _, _ = self.tables()
        return exp[(log[a] * e) % (self.size - 1)]

    def log(self, a: int) -> int:
        """Discrete log with respect to ``generator``."""
        if a == 0:
            raise ZeroDivisionError("log of zero")
        if self.base is None:
            g = primitive_root(self.p)
            x, k = 1, 0
            while x != a:
                x = x * g % self.p
                k += 1
            return k
        return self.tables()[1][a]

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- Galois structure --------------------------------------------------

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a^(p^times)."""
        return self.pow(a, self.p ** times)

    def trace_to_base(self, a: int) -> int:
        if self.base is None:
            return a
        qb = self.base.size
        s, y = 0, a
        for _ in range(self.rel_degree):
            s = self.add(s, y)
            y = self.pow(y, qb)
        assert s < qb
        return s

    def norm_to_base(self, a: int) -> int:
        if self.base is None:
            return a
        return self.pow(a, (self.size - 1) // (self.base.size - 1))

    def trace_to_prime(self, a: int) -> int:
        F, y = self, a
        while F.base is not None:
            y = F.trace_to_base(y)
            F = F.base
        return y

    def trace_to(self, a: int, sub: "Field") -> int:
        """Trace down the tower until ``sub`` is reached."""
        F, y = self, a
        while F != sub:
            if F.base is None:
                raise FieldError(f"{sub} is not in the tower of {self}")
            y = F.trace_to_base(y)
            F = F.base
        return y

    def tower(self) -> list:
        out, F = [], self
        while F is not None:
            out.append(F)
            F = F.base
        return out

    def abs_coefficients(self, a: int) -> list:
        """Coordinates of ``a`` over F_p (length = absolute degree)."""
        if self.base is None:
            return [a]
        out = []
        for c in self._digits(a):
            out.extend(self.base.abs_coefficients(c))
        return out


@dataclass(frozen=True)
class FieldElement:
    """Thin typed wrapper; mixing fields raises."""

    field: Field
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("arithmetic between different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def frobenius(self):
        return FieldElement(self.field, self.field.frobenius(self.value))

    def trace(self) -> int:
        return self.field.trace_to_prime(self.value)

    def coefficients(self) -> list:
        return self.field.abs_coefficients(self.value)


# ---------------------------------------------------------------------------
# construction and caches

_FIELDS: dict = {}
_FIELDS_LOCK = threading.Lock()


def _cached(key, factory) -> Field:
    F = _FIELDS.get(key)
    if F is None:
        with _FIELDS_LOCK:
            F = _FIELDS.get(key)
            if F is None:
                F = factory()
                _FIELDS[key] = F
    return F


def prime_field(p: int) -> Field:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise FieldError(f"{p} is not prime")
    return _cached(("F", p), lambda: Field(p))


def extension_by(base: Field, modulus: Sequence[int]) -> Field:
    """``base[t]/(modulus)``; the modulus must be monic irreducible."""
    modulus = tuple(modulus)
    if len(modulus) < 2 or modulus[-1] != 1:
        raise FieldError("modulus must be monic of positive degree")
    if len(modulus) == 2:
        return base
    return _cached((base.key, modulus), lambda: Field(base.p, base, modulus))


def extension(base: Field, e: int) -> Field:
    """The canonical degree-``e`` extension of ``base``."""
    if e < 1:
        raise FieldError("extension degree must be positive")
    if e == 1:
        return base
    return extension_by(base, least_irreducible(base, e))


def make_field(p: int, k: int) -> Field:
    """F_{p^k} with the least monic irreducible modulus of degree k over F_p."""
    if not isinstance(k, int) or k < 1:
        raise FieldError("extension degree must be a positive integer")
    return extension(prime_field(p), k)


def prime_power(q: int) -> tuple:
    f = factorint(q)
    if q < 2 or len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


def field_of_size(q: int) -> Field:
    p, k = prime_power(q)
    return make_field(p, k)


def is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


_PRIMROOT: dict = {}


def primitive_root(p: int) -> int:
    g = _PRIMROOT.get(p)
    if g is None:
        if p == 2:
            g = 1
        else:
            primes = list(factorint(p - 1))
            g = next(c for c in range(2, p) if all(pow(c, (p - 1) // r, p) != 1 for r in primes))
        _PRIMROOT[p] = g
    return g


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_q."""
    return sum(mobius(e) * q ** (d // e) for e in divisors(d)) // d


# ---------------------------------------------------------------------------
# polynomials over a field


def poly_norm(f: Sequence[int]) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def deg(f: Poly) -> int:
    return len(f) - 1


def poly_str(f: Poly, var: str = "t") -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mon:
            terms.append(str(c))
        elif c == 1:
            terms.append(mon)
        else:
            terms.append(f"{c}*{mon}")
    return "+".join(terms)


def poly_add(F: Field, f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return poly_norm(out)


def poly_neg(F: Field, f: Poly) -> Poly:
    return tuple(F.neg(c) for c in f)


def poly_sub(F: Field, f: Poly, g: Poly) -> Poly:
    return poly_add(F, f, poly_neg(F, g))


def poly_scale(F: Field, c: int, f: Poly) -> Poly:
    if c == 0:
        return ()
    return tuple(F.mul(c, a) for a in f)


def poly_mul(F: Field, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    add, mul = F.add, F.mul
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = add(out[i + j], mul(a, b))
    return poly_norm(out)


def poly_divmod(F: Field, f: Poly, g: Poly) -> tuple:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) <= dg:
        return (), poly_norm(r)
    inv_lead = F.inv(g[-1])
    qt = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            c = F.mul(c, inv_lead)
            qt[k - dg] = c
            for j in range(dg + 1):
                if g[j]:
                    r[k - dg + j] = F.sub(r[k - dg + j], F.mul(c, g[j]))
    return poly_norm(qt), poly_norm(r[:dg])


def poly_mod(F: Field, f: Poly, g: Poly) -> Poly:
    return poly_divmod(F, f, g)[1]


def poly_monic(F: Field, f: Poly) -> Poly:
    if not f or f[-1] == 1:
        return f
    return poly_scale(F, F.inv(f[-1]), f)


def poly_gcd(F: Field, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, poly_mod(F, f, g)
    return poly_monic(F, f)


def poly_powmod(F: Field, f: Poly, e: int, m: Poly) -> Poly:
    result = (1,)
    base = poly_mod(F, f, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        e >>= 1
    return result


def poly_deriv(F: Field, f: Poly) -> Poly:
    return poly_norm(F.mul(F.from_int(i), f[i]) for i in range(1, len(f)))


def poly_eval(F: Field, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_pow(F: Field, f: Poly, e: int) -> Poly:
    out = (1,)
    for _ in range(e):
        out = poly_mul(F, out, f)
    return out


def monic_polys(F: Field, d: int) -> Iterator[Poly]:
    """Monic polynomials of degree d ordered by the integer encoding of the
    lower coefficients, which is lexicographic from the top coefficient down."""
    Q = F.size
    for idx in range(Q ** d):
        cs = []
        for _ in range(d):
            idx, r = divmod(idx, Q)
            cs.append(r)
        yield tuple(cs) + (1,)


def _prime_factors(n: int) -> list:
    return list(factorint(n)) if n > 1 else []


def is_irreducible(F: Field, f: Poly) -> bool:
    """Rabin's test."""
    f = poly_monic(F, poly_norm(f))
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    Q = F.size
    x = (0, 1)

    def frob_iter(k):
        h = x
        for _ in range(k):
            h = poly_powmod(F, h, Q, f)
        return h

    for r in _prime_factors(n):
        h = frob_iter(n // r)
        if deg(poly_gcd(F, f, poly_sub(F, h, x))) != 0:
            return False
    return poly_sub(F, frob_iter(n), x) == ()


_LEAST_IRR: dict = {}


def least_irreducible(F: Field, d: int) -> Poly:
    key = (F.key, d)
    f = _LEAST_IRR.get(key)
    if f is None:
        f = next(g for g in monic_polys(F, d) if is_irreducible(F, g))
        _LEAST_IRR[key] = f
    return f


def _pth_root_poly(F: Field, f: Poly) -> Poly:
    p = F.p
    e = F.size // p
    return poly_norm(F.pow(f[i], e) for i in range(0, len(f), p))


def _poly_exact_div(F: Field, f: Poly, g: Poly) -> Poly:
    qt, r = poly_divmod(F, f, g)
    assert r == ()
    return qt


def squarefree_parts(F: Field, f: Poly) -> list:
    """Pairs (g, e) with f = prod g^e; the g are squarefree (not necessarily coprime)."""
    f = poly_monic(F, f)
    if deg(f) < 1:
        return []
    out = []
    fp = poly_deriv(F, f)
    if not fp:
        return [(g, e * F.p) for g, e in squarefree_parts(F, _pth_root_poly(F, f))]
    c = poly_gcd(F, f, fp)
    w = _poly_exact_div(F, f, c)
    i = 1
    while deg(w) > 0:
        y = poly_gcd(F, w, c)
        z = _poly_exact_div(F, w, y)
        if deg(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = _poly_exact_div(F, c, y)
    if deg(c) > 0:
        out.extend((g, e * F.p) for g, e in squarefree_parts(F, _pth_root_poly(F, c)))
    return out


def distinct_degree(F: Field, f: Poly) -> list:
    """For squarefree monic f: pairs (g, d), g the product of its degree-d factors."""
    out = []
    x = (0, 1)
    h = x
    i = 1
    Q = F.size
    while deg(f) >= 2 * i:
        h = poly_powmod(F, h, Q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if deg(g) > 0:
            out.append((g, i))
            f = _poly_exact_div(F, f, g)
            h = poly_mod(F, h, f)
        i += 1
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(F: Field, f: Poly, d: int, rng: random.Random) -> list:
    n = deg(f)
    if n == d:
        return [f]
    Q = F.size
    while True:
        a = poly_norm(rng.randrange(Q) for _ in range(n))
        if deg(a) < 1:
            continue
        if F.p == 2:
            k = F.degree * d
            b, t = a, a
            for _ in range(k - 1):
                t = poly_mod(F, poly_mul(F, t, t), f)
                b = poly_add(F, b, t)
        else:
            b = poly_sub(F, poly_powmod(F, a, (Q ** d - 1) // 2, f), (1,))
        g = poly_gcd(F, f, b)
        if 0 < deg(g) < n:
            return equal_degree(F, g, d, rng) + equal_degree(F, _poly_exact_div(F, f, g), d, rng)


def factor(F: Field, f: Poly) -> list:
    """Monic irreducible factors with multiplicities, sorted deterministically."""
    f = poly_norm(f)
    if not f:
        raise FieldError("cannot factor the zero polynomial")
    rng = random.Random(0x5EED)
    mult: dict = {}
    for g, e in squarefree_parts(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                mult[irr] = mult.get(irr, 0) + e
    return sorted(mult.items(), key=lambda it: (len(it[0]), tuple(reversed(it[0]))))


def roots(F: Field, f: Poly) -> list:
    return sorted(F.neg(g[0]) for g, _ in factor(F, f) if deg(g) == 1)


# ---------------------------------------------------------------------------
# closed points of the projective line


@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of P^1 over ``base``: a monic irreducible polynomial, or
    the point at infinity when ``poly`` is None."""

    base: Field
    poly: Optional[Poly]

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    @property
    def residue_field(self) -> Field:
        if self.poly is None or len(self.poly) == 2:
            return self.base
        return extension_by(self.base, self.poly)

    @property
    def t_image(self) -> Optional[int]:
        """Image of t in the residue field (None at infinity)."""
        if self.poly is None:
            return None
        if len(self.poly) == 2:
            return self.base.neg(self.poly[0])
        return self.base.size

    def __str__(self):
        return "inf" if self.poly is None else poly_str(self.poly)

    @classmethod
    def infinity(cls, base: Field) -> "ClosedPoint":
        return cls(base, None)


def closed_points(F: Field, d: int, count: int) -> list:
    """The first ``count`` affine closed points of degree d in the fixed order."""
    avail = necklace_count(F.size, d)
    if count > avail:
        raise InsufficientPoints(
            f"only {avail} points of degree {d} over GF({F.size}), {count} requested")
    out = []
    if count == 0:
        return out
    for g in monic_polys(F, d):
        if is_irreducible(F, g):
            out.append(ClosedPoint(F, g))
            if len(out) == count:
                break
    return out


def base_change_point(point: ClosedPoint, e: int) -> list:
    """Points of P^1 over the degree-e extension lying over ``point``."""
    L = extension(point.base, e)
    if point.is_infinity:
        return [ClosedPoint(L, None)]
    return [ClosedPoint(L, g) for g, _ in factor(L, point.poly)]


# ---------------------------------------------------------------------------
# embeddings between extensions of a common base

_EMBED: dict = {}


def embedding(K: Field, L: Field) -> list:
    """Table mapping elements of K into L.

    K must equal L, equal L.base, or be a simple extension of L.base.
    """
    key = (K.key, L.key)
    table = _EMBED.get(key)
    if table is not None:
        return table
    if K == L or K == L.base:
        table = list(range(K.size))
    elif K.base == L.base:
        rho = roots(L, K.modulus)
        if not rho:
            raise FieldError(f"{K} does not embed in {L}")
        rho = rho[0]
        d = K.rel_degree
        powers = [1]
        for _ in range(d - 1):
            powers.append(L.mul(powers[-1], rho))
        table = []
        for x in range(K.size):
            acc = 0
            for c, pw in zip(K._digits(x), powers):
                if c:
                    acc = L.add(acc, L.mul(c, pw))
            table.append(acc)
    else:
        raise FieldError(f"no embedding rule for {K} into {L}")
    _EMBED.setdefault(key, table)
    return _EMBED[key]
