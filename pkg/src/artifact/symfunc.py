"""Symmetric functions over Q(q): the m/h/p/s bases, Hall pairing, Kostka and
Kostka-Foulkes polynomials, modified Hall-Littlewood functions, the power
plethysm x -> x^e, and truncated plethystic Log/Exp."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import factorial
from typing import Dict, Sequence

from .ff import mobius
from .partitions import n_stat, normalize, partitions, z_value
from .qfunc import QF, const, q as qsym, subs_power

BASES = ("m", "h", "p", "s")


# ---------------------------------------------------------------------------
# characters and Kostka numbers


@lru_cache(maxsize=None)
def character(lam: tuple, rho: tuple) -> int:
    """Irreducible S_n character chi^lam at cycle type rho (Murnaghan-Nakayama)."""
    if sum(lam) != sum(rho):
        raise ValueError("size mismatch")
    if not rho:
        return 1
    r, rest = rho[0], rho[1:]
    ell = len(lam)
    beta = [lam[i] + ell - 1 - i for i in range(ell)]
    bset = set(beta)
    total = 0
    for i, b in enumerate(beta):
        c = b - r
        if c < 0 or c in bset:
            continue
        sign = (-1) ** sum(1 for x in beta if c < x < b)
        nb = sorted((x for x in beta if x != b), reverse=True)
        nb.append(c)
        nb.sort(reverse=True)
        new = normalize(x - (ell - 1 - j) for j, x in enumerate(nb))
        total += sign * character(new, rest)
    return total


def _horizontal_strips(lam: tuple, k: int):
    """Partitions nu with lam/nu a horizontal strip of size k."""
    lam = list(lam)
    out = []

    def rec(i, remaining, nu):
        if i == len(lam):
            if remaining == 0:
                out.append(normalize(nu))
            return
        nxt = lam[i + 1] if i + 1 < len(lam) else 0
        for take in range(0, min(remaining, lam[i] - nxt) + 1):
            rec(i + 1, remaining - take, nu + [lam[i] - take])

    rec(0, k, [])
    return out


@lru_cache(maxsize=None)
def kostka(lam: tuple, mu: tuple) -> int:
    """Number of semistandard tableaux of shape lam and content mu."""
    if sum(lam) != sum(mu):
        return 0
    if not mu:
        return 1
    return sum(kostka(nu, mu[:-1]) for nu in _horizontal_strips(lam, mu[-1]))


def ssyt(lam: tuple, mu: tuple) -> list:
    """All SSYT of shape lam and content mu, as lists of rows."""
    out = []

    def rec(shape, letter, rows):
        if letter == 0:
            if not any(shape):
                out.append([list(r) for r in rows])
            return
        for nu in _horizontal_strips(shape, mu[letter - 1]):
            new_rows = [list(r) for r in rows]
            for i in range(len(shape)):
                prev = nu[i] if i < len(nu) else 0
                for _ in range(shape[i] - prev):
                    new_rows[i].insert(0, letter)
            rec(nu, letter - 1, new_rows)

    rec(tuple(lam), len(mu), [[] for _ in lam])
    return out


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a word with partition content."""
    word = list(word)
    total = 0
    while word:
        n = max(word)
        # pick letters 1, 2, ... scanning leftwards cyclically
        start = len(word)
        idx = 0
        chosen = []
        for letter in range(1, n + 1):
            found = None
            for j in range(start - 1, -1, -1):
                if word[j] == letter and j not in chosen:
                    found = j
                    break
            wrapped = False
            if found is None:
                for j in range(len(word) - 1, start - 1, -1):
                    if word[j] == letter and j not in chosen:
                        found = j
                        wrapped = True
                        break
            if found is None:
                break
            if letter > 1 and wrapped:
                idx += 1
            total += idx
            chosen.append(found)
            start = found
        word = [w for j, w in enumerate(word) if j not in set(chosen)]
    return total


def reading_word(rows: list) -> list:
    return [x for row in reversed(rows) for x in row]


@lru_cache(maxsize=None)
def kostka_foulkes_charge(lam: tuple, mu: tuple) -> tuple:
    """Standard K_{lam,mu}(t) as ascending integer coefficients."""
    coeffs: dict = {}
    for T in ssyt(lam, mu):
        c = charge(reading_word(T))
        coeffs[c] = coeffs.get(c, 0) + 1
    if not coeffs:
        return ()
    return tuple(coeffs.get(i, 0) for i in range(max(coeffs) + 1))


def kostka_foulkes(nu: tuple, lam: tuple):
    """Modified K~_{nu,lam}(q) = q^{n(nu)} K_{lam,nu}(1/q), so that
    H~_nu = sum_lam K~_{nu,lam} s_lam and <H~_nu, h_mu> counts the flags of type
    mu fixed by a unipotent element of Jordan type nu."""
    if sum(nu) != sum(lam):
        raise ValueError("size mismatch")
    cs = kostka_foulkes_charge(tuple(lam), tuple(nu))
    N = n_stat(nu)
    out = QF(0)
    for i, c in enumerate(cs):
        if c:
            out += c * qsym ** (N - i)
    return out


# ---------------------------------------------------------------------------
# transition data


@lru_cache(maxsize=None)
def _kostka_inverse(n: int) -> dict:
    parts = partitions(n)
    K = [[Fraction(kostka(l, m)) for m in parts] for l in parts]
    size = len(parts)
    inv = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    A = [row[:] for row in K]
    # Gauss-Jordan on a unitriangular matrix
    for c in range(size):
        piv = next(i for i in range(c, size) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        f = A[c][c]
        A[c] = [x / f for x in A[c]]
        inv[c] = [x / f for x in inv[c]]
        for i in range(size):
            if i != c and A[i][c]:
                g = A[i][c]
                A[i] = [x - g * y for x, y in zip(A[i], A[c])]
                inv[i] = [x - g * y for x, y in zip(inv[i], inv[c])]
    return {(parts[i], parts[j]): inv[i][j] for i in range(size) for j in range(size) if inv[i][j]}


@lru_cache(maxsize=None)
def _to_p(basis: str, lam: tuple) -> tuple:
    """Expansion of the basis element in power sums: ((rho, Fraction), ...)."""
    n = sum(lam)
    out: dict = {}
    if basis == "p":
        return ((lam, Fraction(1)),)
    if basis == "s":
        for rho in partitions(n):
            c = character(lam, rho)
            if c:
                out[rho] = Fraction(c, z_value(rho))
    elif basis == "h":
        acc = {(): Fraction(1)}
        for k in lam:
            nxt: dict = {}
            for rho, c in acc.items():
                for sig in partitions(k):
                    key = normalize(rho + sig)
                    nxt[key] = nxt.get(key, 0) + c / z_value(sig)
            acc = nxt
        out = acc
    elif basis == "m":
        # s = K m, hence m_mu = sum_lam (K^{-1})_{mu,lam} s_lam
        for (a, b), c in _kostka_inverse(n).items():
            if a == lam:
                for rho, d in _to_p("s", b):
                    out[rho] = out.get(rho, 0) + c * d
    else:
        raise ValueError(f"unknown basis {basis}")
    return tuple((k, v) for k, v in sorted(out.items()) if v)


@lru_cache(maxsize=None)
def _from_p(basis: str, rho: tuple) -> tuple:
    """Expansion of p_rho in the target basis."""
    n = sum(rho)
    out: dict = {}
    if basis == "p":
        return ((rho, Fraction(1)),)
    s_coeffs = {lam: character(lam, rho) for lam in partitions(n)}
    if basis == "s":
        out = {k: Fraction(v) for k, v in s_coeffs.items()}
    elif basis == "m":
        for lam, c in s_coeffs.items():
            if c:
                for mu in partitions(n):
                    k = kostka(lam, mu)
                    if k:
                        out[mu] = out.get(mu, 0) + Fraction(c * k)
    elif basis == "h":
        # s_lam = sum_mu (K^{-1})_{mu... } h_mu with h = K^T s
        inv = _kostka_inverse(n)
        for lam, c in s_coeffs.items():
            if c:
                for mu in partitions(n):
                    k = inv.get((mu, lam), 0)
                    if k:
                        out[mu] = out.get(mu, 0) + c * k
    else:
        raise ValueError(f"unknown basis {basis}")
    return tuple((k, v) for k, v in sorted(out.items()) if v)


# ---------------------------------------------------------------------------
# expressions


class SymExpr:
    """A symmetric function in one variable set, stored in the power-sum basis
    with Q(q) coefficients; ``basis`` records the preferred output basis."""

    __slots__ = ("p", "basis", "var")

    def __init__(self, p_terms: Dict[tuple, object] | None = None, basis: str = "p", var: int = 0):
        self.p = {k: v for k, v in (p_terms or {}).items() if v != 0}
        self.basis = basis
        self.var = var

    @classmethod
    def basis_element(cls, basis: str, lam: Sequence[int], coeff=1, var: int = 0) -> "SymExpr":
        lam = normalize(lam)
        c = coeff if not isinstance(coeff, (int, Fraction)) else const(coeff)
        return cls({rho: c * const(v) for rho, v in _to_p(basis, lam)}, basis, var)

    @classmethod
    def from_terms(cls, basis: str, terms: Dict[tuple, object], var: int = 0) -> "SymExpr":
        out = cls({}, basis, var)
        for lam, c in terms.items():
            out = out + cls.basis_element(basis, lam, c, var)
        out.basis = basis
        return out

    def _check(self, other: "SymExpr"):
        if self.var != other.var:
            raise ValueError("symmetric functions in different variable sets")

    def __add__(self, other: "SymExpr") -> "SymExpr":
        self._check(other)
        out = dict(self.p)
        for k, v in other.p.items():
            out[k] = out.get(k, 0) + v
        return SymExpr(out, self.basis, self.var)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "SymExpr":
        if isinstance(c, (int, Fraction)):
            c = const(c)
        return SymExpr({k: v * c for k, v in self.p.items()}, self.basis, self.var)

    def __mul__(self, other):
        if not isinstance(other, SymExpr):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for a, x in self.p.items():
            for b, y in other.p.items():
                k = normalize(a + b)
                out[k] = out.get(k, 0) + x * y
        return SymExpr(out, self.basis, self.var)

    def __pow__(self, e: int) -> "SymExpr":
        out = SymExpr({(): QF(1)}, self.basis, self.var)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, SymExpr) and self.var == other.var and self.p == other.p

    def coefficients(self, basis: str | None = None) -> dict:
        basis = basis or self.basis
        out: dict = {}
        for rho, c in self.p.items():
            for lam, v in _from_p(basis, rho):
                out[lam] = out.get(lam, 0) + c * const(v)
        return {k: v for k, v in out.items() if v != 0}

    def map_coefficients(self, fn) -> "SymExpr":
        return SymExpr({k: fn(v) for k, v in self.p.items()}, self.basis, self.var)

    def __repr__(self):
        terms = self.coefficients()
        return " + ".join(f"({v}){self.basis}{list(k)}" for k, v in sorted(terms.items())) or "0"


def convert(expr: SymExpr, target: str) -> SymExpr:
    if target not in BASES:
        raise ValueError(f"unknown basis {target}")
    return SymExpr(dict(expr.p), target, expr.var)


def hall_pair(a: SymExpr, b: SymExpr):
    a._check(b)
    out = QF(0)
    for rho, c in a.p.items():
        d = b.p.get(rho)
        if d is not None:
            out += c * d * z_value(rho)
    return out


def modified_hl(nu: Sequence[int], var: int = 0) -> SymExpr:
    nu = normalize(nu)
    terms = {lam: kostka_foulkes(nu, lam) for lam in partitions(sum(nu))}
    return SymExpr.from_terms("s", {k: v for k, v in terms.items() if v != 0}, var)


def plethysm_power(expr: SymExpr, e: int) -> SymExpr:
    """p_k -> p_{ke} and q -> q^e."""
    out = {}
    for rho, c in expr.p.items():
        out[tuple(e * x for x in rho)] = subs_power(c, e)
    return SymExpr(out, expr.basis, expr.var)


# ---------------------------------------------------------------------------
# truncated series in Y and r variable sets


class TruncSeries:
    """Finite sums of c * Y^m * prod_i p_{rho_i}(x_i), truncated at rank N.

    Keys are (m, (rho_1, ..., rho_r)) with m a tuple of nonnegative ints indexed
    by a fixed list of bundle degrees; rank(m) = sum(m) = |rho_i| for all i.
    """

    def __init__(self, N: int, r: int, width: int, terms: dict | None = None):
        self.N = N
        self.r = r
        self.width = width
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0 and sum(k[0]) <= N}

    def zero_key(self):
        return ((0,) * self.width, ((),) * self.r)

    @classmethod
    def one(cls, N, r, width):
        s = cls(N, r, width)
        s.terms = {s.zero_key(): QF(1)}
        return s

    def _like(self, terms):
        return TruncSeries(self.N, self.r, self.width, terms)

    def constant(self):
        return self.terms.get(self.zero_key(), QF(0))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = const(c)
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        N = self.N
        for (m1, r1), a in self.terms.items():
            s1 = sum(m1)
            for (m2, r2), b in other.terms.items():
                if s1 + sum(m2) > N:
                    continue
                key = (tuple(x + y for x, y in zip(m1, m2)),
                       tuple(normalize(x + y) for x, y in zip(r1, r2)))
                out[key] = out.get(key, 0) + a * b
        return self._like(out)

    def psi(self, d: int) -> "TruncSeries":
        out = {}
        for (m, rhos), c in self.terms.items():
            if sum(m) * d > self.N:
                continue
            key = (tuple(d * x for x in m), tuple(tuple(d * x for x in rho) for rho in rhos))
            out[key] = subs_power(c, d)
        return self._like(out)

    def __eq__(self, other):
        return (self - other).terms == {}

    def log(self) -> "TruncSeries":
        c = self.constant()
        if c != 1:
            raise ValueError("log needs constant term 1")
        x = self - TruncSeries.one(self.N, self.r, self.width)
        out = self._like({})
        power = TruncSeries.one(self.N, self.r, self.width)
        for k in range(1, self.N + 1):
            power = power * x
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
        return out

    def exp(self) -> "TruncSeries":
        if self.constant() != 0:
            raise ValueError("exp needs constant term 0")
        out = TruncSeries.one(self.N, self.r, self.width)
        power = TruncSeries.one(self.N, self.r, self.width)
        for k in range(1, self.N + 1):
            power = power * self
            out = out + power.scale(Fraction(1, factorial(k)))
        return out

    def to_m_basis(self) -> dict:
        """{(m, (mu_1..mu_r)): coefficient} in the monomial basis of each variable set."""
        out: dict = {}
        for (m, rhos), c in self.terms.items():
            expansions = [_from_p("m", rho) if rho else (((), Fraction(1)),) for rho in rhos]
            for combo in iproduct(*expansions):
                coef = Fraction(1)
                for _, v in combo:
                    coef *= v
                key = (m, tuple(lam for lam, _ in combo))
                out[key] = out.get(key, 0) + c * const(coef)
        return {k: v for k, v in out.items() if v != 0}

    @classmethod
    def from_m_basis(cls, N: int, r: int, width: int, terms: dict) -> "TruncSeries":
        out: dict = {}
        for (m, mus), c in terms.items():
            expansions = [_to_p("m", mu) if mu else (((), Fraction(1)),) for mu in mus]
            for combo in iproduct(*expansions):
                coef = Fraction(1)
                for _, v in combo:
                    coef *= v
                key = (tuple(m), tuple(rho for rho, _ in combo))
                out[key] = out.get(key, 0) + c * const(coef)
        return cls(N, r, width, out)


def pleth_log(series: TruncSeries) -> TruncSeries:
    """Log = Psi^{-1}(log g), Psi^{-1} = sum_d mu(d)/d psi_d."""
    lg = series.log()
    out = series._like({})
    for d in range(1, series.N + 1):
        mu = mobius(d)
        if mu:
            out = out + lg.psi(d).scale(Fraction(mu, d))
    return out


def pleth_exp(series: TruncSeries) -> TruncSeries:
    if series.constant() != 0:
        raise ValueError("Exp needs constant term 0")
    acc = series._like({})
    for d in range(1, series.N + 1):
        acc = acc + series.psi(d).scale(Fraction(1, d))
    return acc.exp()


# ---------------------------------------------------------------------------
# finite-field oracle for the modified Kostka-Foulkes matrix


def kostka_oracle(n: int) -> dict:
    """K~ recovered from fixed-flag counts: interpolate <H~_nu, h_mu>(q) from
    unipotent elements over small fields, then undo the Kostka matrix."""
    from .ff import field_of_size
    from .ffmat import fixed_flag_count, unipotent_class
    from .partitions import column_of
    from .qfunc import interpolate

    parts = partitions(n)
    Qs = [2, 3, 4, 5, 7, 8, 9, 11][: n * (n - 1) // 2 + 2]
    flags = {}
    for nu in parts:
        for mu in parts:
            pts = []
            for Q in Qs:
                F = field_of_size(Q)
                g = unipotent_class(nu, n, F)[0]
                pts.append((Q, fixed_flag_count(F, g, column_of(mu))))
            flags[nu, mu] = interpolate(pts)
    inv = _kostka_inverse(n)
    out = {}
    for nu in parts:
        for lam in parts:
            out[nu, lam] = sum((flags[nu, mu] * inv.get((mu, lam), 0) for mu in parts), QF(0))
    return out
