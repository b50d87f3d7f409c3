"""Higgs fields with residues in prescribed semisimple orbits: genericity,
direct and Fourier point counts, and the identities tying them to A-counts."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Sequence

from .bundle import BundleShape, Divisor, EndSpace
from .cyclo import Cyclo
from .ff import Field, deg, make_field, poly_mul, roots
from .ffmat import CapExceeded, cap, charpoly, det, hc_value, irreducible_polys, minpoly
from .paracount import count_A_direct
from .partitions import normalize
from .qfunc import evaluate


class GenericityError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitSpec:
    """Semisimple orbit in gl_n(K) with characteristic polynomial prod f^mult."""

    field: Field
    factors: tuple  # ((poly, mult), ...)

    @property
    def n(self) -> int:
        return sum(deg(f) * k for f, k in self.factors)

    @property
    def charpoly(self) -> tuple:
        out = (1,)
        for f, k in self.factors:
            for _ in range(k):
                out = poly_mul(self.field, out, f)
        return out

    @property
    def minpoly(self) -> tuple:
        out = (1,)
        for f, _ in self.factors:
            out = poly_mul(self.field, out, f)
        return out

    @property
    def dim(self) -> int:
        """Dimension of the orbit over the algebraic closure."""
        n = self.n
        return n * n - sum(deg(f) * k * k for f, k in self.factors)

    def trace(self) -> int:
        """Trace of any element: minus the subleading coefficient of the charpoly."""
        cp = self.charpoly
        return self.field.neg(cp[-2]) if len(cp) >= 2 else 0

    def __str__(self):
        parts = []
        for f, k in self.factors:
            parts.append(f"{list(f)}" + (f"^{k}" if k > 1 else ""))
        return "*".join(parts)


@dataclass
class GenericityReport:
    generic: bool
    witness: tuple | None = None
    reason: str = ""


# ---------------------------------------------------------------------------
# embeddings into a common splitting field


def absolute_degree(K: Field) -> int:
    d, F = 1, K
    while F.base is not None:
        d *= F.rel_degree
        F = F.base
    return d


_EMB: dict = {}


def embed(K: Field, L: Field) -> list:
    """A field embedding K -> L as a lookup table (L a simple extension of F_p)."""
    key = (K.key, L.key)
    got = _EMB.get(key)
    if got is not None:
        return got
    if K.base is None:
        table = list(range(K.size))
    else:
        low = embed(K.base, L)
        mod = tuple(low[c] for c in K.modulus)
        rs = roots(L, mod)
        if not rs:
            raise GenericityError(f"{K} does not embed in {L}")
        rho = rs[0]
        powers = [1]
        for _ in range(K.rel_degree - 1):
            powers.append(L.mul(powers[-1], rho))
        table = []
        for x in range(K.size):
            acc = 0
            for c, pw in zip(K._digits(x), powers):
                if c:
                    acc = L.add(acc, L.mul(low[c], pw))
            table.append(acc)
    _EMB[key] = table
    return table


def splitting_field(specs: Sequence[OrbitSpec]) -> Field:
    p = specs[0].field.p
    N = 1
    for s in specs:
        a = absolute_degree(s.field)
        for f, _ in s.factors:
            k = a * deg(f)
            N = N * k // gcd(N, k)
    return make_field(p, N)


def conjugate_eigenvalues(spec: OrbitSpec, q: int, d: int, L: Field) -> list:
    """Eigenvalue multisets of A, F(A), ..., F^{d-1}(A) inside L (F = q-Frobenius)."""
    table = embed(spec.field, L)
    eig = []
    for f, k in spec.factors:
        mapped = tuple(table[c] for c in f)
        rs = roots(L, mapped)
        if len(rs) != deg(f):
            raise GenericityError("splitting field too small")
        eig.extend(r for r in rs for _ in range(k))
    out = []
    for s in range(d):
        out.append(sorted(L.pow(x, q ** s) for x in eig))
    return out


def _subsums(L: Field, eig: Sequence[int], m: int) -> dict:
    out = {}
    for sel in itertools.combinations(range(len(eig)), m):
        vals = tuple(sorted(eig[i] for i in sel))
        s = 0
        for v in vals:
            s = L.add(s, v)
        out.setdefault(s, vals)
    return out


def check_generic_eigen(L: Field, orbits: Sequence[Sequence[int]]) -> GenericityReport:
    """Genericity of a tuple of eigenvalue multisets over L."""
    n = len(orbits[0])
    total = 0
    for e in orbits:
        if len(e) != n:
            raise ValueError("all orbits must have the same rank")
        for x in e:
            total = L.add(total, x)
    if total != 0:
        return GenericityReport(False, None, "total trace is nonzero")
    for m in range(1, n):
        reach = {0: ()}
        for e in orbits:
            nxt = {}
            for s, sel in reach.items():
                for t, vals in _subsums(L, e, m).items():
                    nxt.setdefault(L.add(s, t), sel + (vals,))
            reach = nxt
        if 0 in reach:
            return GenericityReport(False, reach[0], f"a selection of {m} eigenvalues per orbit sums to zero")
    return GenericityReport(True)


def check_generic(specs: Sequence[OrbitSpec], degrees: Sequence[int] | None = None, q: int | None = None) -> GenericityReport:
    """Genericity of orbits at points of the given degrees over GF(q)."""
    if not specs:
        raise ValueError("no orbits")
    n = specs[0].n
    if any(s.n != n for s in specs):
        raise ValueError("all orbits must have the same rank")
    degrees = list(degrees) if degrees is not None else [1] * len(specs)
    if q is None:
        if any(d != 1 for d in degrees):
            raise ValueError("q is needed when some point has degree > 1")
        q = specs[0].field.size
    L = splitting_field(specs)
    if L.size > cap(1 << 20):
        raise CapExceeded(f"splitting field of size {L.size} exceeds cap")
    orbits = []
    for s, d in zip(specs, degrees):
        orbits.extend(conjugate_eigenvalues(s, q, d, L))
    return check_generic_eigen(L, orbits)


# ---------------------------------------------------------------------------
# construction


def split_pattern(mu: Sequence[int]) -> tuple:
    return tuple((1, k) for k in normalize(mu))


def twisted_pattern(lam: Sequence[int]) -> tuple:
    return tuple((k, 1) for k in normalize(lam))


def _irreducibles(K: Field, d: int) -> list:
    if d == 1:
        return [(K.neg(a), 1) for a in range(K.size)]
    return irreducible_polys(K, d)


def orbit_candidates(K: Field, pattern: Sequence[tuple]) -> list:
    """All OrbitSpecs with distinct factors of the given (degree, multiplicity) pattern."""
    pattern = sorted(pattern, key=lambda x: (-x[0], -x[1]))
    pools = [_irreducibles(K, d) for d, _ in pattern]
    out = []

    def rec(i, used, chosen, last_idx):
        if i == len(pattern):
            out.append(OrbitSpec(K, tuple(chosen)))
            return
        start = last_idx + 1 if i > 0 and pattern[i] == pattern[i - 1] else 0
        for j in range(start, len(pools[i])):
            f = pools[i][j]
            if f in used:
                continue
            rec(i + 1, used | {f}, chosen + [(f, pattern[i][1])], j)

    rec(0, frozenset(), [], -1)
    return out


def char_guard(F: Field, patterns: Sequence[Sequence[tuple]]):
    d = min(max(k for _, k in pat) for pat in patterns)
    if factorial(d) % F.p == 0:
        raise GenericityError(f"characteristic {F.p} divides {d}!")


def find_generic(divisor: Divisor, patterns: Sequence[Sequence[tuple]], limit: int | None = None) -> list:
    """First generic tuple of orbits (lexicographic over candidates) with one
    (degree, multiplicity) pattern per point."""
    F = divisor.base
    q = F.size
    pts = divisor.points
    if len(patterns) != len(pts):
        raise ValueError("one pattern per point needed")
    char_guard(F, patterns)
    cands = [orbit_candidates(pt.residue_field, pat) for pt, pat in zip(pts, patterns)]
    if any(not c for c in cands):
        raise GenericityError(f"no orbit of the requested type over GF({q})")
    # candidates at a point share their factor degrees, so one field serves all
    L = splitting_field([c[0] for c in cands])
    eig = [[conjugate_eigenvalues(s, q, pt.degree, L) for s in c] for c, pt in zip(cands, pts)]
    limit = cap(1 << 22) if limit is None else limit
    tried = 0
    for combo in itertools.product(*[range(len(c)) for c in cands]):
        tried += 1
        if tried > limit:
            raise CapExceeded("generic search exceeded cap")
        orbits = [o for i, j in enumerate(combo) for o in eig[i][j]]
        if check_generic_eigen(L, orbits).generic:
            return [cands[i][j] for i, j in enumerate(combo)]
    raise GenericityError(f"no generic tuple of this type over GF({q})")


# ---------------------------------------------------------------------------
# orbit enumeration


_ORBITS: dict = {}


def enumerate_orbit(spec: OrbitSpec) -> list:
    key = (spec.field.key, spec.factors)
    got = _ORBITS.get(key)
    if got is not None:
        return got
    K = spec.field
    n = spec.n
    cp = spec.charpoly
    out = []
    if n == 1:
        out = [((K.neg(cp[0]),),)]
    elif n == 2:
        t, dt = K.neg(cp[1]), cp[0]
        if len(spec.factors) == 1 and spec.factors[0][1] == 2:
            lam = K.neg(spec.factors[0][0][0])
            out = [((lam, 0), (0, lam))]
        else:
            for a in range(K.size):
                d = K.sub(t, a)
                rhs = K.sub(K.mul(a, d), dt)  # b * c must equal this
                for b in range(K.size):
                    if b:
                        out.append(((a, b), (K.div(rhs, b), d)))
                    elif rhs == 0:
                        for c in range(K.size):
                            out.append(((a, 0), (c, d)))
    else:
        total = K.size ** (n * n)
        if total > cap(1 << 20):
            raise CapExceeded(f"orbit filter over {total} matrices exceeds cap")
        mp = spec.minpoly
        for vals in itertools.product(range(K.size), repeat=n * n):
            A = tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(n))
            if charpoly(K, A) == cp and minpoly(K, A) == mp:
                out.append(A)
    _ORBITS[key] = out
    return out


# ---------------------------------------------------------------------------
# counts


def _pairing_vectors(E: EndSpace, pt, orbit: Sequence) -> Counter:
    """Histogram of (Tr_{K/F_q} tr(y * B_k(a)))_k over y in the orbit."""
    K = pt.residue_field
    F = E.F
    ev = E.eval_basis(pt)
    hist: Counter = Counter()
    for y in orbit:
        vec = tuple(K.trace_to(K.mul(y[c][a], v), F) if v else 0 for a, c, v in ev)
        hist[vec] += 1
    return hist


def y_count(shape: BundleShape, divisor: Divisor, specs: Sequence[OrbitSpec]) -> int:
    F = divisor.base
    E = EndSpace(shape, F)
    acc: Counter = Counter({(0,) * E.dim: 1})
    for pt, spec in zip(divisor.points, specs):
        if spec.field != pt.residue_field:
            raise ValueError("orbit must live over the residue field of its point")
        hist = _pairing_vectors(E, pt, enumerate_orbit(spec))
        nxt: Counter = Counter()
        for u, a in acc.items():
            for v, b in hist.items():
                nxt[tuple(F.add(x, y) for x, y in zip(u, v))] += a * b
        acc = nxt
    return acc.get((0,) * E.dim, 0)


def x_count(shape: BundleShape, divisor: Divisor, specs: Sequence[OrbitSpec]) -> int:
    return divisor.base.size ** shape.delta * y_count(shape, divisor, specs)


def fourier_count(shape: BundleShape, divisor: Divisor, specs: Sequence[OrbitSpec]) -> int:
    """q^{-n^2} sum over End(E) of products of Fourier transforms of orbit indicators."""
    F = divisor.base
    p = F.p
    n = shape.rank
    E = EndSpace(shape, F)
    E.check_cap(F.size ** E.dim, "End(E)")
    pts = divisor.points
    orbits = [enumerate_orbit(s) for s in specs]
    memo = [dict() for _ in pts]

    def transform(i, x):
        got = memo[i].get(x)
        if got is None:
            K = pts[i].residue_field
            coeffs = [0] * p
            for y in orbits[i]:
                tr = 0
                for a in range(n):
                    for b in range(n):
                        if x[a][b] and y[b][a]:
                            tr = K.add(tr, K.mul(x[a][b], y[b][a]))
                coeffs[K.trace_to_prime(tr)] += 1
            got = Cyclo(p, coeffs)
            memo[i][x] = got
        return got

    total = Cyclo(p)
    for h in E.enumerate_end():
        term = None
        for i, pt in enumerate(pts):
            v = transform(i, E.evaluate(h, pt))
            term = v if term is None else term * v
            if not any(term.c):
                break
        total = total + term
    value = total.rational() / F.size ** (n * n)
    if value.denominator != 1:
        raise ArithmeticError(f"Fourier count is not an integer: {value}")
    return int(value)


def paut_order(shape: BundleShape, Q: int) -> int:
    return shape.aut_order(Q) // (Q - 1)


def d_dim(specs: Sequence[OrbitSpec], profile: Sequence[int]) -> int:
    n = specs[0].n
    return sum(d * s.dim for s, d in zip(specs, profile)) - 2 * n * n + 2


def epsilon_r(lam: Sequence[Sequence[int]], n: int) -> int:
    r = len(lam)
    return (-1) ** (r * n + sum(len(normalize(p)) for p in lam))


def _compare_power(lhs: Fraction, d: int, Q: int, rhs: Fraction) -> bool:
    """lhs == Q^{d/2} * rhs, squared when d is odd."""
    if d % 2 == 0:
        return lhs == Fraction(Q) ** (d // 2) * rhs if d >= 0 else lhs * Fraction(Q) ** (-d // 2) == rhs
    return lhs * lhs == Fraction(Q) ** d * rhs * rhs


def verify_maintheo(shape: BundleShape, divisor: Divisor, mu: Sequence[Sequence[int]],
                    A=None, fourier: bool = True) -> dict:
    """x_count / |PAut| against q^{d/2} * A for a generic tuple of type mu."""
    F = divisor.base
    Q = F.size
    mu = tuple(normalize(p) for p in mu)
    specs = find_generic(divisor, [split_pattern(p) for p in mu])
    y = y_count(shape, divisor, specs)
    x = Q ** shape.delta * y
    pa = paut_order(shape, Q)
    d = d_dim(specs, divisor.degrees)
    if A is None:
        A = count_A_direct(shape, divisor, mu)
    lhs = Fraction(x, pa)
    report = {"shape": str(shape), "q": Q, "profile": list(divisor.degrees), "mu": [list(p) for p in mu],
              "orbits": [str(s) for s in specs], "y": y, "x": x, "paut": pa, "d": d,
              "x_over_paut": str(lhs), "A": int(A), "ok": lhs.denominator == 1 and _compare_power(lhs, d, Q, Fraction(A))}
    if fourier:
        fc = fourier_count(shape, divisor, specs)
        report["fourier"] = fc
        report["ok"] = report["ok"] and fc == x
    return report


def verify_lasttheo(shape: BundleShape, divisor: Divisor, lam: Sequence[Sequence[int]], value=None) -> dict:
    """eps * q^{-d/2} * x_count / |PAut| against the p-pairing evaluated at q."""
    from .formula import pair_with_power

    F = divisor.base
    Q = F.size
    n = shape.rank
    lam = tuple(normalize(p) for p in lam)
    specs = find_generic(divisor, [twisted_pattern(p) for p in lam])
    x = x_count(shape, divisor, specs)
    pa = paut_order(shape, Q)
    d = d_dim(specs, divisor.degrees)
    eps = epsilon_r(lam, n)
    if value is None:
        value = evaluate(pair_with_power(shape, divisor.degrees, lam), Q)
    lhs = eps * Fraction(x, pa)
    return {"shape": str(shape), "q": Q, "profile": list(divisor.degrees), "lambda": [list(p) for p in lam],
            "orbits": [str(s) for s in specs], "x": x, "paut": pa, "d": d, "epsilon": eps,
            "pairing": str(value), "ok": _compare_power(lhs, d, Q, Fraction(value))}


# ---------------------------------------------------------------------------
# group and Lie character sums


def charsum_check(shape: BundleShape, divisor: Divisor, mu: Sequence[Sequence[int]], order: int = 2) -> dict:
    """(q-1) sum_End prod R^gl(eta_i) = q sum_Aut prod R^GL(alpha_i), by literal summation.

    The Levi L_i at point i has blocks of sizes mu^i.  eta comes from a generic
    split orbit tuple of type mu (eta_i = psi(sum_j c_j tr x_j)).  alpha is
    trivial except at the last degree-1 point, where it is sigma o det with
    sigma of the given order.
    """
    F = divisor.base
    Q, p = F.size, F.p
    n = shape.rank
    pts = divisor.points
    twist = max((i for i, pt in enumerate(pts) if pt.degree == 1), default=None)
    if twist is None:
        raise ValueError("charsum check needs a degree-1 point")
    if (Q - 1) % order or order % n:
        raise ValueError("character order must be a multiple of n dividing q - 1")
    specs = find_generic(divisor, [split_pattern(m) for m in mu])
    comps = [tuple(k for _, k in s.factors) for s in specs]
    etas = [tuple(s.field.neg(f[0]) for f, _ in s.factors) for s in specs]
    step = (Q - 1) // order
    E = EndSpace(shape, F)

    def group_fn(i):
        def fn(blocks):
            if i != twist:
                return 1
            e = sum(F.log(det(F, b)) // step for b in blocks)
            return Cyclo.root(order, e)
        return fn

    def lie_fn(i):
        K = pts[i].residue_field

        def fn(blocks):
            t = 0
            for c, b in zip(etas[i], blocks):
                for j in range(len(b)):
                    t = K.add(t, K.mul(c, b[j][j]))
            return Cyclo.root(p, K.trace_to_prime(t))
        return fn

    fns = {"group": [group_fn(i) for i in range(len(pts))], "lie": [lie_fn(i) for i in range(len(pts))]}
    memo = {"group": [dict() for _ in pts], "lie": [dict() for _ in pts]}
    width = {"group": order, "lie": p}

    def value(mode, i, x):
        got = memo[mode][i].get(x)
        if got is None:
            got = hc_value(mode, n, pts[i].residue_field, comps[i], fns[mode][i], x)
            if not isinstance(got, Cyclo):
                got = Cyclo.root(width[mode], 0, got)
            memo[mode][i][x] = got
        return got

    def total(mode, elements):
        acc = Cyclo(width[mode])
        for h in elements:
            term = None
            for i, pt in enumerate(pts):
                v = value(mode, i, E.evaluate(h, pt))
                term = v if term is None else term * v
                if not any(term.c):
                    break
            acc = acc + term
        return acc.rational()

    g = total("group", E.enumerate_aut())
    l = total("lie", E.enumerate_end())
    return {"shape": str(shape), "q": Q, "profile": list(divisor.degrees), "mu": [list(m) for m in mu],
            "eta": [list(e) for e in etas], "group_side": str(Q * g), "lie_side": str((Q - 1) * l),
            "ok": (Q - 1) * l == Q * g}
