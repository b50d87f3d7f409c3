"""Symbolic counting pipeline: types, Log coefficients, interpolated H-polynomials,
and the assembled A-polynomials; rank-2 closed forms; plethystic and descent checks."""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable, Sequence

from sympy import factorint

from .bundle import BundleShape, Divisor, divisor_for_profile, profile_feasible, shapes_of_degree
from .ff import base_change_point, divisors, field_of_size, mobius
from .paracount import check_multipartition, count_A_direct, count_I_direct, count_M, unipotent_histogram
from .partitions import multipartitions, normalize
from .qfunc import QF, coeffs, const, evaluate, from_coeffs, interpolate, is_polynomial, subs_power
from .qfunc import q as qsym
from .symfunc import SymExpr, TruncSeries, hall_pair, modified_hl, plethysm_power, pleth_log


class FormulaError(RuntimeError):
    pass


class NonPolynomialCount(FormulaError):
    pass


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class TypeOmega:
    """Multiset of (e, nu) pairs, stored as sorted ((e, nu), multiplicity) items."""

    items: tuple

    @property
    def size(self) -> int:
        return sum(e * sum(nu[0]) * k for (e, nu), k in self.items)

    @property
    def length(self) -> int:
        return sum(k for _, k in self.items)

    @property
    def degrees(self) -> set:
        return {e for (e, _), _ in self.items}

    def expanded(self) -> list:
        return [atom for atom, k in self.items for _ in range(k)]

    def __str__(self):
        parts = []
        for (e, nu), k in self.items:
            s = f"({e},{'|'.join('.'.join(map(str, p)) for p in nu)})"
            parts.append(s + (f"^{k}" if k > 1 else ""))
        return " ".join(parts)


def _atoms(n: int, r: int) -> list:
    out = []
    for e in range(1, n + 1):
        for k in range(1, n // e + 1):
            for nu in multipartitions(k, r):
                out.append((e, nu))
    return out


def enumerate_types(n: int, r: int) -> list:
    """All types of size n (size counted as sum of e * |nu| * multiplicity)."""
    atoms = _atoms(n, r)
    weight = [e * sum(nu[0]) for e, nu in atoms]
    out = []

    def rec(start, remaining, chosen):
        if remaining == 0:
            items: dict = {}
            for a in chosen:
                items[a] = items.get(a, 0) + 1
            out.append(TypeOmega(tuple(sorted(items.items()))))
            return
        for i in range(start, len(atoms)):
            if weight[i] <= remaining:
                rec(i, remaining - weight[i], chosen + [atoms[i]])

    rec(0, n, [])
    return out


def c_omega(omega: TypeOmega) -> Fraction:
    degs = omega.degrees
    if len(degs) != 1:
        return Fraction(0)
    (e,) = degs
    ell = omega.length
    denom = 1
    for _, k in omega.items:
        denom *= factorial(k)
    return Fraction(mobius(e), e) * (-1) ** (ell - 1) * Fraction(factorial(ell - 1), denom)


# ---------------------------------------------------------------------------
# H-polynomials


def prime_powers(start: int = 2) -> Iterable[int]:
    Q = start
    while True:
        if len(factorint(Q)) == 1:
            yield Q
        Q += 1


_CACHE_DIR: str | None = None
_HIST_MEMO: dict = {}
_NUM_MEMO: dict = {}
JOBS = 1


def set_cache_dir(path: str | None):
    global _CACHE_DIR
    _CACHE_DIR = path
    if path:
        os.makedirs(path, exist_ok=True)


def set_jobs(jobs: int):
    global JOBS
    JOBS = max(1, int(jobs))


def _cache_path(kind: str, payload) -> str | None:
    if not _CACHE_DIR:
        return None
    digest = hashlib.sha256(json.dumps([kind, payload], sort_keys=True).encode()).hexdigest()[:24]
    return os.path.join(_CACHE_DIR, f"{kind}-{digest}.json")


def _histogram_job(args):
    b, m, profile, Q = args
    F = field_of_size(Q)
    D = divisor_for_profile(F, profile)
    hist = unipotent_histogram(BundleShape(b, m), D)
    return {json.dumps([list(map(list, k))]): v for k, v in hist.items()}


def unipotent_counts(shape: BundleShape, profile: Sequence[int], Q: int) -> dict:
    """{(Jordan type per point): #automorphisms} over GF(Q), affine points only."""
    key = (shape.b, shape.m, tuple(profile), Q)
    got = _HIST_MEMO.get(key)
    if got is not None:
        return got
    path = _cache_path("hist", [list(shape.b), list(shape.m), list(profile), Q])
    raw = None
    if path and os.path.exists(path):
        with open(path) as fh:
            raw = json.load(fh)
    if raw is None:
        raw = _histogram_job(key)
        if path:
            with open(path, "w") as fh:
                json.dump(raw, fh, sort_keys=True)
    out = {tuple(tuple(p) for p in json.loads(k)[0]): v for k, v in raw.items()}
    _HIST_MEMO[key] = out
    return out


def sample_fields(shape: BundleShape, profile: Sequence[int], count: int) -> list:
    out = []
    for Q in prime_powers():
        if profile_feasible(Q, profile):
            out.append(Q)
            if len(out) == count:
                return out


def _prefetch(shape: BundleShape, profile: Sequence[int], Qs: Sequence[int]):
    todo = [Q for Q in Qs if (shape.b, shape.m, tuple(profile), Q) not in _HIST_MEMO]
    if JOBS > 1 and len(todo) > 1 and not _CACHE_DIR:
        with ProcessPoolExecutor(max_workers=JOBS) as pool:
            for Q, raw in zip(todo, pool.map(_histogram_job, [(shape.b, shape.m, tuple(profile), Q) for Q in todo])):
                _HIST_MEMO[(shape.b, shape.m, tuple(profile), Q)] = {
                    tuple(tuple(p) for p in json.loads(k)[0]): v for k, v in raw.items()}
    for Q in Qs:
        unipotent_counts(shape, profile, Q)


def h_numerator(shape: BundleShape, nu: Sequence[Sequence[int]], profile: Sequence[int]):
    """Polynomial N(q) = #{h in Aut(E): h(a_i) unipotent of type nu^i}."""
    nu = tuple(normalize(p) for p in nu)
    key = (shape.b, shape.m, nu, tuple(profile))
    got = _NUM_MEMO.get(key)
    if got is not None:
        return got
    if len(nu) != len(profile):
        raise ValueError("one partition per point needed")
    check_multipartition(nu, shape.rank, len(profile))
    if shape.rank == 1:
        _NUM_MEMO[key] = QF(1)
        return _NUM_MEMO[key]
    deg = shape.dim_end
    Qs = sample_fields(shape, profile, deg + 3)
    _prefetch(shape, profile, Qs)
    values = [(Q, unipotent_counts(shape, profile, Q).get(nu, 0)) for Q in Qs]
    poly = interpolate(values[: deg + 1])
    for Q, v in values[deg + 1:]:
        if evaluate(poly, Q) != v:
            raise NonPolynomialCount(
                f"non-polynomial count for {shape}, nu={nu}, profile={tuple(profile)} at q={Q}")
    _NUM_MEMO[key] = poly
    return poly


def h_polynomial(shape: BundleShape, nu: Sequence[Sequence[int]], profile: Sequence[int]):
    return h_numerator(shape, nu, profile) / shape.aut_order_poly()


def _split_shapes(shape: BundleShape, parts: Sequence[tuple]) -> Iterable[tuple]:
    """Tuples (v_1, ..., v_s) of multiplicity vectors with sum e_i * v_i = m and
    |v_i| = n_i, for parts [(e_i, n_i)]."""
    width = len(shape.m)

    def rec(i, remaining):
        if i == len(parts):
            if not any(remaining):
                yield ()
            return
        e, n = parts[i]
        for v in _compositions(n, width):
            if all(e * x <= y for x, y in zip(v, remaining)):
                rest = tuple(y - e * x for x, y in zip(v, remaining))
                for tail in rec(i + 1, rest):
                    yield (v,) + tail

    yield from rec(0, tuple(shape.m))


@lru_cache(maxsize=None)
def _compositions(n: int, width: int) -> tuple:
    if width == 1:
        return ((n,),)
    return tuple((k,) + rest for k in range(n + 1) for rest in _compositions(n - k, width - 1))


def _subshape(shape: BundleShape, v: Sequence[int]) -> BundleShape:
    b = tuple(x for x, k in zip(shape.b, v) if k)
    m = tuple(k for k in v if k)
    return BundleShape(b, m)


def h_omega(shape: BundleShape, omega: TypeOmega, profile: Sequence[int]):
    """H_omega^m via the multiplicative decomposition over the parts of omega."""
    atoms = omega.expanded()
    parts = [(e, sum(nu[0])) for e, nu in atoms]
    total = QF(0)
    for vs in _split_shapes(shape, parts):
        term = QF(1)
        for (e, nu), v in zip(atoms, vs):
            term *= subs_power(h_polynomial(_subshape(shape, v), nu, profile), e)
        total += term
    return total


# ---------------------------------------------------------------------------
# pairings and the assembled formula


@lru_cache(maxsize=None)
def _hl(nu: tuple, d: int) -> SymExpr:
    H = modified_hl(nu)
    return H if d == 1 else H.map_coefficients(lambda c: subs_power(c, d))


def point_factor(omega: TypeOmega, i: int, d: int) -> SymExpr:
    """prod over (e, nu) of [psi_{e/g} H~_{nu^i}(x; q^d)]^g with g = gcd(e, d)."""
    out = SymExpr({(): QF(1)})
    for e, nu in omega.expanded():
        g = gcd(e, d)
        f = plethysm_power(_hl(nu[i], d), e // g)
        for _ in range(g):
            out = out * f
    return out


def omega_pairing(omega: TypeOmega, profile: Sequence[int], lam: Sequence[Sequence[int]], basis: str = "h"):
    out = QF(1)
    for i, d in enumerate(profile):
        out *= hall_pair(point_factor(omega, i, d), SymExpr.basis_element(basis, lam[i]))
        if out == 0:
            break
    return out


def _assemble(shape: BundleShape, profile: Sequence[int], lam, basis: str):
    n = shape.rank
    r = len(profile)
    lam = tuple(normalize(p) for p in lam)
    check_multipartition(lam, n, r)
    total = QF(0)
    for omega in enumerate_types(n, r):
        c = c_omega(omega)
        if c == 0:
            continue
        pair = omega_pairing(omega, profile, lam, basis)
        if pair == 0:
            continue
        total += const(c) * h_omega(shape, omega, profile) * pair
    return (qsym - 1) * total


def a_formula(shape: BundleShape, profile: Sequence[int], mu: Sequence[Sequence[int]]):
    """A-polynomial of geometrically indecomposable structures of type mu."""
    out = _assemble(shape, profile, mu, "h")
    if not is_polynomial(out) or any(Fraction(c).denominator != 1 for c in coeffs(out)):
        raise FormulaError(f"non-integral A-polynomial {out}")
    return out


def pair_with_power(shape: BundleShape, profile: Sequence[int], lam: Sequence[Sequence[int]]):
    """Same pipeline with h_mu replaced by p_lambda."""
    return _assemble(shape, profile, lam, "p")


# ---------------------------------------------------------------------------
# rank-2 closed forms


def chi_subsets(l: int, m: int, profile: Sequence[int]) -> int:
    """Number of m-subsets of {1..l} invariant under a permutation of cycle type profile."""
    if sum(profile) != l:
        raise ValueError("profile must be a partition of l")
    if not 0 <= m <= l:
        raise ValueError("need 0 <= m <= l")
    poly = [1]
    for d in profile:
        nxt = [0] * (len(poly) + d)
        for i, c in enumerate(poly):
            nxt[i] += c
            nxt[i + d] += c
        poly = nxt
    return poly[m]


def rank2_closed(a: int, b: int, profile: Sequence[int]):
    if a < b:
        a, b = b, a
    l = sum(profile)
    chi = lambda s: chi_subsets(l, s, profile)
    coeffs = []
    if a == b:
        for m in range(0, l - 2):
            coeffs.append(sum(chi(m + 2 * i + 1) for i in range(1, (l - m - 1) // 2 + 1)))
    else:
        g = a - b
        for m in range(0, l - (g + 2) + 1):
            coeffs.append(sum(chi(s) for s in range(m + g + 2, l + 1)))
    return from_coeffs(coeffs) if coeffs else QF(0)


def sumind_closed(profile: Sequence[int]):
    """Closed form of the degree sum of rank-2 borelic A-polynomials."""
    l = sum(profile)
    chi = lambda s: chi_subsets(l, s, profile)
    coeffs = []
    for m in range(0, l - 2):
        coeffs.append(sum(chi(s) for a in range(1, (l - m - 1) // 2 + 1) for s in range(m + 2 * a + 1, l + 1)))
    return from_coeffs(coeffs) if coeffs else QF(0)


def degree_sum_A(n: int, d: int, profile: Sequence[int], mu: Sequence[Sequence[int]]):
    total = QF(0)
    for shape in shapes_of_degree(n, d, sum(profile)):
        total += a_formula(shape, profile, mu)
    return total


# ---------------------------------------------------------------------------
# plethystic check


def verify_hua(q0: int, n_max: int, b_values: Sequence[int], profile: Sequence[int]) -> dict:
    """Check Log(1 + sum M m_mu Y^m) = sum A m_mu Y^m through rank n_max at q = q0.

    psi_d needs coefficient values at q0^d, i.e. counts over the divisor base
    changed to GF(q0^d), where a point of degree e splits into gcd(d, e) points
    carrying the same partition.  Each coefficient is stored as the interpolant
    through those counts, so evaluating the result at q0 is exact.
    """
    bs = tuple(sorted(set(b_values), reverse=True))
    width = len(bs)
    r = len(profile)
    D0 = divisor_for_profile(field_of_size(q0), profile, allow_infinity=True)
    M_terms: dict = {}
    A_terms: dict = {}
    mismatches = []
    for n in range(1, n_max + 1):
        for v in _compositions(n, width):
            shape = _subshape(BundleShape(bs, (1,) * width), v)
            for mu in multipartitions(n, r):
                Mvals, Avals = [], []
                for k in range(1, n_max // n + 1):
                    Q = q0 ** k
                    D, mu_k = base_changed_divisor(D0, k, mu)
                    Mvals.append((Q, count_M(shape, D, mu_k)))
                    Avals.append((Q, count_A_direct(shape, D, mu_k)))
                M_terms[(v, mu)] = interpolate(Mvals)
                A_terms[(v, mu)] = interpolate(Avals)
    M = TruncSeries.from_m_basis(n_max, r, width, M_terms)
    M = M + TruncSeries.one(n_max, r, width)
    logged = pleth_log(M).to_m_basis()
    keys = set(logged) | set(A_terms)
    rows = []
    for key in sorted(keys):
        lhs = evaluate(logged.get(key, QF(0)), q0)
        rhs = evaluate(A_terms.get(key, QF(0)), q0)
        rows.append({"m": list(key[0]), "mu": [list(p) for p in key[1]], "log": str(lhs), "A": str(rhs)})
        if lhs != rhs:
            mismatches.append(key)
    return {"q": q0, "n_max": n_max, "b": list(bs), "profile": list(profile),
            "terms": len(rows), "ok": not mismatches, "rows": rows}


# ---------------------------------------------------------------------------
# descent between indecomposable and geometrically indecomposable counts


def base_changed_divisor(D: Divisor, r: int, mu: Sequence) -> tuple:
    """(divisor over GF(Q^r), multipartition with mu^i repeated at each point over a_i)."""
    pts, new_mu = [], []
    for pt, part in zip(D.points, mu):
        for sub in base_change_point(pt, r):
            pts.append(sub)
            new_mu.append(part)
    base = pts[0].base
    return Divisor(base, tuple(pts)), tuple(new_mu)


def descent_check(shape: BundleShape, profile: Sequence[int], mu: Sequence[Sequence[int]], Q: int) -> dict:
    """Both descent relations between A and I at GF(Q), with the I- and A-terms
    of the divided types counted over base-changed divisors."""
    mu = tuple(normalize(p) for p in mu)
    F = field_of_size(Q)
    D = divisor_for_profile(F, profile, allow_infinity=True)
    g = 0
    for k in shape.m:
        g = gcd(g, k)
    for p in mu:
        for x in p:
            g = gcd(g, x)

    def divided(d):
        sh = BundleShape(shape.b, tuple(k // d for k in shape.m))
        return sh, tuple(tuple(x // d for x in p) for p in mu)

    def at(count, d, r):
        sh, m2 = divided(d)
        D2, mu2 = base_changed_divisor(D, r, m2)
        return count(sh, D2, mu2)

    A = count_A_direct(shape, D, mu)
    I = count_I_direct(shape, D, mu)
    rhs_A = Fraction(0)
    rhs_I = Fraction(0)
    for d in divisors(g):
        for r in divisors(d):
            rhs_A += Fraction(mobius(r), d) * at(count_I_direct, d, r)
            rhs_I += Fraction(mobius(r), d) * at(count_A_direct, d, d // r)
    return {"shape": str(shape), "profile": list(profile), "mu": [list(p) for p in mu], "q": Q,
            "gcd": g, "A": A, "I": I, "A_from_I": str(rhs_A), "I_from_A": str(rhs_I),
            "ok": rhs_A == A and rhs_I == I}
