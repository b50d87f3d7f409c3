"""Matrices over finite fields: invariants, flags, unipotent classes and
literal Harish-Chandra induction sums.

Matrices are tuples of row tuples of field ints.  Vectors are tuples and are
acted on as columns.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Callable, Iterator, Sequence

from .ff import (
    Field,
    deg,
    factor,
    monic_polys,
    is_irreducible,
    poly_gcd,
    poly_deriv,
    poly_norm,
    poly_pow,
)
from .partitions import conjugate, partitions

Matrix = tuple


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured size cap."""


def cap(default: int) -> int:
    env = os.environ.get("PARACOUNT_CAP")
    return int(env) if env else default


# ---------------------------------------------------------------------------
# basic linear algebra


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero(n: int, m: int | None = None) -> Matrix:
    return tuple((0,) * (n if m is None else m) for _ in range(n))


def mat_add(F: Field, A: Matrix, B: Matrix) -> Matrix:
    add = F.add
    return tuple(tuple(add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(F: Field, A: Matrix, B: Matrix) -> Matrix:
    sub = F.sub
    return tuple(tuple(sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(F: Field, c: int, A: Matrix) -> Matrix:
    mul = F.mul
    return tuple(tuple(mul(c, a) for a in row) for row in A)


def mat_mul(F: Field, A: Matrix, B: Matrix) -> Matrix:
    add, mul = F.add, F.mul
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = add(acc, mul(a, b))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(F: Field, A: Matrix, v: Sequence[int]) -> tuple:
    add, mul = F.add, F.mul
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = add(acc, mul(a, b))
        out.append(acc)
    return tuple(out)


def mat_pow(F: Field, A: Matrix, e: int) -> Matrix:
    out = identity(len(A))
    for _ in range(e):
        out = mat_mul(F, out, A)
    return out


def rref(F: Field, rows: Sequence[Sequence[int]]) -> tuple:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return (), ()
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(F: Field, A: Matrix) -> int:
    return len(rref(F, A)[0])


def nullspace(F: Field, A: Matrix) -> list:
    """Basis of {x : A x = 0}."""
    ncols = len(A[0]) if A else 0
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for row, pc in zip(R, piv):
            x[pc] = F.neg(row[fc])
        basis.append(tuple(x))
    return basis


def det(F: Field, A: Matrix) -> int:
    M = [list(r) for r in A]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def inverse(F: Field, A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(r) + list(e) for r, e in zip(A, identity(n))]
    R, piv = rref(F, aug)
    if tuple(piv[:n]) != tuple(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in R)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return tuple(tuple(r) for r in out)


def companion(F: Field, f: Sequence[int]) -> Matrix:
    """Companion matrix of the monic polynomial f (lowest coefficient first)."""
    n = len(f) - 1
    out = [[0] * n for _ in range(n)]
    for i in range(1, n):
        out[i][i - 1] = 1
    for i in range(n):
        out[i][n - 1] = F.neg(f[i])
    return tuple(tuple(r) for r in out)


def jordan_unipotent(lam: Sequence[int]) -> Matrix:
    blocks = []
    for k in lam:
        blocks.append(tuple(tuple(1 if (i == j or j == i + 1) else 0 for j in range(k)) for i in range(k)))
    return block_diag(blocks)


# ---------------------------------------------------------------------------
# polynomial invariants


def charpoly(F: Field, A: Matrix) -> tuple:
    """Characteristic polynomial det(tI - A) via Hessenberg reduction."""
    n = len(A)
    H = [list(r) for r in A]
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if H[i][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            H[c + 1], H[piv] = H[piv], H[c + 1]
            for row in H:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = F.inv(H[c + 1][c])
        for i in range(c + 2, n):
            if H[i][c]:
                f = F.mul(H[i][c], inv)
                H[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(H[i], H[c + 1])]
                for row in H:
                    row[c + 1] = F.add(row[c + 1], F.mul(f, row[i]))
    polys = [(1,)]
    for k in range(n):
        # p_{k+1} = (t - h_kk) p_k - sum_{i<k} h_{ik} (prod_{j=i+1}^{k} h_{j,j-1}) p_i
        pk = polys[-1]
        nxt = [0] * (len(pk) + 1)
        for i, c in enumerate(pk):
            nxt[i + 1] = F.add(nxt[i + 1], c)
            nxt[i] = F.sub(nxt[i], F.mul(H[k][k], c))
        sub = 1
        for i in range(k - 1, -1, -1):
            sub = F.mul(sub, H[i + 1][i])
            if sub == 0:
                break
            coef = F.mul(H[i][k], sub)
            if coef:
                for j, c in enumerate(polys[i]):
                    nxt[j] = F.sub(nxt[j], F.mul(coef, c))
        polys.append(poly_norm(nxt))
    return polys[-1]


def poly_of_matrix(F: Field, f: Sequence[int], A: Matrix) -> Matrix:
    n = len(A)
    out = zero(n)
    for c in reversed(f):
        out = mat_mul(F, out, A)
        if c:
            out = mat_add(F, out, mat_scale(F, c, identity(n)))
    return out


def minpoly(F: Field, A: Matrix) -> tuple:
    """Minimal polynomial via the first linear dependency among I, A, A^2, ..."""
    n = len(A)
    powers = [identity(n)]
    while True:
        vecs = [tuple(x for row in P for x in row) for P in powers]
        # solve sum c_i vec_i = 0 with c_last = 1
        cols = transpose(vecs)
        ns = nullspace(F, cols)
        if ns:
            v = ns[0]
            last = max(i for i, c in enumerate(v) if c)
            inv = F.inv(v[last])
            return poly_norm(F.mul(inv, c) for c in v[: last + 1])
        powers.append(mat_mul(F, powers[-1], A))


@dataclass(frozen=True)
class ClassInfo:
    invariant: tuple  # sorted ((irreducible poly, partition), ...)
    semisimple: bool
    nilpotent: bool
    invertible: bool
    unipotent: bool


_CLASSIFY: dict = {}


def class_invariant(F: Field, A: Matrix) -> tuple:
    n = len(A)
    data = []
    for f, e in factor(F, charpoly(F, A)):
        M = poly_of_matrix(F, f, A)
        d = deg(f)
        P = identity(n)
        dims = [0]
        for _ in range(e):
            P = mat_mul(F, P, M)
            k = n - rank(F, P)
            dims.append(k)
            if k == d * e:
                break
        conj = [(dims[j] - dims[j - 1]) // d for j in range(1, len(dims))]
        conj = [c for c in conj if c]
        data.append((f, conjugate(conj)))
    return tuple(sorted(data))


def classify(F: Field, A: Matrix) -> ClassInfo:
    key = (F.key, A)
    info = _CLASSIFY.get(key)
    if info is not None:
        return info
    inv = class_invariant(F, A)
    semisimple = all(set(lam) == {1} for _, lam in inv)
    nilpotent = len(inv) == 1 and inv[0][0] == (0, 1)
    invertible = all(f != (0, 1) for f, _ in inv)
    unipotent = len(inv) == 1 and inv[0][0] == (F.neg(1), 1)
    info = ClassInfo(inv, semisimple, nilpotent, invertible, unipotent)
    if len(_CLASSIFY) < 200_000:
        _CLASSIFY[key] = info
    return info


def is_semisimple(F: Field, A: Matrix) -> bool:
    m = minpoly(F, A)
    return deg(poly_gcd(F, m, poly_deriv(F, m))) == 0


def unipotent_type(F: Field, A: Matrix) -> tuple:
    """Jordan type of a unipotent matrix from the ranks of (A - 1)^j."""
    n = len(A)
    N = mat_sub(F, A, identity(n))
    ranks = [n]
    P = identity(n)
    while ranks[-1]:
        P = mat_mul(F, P, N)
        r = rank(F, P)
        if r == ranks[-1]:
            raise ValueError("matrix is not unipotent")
        ranks.append(r)
    conj = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    return conjugate(conj)


def unipotent_invariant(F: Field, lam: Sequence[int]) -> tuple:
    return (((F.neg(1), 1), tuple(lam)),)


# ---------------------------------------------------------------------------
# subspaces and partial flags


def reduce_vector(F: Field, v: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int]) -> list:
    v = list(v)
    for row, pc in zip(basis, pivots):
        c = v[pc]
        if c:
            v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
    return v


def _pivots(rows: Sequence[Sequence[int]]) -> tuple:
    return tuple(next(i for i, x in enumerate(r) if x) for r in rows)


def enumerate_subspaces(F: Field, m: int, k: int) -> Iterator[tuple]:
    """All k-dimensional subspaces of F^m as RREF row tuples."""
    Q = F.size
    for piv in itertools.combinations(range(m), k):
        slots = [(i, j) for i in range(k) for j in range(piv[i] + 1, m) if j not in piv]
        for vals in itertools.product(range(Q), repeat=len(slots)):
            rows = [[0] * m for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, j), v in zip(slots, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class PartialFlag:
    """Chain of subspaces, largest first, each in canonical RREF."""

    spaces: tuple

    def __len__(self):
        return len(self.spaces)


def flag_dims(n: int, column: Sequence[int]) -> tuple:
    """Proper nonzero dimensions of a flag column, strictly decreasing."""
    col = tuple(column)
    if any(a < b for a, b in zip(col, col[1:])) or (col and col[0] > n):
        raise ValueError(f"flag column {col} is not non-increasing from {n}")
    return tuple(sorted({d for d in col if 0 < d < n}, reverse=True))


_FLAGS: dict = {}
_FLAGS_LOCK = threading.Lock()


def enumerate_flags(n: int, column: Sequence[int], F: Field) -> list:
    dims = flag_dims(n, column)
    key = (F.key, n, dims)
    got = _FLAGS.get(key)
    if got is not None:
        return got
    out = []

    def rec(prefix, ambient, i):
        if i == len(dims):
            out.append(PartialFlag(tuple(prefix)))
            return
        m = len(ambient)
        for sub in enumerate_subspaces(F, m, dims[i]):
            rows = []
            for coeffs in sub:
                v = [0] * n
                for c, b in zip(coeffs, ambient):
                    if c:
                        v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
                rows.append(v)
            space = rref(F, rows)[0]
            rec(prefix + [space], space, i + 1)

    rec([], identity(n), 0)
    with _FLAGS_LOCK:
        _FLAGS.setdefault(key, out)
    return _FLAGS[key]


def flag_count_formula(n: int, column: Sequence[int], Q: int) -> int:
    """|GL_n(Q)| / |P(Q)| as a q-multinomial."""
    dims = (n,) + flag_dims(n, column) + (0,)
    parts = [a - b for a, b in zip(dims, dims[1:])]
    return gl_order(n, Q) // (prod(gl_order(k, Q) for k in parts) * Q ** sum(
        parts[i] * parts[j] for i in range(len(parts)) for j in range(i + 1, len(parts))))


def act_on_flag(F: Field, g: Matrix, flag: PartialFlag) -> PartialFlag:
    return PartialFlag(tuple(rref(F, [mat_vec(F, g, v) for v in space])[0] for space in flag.spaces))


def fixes_flag(F: Field, g: Matrix, flag: PartialFlag) -> bool:
    for space in flag.spaces:
        piv = _pivots(space)
        for v in space:
            if any(reduce_vector(F, mat_vec(F, g, v), space, piv)):
                return False
    return True


_FIXED: dict = {}


def fixed_flag_count(F: Field, g: Matrix, column: Sequence[int]) -> int:
    """Number of flags of the given type fixed by g (memoized on the class of g)."""
    n = len(g)
    dims = flag_dims(n, column)
    if not dims:
        return 1
    info = classify(F, g)
    if not info.invertible:
        raise ValueError("fixed_flag_count needs an invertible matrix")
    key = (F.key, info.invariant, dims)
    got = _FIXED.get(key)
    if got is None:
        got = sum(1 for fl in enumerate_flags(n, dims, F) if fixes_flag(F, g, fl))
        _FIXED[key] = got
    return got


# ---------------------------------------------------------------------------
# groups and classes


def gl_order(n: int, Q: int) -> int:
    return prod(Q ** n - Q ** i for i in range(n))


_GL: dict = {}


def enumerate_gl(F: Field, n: int, limit: int | None = None) -> list:
    limit = cap(10 ** 7) if limit is None else limit
    if gl_order(n, F.size) > limit:
        raise CapExceeded(f"|GL_{n}({F.size})| exceeds cap {limit}")
    key = (F.key, n)
    got = _GL.get(key)
    if got is None:
        got = []
        for entries in itertools.product(range(F.size), repeat=n * n):
            A = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
            if det(F, A):
                got.append(A)
        _GL[key] = got
    return got


def centralizer_order(lam: Sequence[int], Q: int) -> int:
    """Order of the centralizer of a unipotent element of type lam in GL(Q)."""
    conj = conjugate(tuple(lam))
    mult: dict = {}
    for p in lam:
        mult[p] = mult.get(p, 0) + 1
    out = Fraction(Q) ** sum(c * c for c in conj)
    for m in mult.values():
        for k in range(1, m + 1):
            out *= 1 - Fraction(1, Q ** k)
    assert out.denominator == 1
    return int(out)


def unipotent_class(lam: Sequence[int], n: int, F: Field, brute: bool = False) -> tuple:
    """(Jordan representative, class size)."""
    lam = tuple(sorted(lam, reverse=True))
    if sum(lam) != n:
        raise ValueError(f"partition {lam} does not have size {n}")
    rep = jordan_unipotent(lam)
    if brute:
        cent = sum(1 for g in enumerate_gl(F, n) if mat_mul(F, g, rep) == mat_mul(F, rep, g))
    else:
        cent = centralizer_order(lam, F.size)
    return rep, gl_order(n, F.size) // cent


def irreducible_polys(F: Field, d: int) -> list:
    return [f for f in monic_polys(F, d) if is_irreducible(F, f)]


def gl_classes(F: Field, n: int) -> list:
    """All conjugacy classes of GL_n(F) as (representative, size, invariant)."""
    Q = F.size
    irr = []
    for d in range(1, n + 1):
        irr.extend(f for f in irreducible_polys(F, d) if f != (0, 1))
    out = []

    def rec(i, remaining, chosen):
        if remaining == 0:
            blocks = []
            cent = 1
            for f, lam in chosen:
                for part in lam:
                    blocks.append(companion(F, poly_pow(F, f, part)))
                cent *= centralizer_order(lam, Q ** deg(f))
            rep = block_diag(blocks)
            out.append((rep, gl_order(n, Q) // cent, tuple(sorted(chosen))))
            return
        if i == len(irr):
            return
        f = irr[i]
        d = deg(f)
        rec(i + 1, remaining, chosen)
        for k in range(1, remaining // d + 1):
            for lam in partitions(k):
                rec(i + 1, remaining - d * k, chosen + [(f, lam)])

    rec(0, n, [])
    return out


def parabolic_order(composition: Sequence[int], Q: int) -> int:
    comp = list(composition)
    u = sum(comp[i] * comp[j] for i in range(len(comp)) for j in range(i + 1, len(comp)))
    return prod(gl_order(k, Q) for k in comp) * Q ** u


def _block_bounds(composition):
    out, off = [], 0
    for k in composition:
        out.append((off, off + k))
        off += k
    return out


def in_parabolic(A: Matrix, composition: Sequence[int]) -> bool:
    bounds = _block_bounds(composition)
    for bi, (r0, r1) in enumerate(bounds):
        for bj, (c0, c1) in enumerate(bounds):
            if bj < bi:
                for i in range(r0, r1):
                    for j in range(c0, c1):
                        if A[i][j]:
                            return False
    return True


def levi_blocks(A: Matrix, composition: Sequence[int]) -> tuple:
    return tuple(tuple(tuple(A[i][c0:c1]) for i in range(c0, c1)) for c0, c1 in _block_bounds(composition))


def hc_value(mode: str, n: int, F: Field, composition: Sequence[int], fn: Callable, x: Matrix, limit: int | None = None):
    """Harish-Chandra induction from the standard Levi of ``composition`` evaluated at x.

    ``fn`` maps the tuple of Levi blocks to a value; group mode conjugates an
    invertible x, lie mode any x.  Returns fn-values summed and divided by |P|.
    """
    if sum(composition) != n:
        raise ValueError("composition must sum to n")
    if mode not in ("group", "lie"):
        raise ValueError("mode is 'group' or 'lie'")
    if mode == "group" and not det(F, x):
        raise ValueError("group mode needs an invertible element")
    limit = cap(10 ** 7) if limit is None else limit
    G = enumerate_gl(F, n, limit)
    total = 0
    for h in G:
        y = mat_mul(F, mat_mul(F, inverse(F, h), x), h)
        if in_parabolic(y, composition):
            total = total + fn(levi_blocks(y, composition))
    return total * Fraction(1, parabolic_order(composition, F.size))
