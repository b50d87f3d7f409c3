"""Split vector bundles E = sum O(b_u)^{m_u} on P^1, their endomorphisms and
automorphisms, and evaluation at closed points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .ff import (
    ClosedPoint,
    Field,
    InsufficientPoints,
    closed_points,
    necklace_count,
    poly_add,
    poly_mul,
    poly_norm,
)
from .ffmat import CapExceeded, cap, det, enumerate_gl, gl_order
from .qfunc import q as qsym


@dataclass(frozen=True)
class BundleShape:
    b: tuple
    m: tuple

    def __post_init__(self):
        b, m = tuple(self.b), tuple(self.m)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)
        if len(b) != len(m) or not b:
            raise ValueError("shape needs matching nonempty b and m")
        if any(x <= y for x, y in zip(b, b[1:])):
            raise ValueError(f"b must be strictly decreasing, got {b}")
        if any(k < 1 for k in m):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "BundleShape":
        """O(d_1) + ... + O(d_n) in any order."""
        counts: dict = {}
        for d in degrees:
            counts[d] = counts.get(d, 0) + 1
        bs = sorted(counts, reverse=True)
        return cls(tuple(bs), tuple(counts[x] for x in bs))

    @classmethod
    def parse(cls, text: str) -> "BundleShape":
        return cls.from_degrees([int(x) for x in text.split(",") if x.strip()])

    def degrees(self) -> tuple:
        return tuple(x for x, k in zip(self.b, self.m) for _ in range(k))

    def __str__(self):
        return "+".join(f"O({x})" + (f"^{k}" if k > 1 else "") for x, k in zip(self.b, self.m))

    @property
    def rank(self) -> int:
        return sum(self.m)

    @property
    def degree(self) -> int:
        return sum(x * k for x, k in zip(self.b, self.m))

    def twist(self, c: int) -> "BundleShape":
        return BundleShape(tuple(x + c for x in self.b), self.m)

    @property
    def dim_end(self) -> int:
        f = len(self.b)
        return sum(self.m[u] * self.m[v] * (self.b[u] - self.b[v] + 1)
                   for u in range(f) for v in range(f) if self.b[u] >= self.b[v])

    @property
    def unipotent_dim(self) -> int:
        f = len(self.b)
        return sum(self.m[u] * self.m[v] * (self.b[u] - self.b[v] + 1)
                   for u in range(f) for v in range(u + 1, f))

    @property
    def delta(self) -> int:
        """Dimension of the affine factor of the Higgs field space."""
        f = len(self.b)
        return sum(self.m[u] * self.m[v] * max(self.b[u] - self.b[v] - 1, 0)
                   for u in range(f) for v in range(u + 1, f))

    def aut_order(self, Q: int) -> int:
        out = Q ** self.unipotent_dim
        for k in self.m:
            out *= gl_order(k, Q)
        return out

    def aut_order_poly(self):
        out = qsym ** self.unipotent_dim
        for k in self.m:
            for i in range(k):
                out *= qsym ** k - qsym ** i
        return out

    def end_order(self, Q: int) -> int:
        return Q ** self.dim_end


def aut_order(shape: BundleShape, Q: Optional[int] = None):
    """|Aut(E)| at Q, or symbolically in q when Q is None."""
    return shape.aut_order_poly() if Q is None else shape.aut_order(Q)


def shapes_of_degree(n: int, d: int, gap_bound: int) -> list:
    """Rank-n shapes of degree d whose consecutive gaps are at most gap_bound - 2."""
    out = []
    max_gap = gap_bound - 2
    for f in range(1, n + 1):
        for cut in itertools.combinations(range(1, n), f - 1):
            bounds = (0,) + cut + (n,)
            m = tuple(bounds[i + 1] - bounds[i] for i in range(f))
            if f > 1 and max_gap < 1:
                continue
            for gaps in itertools.product(range(1, max(max_gap, 0) + 1), repeat=f - 1):
                offsets = [sum(gaps[u:]) for u in range(f)]
                s = sum(mu * off for mu, off in zip(m, offsets))
                if (d - s) % n:
                    continue
                bf = (d - s) // n
                out.append(BundleShape(tuple(bf + off for off in offsets), m))
    out.sort(key=lambda sh: (len(sh.b), sh.b, sh.m))
    return out


# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class Divisor:
    base: Field
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("divisor points must be distinct")
        for pt in self.points:
            if pt.base != self.base:
                raise ValueError("point over a different base field")

    @property
    def degrees(self) -> tuple:
        return tuple(pt.degree for pt in self.points)

    @property
    def length(self) -> int:
        return sum(self.degrees)

    @property
    def affine(self) -> bool:
        return not any(pt.is_infinity for pt in self.points)

    def __str__(self):
        return "[" + ", ".join(str(pt) for pt in self.points) + "]"


def divisor_for_profile(F: Field, profile: Sequence[int], allow_infinity: bool = False) -> Divisor:
    """Deterministic choice of distinct points with the given degrees.

    Affine points come first in ``closed_points`` order; with ``allow_infinity``
    the point at infinity serves as one extra degree-1 point.
    """
    need: dict = {}
    for d in profile:
        need[d] = need.get(d, 0) + 1
    pools = {}
    for d, k in need.items():
        avail = necklace_count(F.size, d)
        if k <= avail:
            pools[d] = closed_points(F, d, k)
        elif d == 1 and allow_infinity and k == avail + 1:
            pools[d] = closed_points(F, 1, avail) + [ClosedPoint.infinity(F)]
        else:
            extra = " (including infinity)" if d == 1 and allow_infinity else ""
            raise InsufficientPoints(
                f"P^1 over GF({F.size}) has {avail + (1 if d == 1 and allow_infinity else 0)} "
                f"points of degree {d}{extra}, {k} needed")
    used = {d: 0 for d in need}
    pts = []
    for d in profile:
        pts.append(pools[d][used[d]])
        used[d] += 1
    return Divisor(F, tuple(pts))


def profile_feasible(Q: int, profile: Sequence[int], allow_infinity: bool = False) -> bool:
    need: dict = {}
    for d in profile:
        need[d] = need.get(d, 0) + 1
    for d, k in need.items():
        avail = necklace_count(Q, d) + (1 if d == 1 and allow_infinity else 0)
        if k > avail:
            return False
    return True


# ---------------------------------------------------------------------------
# endomorphisms


class EndSpace:
    """Coordinates on End(E) over F_q.

    Basis element (a, c, j) is t^j in matrix position (a, c), allowed when the
    block of a has degree b_u >= b_v (block of c) and j <= b_u - b_v.
    """

    def __init__(self, shape: BundleShape, F: Field):
        self.shape = shape
        self.F = F
        n = shape.rank
        self.n = n
        blk = []
        for u, k in enumerate(shape.m):
            blk.extend([u] * k)
        self.block_of = tuple(blk)
        basis = []
        for a in range(n):
            for c in range(n):
                bu, bv = shape.b[self.block_of[a]], shape.b[self.block_of[c]]
                if bu >= bv:
                    for j in range(bu - bv + 1):
                        basis.append((a, c, j))
        self.basis = tuple(basis)
        self.index = {key: i for i, key in enumerate(basis)}
        self.dim = len(basis)
        self.levi_coords = tuple(i for i, (a, c, j) in enumerate(basis)
                                 if self.block_of[a] == self.block_of[c])
        self.unipotent_coords = tuple(i for i, (a, c, j) in enumerate(basis)
                                      if self.block_of[a] != self.block_of[c])
        self._eval_cache: dict = {}

    # -- conversions ---------------------------------------------------------

    def poly_matrix(self, h: Sequence[int]) -> list:
        n = self.n
        M = [[[] for _ in range(n)] for _ in range(n)]
        for (a, c, j), x in zip(self.basis, h):
            if x:
                cell = M[a][c]
                while len(cell) <= j:
                    cell.append(0)
                cell[j] = x
        return [[poly_norm(cell) for cell in row] for row in M]

    def from_poly_matrix(self, M) -> tuple:
        out = [0] * self.dim
        for a, row in enumerate(M):
            for c, f in enumerate(row):
                for j, x in enumerate(f):
                    if x:
                        idx = self.index.get((a, c, j))
                        if idx is None:
                            raise ValueError("polynomial matrix violates degree bounds")
                        out[idx] = x
        return tuple(out)

    def compose(self, h: Sequence[int], g: Sequence[int]) -> tuple:
        F = self.F
        A, B = self.poly_matrix(h), self.poly_matrix(g)
        n = self.n
        C = [[() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for k in range(n):
                if A[i][k]:
                    for j in range(n):
                        if B[k][j]:
                            C[i][j] = poly_add(F, C[i][j], poly_mul(F, A[i][k], B[k][j]))
        return self.from_poly_matrix(C)

    def identity(self) -> tuple:
        out = [0] * self.dim
        for a in range(self.n):
            out[self.index[(a, a, 0)]] = 1
        return tuple(out)

    def scalar(self, c: int) -> tuple:
        return tuple(c if x else 0 for x in self.identity())

    def levi_matrix(self, h: Sequence[int]) -> tuple:
        """Block-diagonal constant part (an algebra homomorphism End(E) -> Mat_n)."""
        n = self.n
        M = [[0] * n for _ in range(n)]
        for i in self.levi_coords:
            a, c, _ = self.basis[i]
            M[a][c] = h[i]
        return tuple(tuple(r) for r in M)

    def levi_blocks(self, h: Sequence[int]) -> list:
        L = self.levi_matrix(h)
        out, off = [], 0
        for k in self.shape.m:
            out.append(tuple(tuple(L[i][off:off + k]) for i in range(off, off + k)))
            off += k
        return out

    def is_invertible(self, h: Sequence[int]) -> bool:
        return all(det(self.F, blk) for blk in self.levi_blocks(h))

    def det(self, h: Sequence[int]) -> int:
        out = 1
        for blk in self.levi_blocks(h):
            out = self.F.mul(out, det(self.F, blk))
        return out

    # -- evaluation ----------------------------------------------------------

    def eval_basis(self, point: ClosedPoint) -> list:
        """For each basis element, its (row, col, value) in the residue field."""
        key = point
        got = self._eval_cache.get(key)
        if got is not None:
            return got
        K = point.residue_field
        out = []
        if point.is_infinity:
            for a, c, j in self.basis:
                top = self.shape.b[self.block_of[a]] - self.shape.b[self.block_of[c]]
                out.append((a, c, 1 if j == top else 0))
        else:
            th = point.t_image
            maxj = max((j for _, _, j in self.basis), default=0)
            pw = [1]
            for _ in range(maxj):
                pw.append(K.mul(pw[-1], th))
            out = [(a, c, pw[j]) for a, c, j in self.basis]
        self._eval_cache[key] = out
        return out

    def evaluate(self, h: Sequence[int], point: ClosedPoint) -> tuple:
        K = point.residue_field
        n = self.n
        M = [[0] * n for _ in range(n)]
        for (a, c, v), x in zip(self.eval_basis(point), h):
            if x and v:
                M[a][c] = K.add(M[a][c], K.mul(x, v))
        return tuple(tuple(r) for r in M)

    # -- enumeration -----------------------------------------------------------

    def check_cap(self, count: int, what: str, default: int = 1 << 24):
        limit = cap(default)
        if count > limit:
            raise CapExceeded(f"{what} has {count} elements, cap is {limit}")

    def enumerate_end(self) -> Iterator[tuple]:
        self.check_cap(self.F.size ** self.dim, "End(E)")
        return itertools.product(range(self.F.size), repeat=self.dim)

    def enumerate_aut(self) -> Iterator[tuple]:
        F = self.F
        self.check_cap(self.shape.aut_order(F.size), "Aut(E)")
        # positions of each Levi block's entries
        block_pos = []
        off = 0
        for k in self.shape.m:
            block_pos.append([[self.index[(off + i, off + j, 0)] for j in range(k)] for i in range(k)])
            off += k
        gls = [enumerate_gl(F, k) for k in self.shape.m]
        ucoords = self.unipotent_coords
        for levi in itertools.product(*gls):
            base = [0] * self.dim
            for pos, g in zip(block_pos, levi):
                for i, row in enumerate(pos):
                    for j, idx in enumerate(row):
                        base[idx] = g[i][j]
            for vals in itertools.product(range(F.size), repeat=len(ucoords)):
                for idx, v in zip(ucoords, vals):
                    base[idx] = v
                yield tuple(base)

    def aut_generators(self) -> list:
        """Generators of Aut(E): Levi transvections and diagonals, and unipotent
        root elements c t^j E_ac, with c running over an F_p-basis of F_q."""
        F = self.F
        g = F.generator
        fp_basis = [1]
        for _ in range(F.degree - 1):
            fp_basis.append(F.mul(fp_basis[-1], g))
        ident = list(self.identity())
        gens = []
        off = 0
        for k in self.shape.m:
            if F.size > 2:
                h = list(ident)
                h[self.index[(off, off, 0)]] = g
                gens.append(tuple(h))
            for i in range(k):
                for j in range(k):
                    if i != j:
                        for c in fp_basis:
                            h = list(ident)
                            h[self.index[(off + i, off + j, 0)]] = c
                            gens.append(tuple(h))
            off += k
        for idx in self.unipotent_coords:
            for c in fp_basis:
                h = list(ident)
                h[idx] = c
                gens.append(tuple(h))
        return gens
