"""Brute-force counts of quasi-parabolic structures over a concrete finite field:
all structures (M), indecomposable ones (I), geometrically indecomposable
ones (A), and the class-membership counts behind the H-functions."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .bundle import BundleShape, Divisor, EndSpace
from .cyclo import Cyclo
from .ff import Field
from .ffmat import (
    CapExceeded,
    act_on_flag,
    cap,
    class_invariant,
    det,
    enumerate_flags,
    fixed_flag_count,
    gl_classes,
    gl_order,
    identity,
    is_semisimple,
    jordan_unipotent,
    mat_pow,
    nullspace,
    reduce_vector,
    rref,
    centralizer_order,
    unipotent_type,
)
from .partitions import column_of, partitions


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int):
        x, y = self.find(x), self.find(y)
        if x != y:
            if x < y:
                x, y = y, x
            self.parent[x] = y

    def reps(self) -> list:
        return [x for x in range(len(self.parent)) if self.find(x) == x]


def full_flags(n: int, r: int) -> tuple:
    return tuple((1,) * n for _ in range(r))


def check_multipartition(mu: Sequence[Sequence[int]], n: int, r: int):
    if len(mu) != r:
        raise ValueError(f"need {r} partitions, got {len(mu)}")
    for part in mu:
        if sum(part) != n or any(x <= 0 for x in part):
            raise ValueError(f"{part} is not a composition of {n}")


class Problem:
    """A bundle shape, a divisor and one flag type per point."""

    def __init__(self, shape: BundleShape, divisor: Divisor, mu: Sequence[Sequence[int]]):
        mu = tuple(tuple(p) for p in mu)
        check_multipartition(mu, shape.rank, len(divisor.points))
        self.shape = shape
        self.divisor = divisor
        self.mu = mu
        self.F = divisor.base
        self.E = EndSpace(shape, self.F)
        self.n = shape.rank
        self.fields = [pt.residue_field for pt in divisor.points]
        self.columns = [column_of(m) for m in mu]
        self.flags = [enumerate_flags(self.n, col, K) for col, K in zip(self.columns, self.fields)]
        self.flag_index = [{fl: j for j, fl in enumerate(fls)} for fls in self.flags]

    @property
    def tuple_count(self) -> int:
        out = 1
        for fls in self.flags:
            out *= len(fls)
        return out

    def evaluations(self, h) -> list:
        return [self.E.evaluate(h, pt) for pt in self.divisor.points]

    def decode(self, x: int) -> tuple:
        out = []
        for fls in self.flags:
            x, j = divmod(x, len(fls))
            out.append(j)
        return tuple(out)

    def encode(self, idx: Sequence[int]) -> int:
        x = 0
        for fls, j in zip(reversed(self.flags), reversed(idx)):
            x = x * len(fls) + j
        return x

    @cached_property
    def generator_perms(self) -> list:
        out = []
        for g in self.E.aut_generators():
            perms = []
            for K, pt, fls, index in zip(self.fields, self.divisor.points, self.flags, self.flag_index):
                M = self.E.evaluate(g, pt)
                perms.append([index[act_on_flag(K, M, fl)] for fl in fls])
            out.append(perms)
        return out

    def orbit_reps(self) -> list:
        """(representative flag-index tuple, orbit size) for each Aut(E)-orbit."""
        T = self.tuple_count
        if T > cap(1 << 22):
            raise CapExceeded(f"{T} flag tuples exceed the orbit cap")
        uf = UnionFind(T)
        sizes = [len(f) for f in self.flags]
        radix = []
        acc = 1
        for s in sizes:
            radix.append(acc)
            acc *= s
        for perms in self.generator_perms:
            if all(all(p[j] == j for j in range(len(p))) for p in perms):
                continue
            for x in range(T):
                y, rest = 0, x
                for s, rdx, p in zip(sizes, radix, perms):
                    rest, j = divmod(rest, s)
                    y += p[j] * rdx
                if y != x:
                    uf.union(x, y)
        counts = Counter(uf.find(x) for x in range(T))
        return [(self.decode(x), c) for x, c in sorted(counts.items())]


# ---------------------------------------------------------------------------
# endomorphism algebras


@dataclass
class EndAlgebra:
    space: EndSpace
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def elements(self):
        F = self.space.F
        limit = cap(1 << 20)
        if F.size ** self.dim > limit:
            raise CapExceeded(f"algebra of size {F.size}^{self.dim} exceeds cap {limit}")
        for cs in itertools.product(range(F.size), repeat=self.dim):
            h = [0] * self.space.dim
            for c, b in zip(cs, self.basis):
                if c:
                    h = [F.add(x, F.mul(c, y)) for x, y in zip(h, b)]
            yield tuple(h)

    def levi_image(self) -> list:
        """Basis of the image under the Levi projection (constant block-diagonal part)."""
        F = self.space.F
        flat = [tuple(x for row in self.space.levi_matrix(b) for x in row) for b in self.basis]
        return list(rref(F, flat)[0]) if flat else []

    def levi_elements(self):
        F = self.space.F
        n = self.space.n
        basis = self.levi_image()
        limit = cap(1 << 20)
        if F.size ** len(basis) > limit:
            raise CapExceeded(f"Levi image of size {F.size}^{len(basis)} exceeds cap {limit}")
        for cs in itertools.product(range(F.size), repeat=len(basis)):
            v = [0] * (n * n)
            for c, b in zip(cs, basis):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
            yield tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))


def end_algebra(shape: BundleShape, divisor: Divisor, flags: Sequence) -> EndAlgebra:
    """Endomorphisms of E whose evaluations preserve every flag."""
    E = EndSpace(shape, divisor.base)
    F = divisor.base
    rows = []
    for pt, fl in zip(divisor.points, flags):
        K = pt.residue_field
        d = pt.degree
        evb = E.eval_basis(pt)
        n = E.n
        for space in fl.spaces:
            piv = tuple(next(i for i, x in enumerate(r) if x) for r in space)
            for v in space:
                residuals = []
                for a, c, val in evb:
                    w = [0] * n
                    if val and v[c]:
                        w[a] = K.mul(val, v[c])
                    residuals.append(reduce_vector(K, w, space, piv))
                for pos in range(n):
                    digit_rows = [[0] * E.dim for _ in range(d)]
                    for k, res in enumerate(residuals):
                        x = res[pos]
                        for j in range(d):
                            x, dig = divmod(x, F.size)
                            digit_rows[j][k] = dig
                    rows.extend(r for r in digit_rows if any(r))
    basis = nullspace(F, rows) if rows else [tuple(1 if i == k else 0 for i in range(E.dim)) for k in range(E.dim)]
    return EndAlgebra(E, basis)


def is_geom_indecomposable(alg: EndAlgebra) -> bool:
    """No non-scalar semisimple element.

    Tested on the Levi image, which is a quotient of the algebra by a nilpotent
    ideal and so has the same semisimple quotient.
    """
    F = alg.space.F
    n = alg.space.n
    for M in alg.levi_elements():
        scalar = all(M[i][j] == (M[0][0] if i == j else 0) for i in range(n) for j in range(n))
        if not scalar and is_semisimple(F, M):
            return False
    return True


def is_indecomposable(alg: EndAlgebra) -> bool:
    """Every element is nilpotent or invertible."""
    F = alg.space.F
    n = alg.space.n
    for M in alg.levi_elements():
        if det(F, M) == 0 and any(any(r) for r in mat_pow(F, M, n)):
            return False
    return True


# ---------------------------------------------------------------------------
# counts


def _orbit_count(problem: Problem, test) -> int:
    total = 0
    for idx, _ in problem.orbit_reps():
        flags = [fls[j] for fls, j in zip(problem.flags, idx)]
        if test(end_algebra(problem.shape, problem.divisor, flags)):
            total += 1
    return total


def count_A_direct(shape: BundleShape, divisor: Divisor, mu) -> int:
    return _orbit_count(Problem(shape, divisor, mu), is_geom_indecomposable)


def count_I_direct(shape: BundleShape, divisor: Divisor, mu) -> int:
    return _orbit_count(Problem(shape, divisor, mu), is_indecomposable)


def count_M_orbits(shape: BundleShape, divisor: Divisor, mu) -> int:
    return len(Problem(shape, divisor, mu).orbit_reps())


def _weighted_aut_sum(problem: Problem, weight):
    """Sum over Aut(E) of prod_i fixed_flag_count(f(a_i)) * weight(det f)."""
    F = problem.F
    shape = problem.shape
    pts = problem.divisor.points
    total = 0
    if len(shape.m) == 1:
        # constant automorphisms: group by conjugacy class of GL_n(F_q)
        for rep, size, _ in gl_classes(F, shape.rank):
            val = size
            for K, col in zip(problem.fields, problem.columns):
                val *= fixed_flag_count(K, rep, col)
            if val:
                total = total + weight(det(F, rep)) * val
        return total
    for f in problem.E.enumerate_aut():
        val = 1
        for pt, K, col in zip(pts, problem.fields, problem.columns):
            val *= fixed_flag_count(K, problem.E.evaluate(f, pt), col)
            if not val:
                break
        if val:
            total = total + weight(problem.E.det(f)) * val
    return total


def count_M(shape: BundleShape, divisor: Divisor, mu) -> int:
    """Burnside count of all structures up to isomorphism."""
    problem = Problem(shape, divisor, mu)
    total = _weighted_aut_sum(problem, lambda _d: 1)
    out = Fraction(total, shape.aut_order(problem.F.size))
    if out.denominator != 1:
        raise ArithmeticError(f"Burnside sum not integral: {out}")
    return int(out)


class NoTwistCharacter(ValueError):
    pass


def count_A_twist(shape: BundleShape, divisor: Divisor, mu, order: int | None = None) -> int:
    """A via the Burnside sum twisted by alpha(det), alpha of order n."""
    problem = Problem(shape, divisor, mu)
    F = problem.F
    n = shape.rank if order is None else order
    if (F.size - 1) % n:
        raise NoTwistCharacter(f"no character of order {n} on GF({F.size})^x")

    def weight(d):
        return Cyclo.root(n, F.log(d) % n)

    total = _weighted_aut_sum(problem, weight)
    if not isinstance(total, Cyclo):
        total = Cyclo.rational_value(n, total)
    out = total.rational() / shape.aut_order(F.size)
    if out.denominator != 1:
        raise ArithmeticError(f"twisted Burnside sum not integral: {out}")
    return int(out)


def class_count_H(shape: BundleShape, divisor: Divisor, classes: Sequence[tuple], method: str = "auto") -> Fraction:
    """#{h in Aut(E): h(a_i) in C_i for all i} / |Aut(E)|.

    ``classes`` holds one ClassInvariant per point (over its residue field).
    """
    F = divisor.base
    E = EndSpace(shape, F)
    pts = divisor.points
    classes = [tuple(sorted(c)) for c in classes]
    if method == "auto":
        method = "direct" if shape.aut_order(F.size) <= 200_000 else "levi"
    if method == "direct":
        count = 0
        for h in E.enumerate_aut():
            if all(class_invariant(pt.residue_field, E.evaluate(h, pt)) == c for pt, c in zip(pts, classes)):
                count += 1
        return Fraction(count, shape.aut_order(F.size))
    if method != "levi":
        raise ValueError("method is 'auto', 'direct' or 'levi'")
    count = 0
    for weight, levi in _levi_class_reps(E, unipotent_only=False):
        for mats in _nilradical_evaluations(E, levi, pts):
            if all(class_invariant(pt.residue_field, M) == c for pt, M, c in zip(pts, mats, classes)):
                count += weight
    return Fraction(count, shape.aut_order(F.size))


def _levi_class_reps(E: EndSpace, unipotent_only: bool):
    """(class size product, Levi coordinate vector) over tuples of classes of the Levi blocks."""
    F = E.F
    per_block = []
    for k in E.shape.m:
        if unipotent_only:
            opts = []
            for lam in partitions(k):
                cent = centralizer_order(lam, F.size)
                opts.append((gl_order(k, F.size) // cent, jordan_unipotent(lam)))
        else:
            opts = [(size, rep) for rep, size, _ in gl_classes(F, k)]
        per_block.append(opts)
    for combo in itertools.product(*per_block):
        weight = 1
        h = [0] * E.dim
        off = 0
        for (size, rep), k in zip(combo, E.shape.m):
            weight *= size
            for i in range(k):
                for j in range(k):
                    h[E.index[(off + i, off + j, 0)]] = rep[i][j]
            off += k
        yield weight, tuple(h)


def _nilradical_evaluations(E: EndSpace, levi: Sequence[int], pts):
    """Evaluation matrices at each point of levi + N, N over the unipotent radical."""
    F = E.F
    ucoords = E.unipotent_coords
    E.check_cap(F.size ** len(ucoords), "unipotent radical")
    bases = []
    for pt in pts:
        K = pt.residue_field
        base = [list(r) for r in E.evaluate(levi, pt)]
        evb = E.eval_basis(pt)
        contribs = [evb[k] for k in ucoords]
        bases.append((K, base, contribs))
    for vals in itertools.product(range(F.size), repeat=len(ucoords)):
        mats = []
        for K, base, contribs in bases:
            M = [list(r) for r in base]
            for (a, c, v), x in zip(contribs, vals):
                if x and v:
                    M[a][c] = K.add(M[a][c], K.mul(x, v))
            mats.append(tuple(tuple(r) for r in M))
        yield mats


def unipotent_histogram(shape: BundleShape, divisor: Divisor) -> Counter:
    """Counter mapping (Jordan type at each point) -> #{h in Aut(E) with unipotent
    evaluations of those types}."""
    E = EndSpace(shape, divisor.base)
    pts = divisor.points
    n = shape.rank
    ident = identity(n)
    hist: Counter = Counter()
    for weight, levi in _levi_class_reps(E, unipotent_only=True):
        for mats in _nilradical_evaluations(E, levi, pts):
            key = []
            for pt, M in zip(pts, mats):
                if n == 1:
                    key.append((1,))
                elif n == 2:
                    key.append((1, 1) if M == ident else (2,))
                else:
                    key.append(unipotent_type(pt.residue_field, M))
            hist[tuple(key)] += weight
    return hist


# ---------------------------------------------------------------------------
# position independence


def divisors_with_profile(F: Field, profile: Sequence[int], limit: int | None = None) -> list:
    """Every ordered choice of distinct points of P^1 with the given degrees."""
    from .ff import ClosedPoint, closed_points, necklace_count

    pools = {}
    for d in set(profile):
        pts = closed_points(F, d, necklace_count(F.size, d))
        if d == 1:
            pts = pts + [ClosedPoint.infinity(F)]
        pools[d] = pts
    out = []
    limit = cap(10 ** 5) if limit is None else limit
    for choice in itertools.product(*[pools[d] for d in profile]):
        if len(set(choice)) == len(choice):
            out.append(Divisor(F, choice))
            if len(out) > limit:
                raise CapExceeded(f"more than {limit} divisors")
    return out


def position_check(shape: BundleShape, profile: Sequence[int], mu, Q: int, limit: int | None = None) -> dict:
    """A-counts over every divisor with this degree profile; ok when all agree."""
    from .ff import field_of_size

    F = field_of_size(Q)
    counts = Counter()
    for D in divisors_with_profile(F, profile, limit):
        counts[count_A_direct(shape, D, mu)] += 1
    return {"shape": str(shape), "q": Q, "profile": list(profile), "mu": [list(p) for p in mu],
            "divisors": sum(counts.values()), "values": sorted(counts), "ok": len(counts) == 1}
