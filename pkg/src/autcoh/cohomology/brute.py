"""H^1 and H^2 with trivial F_p coefficients by exact linear algebra on
cocycle tables.

A normalized 2-cocycle c is determined by its rows c(x, .) for x in a
generating set X: reading the cocycle identity at (x, y, z) as

    c(xy, z) = c(y, z) + c(x, yz) - c(x, y)

rebuilds every other row along a breadth-first spanning tree g = x y.  The
unknowns are therefore the |X| |G| values u[x, z] = c(x, z), and it is
enough to impose the identity for x in X (the 3-cochain dc satisfies
ddc = 0, which propagates the identity from generators to products).  This
keeps the system at |X| |G| unknowns instead of |G|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from ..linalg import Echelon, _eliminate, fp_inverse
from .tables import GroupTable

DEFAULT_BRUTE_CAP = 300


class CohomologyCapExceeded(RuntimeError):
    pass


class NotACocycle(ValueError):
    pass


# ---------------------------------------------------------------------------
# Spanning tree over a generating set
# ---------------------------------------------------------------------------


@dataclass
class SpanningTree:
    """Every g != 1 written as g = X[k] * y with y earlier in ``order``."""

    gens: list[int]
    order: list[int]
    gen_pos: np.ndarray  # k with g = X[k] y, -1 for the identity
    rest: np.ndarray  # y

    @classmethod
    def build(cls, group: GroupTable, gens: Sequence[int]) -> "SpanningTree":
        n = group.order
        gen_pos = np.full(n, -1, dtype=np.int64)
        rest = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        order = [0]
        frontier = [0]
        while frontier:
            nxt = []
            for y in frontier:
                for k, x in enumerate(gens):
                    g = int(group.mul[x, y])
                    if not seen[g]:
                        seen[g] = True
                        gen_pos[g] = k
                        rest[g] = y
                        order.append(g)
                        nxt.append(g)
            frontier = nxt
        if len(order) != n:
            raise ValueError("generators do not generate the group")
        return cls(list(gens), order, gen_pos, rest)


# ---------------------------------------------------------------------------
# Spaces of classes
# ---------------------------------------------------------------------------


@dataclass
class CohomologySpace:
    """H^2(G, F_p) as a basis of normalized cocycles modulo coboundaries.

    Cocycles are stored by their generator rows (``u`` vectors of length
    |X| |G|, entry k |G| + z holding c(X[k], z)); :meth:`table_of` expands
    them to full tables.
    """

    group: GroupTable
    p: int
    tree: SpanningTree
    basis_u: np.ndarray
    boundary: Echelon
    z_dim: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def gens(self) -> list[int]:
        return self.tree.gens

    @property
    def dim(self) -> int:
        return int(self.basis_u.shape[0])

    @property
    def b_dim(self) -> int:
        return self.boundary.rank

    @property
    def ncols(self) -> int:
        return len(self.gens) * self.group.order

    # -- conversions ---------------------------------------------------------

    def table_of(self, u: np.ndarray) -> np.ndarray:
        """Full cocycle table(s) from generator rows; accepts (U,) or (m, U)."""
        u = np.asarray(u, dtype=np.int64)
        single = u.ndim == 1
        u = np.atleast_2d(u)
        n, p = self.group.order, self.p
        m = u.shape[0]
        rows = u.reshape(m, len(self.gens), n)
        out = np.zeros((m, n, n), dtype=np.int64)
        mul = self.group.mul
        for g in self.tree.order[1:]:
            k, y = self.tree.gen_pos[g], self.tree.rest[g]
            out[:, g, :] = (out[:, y, :] + rows[:, k, mul[y]] - rows[:, k, y][:, None]) % p
        return out[0] if single else out

    def u_of(self, table: np.ndarray) -> np.ndarray:
        t = np.asarray(table)
        if t.ndim == 2:
            return t[self.gens, :].reshape(-1) % self.p
        return t[:, self.gens, :].reshape(t.shape[0], -1) % self.p

    def basis_tables(self) -> np.ndarray:
        return self.table_of(self.basis_u) if self.dim else np.zeros((0,) + self.group.mul.shape, int)

    # -- coordinates -----------------------------------------------------------

    def _coordinate_data(self):
        if "coord" not in self.extra:
            h = self.boundary.reduce(self.basis_u) if self.dim else self.basis_u
            if self.dim:
                rows, piv = _eliminate(h.copy(), self.p)
                if len(piv) != self.dim:
                    raise ArithmeticError("basis is dependent modulo coboundaries")
                sub = h[:, piv]  # alpha @ sub = reduced u on those columns
                self.extra["coord"] = (np.array(piv), fp_inverse(sub, self.p))
            else:
                self.extra["coord"] = (np.zeros(0, dtype=np.int64), np.zeros((0, 0), dtype=np.int64))
        return self.extra["coord"]

    def coords(self, u: np.ndarray, check: bool = True) -> np.ndarray:
        """Class coordinates of cocycles given as generator rows (or full tables)."""
        u = np.asarray(u, dtype=np.int64)
        if u.ndim >= 2 and u.shape[-1] == self.group.order and u.shape[-2] == self.group.order:
            u = self.u_of(u)
        single = u.ndim == 1
        u = np.atleast_2d(u) % self.p
        piv, inv = self._coordinate_data()
        red = self.boundary.reduce(u)
        if not self.dim:
            if check and red.any():
                raise NotACocycle("vector is not in the cocycle space")
            alpha = np.zeros((u.shape[0], 0), dtype=np.int64)
        else:
            alpha = (red[:, piv] @ inv) % self.p
            if check:
                back = self.boundary.reduce(alpha @ self.basis_u % self.p)
                if not np.array_equal(back, red):
                    raise NotACocycle("vector is not in the span of cocycles")
        return alpha[0] if single else alpha

    def is_zero_class(self, u: np.ndarray) -> bool:
        return not np.any(self.coords(u))


def space_from_basis(
    group: GroupTable,
    p: int,
    gens: Sequence[int],
    cocycle_u: np.ndarray,
    z_dim: Optional[int] = None,
) -> CohomologySpace:
    """Cohomology space spanned by the classes of the given cocycles (any
    number of rows, dependent or not); coboundaries are added internally."""
    tree = SpanningTree.build(group, gens)
    bech = boundary_echelon(group, p, tree)
    keep = []
    ech = bech.copy()
    for row in np.atleast_2d(np.asarray(cocycle_u, dtype=np.int64)) % p:
        if row.size and ech.add(row[None, :]):
            keep.append(row)
    basis = np.array(keep, dtype=np.int64).reshape(-1, len(gens) * group.order)
    return CohomologySpace(group, p, tree, basis, bech, z_dim)


def boundary_vectors(group: GroupTable, tree: SpanningTree) -> np.ndarray:
    """Generator rows of dv for v = indicator of g, one row per g != 1:
    dv(x, h) = v(x) + v(h) - v(xh)."""
    n = group.order
    out = np.zeros((n, len(tree.gens) * n), dtype=np.int64)
    hs = np.arange(n)
    for k, x in enumerate(tree.gens):
        base = k * n
        out[x, base : base + n] += 1
        out[hs, base + hs] += 1
        out[group.mul[x], base + hs] -= 1
    return out[1:]


def boundary_echelon(group: GroupTable, p: int, tree: SpanningTree) -> Echelon:
    ech = Echelon(len(tree.gens) * group.order, p)
    ech.add(boundary_vectors(group, tree) % p)
    return ech


# ---------------------------------------------------------------------------
# First cohomology
# ---------------------------------------------------------------------------


def hom_basis(group: GroupTable, p: int) -> np.ndarray:
    """Rows are homomorphisms G -> F_p as value vectors."""
    n = group.order
    gens = group.generators()
    eqs = []
    idx = np.arange(n)
    for x in gens:
        block = np.zeros((n, n), dtype=np.int64)
        block[idx, x] += 1
        block[idx, idx] += 1
        block[idx, group.mul[x]] -= 1
        eqs.append(block % p)
    eqs.append(np.eye(1, n, 0, dtype=np.int64))
    ech = Echelon(n, p).absorb(eqs)
    return ech.nullspace()


def h1_dim(group: GroupTable, p: int) -> int:
    """dim Hom(G, Z/p)."""
    return int(hom_basis(group, p).shape[0])


# ---------------------------------------------------------------------------
# Second cohomology, rows-at-generators engine
# ---------------------------------------------------------------------------


def _row_forms(group: GroupTable, p: int, tree: SpanningTree) -> np.ndarray:
    """R[g, z, :] = linear form (over the u unknowns) of c(g, z)."""
    n = group.order
    U = len(tree.gens) * n
    dtype = np.int16 if p < 128 else np.int64
    R = np.zeros((n, n, U), dtype=dtype)
    zs = np.arange(n)
    mul = group.mul
    for g in tree.order[1:]:
        k, y = int(tree.gen_pos[g]), int(tree.rest[g])
        r = R[y].astype(np.int64)
        r[zs, k * n + mul[y]] += 1
        r[:, k * n + y] -= 1
        R[g] = r % p
    return R


def _cocycle_equations(
    group: GroupTable, p: int, tree: SpanningTree, R: np.ndarray, batch: int = 8
) -> Iterator[np.ndarray]:
    n = group.order
    U = R.shape[2]
    mul = group.mul
    # normalization u[k, 1] = 0
    norm = np.zeros((len(tree.gens), U), dtype=np.int64)
    norm[np.arange(len(tree.gens)), np.arange(len(tree.gens)) * n] = 1
    yield norm
    zs = np.arange(n)
    for k, x in enumerate(tree.gens):
        for start in range(0, n, batch):
            ys = range(start, min(n, start + batch))
            blocks = []
            for y in ys:
                xy = mul[x, y]
                eq = R[xy].astype(np.int64) - R[y]
                eq[:, k * n + y] += 1
                eq[zs, k * n + mul[y]] -= 1
                blocks.append(eq % p)
            yield np.vstack(blocks)


def h2_brute(
    group: GroupTable,
    p: int,
    cap: int = DEFAULT_BRUTE_CAP,
    gens: Optional[Sequence[int]] = None,
) -> CohomologySpace:
    """H^2(G, F_p) with trivial action."""
    n = group.order
    if n > cap:
        raise CohomologyCapExceeded(
            f"|G| = {n} exceeds the brute-force cap {cap}; use the pc engine (h2_pc)"
        )
    if gens is None:
        from .pc import minimal_generators

        gens = minimal_generators(group, p)
    gens = list(gens)
    if n == 1:
        gens = []
    tree = SpanningTree.build(group, gens)
    U = len(gens) * n
    bech = boundary_echelon(group, p, tree) if U else Echelon(0, p)
    if U == 0:
        return CohomologySpace(group, p, tree, np.zeros((0, 0), dtype=np.int64), bech, 0)
    R = _row_forms(group, p, tree)
    ech = Echelon(U, p).absorb(_cocycle_equations(group, p, tree, R))
    del R
    zbasis = ech.nullspace()
    work = bech.copy()
    keep = []
    for row in zbasis:
        if work.add(row[None, :]):
            keep.append(row)
    basis = np.array(keep, dtype=np.int64).reshape(-1, U)
    space = CohomologySpace(group, p, tree, basis, bech, z_dim=int(zbasis.shape[0]))
    return space


# ---------------------------------------------------------------------------
# Literal oracle and cocycle utilities
# ---------------------------------------------------------------------------


def h2_full_table(group: GroupTable, p: int, normalized: bool = False) -> dict:
    """Oracle: unknowns are all |G|^2 table values, equations all |G|^3
    cocycle identities.  Small groups only."""
    n = group.order
    if n > 40:
        raise CohomologyCapExceeded("the literal table solver is for |G| <= 40")
    m = group.mul
    N = n * n

    def col(a, b):
        return a * n + b

    def chunks():
        for x in range(n):
            rows = np.zeros((n * n, N), dtype=np.int64)
            r = 0
            for y in range(n):
                for z in range(n):
                    # c(y,z) - c(xy,z) + c(x,yz) - c(x,y) = 0
                    rows[r, col(y, z)] += 1
                    rows[r, col(m[x, y], z)] -= 1
                    rows[r, col(x, m[y, z])] += 1
                    rows[r, col(x, y)] -= 1
                    r += 1
            yield rows % p
        if normalized:
            rows = np.zeros((2 * n, N), dtype=np.int64)
            for g in range(n):
                rows[g, col(0, g)] = 1
                rows[n + g, col(g, 0)] = 1
            yield rows

    ech = Echelon(N, p).absorb(chunks())
    z_dim = N - ech.rank
    bvecs = np.zeros((n, N), dtype=np.int64)
    for g in range(n):
        for a in range(n):
            for b in range(n):
                bvecs[g, col(a, b)] = (a == g) + (b == g) - (m[a, b] == g)
    if normalized:
        bvecs = bvecs[1:]  # v(1) = 0 for normalized boundaries
    b_ech = Echelon(N, p)
    b_ech.add(bvecs % p)
    return {"z_dim": z_dim, "b_dim": b_ech.rank, "h2_dim": z_dim - b_ech.rank}


def check_cocycle(group: GroupTable, p: int, table: np.ndarray, samples: int = 20000, seed: int = 0) -> bool:
    """Cocycle identity, exhaustively for |G| <= 64 and on random triples otherwise."""
    c = np.asarray(table) % p
    m = group.mul
    n = group.order
    if n <= 64:
        x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
    lhs = c[y, z] - c[m[x, y], z] + c[x, m[y, z]] - c[x, y]
    return not np.any(lhs % p)


def coboundary(group: GroupTable, p: int, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v) % p
    return (v[:, None] + v[None, :] - v[group.mul]) % p


def is_coboundary(group: GroupTable, p: int, table: np.ndarray, check: bool = True) -> Optional[np.ndarray]:
    """A 1-cochain v with dv = c, or None when c is not a coboundary."""
    c = np.asarray(table, dtype=np.int64) % p
    if check and not check_cocycle(group, p, c):
        raise NotACocycle("table violates the cocycle identity")
    n = group.order
    idx = np.arange(n)

    def chunks():
        for g in range(n):
            rows = np.zeros((n, n + 1), dtype=np.int64)
            rows[idx, g] += 1
            rows[idx, idx] += 1
            rows[idx, group.mul[g]] -= 1
            rows[:, n] = c[g]
            yield rows % p

    ech = Echelon(n + 1, p).absorb(chunks())
    if np.any(ech.pivots == n):
        return None
    v = np.zeros(n, dtype=np.int64)
    if ech.rank:
        v[ech.pivots] = ech.rows[:, n]
    return v % p
