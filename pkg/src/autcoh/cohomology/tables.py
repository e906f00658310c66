"""Finite groups as multiplication tables.

Elements are the integers 0..n-1 with 0 the identity.  Tables are numpy
arrays so that whole-group operations (commutators, conjugation
permutations, coset computations) vectorise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

from ..structures import (
    AutMatrix,
    Partition,
    build_index_set,
    decode_coords,
    enumerate_group,
    row_moduli,
)

DEFAULT_TABLE_CAP = 5000


@dataclass
class GroupTable:
    """A finite group given by its Cayley table."""

    mul: np.ndarray
    inv: np.ndarray
    labels: Optional[list] = None
    name: str = "group"
    elements: Optional[list] = None
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    identity = 0

    def index(self, label: Hashable) -> int:
        if "lookup" not in self.meta:
            self.meta["lookup"] = {lab: i for i, lab in enumerate(self.labels)}
        return self.meta["lookup"][label]

    def power(self, g: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def element_order(self, g: int) -> int:
        x, k = g, 1
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def check_associative(self, samples: int = 10_000, seed: int = 0) -> bool:
        n = self.order
        m = self.mul
        if n <= 64:
            a = np.arange(n)
            left = m[m[a[:, None], a[None, :]][:, :, None], a[None, None, :]]
            right = m[a[:, None, None], m[a[:, None], a[None, :]][None, :, :]]
            return bool(np.array_equal(left, right))
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
        return bool(np.array_equal(m[m[x, y], z], m[x, m[y, z]]))

    def check_inverse(self) -> bool:
        a = np.arange(self.order)
        return bool(np.all(self.mul[a, self.inv] == 0) and np.all(self.mul[self.inv, a] == 0))

    # -- subgroups ---------------------------------------------------------

    def closure(self, gens: Sequence[int]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by gens."""
        n = self.order
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        gens = [int(g) for g in gens]
        while frontier.size:
            new = np.unique(self.mul[frontier][:, gens].ravel()) if gens else np.zeros(0, int)
            new = new[~seen[new]]
            seen[new] = True
            frontier = new
        return np.flatnonzero(seen)

    def generators(self, subset: Optional[Sequence[int]] = None) -> list[int]:
        """A small generating set, chosen greedily in index order."""
        members = np.arange(self.order) if subset is None else np.asarray(subset)
        gens: list[int] = []
        inside = np.zeros(self.order, dtype=bool)
        inside[0] = True
        for g in members:
            if not inside[g]:
                gens.append(int(g))
                inside[:] = False
                inside[self.closure(gens)] = True
        return gens

    def conjugation_perm(self, g: int) -> np.ndarray:
        """x -> g^-1 x g."""
        return self.mul[self.inv[g]][self.mul[:, g]]

    def normal_closure(self, elems: Sequence[int]) -> np.ndarray:
        gens = list(dict.fromkeys(int(e) for e in elems))
        ambient = self.generators()
        while True:
            sub = self.closure(gens)
            mask = np.zeros(self.order, dtype=bool)
            mask[sub] = True
            extra = []
            for g in ambient:
                conj = self.mul[self.mul[self.inv[g]][np.array(gens)], g] if gens else []
                extra += [int(c) for c in np.atleast_1d(conj) if not mask[c]]
            if not extra:
                return sub
            gens += list(dict.fromkeys(extra))

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b (vectorised)."""
        m, iv = self.mul, self.inv
        return m[m[iv[a], iv[b]], m[a, b]]

    def derived_subgroup(self) -> np.ndarray:
        gens = self.generators()
        comms = [int(self.commutator(a, b)) for a in gens for b in gens]
        return self.normal_closure(comms)

    def is_normal(self, sub: Sequence[int]) -> bool:
        mask = np.zeros(self.order, dtype=bool)
        mask[np.asarray(sub)] = True
        for g in self.generators():
            if not mask[self.mul[self.mul[self.inv[g]][np.asarray(sub)], g]].all():
                return False
        return True

    def subgroup(self, members: Sequence[int], name: str | None = None) -> tuple["GroupTable", np.ndarray]:
        """Sub-table on the given members (identity first) and the inclusion map."""
        members = np.asarray(sorted(set(int(x) for x in members)))
        if members[0] != 0:
            raise ValueError("subgroup must contain the identity")
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[members] = np.arange(members.size)
        sub = self.mul[np.ix_(members, members)]
        if (pos[sub] < 0).any():
            raise ValueError("members are not closed under multiplication")
        labels = [self.labels[i] for i in members] if self.labels is not None else None
        elements = [self.elements[i] for i in members] if self.elements is not None else None
        t = GroupTable(pos[sub], pos[self.inv[members]], labels, name or f"sub({self.name})", elements)
        return t, members

    def quotient(self, normal: Sequence[int], name: str | None = None) -> tuple["GroupTable", np.ndarray]:
        """G/N with the least element of each coset as representative; returns
        the quotient table and the projection G -> G/N."""
        normal = np.asarray(normal)
        proj = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if proj[g] >= 0:
                continue
            coset = self.mul[g][normal]
            proj[coset] = len(reps)
            reps.append(g)
        reps = np.asarray(reps)
        qmul = proj[self.mul[np.ix_(reps, reps)]]
        qinv = proj[self.inv[reps]]
        labels = [self.labels[r] for r in reps] if self.labels is not None else None
        t = GroupTable(qmul, qinv, labels, name or f"{self.name}/N")
        t.meta["reps"] = reps
        return t, proj


def from_table(mul: np.ndarray, labels=None, name="group", elements=None) -> GroupTable:
    """Build from a table whose identity is index 0."""
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    if not np.array_equal(mul[0], np.arange(n)) or not np.array_equal(mul[:, 0], np.arange(n)):
        raise ValueError("index 0 must be the identity")
    rows, cols = np.nonzero(mul == 0)
    inv = np.empty(n, dtype=np.int64)
    inv[rows] = cols
    return GroupTable(mul, inv, labels, name, elements)


def from_elements(elements: Sequence, mul_fn: Callable, identity, name="group") -> GroupTable:
    """Generic constructor from hashable elements and a product function."""
    elems = [identity] + [e for e in elements if e != identity]
    index = {e: i for i, e in enumerate(elems)}
    if len(index) != len(elems):
        raise ValueError("duplicate elements")
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[mul_fn(a, b)]
    return from_table(mul, labels=elems, name=name, elements=elems)


# ---------------------------------------------------------------------------
# Concrete constructors
# ---------------------------------------------------------------------------


def cyclic(n: int, name: str | None = None) -> GroupTable:
    a = np.arange(n)
    return from_table((a[:, None] + a[None, :]) % n, labels=list(range(n)), name=name or f"Z/{n}")


def trivial() -> GroupTable:
    return from_table(np.zeros((1, 1), dtype=np.int64), labels=[()], name="1")


def product(g1: GroupTable, g2: GroupTable) -> GroupTable:
    n1, n2 = g1.order, g2.order
    a = np.arange(n1 * n2)
    x, y = a // n2, a % n2
    mul = g1.mul[x[:, None], x[None, :]] * n2 + g2.mul[y[:, None], y[None, :]]
    labels = [(i, j) for i in range(n1) for j in range(n2)]
    t = from_table(mul, labels=labels, name=f"{g1.name}x{g2.name}")
    t.meta["factors"] = (g1, g2)
    return t


def _coordinate_group(p: int, ncoords: int, law: Callable, name: str, names: Sequence[str]) -> GroupTable:
    """Group on (Z/p)^ncoords with a vectorised law(A, B) -> C on coordinate arrays."""
    n = p**ncoords
    idx = np.arange(n)
    coords = np.stack([(idx // p ** (ncoords - 1 - c)) % p for c in range(ncoords)])
    A = coords[:, :, None]
    B = coords[:, None, :]
    C = [c % p for c in law(A, B)]
    mul = np.zeros((n, n), dtype=np.int64)
    for c in range(ncoords):
        mul += C[c] * p ** (ncoords - 1 - c)
    labels = [tuple(int(v) for v in coords[:, i]) for i in range(n)]
    t = from_table(mul, labels=labels, name=name)
    t.meta["coords"] = coords
    t.meta["coord_names"] = tuple(names)
    t.meta["prime"] = p
    return t


# Coordinate names, multiplication laws and diagonal weights of the four
# named groups.  A weight (e1, e2, e3) means the coordinate is scaled by
# t1^e1 t2^e2 t3^e3 under the diagonal element (t1, t2, t3).
NAMED_GROUPS = {
    "G1": (
        ("b", "c"),
        lambda A, B: (A[0] + B[0], A[1] + B[1]),
        {"b": (1, -1, 0), "c": (-1, 1, 0)},
    ),
    "G2": (
        ("b", "c", "e", "f"),
        lambda A, B: (A[0] + B[0], A[1] + B[1], A[2] + B[2] + A[3] * B[1], A[3] + B[3]),
        {"b": (1, 0, -1), "c": (-1, 1, 0), "e": (-1, 0, 1), "f": (0, -1, 1)},
    ),
    "G3": (
        ("a", "b", "c", "e", "f"),
        lambda A, B: (
            A[0] + B[0] + A[1] * B[4],
            A[1] + B[1],
            A[2] + B[2],
            A[3] + B[3] + A[4] * B[2],
            A[4] + B[4],
        ),
        {"a": (1, -1, 0), "b": (1, 0, -1), "c": (-1, 1, 0), "e": (-1, 0, 1), "f": (0, -1, 1)},
    ),
    "G4": (
        ("a", "b", "c", "d", "e", "f"),
        lambda A, B: (
            A[0] + B[0] + A[1] * B[5],
            A[1] + B[1],
            A[2] + B[2],
            A[3] + B[3] + A[2] * B[1],
            A[4] + B[4] + A[5] * B[2],
            A[5] + B[5],
        ),
        {
            "a": (1, -1, 0),
            "b": (1, 0, -1),
            "c": (-1, 1, 0),
            "d": (0, 1, -1),
            "e": (-1, 0, 1),
            "f": (0, -1, 1),
        },
    ),
}


def named_group(name: str, p: int) -> GroupTable:
    key = name.upper()
    if key not in NAMED_GROUPS:
        raise ValueError(f"unknown named group {name!r}")
    names, law, _ = NAMED_GROUPS[key]
    return _coordinate_group(p, len(names), law, f"{key}({p})", names)


def named_diagonal_perms(group: GroupTable) -> list[np.ndarray]:
    """Permutations of a named group induced by every diagonal element."""
    key = group.name.split("(")[0]
    names, _, weights = NAMED_GROUPS[key]
    p = group.meta["prime"]
    coords = group.meta["coords"]
    ncoords = len(names)
    ts = 2 if key == "G1" else 3
    perms = []
    for t in itertools.product(range(1, p), repeat=ts):
        t3 = tuple(t) + (1,) * (3 - ts)
        scale = []
        for nm in names:
            s = 1
            for ti, ex in zip(t3, weights[nm]):
                s = s * pow(ti, ex, p) % p
            scale.append(s)
        new = np.zeros(group.order, dtype=np.int64)
        for c in range(ncoords):
            new += (coords[c] * scale[c] % p) * p ** (ncoords - 1 - c)
        perms.append(new)
    return perms


# ---------------------------------------------------------------------------
# Matrix groups
# ---------------------------------------------------------------------------


def _matrix_arrays(mats: Sequence[AutMatrix]) -> np.ndarray:
    return np.array([m.entries for m in mats], dtype=np.int64)


def _keys(arr: np.ndarray, mods: np.ndarray) -> np.ndarray:
    """Mixed-radix integer key of each matrix in an (N, rho, rho) array."""
    rho = arr.shape[1]
    radix = np.repeat(mods, rho)
    flat = arr.reshape(arr.shape[0], -1)
    key = np.zeros(arr.shape[0], dtype=np.int64)
    for c in range(flat.shape[1]):
        key = key * radix[c] + flat[:, c]
    return key


def from_matrices(mats: Sequence[AutMatrix], name: str = "matrices", chunk: int = 256) -> GroupTable:
    """Cayley table of a finite set of AutMatrix elements closed under product.
    The identity matrix is moved to index 0."""
    if not mats:
        raise ValueError("empty matrix list")
    part, p = mats[0].partition, mats[0].prime
    ident = AutMatrix.identity(part, p)
    mats = [ident] + [m for m in mats if m != ident]
    arr = _matrix_arrays(mats)
    mods = np.array(row_moduli(part, p), dtype=np.int64)
    keys = _keys(arr, mods)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    n = len(mats)
    mul = np.empty((n, n), dtype=np.int64)
    for s in range(0, n, chunk):
        a = arr[s : s + chunk]
        prod = np.einsum("axz,bzy->abxy", a, arr) % mods[None, None, :, None]
        k = _keys(prod.reshape(-1, *arr.shape[1:]), mods)
        pos = np.searchsorted(sorted_keys, k)
        if np.any(pos >= n) or np.any(sorted_keys[np.minimum(pos, n - 1)] != k):
            raise ValueError("matrix set is not closed under multiplication")
        mul[s : s + a.shape[0]] = order[pos].reshape(a.shape[0], n)
    t = from_table(mul, labels=mats, name=name, elements=mats)
    t.meta["prime"] = p
    t.meta["partition"] = part
    return t


def sylow_table(partition: Partition, p: int, cap: int = DEFAULT_TABLE_CAP) -> GroupTable:
    """P_lambda with coordinate maps attached in meta['coords'] (one row per
    coordinate in ascending total order)."""
    index = build_index_set(partition, p)
    mats = enumerate_group("P", partition, p, cap=cap)
    t = from_matrices(mats, name=f"P{partition}@{p}")
    from ..structures import encode_coords

    coords = np.array([[encode_coords(g, index)[s] for s in index.to_order] for g in t.elements]).T
    t.meta["coords"] = coords
    t.meta["index"] = index
    return t


def aut_table(partition: Partition, p: int, cap: int = DEFAULT_TABLE_CAP) -> GroupTable:
    mats = enumerate_group("G", partition, p, cap=cap)
    return from_matrices(mats, name=f"G{partition}@{p}")


def conjugation_perm_by(table: GroupTable, d: AutMatrix, d_inv: AutMatrix) -> np.ndarray:
    """Permutation g -> d g d^-1 of a matrix group table (d need not lie in it)."""
    from ..structures import mul as mmul

    return np.array([table.index(mmul(mmul(d, g), d_inv)) for g in table.elements])
