"""H^1 and H^2 of a finite group acting on a finite abelian p-group
A = sum_j Z/p^{e_j}, solved over Z/p^e (e = max e_j).

A value a in A is stored through parameters y_j in Z/p^e with a_j = y_j mod
p^{e_j}.  An identity in A is imposed in (Z/p^e)^r after scaling component j
by p^{e - e_j}, which embeds A into (Z/p^e)^r.  The kernel K of the
parameter map (y_j in p^{e_j} Z) is added to the coboundaries, so

    H = {cocycle parameters} / (coboundary parameters + K).

As in the trivial-action engine, a 2-cocycle is carried by its rows at a
generating set X and the remaining rows follow from

    c(xy, z) = x.c(y, z) + c(x, yz) - c(x, y),

with the cocycle identity imposed only for x in X.  A 1-cocycle is carried
by its values on X, with f(xy) = x.f(y) + f(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from ..linalg import Echelon, howell_form, howell_kernel
from .brute import SpanningTree
from .tables import GroupTable

NATURAL_CAP_DEGREE2 = 64
NATURAL_CAP_DEGREE1 = 512


class NaturalCapExceeded(RuntimeError):
    pass


@dataclass
class ModuleCohomology:
    """H^degree(G, A) as an abelian p-group."""

    degree: int
    p: int
    exponents: tuple[int, ...]  # the module A = sum Z/p^{e_j}
    invariants: tuple[int, ...]  # cyclic factor orders, descending
    cocycles: np.ndarray  # generators of the cocycle parameters
    relations: np.ndarray  # generators of coboundaries + K
    extra: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        out = 1
        for q in self.invariants:
            out *= q
        return out

    @property
    def is_zero(self) -> bool:
        return not self.invariants

    def text(self) -> str:
        if not self.invariants:
            return "0"
        return " x ".join(f"Z/{q}" for q in self.invariants)


def module_action_matrices(group: GroupTable, kind: str = "natural") -> list[np.ndarray]:
    """Integer r x r matrices for the action of each element.  "natural" reads
    the AutMatrix elements of a matrix group; "trivial" gives identities."""
    if kind == "natural":
        return [np.array(g.entries, dtype=np.int64) for g in group.elements]
    raise ValueError(f"unknown action {kind!r}")


# ---------------------------------------------------------------------------
# Submodules of (Z/p^e)^N
# ---------------------------------------------------------------------------


def _span_form(chunks: Iterator[np.ndarray], p: int, e: int, ncols: int) -> np.ndarray:
    """Rows of a Howell form of the span of all chunks."""
    rows = np.zeros((0, ncols), dtype=np.int64)
    for chunk in chunks:
        if chunk.size == 0:
            continue
        rows = howell_form(np.vstack([rows, chunk]), p, e, ncols=ncols).rows
    return rows


def _kernel(chunks: Iterator[np.ndarray], p: int, e: int, ncols: int) -> np.ndarray:
    """Generators of {y : E y = 0 mod p^e} for the stacked equation rows E."""
    if e == 1:
        ech = Echelon(ncols, p)
        for chunk in chunks:
            if chunk.size:
                ech.add(chunk % p)
        return ech.nullspace()
    rows = _span_form(chunks, p, e, ncols)
    if rows.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    return howell_kernel(rows, p, e).rows


def _log_order(gens: np.ndarray, p: int, e: int, ncols: int) -> int:
    if gens.size == 0:
        return 0
    return howell_form(gens, p, e, ncols=ncols).log_order()


def quotient_invariants(z: np.ndarray, rel: np.ndarray, p: int, e: int, ncols: int) -> tuple[int, ...]:
    """Invariant factors of Z / R for submodules R <= Z of (Z/p^e)^N, from the
    orders of p^k Z + R."""
    base = _log_order(rel, p, e, ncols)
    if z.size and _log_order(np.vstack([z, rel]), p, e, ncols) != _log_order(z, p, e, ncols):
        raise ArithmeticError("relations are not contained in the cocycles")
    logs = []
    for k in range(e + 1):
        gens = np.vstack([(z * p**k) % p**e, rel]) if z.size else rel
        logs.append(_log_order(gens.reshape(-1, ncols), p, e, ncols) - base)
    # n_j = number of cyclic factors of order >= p^(j+1)
    count = [logs[j] - logs[j + 1] for j in range(e)]
    out = []
    for j in range(e - 1, -1, -1):
        exact = count[j] - (count[j + 1] if j + 1 < e else 0)
        out += [p ** (j + 1)] * exact
    return tuple(out)


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


def _generators(group: GroupTable) -> list[int]:
    return group.generators() if group.order > 1 else []


def module_cohomology(
    group: GroupTable,
    p: int,
    exponents: Sequence[int],
    matrices: Sequence[np.ndarray],
    degree: int,
    cap: Optional[int] = None,
) -> ModuleCohomology:
    """H^degree(G, A) for A = sum Z/p^{e_j} with g acting by matrices[g]."""
    exps = tuple(int(x) for x in exponents)
    r = len(exps)
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if cap is None:
        cap = NATURAL_CAP_DEGREE2 if degree == 2 else NATURAL_CAP_DEGREE1
    if group.order > cap:
        raise NaturalCapExceeded(f"|G| = {group.order} exceeds the degree-{degree} cap {cap}")
    e = max(exps)
    q = p**e
    mats = [np.asarray(m, dtype=np.int64) % q for m in matrices]
    _check_action(group, mats, exps, p)
    if group.order == 1:  # positive-degree cohomology of the trivial group
        empty = np.zeros((0, 0), dtype=np.int64)
        return ModuleCohomology(degree, p, exps, (), empty, empty, {"gens": [], "nvars": 0})
    scale = np.array([p ** (e - x) for x in exps], dtype=np.int64)
    gens = _generators(group)
    tree = SpanningTree.build(group, gens)
    if degree == 1:
        z, rel, nvars = _degree1(group, p, e, r, exps, mats, scale, tree)
    else:
        z, rel, nvars = _degree2(group, p, e, r, exps, mats, scale, tree)
    inv = quotient_invariants(z, rel, p, e, nvars)
    return ModuleCohomology(degree, p, exps, inv, z, rel, {"gens": gens, "nvars": nvars})


def _check_action(group: GroupTable, mats: list[np.ndarray], exps: tuple[int, ...], p: int) -> None:
    """Each matrix must preserve A and the map g -> matrices[g] must be a
    homomorphism on A."""
    r = len(exps)
    e = max(exps)
    q = p**e
    mods = np.array([p**x for x in exps], dtype=np.int64)
    for m in mats:
        for j in range(r):
            for jj in range(r):
                if exps[jj] < exps[j] and m[j, jj] % p ** (exps[j] - exps[jj]):
                    raise ValueError("action matrix does not preserve the module")
    gens = _generators(group)
    for x in gens:
        for y in range(group.order):
            lhs = (mats[x] @ mats[y]) % q
            rhs = mats[group.mul[x, y]]
            if np.any((lhs - rhs) % mods[:, None]):
                raise ValueError("action is not a homomorphism")


def _kernel_rows(r: int, exps: tuple[int, ...], p: int, slots: int) -> np.ndarray:
    """Parameter vectors with zero image in A: p^{e_j} on each variable."""
    out = np.zeros((slots * r, slots * r), dtype=np.int64)
    for s in range(slots):
        for j in range(r):
            out[s * r + j, s * r + j] = p ** exps[j]
    q = p ** max(exps)
    out %= q
    return out[out.any(axis=1)]


def _degree1(group, p, e, r, exps, mats, scale, tree):
    n = group.order
    q = p**e
    X = tree.gens
    nv = len(X) * r
    # F[g] : r x nv, the parameters of f(g)
    F = np.zeros((n, r, nv), dtype=np.int64)
    for g in tree.order[1:]:
        k, y = int(tree.gen_pos[g]), int(tree.rest[g])
        val = mats[X[k]] @ F[y]
        val[np.arange(r), k * r + np.arange(r)] += 1
        F[g] = val % q

    def eqs():
        for k, x in enumerate(X):
            blocks = []
            for y in range(n):
                row = F[group.mul[x, y]] - mats[x] @ F[y]
                row[np.arange(r), k * r + np.arange(r)] -= 1
                blocks.append((row * scale[:, None]) % q)
            yield np.vstack(blocks)

    z = _kernel(eqs(), p, e, nv) if nv else np.zeros((0, 0), dtype=np.int64)
    # coboundaries f(g) = g a - a, parameters at generators
    bnd = np.zeros((r, nv), dtype=np.int64)
    for k, x in enumerate(X):
        bnd[:, k * r : (k + 1) * r] = (mats[x] - np.eye(r, dtype=np.int64)).T
    rel = np.vstack([bnd % q, _kernel_rows(r, exps, p, len(X))]) if nv else np.zeros((0, 0), dtype=np.int64)
    return z.reshape(-1, nv), rel.reshape(-1, nv), nv


def _degree2(group, p, e, r, exps, mats, scale, tree):
    n = group.order
    q = p**e
    X = tree.gens
    nv = len(X) * n * r

    def var(k, z):
        return k * n * r + z * r

    # R[g, z] : r x nv, the parameters of c(g, z)
    R = np.zeros((n, n, r, nv), dtype=np.int64)
    idx = np.arange(r)
    mul = group.mul
    for g in tree.order[1:]:
        k, y = int(tree.gen_pos[g]), int(tree.rest[g])
        val = np.einsum("ij,zjv->ziv", mats[X[k]], R[y])
        for zz in range(n):
            val[zz, idx, var(k, mul[y, zz]) + idx] += 1
            val[zz, idx, var(k, y) + idx] -= 1
        R[g] = val % q

    def eqs():
        norm = np.zeros((len(X) * r, nv), dtype=np.int64)
        for k in range(len(X)):
            norm[k * r + idx, var(k, 0) + idx] = scale
        yield norm % q
        for k, x in enumerate(X):
            for y in range(n):
                val = R[mul[x, y]] - np.einsum("ij,zjv->ziv", mats[x], R[y])
                for zz in range(n):
                    val[zz, idx, var(k, mul[y, zz]) + idx] -= 1
                    val[zz, idx, var(k, y) + idx] += 1
                yield (val * scale[None, :, None]).reshape(n * r, nv) % q

    z = _kernel(eqs(), p, e, nv)
    # coboundaries dv(x, z) = x.v(z) - v(xz) + v(x) for v = a e_j at g != 1
    bnd = []
    for g in range(1, n):
        for jj in range(r):
            vec = np.zeros((len(X), n, r), dtype=np.int64)
            for k, x in enumerate(X):
                # x.v(z): nonzero at z = g
                vec[k, g, :] += mats[x][:, jj]
                # - v(xz): nonzero where xz = g
                zz = int(mul[group.inv[x], g])
                vec[k, zz, jj] -= 1
                # + v(x)
                if x == g:
                    vec[k, :, jj] += 1
            bnd.append(vec.reshape(-1) % q)
    bnd = np.array(bnd, dtype=np.int64).reshape(-1, nv)
    kern = _kernel_rows(r, exps, p, len(X) * n)
    rel = np.vstack([bnd, kern])
    return z.reshape(-1, nv), rel, nv


# ---------------------------------------------------------------------------
# Front ends
# ---------------------------------------------------------------------------


def natural_h(group: GroupTable, degree: int, cap: Optional[int] = None) -> ModuleCohomology:
    """H^degree(G, A_lambda) for a group of automorphisms of A_lambda acting
    naturally; the module is read from the group's partition."""
    part = group.meta["partition"]
    p = group.meta["prime"]
    exps = part.expanded()
    return module_cohomology(group, p, exps, module_action_matrices(group), degree, cap)


def trivial_h(group: GroupTable, p: int, e: int, degree: int, cap: Optional[int] = None) -> ModuleCohomology:
    """H^degree(G, Z/p^e) with trivial action."""
    ident = [np.eye(1, dtype=np.int64)] * group.order
    return module_cohomology(group, p, (e,), ident, degree, cap)


def scalar_power(h: ModuleCohomology, factor: int) -> np.ndarray:
    """factor times each generator of H, reduced modulo the relations; all
    rows zero means factor kills H."""
    q = h.p ** max(h.exponents)
    nv = h.extra["nvars"]
    if h.cocycles.size == 0:
        return np.zeros((0, nv), dtype=np.int64)
    rel = howell_form(h.relations, h.p, max(h.exponents), ncols=nv) if h.relations.size else None
    out = []
    for row in h.cocycles:
        v = (row * factor) % q
        if rel is not None:
            v, _ = rel.reduce(v)
        out.append(v)
    return np.array(out, dtype=np.int64)
