"""Maps between cohomology groups: automorphism actions and their averaging
projector, restriction, inflation, transgression, the commutator pairing
theta, exactness checks for central extensions, and stable classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..linalg import Echelon, _eliminate
from .brute import (
    CohomologySpace,
    coboundary,
    h2_brute,
    hom_basis,
    space_from_basis,
)
from .tables import GroupTable, conjugation_perm_by


class NotCentral(ValueError):
    pass


# ---------------------------------------------------------------------------
# Automorphism actions
# ---------------------------------------------------------------------------


def is_automorphism_perm(group: GroupTable, perm: np.ndarray) -> bool:
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(group.order)) or perm[0] != 0:
        return False
    return bool(np.array_equal(perm[group.mul], group.mul[perm[:, None], perm[None, :]]))


def conj_action(space: CohomologySpace, perm: np.ndarray, check: bool = True) -> np.ndarray:
    """Matrix M with row i = class coordinates of c_i o (d x d), for the
    basis cocycles c_i and the automorphism d given as a permutation."""
    perm = np.asarray(perm)
    if check and not is_automorphism_perm(space.group, perm):
        raise ValueError("permutation is not an automorphism of the group")
    if space.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    tables = space.basis_tables()
    moved = tables[:, perm[:, None], perm[None, :]]
    return space.coords(space.u_of(moved))


def inner_perm(group: GroupTable, g: int) -> np.ndarray:
    """x -> g x g^-1."""
    return group.mul[group.mul[g]][:, group.inv[g]]


def close_perms(gens: Sequence[np.ndarray], cap: int = 10**5) -> list[np.ndarray]:
    n = len(gens[0]) if gens else 0
    ident = np.arange(n)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = np.asarray(g)[a]
                key = b.tobytes()
                if key not in seen:
                    seen[key] = b
                    nxt.append(b)
                    if len(seen) > cap:
                        raise RuntimeError("acting group exceeds cap")
        frontier = nxt
    return list(seen.values())


@dataclass
class InvariantResult:
    space: CohomologySpace
    projector: np.ndarray
    acting_order: int


def invariant_subspace(space: CohomologySpace, perms: Sequence[np.ndarray]) -> InvariantResult:
    """Classes fixed by a group of automorphisms of order prime to p, via the
    averaging projector (1/|D|) sum_d d."""
    p = space.p
    group = close_perms(list(perms)) if len(perms) else [np.arange(space.group.order)]
    order = len(group)
    if order % p == 0:
        raise ValueError(f"acting group order {order} is divisible by p = {p}")
    d = space.dim
    total = np.zeros((d, d), dtype=np.int64)
    for perm in group:
        total = (total + conj_action(space, perm, check=False)) % p
    proj = (total * pow(order, -1, p)) % p
    if d:
        rows, _ = _eliminate(proj.copy(), p)
        u = (rows @ space.basis_u) % p
    else:
        u = np.zeros((0, space.ncols), dtype=np.int64)
    sub = CohomologySpace(space.group, p, space.tree, u.reshape(-1, space.ncols), space.boundary)
    return InvariantResult(sub, proj, order)


# ---------------------------------------------------------------------------
# Restriction, inflation, transgression, theta
# ---------------------------------------------------------------------------


def restrict(table: np.ndarray, members: Sequence[int]) -> np.ndarray:
    """Table of the restriction to the subgroup with the given members (in
    the order of its sub-table)."""
    m = np.asarray(members)
    return np.asarray(table)[np.ix_(m, m)]


def inflate(table_q: np.ndarray, proj: np.ndarray) -> np.ndarray:
    """Pullback of a cocycle on G/N along the projection G -> G/N."""
    proj = np.asarray(proj)
    return np.asarray(table_q)[proj[:, None], proj[None, :]]


def extension_cocycle(group: GroupTable, normal_members: Sequence[int], quotient: GroupTable, proj: np.ndarray) -> np.ndarray:
    """e(q1, q2) = s(q1) s(q2) s(q1 q2)^-1 as an index into ``normal_members``,
    with s the least-element transversal."""
    reps = quotient.meta["reps"]
    pos = {int(h): i for i, h in enumerate(normal_members)}
    nq = quotient.order
    out = np.zeros((nq, nq), dtype=np.int64)
    for a in range(nq):
        for b in range(nq):
            prod = group.mul[reps[a], reps[b]]
            ab = quotient.mul[a, b]
            h = int(group.mul[prod, group.inv[reps[ab]]])
            out[a, b] = pos[h]
    return out


def transgress(hom_values: np.ndarray, ext: np.ndarray) -> np.ndarray:
    """Class of phi o e on G/N for a homomorphism phi: N -> F_p."""
    return np.asarray(hom_values)[ext]


def theta(group: GroupTable, table: np.ndarray, central_members: Sequence[int], p: int) -> np.ndarray:
    """beta(g, h) = c(g, h) - c(h, g) for g in G, h in the central subgroup."""
    h = np.asarray(central_members)
    if not np.array_equal(group.mul[:, h], group.mul[h, :].T):
        raise NotCentral("subgroup is not central")
    c = np.asarray(table)
    return (c[:, h] - c[h, :].T) % p


def is_bilinear(group: GroupTable, beta: np.ndarray, members: Sequence[int], p: int) -> bool:
    """beta(xy, z) = beta(x, z) + beta(y, z) and beta(x, zw) = beta(x, z) + beta(x, w)."""
    h = np.asarray(members)
    pos = np.full(group.order, -1)
    pos[h] = np.arange(h.size)
    n = group.order
    left = beta[group.mul[:, :], :]  # (x, y, z) -> beta(xy, z)
    ok1 = np.array_equal(left % p, (beta[:, None, :] + beta[None, :, :]) % p)
    zw = pos[group.mul[np.ix_(h, h)]]
    ok2 = np.array_equal(beta[:, zw] % p, (beta[:, :, None] + beta[:, None, :]) % p)
    return bool(ok1 and ok2)


def _rowspace_equal(a: np.ndarray, b: np.ndarray, p: int, ncols: int) -> bool:
    ea, eb = Echelon(ncols, p), Echelon(ncols, p)
    if a.size:
        ea.add(a % p)
    if b.size:
        eb.add(b % p)
    if ea.rank != eb.rank:
        return False
    both = ea.copy()
    if b.size:
        both.add(b % p)
    return both.rank == ea.rank


def _left_kernel(m: np.ndarray, p: int, nrows: int) -> np.ndarray:
    """{alpha : alpha M = 0} as rows."""
    if m.size == 0 or m.shape[1] == 0:
        return np.eye(nrows, dtype=np.int64)
    ech = Echelon(nrows, p)
    ech.add(m.T % p)
    return ech.nullspace()


@dataclass
class ExactnessReport:
    name: str
    dims: dict
    im_inf_eq_ker_res_theta: bool
    ker_inf_eq_im_tra: bool
    theta_bilinear: bool

    @property
    def ok(self) -> bool:
        return self.im_inf_eq_ker_res_theta and self.ker_inf_eq_im_tra and self.theta_bilinear


def hs_exactness(group: GroupTable, central: Sequence[int], p: int, name: str = "extension") -> ExactnessReport:
    """Check Im(Inf) = Ker(Res x theta) in H^2(G) and Ker(Inf) = Im(Tra) in
    H^2(G/H) for a central subgroup H."""
    central = np.asarray(sorted(int(x) for x in central))
    if not np.array_equal(group.mul[:, central], group.mul[central, :].T):
        raise NotCentral("subgroup is not central")
    quotient, proj = group.quotient(central)
    sub, _ = group.subgroup(central)
    hg = h2_brute(group, p)
    hq = h2_brute(quotient, p)
    hh = h2_brute(sub, p)
    # Inf: H^2(Q) -> H^2(G)
    if hq.dim:
        inf_tables = np.array([inflate(t, proj) for t in hq.basis_tables()])
        inf_m = hg.coords(hg.u_of(inf_tables)).reshape(hq.dim, hg.dim)
    else:
        inf_m = np.zeros((0, hg.dim), dtype=np.int64)
    # Res x theta on H^2(G)
    blocks = []
    thetas_bilinear = True
    for t in hg.basis_tables():
        res = hh.coords(hh.u_of(restrict(t, central))) if hh.dim else np.zeros(0, dtype=np.int64)
        beta = theta(group, t, central, p)
        thetas_bilinear &= is_bilinear(group, beta, central, p)
        blocks.append(np.concatenate([np.atleast_1d(res), beta.ravel()]))
    tau = np.array(blocks, dtype=np.int64).reshape(hg.dim, -1) if hg.dim else np.zeros((0, 0), dtype=np.int64)
    ker_tau = _left_kernel(tau, p, hg.dim) if hg.dim else np.zeros((0, 0), dtype=np.int64)
    im_inf = inf_m
    first = _rowspace_equal(im_inf, ker_tau, p, hg.dim) if hg.dim else True
    # Tra: Hom(H, F_p) -> H^2(Q)
    ext = extension_cocycle(group, central, quotient, proj)
    homs = hom_basis(sub, p)
    tra_rows = []
    for phi in homs:
        tra_rows.append(hq.coords(hq.u_of(transgress(phi, ext))) if hq.dim else np.zeros(0, dtype=np.int64))
    tra_m = np.array(tra_rows, dtype=np.int64).reshape(len(tra_rows), hq.dim)
    ker_inf = _left_kernel(inf_m, p, hq.dim) if hq.dim else np.zeros((0, 0), dtype=np.int64)
    second = _rowspace_equal(ker_inf, tra_m, p, hq.dim) if hq.dim else True
    dims = {"H2(G)": hg.dim, "H2(G/H)": hq.dim, "H2(H)": hh.dim, "rank Inf": int(np.linalg.matrix_rank(inf_m)) if inf_m.size else 0}
    return ExactnessReport(name, dims, bool(first), bool(second), bool(thetas_bilinear))


# ---------------------------------------------------------------------------
# Stable classes
# ---------------------------------------------------------------------------


def double_coset_reps(group: GroupTable, sub: Sequence[int]) -> list[int]:
    """One representative g for each double coset P g P (deterministic: the
    least element index of each double coset)."""
    sub = np.asarray(sub)
    n = group.order
    seen = np.zeros(n, dtype=bool)
    reps = []
    for g in range(n):
        if seen[g]:
            continue
        reps.append(g)
        block = group.mul[group.mul[sub, g][:, None], sub[None, :]].ravel()
        seen[block] = True
    return reps


@dataclass
class StableResult:
    space: CohomologySpace  # subspace of H^2(P)
    sylow_space: CohomologySpace
    reps: list[int]
    intersections: list[int]


def stable_subspace(
    group: GroupTable, sylow: Sequence[int], p: int, sylow_space: Optional[CohomologySpace] = None
) -> StableResult:
    """Classes x in H^2(P) with res_{P ∩ gPg^-1} x = res (c_g x) for all
    double coset representatives g."""
    sylow = np.asarray(sorted(int(x) for x in sylow))
    ptab, members = group.subgroup(sylow)
    if sylow_space is None:
        sylow_space = h2_brute(ptab, p)
    d = sylow_space.dim
    pos = np.full(group.order, -1, dtype=np.int64)
    pos[members] = np.arange(members.size)
    tables = sylow_space.basis_tables()
    reps = double_coset_reps(group, members)
    alive = np.eye(d, dtype=np.int64)
    sizes = []
    in_p = np.zeros(group.order, dtype=bool)
    in_p[members] = True
    for g in reps:
        if in_p[g] or d == 0:
            continue
        gi = int(group.inv[g])
        # h in P with g^-1 h g in P
        conj = group.mul[group.mul[gi, members], g]
        hmask = in_p[conj]
        h_el = members[hmask]
        sizes.append(int(h_el.size))
        hp = pos[h_el]  # positions of H_g inside P
        cp = pos[conj[hmask]]  # positions of g^-1 h g inside P
        diffs = (tables[:, hp[:, None], hp[None, :]] - tables[:, cp[:, None], cp[None, :]]) % p
        # sum alpha_i diff_i must be a coboundary on H_g
        htab, _ = group.subgroup(h_el)
        m = htab.order
        cob = np.array([coboundary(htab, p, np.eye(m, dtype=np.int64)[j]) for j in range(1, m)]).reshape(m - 1, -1)
        # unknowns (beta over current alive basis, v): sum beta_k (alive_k . diffs) - sum v_j cob_j = 0
        cur = (alive @ diffs.reshape(d, -1)) % p
        system = np.vstack([cur, (-cob) % p]).T  # equations x unknowns
        ech = Echelon(system.shape[1], p)
        ech.add(system)
        ker = ech.nullspace()[:, : alive.shape[0]]
        if ker.size:
            rows, _ = _eliminate(ker % p, p)
            alive = (rows @ alive) % p
        else:
            alive = np.zeros((0, d), dtype=np.int64)
        if alive.shape[0] == 0:
            break
    u = (alive @ sylow_space.basis_u) % p if d and alive.size else np.zeros((0, sylow_space.ncols), dtype=np.int64)
    sub = CohomologySpace(ptab, p, sylow_space.tree, u.reshape(-1, sylow_space.ncols), sylow_space.boundary)
    return StableResult(sub, sylow_space, reps, sizes)


def sylow_subgroup(group: GroupTable, p: int) -> np.ndarray:
    """A Sylow p-subgroup by growing a p-subgroup one element at a time."""
    n = group.order
    target = 1
    while n % (target * p) == 0:
        target *= p
    orders = np.array([group.element_order(g) for g in range(n)])
    cur = np.array([0])
    while cur.size < target:
        mask = np.zeros(n, dtype=bool)
        mask[cur] = True
        for g in range(n):
            if mask[g] or not _is_p_power(int(orders[g]), p):
                continue
            cand = group.closure(list(cur[1:]) + [g])
            if _is_p_power(cand.size, p):
                cur = cand
                break
        else:
            raise ArithmeticError("could not enlarge the p-subgroup")
    return cur


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0 and n > 1:
        n //= p
    return n == 1


def chief_extensions(partition, prime: int, order: str = "TO", table: Optional[GroupTable] = None) -> list[tuple[str, GroupTable, np.ndarray]]:
    """For each step N_{i-1} < N_i of the chief series, the central extension
    N_i/N_{i-1} -> P/N_{i-1} -> P/N_i as (name, P/N_{i-1}, members of N_i/N_{i-1})."""
    from ..series import chief_series
    from .tables import sylow_table

    if table is None:
        table = sylow_table(partition, prime)
    series = chief_series(partition, prime, order)
    masks = [term.mask(table) for term in series.terms]
    out = []
    for i in range(1, len(masks)):
        below = np.flatnonzero(masks[i - 1])
        if below.size > 1:
            quot, proj = table.quotient(below)
        else:
            quot, proj = table, np.arange(table.order)
        h = np.unique(proj[np.flatnonzero(masks[i])])
        out.append((f"{order}-step-{i}", quot, h))
    return out


def restricted_diagonal_generators(partition, prime: int) -> list:
    """Generators of D_lambda: a primitive root of unity of order p-1 in one
    diagonal slot, 1 elsewhere."""
    from ..structures import AutMatrix, teichmuller_units

    rows = partition.expanded()
    gens = []
    for x, lam in enumerate(rows):
        units = teichmuller_units(prime, lam)
        q = prime**lam
        gen = next(u for u in units if all(pow(u, m, q) != 1 for m in range(1, prime - 1)))
        if gen == 1:
            continue
        diag = [1] * len(rows)
        diag[x] = gen
        gens.append(AutMatrix.diagonal(partition, prime, diag))
    return gens


def diagonal_action_perms(table: GroupTable) -> list[np.ndarray]:
    """Permutations of a Sylow table induced by conjugation with the
    generators of D_lambda."""
    from ..structures import inv as minv

    part, p = table.meta["partition"], table.meta["prime"]
    return [conjugation_perm_by(table, d, minv(d)) for d in restricted_diagonal_generators(part, p)]
