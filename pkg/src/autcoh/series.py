"""Chief series of the Sylow subgroup, coset representatives, commutator
subgroups and constructive factorizations over Z/p^k."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from .cohomology.tables import GroupTable, sylow_table
from .structures import (
    EMPTY,
    AutMatrix,
    Coordinate,
    IndexSet,
    Partition,
    build_index_set,
    decode_coords,
    encode_coords,
    gl_partition,
    mul,
)

# ---------------------------------------------------------------------------
# Chief series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    """{g^a : a_t = 0 for every t above ``top`` in the chosen order}."""

    index: IndexSet
    top: Optional[Coordinate]
    order_name: str

    @property
    def vanishing(self) -> tuple[Coordinate, ...]:
        return self.index.above(self.top, self.order_name)

    @property
    def log_order(self) -> int:
        return len(self.index) - len(self.vanishing)

    def contains(self, g: AutMatrix) -> bool:
        a = encode_coords(g, self.index)
        return all(a[t] == 0 for t in self.vanishing)

    def mask(self, table: GroupTable) -> np.ndarray:
        """Membership mask over a Sylow table built by :func:`sylow_table`."""
        coords = table.meta["coords"]
        pos = {s: r for r, s in enumerate(self.index.to_order)}
        rows = [pos[t] for t in self.vanishing]
        if not rows:
            return np.ones(table.order, dtype=bool)
        return ~coords[rows].any(axis=0)


@dataclass
class ChiefSeries:
    index: IndexSet
    order_name: str
    terms: list[SubgroupDescriptor]

    def __len__(self) -> int:
        return len(self.terms) - 1

    def steps(self):
        return list(zip(self.terms, self.terms[1:]))


def chief_series(partition: Partition, prime: int, order: str = "TO") -> ChiefSeries:
    """1 = X^{empty} < X^{s_1} < ... < X^{s_max} = P_lambda in the given order."""
    order = order.upper()
    index = build_index_set(partition, prime)
    seq = index.order(order)
    terms = [SubgroupDescriptor(index, EMPTY, order)]
    terms += [SubgroupDescriptor(index, s, order) for s in seq]
    return ChiefSeries(index, order, terms)


@dataclass
class SeriesReport:
    orders: list[int]
    indices_all_p: bool
    subgroups: bool
    normal: bool
    central: bool
    derived_term: Optional[Coordinate] = None
    derived_matches: Optional[bool] = None

    @property
    def ok(self) -> bool:
        flags = [self.indices_all_p, self.subgroups, self.normal, self.central]
        if self.derived_matches is not None:
            flags.append(self.derived_matches)
        return all(flags)


def verify_series(series: ChiefSeries, table: Optional[GroupTable] = None) -> SeriesReport:
    """Exhaustive check on the Sylow table: each term is a normal subgroup,
    consecutive indices are p and [P, X^{s'}] lies in X^{s}."""
    index = series.index
    p = index.prime
    if table is None:
        table = sylow_table(index.partition, p)
    masks = [t.mask(table) for t in series.terms]
    orders = [int(m.sum()) for m in masks]
    indices = all(b == a * p for a, b in zip(orders, orders[1:]))
    subgroups = True
    normal = True
    central = True
    gens = table.generators()
    for m in masks:
        members = np.flatnonzero(m)
        prod = table.mul[np.ix_(members, members)]
        if not m[prod].all():
            subgroups = False
        for g in gens:
            if not m[table.mul[table.mul[table.inv[g]][members], g]].all():
                normal = False
    all_el = np.arange(table.order)
    for lo, hi in zip(masks, masks[1:]):
        members = np.flatnonzero(hi)
        comm = table.commutator(all_el[:, None], members[None, :])
        if not lo[comm].all():
            central = False
    rep = SeriesReport(orders, indices, subgroups, normal, central)
    if series.order_name == "MTO":
        s0 = index.max_non_t()
        rep.derived_term = s0
        pos = list(series.index.mto_order).index(s0) + 1 if s0 is not EMPTY else 0
        derived = np.zeros(table.order, dtype=bool)
        derived[table.derived_subgroup()] = True
        rep.derived_matches = bool(np.array_equal(derived, masks[pos]))
    return rep


def coset_reps(index: IndexSet, t1: Optional[Coordinate], t2: Coordinate) -> list[AutMatrix]:
    """C_{t1}^{t2}: elements of P^{t2} whose coordinates at or below t1 vanish."""
    if not index.less(t1, t2, "to"):
        raise ValueError(f"need t1 < t2 in the total order, got {t1}, {t2}")
    seq = index.to_order
    lo = 0 if t1 is EMPTY else seq.index(t1) + 1
    free = seq[lo : seq.index(t2) + 1]
    p = index.prime
    out = []
    for digits in np.ndindex(*([p] * len(free))):
        out.append(decode_coords(dict(zip(free, digits)), index.partition, p))
    return out


# ---------------------------------------------------------------------------
# Generic closure on hashable elements
# ---------------------------------------------------------------------------


def closure(gens: Iterable, mul_fn: Callable, identity: Hashable, cap: int = 10**5) -> set:
    elems = {identity}
    frontier = [identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul_fn(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if len(elems) > cap:
                        raise RuntimeError(f"closure exceeded cap {cap}")
        frontier = nxt
    return elems


def commutator_closure(
    gens: Sequence, mul_fn: Callable, inv_fn: Callable, identity: Hashable, cap: int = 10**5
) -> set:
    """[G, G] for G = <gens>: normal closure of the commutators of generators."""
    gens = list(gens)

    def comm(a, b):
        return mul_fn(mul_fn(inv_fn(a), inv_fn(b)), mul_fn(a, b))

    sub_gens = list(dict.fromkeys(comm(a, b) for a in gens for b in gens))
    sub_gens = [c for c in sub_gens if c != identity]
    while True:
        sub = closure(sub_gens, mul_fn, identity, cap)
        extra = []
        for g in gens:
            gi = inv_fn(g)
            for h in sub_gens:
                c = mul_fn(mul_fn(gi, h), g)
                if c not in sub:
                    extra.append(c)
        if not extra:
            return sub
        sub_gens += list(dict.fromkeys(extra))


def matrix_commutator_subgroup(gens: Sequence[AutMatrix], cap: int = 10**5) -> set:
    from .structures import inv

    ident = AutMatrix.identity(gens[0].partition, gens[0].prime)
    return commutator_closure(gens, mul, inv, ident, cap)


def gl_generators(n: int, p: int, k: int) -> list[AutMatrix]:
    """Elementary matrices E_ij(1) plus Diag(u, 1, ..., 1) for a unit generator
    set of (Z/p^k)^*; these generate GL_n(Z/p^k)."""
    part = gl_partition(n, k)
    q = p**k
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                gens.append(AutMatrix.elementary(part, p, i, j, 1))
    for u in unit_group_generators(q):
        gens.append(AutMatrix.diagonal(part, p, [u] + [1] * (n - 1)))
    return gens


def unit_group_generators(q: int) -> list[int]:
    units = [u for u in range(1, q) if math.gcd(u, q) == 1]
    gens: list[int] = []
    span = {1 % q}
    for u in units:
        if u not in span:
            gens.append(u)
            span = closure(gens, lambda a, b: a * b % q, 1 % q)
    return gens


def abelianization(table: GroupTable) -> dict:
    """Order, invariant factors and p-ranks of G/[G, G]."""
    derived = table.derived_subgroup()
    quotient, _ = table.quotient(derived)
    n = quotient.order
    factors = abelian_invariants(quotient)
    ranks = {}
    for q in _prime_factors(n):
        ranks[q] = sum(1 for f in factors if f % q == 0)
    return {"order": n, "invariants": factors, "p_ranks": ranks, "derived_order": len(derived)}


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(table: GroupTable) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group, read off
    from the number of elements killed by each prime power."""
    n = table.order
    if n == 1:
        return []
    orders = np.array([table.element_order(g) for g in range(n)])
    per_prime = {}
    for q in _prime_factors(n):
        v, m = 0, n
        while m % q == 0:
            m //= q
            v += 1
        # log_q #{x : q^j x = 0} = sum_i min(j, e_i)
        counts = [0] + [
            round(math.log(int(np.sum((q**j) % orders == 0)), q)) for j in range(1, v + 1)
        ]
        at_least = [counts[j] - counts[j - 1] for j in range(1, v + 1)] + [0]
        exps = []
        for j in range(1, v + 1):
            exps += [j] * (at_least[j - 1] - at_least[j])
        per_prime[q] = sorted(exps, reverse=True)
    width = max(len(e) for e in per_prime.values())
    factors = []
    for i in range(width):
        f = 1
        for q, exps in per_prime.items():
            if i < len(exps):
                f *= q ** exps[i]
        factors.append(f)
    return sorted(factors)


# ---------------------------------------------------------------------------
# Factorizations over Z/p^k
# ---------------------------------------------------------------------------

Elementary = tuple[int, int, int]  # (i, j, alpha), 1-based, i != j


def _det_int(m: list[list[int]], q: int) -> int:
    from .structures import det_mod

    return det_mod(m, q)


def _apply_left(m: list[list[int]], e: Elementary, q: int) -> None:
    """m <- E_ij(alpha) m: add alpha times row j to row i."""
    i, j, a = e
    m[i - 1] = [(x + a * y) % q for x, y in zip(m[i - 1], m[j - 1])]


def elementary_product(factors: Sequence[Elementary], n: int, q: int) -> list[list[int]]:
    out = [[int(r == c) for c in range(n)] for r in range(n)]
    for e in reversed(factors):
        _apply_left(out, e, q)
    return out


def _diag_gadget(n: int, a_n: int, q: int) -> list[Elementary]:
    """Factors of B with B Diag(.., a_{n-1}, a_n) = Diag(.., a_{n-1} a_n, 1)."""
    ainv = pow(a_n, -1, q)
    return [
        (n, n - 1, (1 - ainv) % q),
        (n - 1, n, q - 1),
        (n, n - 1, 1),
        (n, n - 1, (-a_n) % q),
        (n - 1, n, ainv),
    ]


def sl_factorize(matrix: Sequence[Sequence[int]], p: int, k: int) -> list[Elementary]:
    """Elementary factors (i, j, alpha) whose ordered product is the given
    determinant-one matrix over Z/p^k."""
    q = p**k
    m = [[int(x) % q for x in row] for row in matrix]
    n = len(m)
    if _det_int(m, q) != 1 % q:
        raise ValueError("matrix does not have determinant 1")
    ops: list[Elementary] = []  # left multiplications applied so far

    def left(e: Elementary) -> None:
        _apply_left(m, e, q)
        ops.append(e)

    for c in range(n):
        if m[c][c] % p == 0:
            r = next(r for r in range(c + 1, n) if m[r][c] % p)
            left((c + 1, r + 1, 1))
        inv_pivot = pow(m[c][c], -1, q)
        for r in range(n):
            if r != c and m[r][c]:
                left((r + 1, c + 1, (-m[r][c] * inv_pivot) % q))
    # m is now diagonal with product 1; fold the last entry into its neighbour
    for size in range(n, 1, -1):
        a = m[size - 1][size - 1]
        if a == 1:
            continue
        # B = F1 ... F5 acts on the left, so F5 is applied first
        for e in reversed(_diag_gadget(size, a, q)):
            left(e)
    # ops_t ... ops_1 M = I  =>  M = ops_1^{-1} ... ops_t^{-1}
    return [(i, j, (-a) % q) for (i, j, a) in ops if a % q]


def strong_approx_decompose(matrix: Sequence[Sequence[int]], p: int, k: int):
    """Write g (det g = 1 mod p) as g = g' + p h with det g' = 1 exactly.

    g' = g Diag(det(g)^-1, 1, ..., 1) differs from g only in the first
    column, by (1 - det(g)^-1) times that column, which is divisible by p.
    """
    if p == 2:
        raise ValueError("decomposition is stated for odd primes")
    q = p**k
    g = [[int(x) % q for x in row] for row in matrix]
    d = _det_int(g, q)
    if d % p != 1:
        raise ValueError("det(g) is not 1 mod p")
    dinv = pow(d, -1, q)
    g1 = [[(row[0] * dinv) % q] + row[1:] for row in g]
    h = [[((a - b) % q) // p for a, b in zip(r, r1)] for r, r1 in zip(g, g1)]
    return g1, h
