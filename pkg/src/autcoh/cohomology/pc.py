"""Power-conjugate presentations of p-groups and H^2(G, F_p) from tails.

A presentation has generators g_0, ..., g_{n-1} (top of the series first),
relations

    g_i^p       = w_ii            (word in g_{i+1}, ..., g_{n-1})
    g_k g_i     = g_i w_ik        (k > i, w_ik = g_i^-1 g_k g_i)

and normal forms g_0^e_0 ... g_{n-1}^e_{n-1} with 0 <= e_j < p.  A central
extension by Z/p is described by one tail per relation; we collect with
symbolic tails, so every product returns its normal form together with the
tail coefficients picked up on the way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..linalg import Echelon
from .brute import CohomologySpace, space_from_basis
from .tables import GroupTable


class InconsistentPresentation(ValueError):
    """Two bracketings of a test word collect to different normal forms."""


@dataclass
class PcPresentation:
    p: int
    n: int
    power: list[tuple[int, ...]]
    conj: dict[tuple[int, int], tuple[int, ...]]
    labels: Optional[list] = None
    meta: dict = field(default_factory=dict)

    # -- tails ---------------------------------------------------------------

    @property
    def n_tails(self) -> int:
        return self.n + self.n * (self.n - 1) // 2

    def power_tail(self, i: int) -> int:
        return i

    def conj_tail(self, i: int, k: int) -> int:
        # pairs (i, k), i < k, listed row by row
        return self.n + i * self.n - i * (i + 1) // 2 + (k - i - 1)

    def tail_names(self) -> list[str]:
        names = [f"pow{i}" for i in range(self.n)]
        names += [f"conj{i},{k}" for i in range(self.n) for k in range(i + 1, self.n)]
        return names

    # -- collection ----------------------------------------------------------

    def _mul_gen(self, e: list[int], t: np.ndarray, i: int) -> None:
        p = self.p
        suffix = [(k, e[k]) for k in range(i + 1, self.n) if e[k]]
        for k, _ in suffix:
            e[k] = 0
        e[i] += 1
        if e[i] == p:
            e[i] = 0
            t[self.power_tail(i)] += 1
            self._mul_word(e, t, self.power[i])
        for k, m in suffix:
            w = self.conj[(i, k)]
            c = self.conj_tail(i, k)
            for _ in range(m):
                t[c] += 1
                self._mul_word(e, t, w)

    def _mul_word(self, e: list[int], t: np.ndarray, w: Sequence[int]) -> None:
        for j, m in enumerate(w):
            for _ in range(m):
                self._mul_gen(e, t, j)

    def collect(self, *words: Sequence[int]) -> tuple[tuple[int, ...], np.ndarray]:
        """Normal form and tail vector of the product of normal-form words."""
        e = [0] * self.n
        t = np.zeros(self.n_tails, dtype=np.int64)
        for w in words:
            self._mul_word(e, t, w)
        return tuple(e), t % self.p

    def unit(self, i: int, m: int = 1) -> tuple[int, ...]:
        w = [0] * self.n
        w[i] = m
        return tuple(w)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.collect(a, b)[0]

    def normal_forms(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in w) for w in np.ndindex(*([self.p] * self.n))]

    # -- consistency ---------------------------------------------------------

    def _product_then(self, first: Sequence[tuple[int, ...]], inner: Sequence[tuple[int, ...]]):
        """first-words collected, then multiplied by the collected product of inner."""
        e_in, t_in = self.collect(*inner)
        e, t = self.collect(*first, e_in)
        return e, (t + t_in) % self.p

    def consistency_words(self):
        """(name, left bracketing, right bracketing) for the standard test words."""
        n, p = self.n, self.p
        u = self.unit
        out = []
        for k in range(n):
            for j in range(k):
                for i in range(j):
                    out.append((f"(g{k} g{j}) g{i}", ([u(k), u(j), u(i)],), ([u(k)], [u(j), u(i)])))
        for j in range(n):
            for i in range(j):
                out.append((f"g{j}^p g{i}", ([u(j)] * p + [u(i)],), ([u(j)] * (p - 1), [u(j), u(i)])))
                out.append((f"g{j} g{i}^p", ([u(j)] + [u(i)] * p,), ([u(j)], [u(i)] * p)))
        for i in range(n):
            out.append((f"g{i}^(p+1)", ([u(i)] * (p + 1),), ([u(i)], [u(i)] * p)))
        return out

    def consistency_equations(self) -> np.ndarray:
        rows = []
        for name, left, right in self.consistency_words():
            e1, t1 = self.collect(*left[0])
            e2, t2 = self._product_then(*right)
            if e1 != e2:
                raise InconsistentPresentation(f"test word {name}: {e1} != {e2}")
            rows.append((t1 - t2) % self.p)
        return np.array(rows, dtype=np.int64).reshape(-1, self.n_tails)

    def check_consistent(self) -> bool:
        self.consistency_equations()
        return True

    def coboundary_tails(self) -> np.ndarray:
        """Row m: change of tails when g_m is replaced by g_m z."""
        p, n = self.p, self.n
        out = np.zeros((n, self.n_tails), dtype=np.int64)
        for m in range(n):
            for i in range(n):
                out[m, self.power_tail(i)] -= self.power[i][m]
                for k in range(i + 1, n):
                    c = self.conj_tail(i, k)
                    out[m, c] += int(m == k) - self.conj[(i, k)][m]
        return out % p


@dataclass
class PcCohomology:
    presentation: PcPresentation
    dim: int
    z_dim: int
    b_rank: int
    basis: np.ndarray  # tail vectors of a basis of H^2 modulo coboundary tails
    consistent_tails: np.ndarray


def h2_pc(pres: PcPresentation) -> PcCohomology:
    p, R = pres.p, pres.n_tails
    eqs = pres.consistency_equations()
    ech = Echelon(R, p)
    if eqs.size:
        ech.add(eqs)
    z = ech.nullspace()
    b = Echelon(R, p)
    b.add(pres.coboundary_tails())
    work = b.copy()
    keep = []
    for row in z:
        if work.add(row[None, :]):
            keep.append(row)
    basis = np.array(keep, dtype=np.int64).reshape(-1, R)
    return PcCohomology(pres, basis.shape[0], int(z.shape[0]), b.rank, basis, z)


# ---------------------------------------------------------------------------
# Presentations from tables and from the chief series
# ---------------------------------------------------------------------------


@dataclass
class TablePc:
    """A pc presentation of a GroupTable together with the maps between
    normal forms and table elements."""

    presentation: PcPresentation
    group: GroupTable
    gens: list[int]
    nf: list[tuple[int, ...]]  # element -> normal form
    element_of: dict[tuple[int, ...], int]


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0 and n > 1:
        n //= p
    return n == 1


def exponent_p_central_series(group: GroupTable, p: int) -> list[np.ndarray]:
    """G = P_1 > P_2 > ... > 1 with P_{i+1} = [P_i, G] P_i^p."""
    terms = [np.arange(group.order)]
    ggens = group.generators()
    while terms[-1].size > 1:
        cur = terms[-1]
        comm = group.commutator(cur[:, None], np.array(ggens)[None, :]).ravel()
        pw = cur.copy()
        for _ in range(p - 1):
            pw = group.mul[pw, cur]
        nxt = group.closure(np.unique(np.concatenate([comm, pw])))
        if nxt.size == cur.size:
            raise ValueError("group is not a p-group")
        terms.append(nxt)
    return terms


def pc_from_table(group: GroupTable, p: int) -> TablePc:
    if not _is_prime_power(group.order, p):
        raise ValueError(f"|G| = {group.order} is not a power of {p}")
    series = exponent_p_central_series(group, p)
    gens: list[int] = []
    for upper, lower in zip(series, series[1:]):
        layer: list[int] = []
        inside = np.zeros(group.order, dtype=bool)
        inside[lower] = True
        for a in upper:
            if not inside[a]:
                layer.append(int(a))
                inside[:] = False
                inside[group.closure(list(lower) + layer)] = True
        gens += layer
    n = len(gens)
    # chain masks G_j = <g_j, ..., g_{n-1}>
    masks = np.zeros((n + 1, group.order), dtype=bool)
    masks[n, 0] = True
    for j in range(n - 1, -1, -1):
        masks[j, group.closure(gens[j:])] = True
    for j in range(n):
        if masks[j].sum() != p * masks[j + 1].sum():
            raise ValueError("generator chain does not have index-p steps")
    powers = []
    for g in gens:
        row = [0]
        for _ in range(p - 1):
            row.append(int(group.mul[row[-1], g]))
        powers.append(row)
    inv_pow = [[int(group.inv[x]) for x in row] for row in powers]

    def sift(x: int) -> tuple[int, ...]:
        e = []
        for j in range(n):
            for k in range(p):
                y = int(group.mul[inv_pow[j][k], x])
                if masks[j + 1, y]:
                    e.append(k)
                    x = y
                    break
            else:  # pragma: no cover - the masks guarantee a hit
                raise ArithmeticError("sifting failed")
        return tuple(e)

    nf = [sift(x) for x in range(group.order)]
    element_of = {w: x for x, w in enumerate(nf)}
    power = [sift(group.power(g, p)) for g in gens]
    conj = {}
    for i in range(n):
        gi, gi_inv = gens[i], int(group.inv[gens[i]])
        for k in range(i + 1, n):
            conj[(i, k)] = sift(int(group.mul[group.mul[gi_inv, gens[k]], gi]))
    pres = PcPresentation(p, n, power, conj, labels=[group.labels[g] if group.labels else g for g in gens])
    return TablePc(pres, group, gens, nf, element_of)


def pc_cohomology_space(tpc: TablePc, result: Optional[PcCohomology] = None, gens: Optional[Sequence[int]] = None) -> CohomologySpace:
    """Turn tail classes into table cocycles and wrap them as a CohomologySpace
    over the table (the same container the brute engine returns)."""
    pres = tpc.presentation
    if result is None:
        result = h2_pc(pres)
    group = tpc.group
    gens = list(gens) if gens is not None else minimal_generators(group, pres.p)
    n = group.order
    forms = np.zeros((len(gens) * n, pres.n_tails), dtype=np.int64)
    for k, x in enumerate(gens):
        wx = tpc.nf[x]
        for z in range(n):
            _, t = pres.collect(wx, tpc.nf[z])
            forms[k * n + z] = t
    u = (result.basis @ forms.T) % pres.p if result.dim else np.zeros((0, len(gens) * n), dtype=np.int64)
    space = space_from_basis(group, pres.p, gens, u)
    space.extra["tail_forms"] = forms
    space.extra["pc"] = result
    if space.dim != result.dim:
        raise ArithmeticError("tail classes did not map injectively to table classes")
    return space


def minimal_generators(group: GroupTable, p: int) -> list[int]:
    """For a p-group: lifts of a basis of G / Phi(G), chosen greedily."""
    if group.order == 1:
        return []
    if not _is_prime_power(group.order, p):
        return group.generators()
    frattini = exponent_p_central_series(group, p)[1]
    gens: list[int] = []
    inside = np.zeros(group.order, dtype=bool)
    inside[frattini] = True
    for a in range(group.order):
        if not inside[a]:
            gens.append(a)
            inside[:] = False
            inside[group.closure(list(frattini) + gens)] = True
    return gens


# ---------------------------------------------------------------------------
# Presentation read off the modified chief series of P_lambda
# ---------------------------------------------------------------------------


def pc_from_chief_series(partition, prime: int):
    """Generators E_{Pos(s)}(p^l) for s in descending modified order; relation
    words found by sifting actual matrix products through the coordinate
    description of the series."""
    from ..structures import AutMatrix, build_index_set, encode_coords, inv, mul

    index = build_index_set(partition, prime)
    p = prime
    order = list(reversed(index.mto_order))
    n = len(order)
    gens = []
    for s in order:
        x, y = s.pos(partition)
        gens.append(AutMatrix.elementary(partition, p, x, y, p**s.l))
    # N_j = {a_t = 0 for t above order[j] in MTO}; sifting step j kills coordinate order[j]
    gpow = []
    for g in gens:
        row = [AutMatrix.identity(partition, p)]
        for _ in range(p - 1):
            row.append(mul(row[-1], g))
        gpow.append([inv(x) for x in row])

    def sift(m: AutMatrix) -> tuple[int, ...]:
        e = []
        for j, s in enumerate(order):
            for k in range(p):
                y = mul(gpow[j][k], m)
                if encode_coords(y, index)[s] == 0:
                    e.append(k)
                    m = y
                    break
            else:  # pragma: no cover
                raise ArithmeticError("sifting failed")
        if m != AutMatrix.identity(partition, p):  # pragma: no cover
            raise ArithmeticError("sifting left a remainder")
        return tuple(e)

    power = []
    for g in gens:
        gp = AutMatrix.identity(partition, p)
        for _ in range(p):
            gp = mul(gp, g)
        power.append(sift(gp))
    conj = {}
    for i in range(n):
        gi_inv = inv(gens[i])
        for k in range(i + 1, n):
            conj[(i, k)] = sift(mul(mul(gi_inv, gens[k]), gens[i]))
    pres = PcPresentation(p, n, power, conj, labels=order)
    pres.meta["matrices"] = gens
    pres.meta["index"] = index
    pres.meta["sift"] = sift
    return pres


def pc_element(pres: PcPresentation, word: Sequence[int]):
    """Matrix of a normal form of a chief-series presentation."""
    from ..structures import AutMatrix, mul

    gens = pres.meta["matrices"]
    out = AutMatrix.identity(gens[0].partition, gens[0].prime)
    for g, e in zip(gens, word):
        for _ in range(e):
            out = mul(out, g)
    return out
