"""Vanishing predictions from the shape of a partition, explicit witnesses of
nonvanishing, and annihilator checks for the natural action."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .cohomology.brute import is_coboundary
from .cohomology.natural import ModuleCohomology, scalar_power
from .cohomology.tables import GroupTable, aut_table, cyclic
from .structures import AutMatrix, Partition, aut_order, det_mod, mul, random_aut

VERDICTS = ("vanishes", "nonvanishes", "unknown")


# ---------------------------------------------------------------------------
# Predictions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    partition: str
    prime: int
    degree: int
    action: str
    verdict: str
    citation: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def default_q(p: int) -> int:
    """Scalar q with q - 1 a unit-friendly annihilator: 2 for odd p, 3 for p = 2."""
    return 3 if p == 2 else 2


def predict(partition: Partition, p: int, degree: int, action: str = "trivial") -> Prediction:
    """Verdict on H^degree(G_lambda, A_lambda) read off the partition."""
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if action not in ("trivial", "natural"):
        raise ValueError("action must be trivial or natural")
    text = partition.text()
    if action == "natural":
        if p % 2:
            verdict, why = "vanishes", f"natural action: (q-1)^{degree} kills H^{degree} with q = 2, a unit"
        else:
            verdict, why = "unknown", "natural action at p = 2: only (q-1)^degree with q = 3 is known to kill it"
        return Prediction(text, p, degree, action, verdict, why)
    gap = partition.first_gap()
    if gap is not None:
        why = (
            f"trivial action: lambda_{gap} - lambda_{gap + 1} >= 2 gives a surjection onto Z/p"
            if degree == 1
            else f"trivial action: lambda_{gap} - lambda_{gap + 1} >= 2 gives a nonsplit central extension"
        )
        return Prediction(text, p, degree, action, "nonvanishes", why)
    if p == 2:
        return Prediction(text, p, degree, action, "unknown", "trivial action at p = 2 without a gap: no criterion")
    if degree == 1:
        return Prediction(text, p, degree, action, "vanishes", "trivial action, odd p, all successive gaps <= 1")
    if p == 3:
        return Prediction(
            text, p, degree, action, "unknown", "trivial action, p = 3, gaps <= 1: open; invariant dims reported as data"
        )
    return Prediction(text, p, degree, action, "vanishes", "trivial action, odd p != 3, all successive gaps <= 1")


# ---------------------------------------------------------------------------
# Nonvanishing witnesses
# ---------------------------------------------------------------------------


class NoGap(ValueError):
    pass


@dataclass
class Witness:
    kind: str  # "hom-to-Z/p" | "nontrivial-2-cocycle"
    partition: Partition
    prime: int
    block: int  # 1-based index i of the gap used
    top_size: int  # rows of the top-left corner kept mod p^2
    certificate: dict = field(default_factory=dict)

    def top_det(self, g: AutMatrix) -> int:
        """det of the top-left top_size x top_size corner mod p^2."""
        q = self.prime**2
        corner = [row[: self.top_size] for row in g.entries[: self.top_size]]
        return det_mod(corner, q)

    def value(self, g: AutMatrix) -> int:
        """For a hom witness: the image in Z/p.  For a cocycle witness: the
        discrete log of the corner determinant in Z/p(p-1)."""
        u = self.top_det(g)
        if self.kind == "hom-to-Z/p":
            return unit_to_zp(u, self.prime)
        return discrete_log(u, self.prime)

    def cocycle(self, g: AutMatrix, h: AutMatrix) -> int:
        if self.kind != "nontrivial-2-cocycle":
            raise TypeError("not a cocycle witness")
        return carry(self.value(g), self.value(h), self.prime)


def unit_to_zp(u: int, p: int) -> int:
    """(Z/p^2)^* -> Z/p, u -> (u^(p-1) - 1) / p mod p."""
    q = p * p
    u %= q
    if u % p == 0:
        raise ValueError("not a unit")
    return ((pow(u, p - 1, q) - 1) // p) % p


def primitive_root_p2(p: int) -> int:
    q = p * p
    n = p * (p - 1)
    for r in range(2, q):
        if r % p and all(pow(r, n // f, q) != 1 for f in _prime_divisors(n)):
            return r
    raise ArithmeticError(f"no primitive root mod {q}")


def _prime_divisors(n: int) -> list[int]:
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


def discrete_log(u: int, p: int) -> int:
    """log of u in (Z/p^2)^* ~ Z/p(p-1) to the least primitive root."""
    q = p * p
    r = primitive_root_p2(p)
    x = 1
    for k in range(p * (p - 1)):
        if x == u % q:
            return k
        x = x * r % q
    raise ValueError(f"{u} is not a unit mod {q}")


def carry(a: int, b: int, p: int) -> int:
    """The class of 0 -> Z/p -> Z/p^2(p-1) -> Z/p(p-1) -> 0."""
    n = p * (p - 1)
    return ((a % n) + (b % n)) // n % p


def _witness_frame(partition: Partition) -> tuple[int, int]:
    i = partition.first_gap()
    if i is None:
        raise NoGap(f"{partition} has no successive difference >= 2")
    return i, sum(partition.mults[:i])


def h1_nonvanishing_witness(partition: Partition, p: int, samples: int = 2000, seed: int = 0) -> Witness:
    """A surjection G_lambda -> Z/p: keep the top-left corner through the gap
    mod p^2, take its determinant, and send the unit to Z/p."""
    i, size = _witness_frame(partition)
    w = Witness("hom-to-Z/p", partition, p, i, size)
    diag = [1] * partition.rho
    diag[0] = 1 + p
    gen = AutMatrix.diagonal(partition, p, diag)
    w.certificate["surjective_on"] = gen.entries
    w.certificate["image"] = w.value(gen)
    if w.certificate["image"] == 0:
        raise ArithmeticError("diagonal element does not reach a generator of Z/p")
    w.certificate["hom_checked_pairs"] = check_witness_hom(w, samples, seed)
    return w


def check_witness_hom(w: Witness, samples: int, seed: int) -> int:
    """value(gh) = value(g) + value(h) on random pairs; returns the count."""
    rng = random.Random(seed)
    mod = w.prime if w.kind == "hom-to-Z/p" else w.prime * (w.prime - 1)
    for _ in range(samples):
        g = random_aut(w.partition, w.prime, rng)
        h = random_aut(w.partition, w.prime, rng)
        if w.value(mul(g, h)) != (w.value(g) + w.value(h)) % mod:
            raise ArithmeticError("witness map is not a homomorphism")
    return samples


def diagonal_cyclic_subgroup(partition: Partition, p: int, i: int) -> list[AutMatrix]:
    """Powers of Diag(u, 1, ..., 1) with u generating the units mod p^{lambda_i}
    placed in the first row of block i."""
    lam = partition.parts[i - 1]
    q = p**lam
    n = (p - 1) * p ** (lam - 1)
    if p == 2:
        u = 3 if lam >= 2 else 1
    else:
        u = next(
            r for r in range(2, q) if r % p and all(pow(r, n // f, q) != 1 for f in _prime_divisors(n))
        )
    row = partition.block_offsets()[i - 1]
    diag = [1] * partition.rho
    diag[row] = u
    d = AutMatrix.diagonal(partition, p, diag)
    out = [AutMatrix.identity(partition, p)]
    while True:
        nxt = mul(out[-1], d)
        if nxt.entries == out[0].entries:
            return out
        out.append(nxt)


def h2_nonvanishing_witness(partition: Partition, p: int, group_cap: int = 5000, samples: int = 2000, seed: int = 0) -> Witness:
    """The pullback c(g, h) = carry(L(g), L(h)) of the cyclic extension
    cocycle along L = log o det o (top-left corner mod p^2).

    The certificate first restricts c to the diagonal cyclic subgroup D.  If
    that restriction splits (it does when p^2 divides |D|, since then the
    p-part of D reaches Z/p only through a p-th power) the certificate falls
    back to an exact solve on the whole group when it fits under group_cap.
    """
    i, size = _witness_frame(partition)
    w = Witness("nontrivial-2-cocycle", partition, p, i, size)
    check_witness_hom(w, samples, seed)
    d_elems = diagonal_cyclic_subgroup(partition, p, i)
    logs = np.array([w.value(g) for g in d_elems], dtype=np.int64)
    table = np.array([[carry(a, b, p) for b in logs] for a in logs], dtype=np.int64)
    dgroup = cyclic(len(d_elems), name=f"D{len(d_elems)}")
    d_nontrivial = is_coboundary(dgroup, p, table) is None
    w.certificate["subgroup_order"] = len(d_elems)
    w.certificate["subgroup_restriction_nontrivial"] = d_nontrivial
    w.certificate["certified_on"] = "diagonal-cyclic" if d_nontrivial else None
    if not d_nontrivial:
        if aut_order(partition, p) <= group_cap:
            G = aut_table(partition, p, cap=group_cap)
            logs_g = np.array([w.value(g) for g in G.elements], dtype=np.int64)
            n = p * (p - 1)
            full = ((logs_g[:, None] + logs_g[None, :]) // n) % p
            if is_coboundary(G, p, full) is None:
                w.certificate["certified_on"] = "whole-group"
                w.certificate["group_order"] = G.order
    return w


def witness_certified(w: Witness) -> bool:
    return w.certificate.get("certified_on") is not None


# ---------------------------------------------------------------------------
# Annihilators for the natural action
# ---------------------------------------------------------------------------


def annihilator_check(h: ModuleCohomology, q: Optional[int] = None) -> bool:
    """True iff (q - 1)^degree kills every generator of H."""
    q = default_q(h.p) if q is None else q
    if q % h.p == 0:
        raise ValueError(f"q = {q} is not a unit mod {h.p}")
    factor = (q - 1) ** h.degree
    reduced = scalar_power(h, factor)
    return not reduced.any()


def h1_trivial_vanishes(group: GroupTable, p: int) -> bool:
    """H^1(G, Z/p) = 0 iff the abelianization has p-rank 0."""
    from .series import abelianization

    return abelianization(group)["p_ranks"].get(p, 0) == 0
