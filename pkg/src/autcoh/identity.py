"""Matrices over the dual numbers Z[X]/(X^2), the determinant and trace
identities they satisfy, and the pointwise digit identity on a Sylow
subgroup that turns the product cocycle u_t into a coboundary.

All arithmetic is exact (Python integers); an optional modulus gives a fast
modular mode.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .structures import Coordinate, Partition, build_index_set, encode_coords, random_sylow, mul


# ---------------------------------------------------------------------------
# Dual numbers and matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dual:
    """u + X v with X^2 = 0."""

    u: int
    v: int = 0

    def __add__(self, o: "Dual") -> "Dual":
        return Dual(self.u + o.u, self.v + o.v)

    def __sub__(self, o: "Dual") -> "Dual":
        return Dual(self.u - o.u, self.v - o.v)

    def __neg__(self) -> "Dual":
        return Dual(-self.u, -self.v)

    def __mul__(self, o: "Dual") -> "Dual":
        return Dual(self.u * o.u, self.u * o.v + self.v * o.u)

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0


ZERO = Dual(0, 0)
ONE = Dual(1, 0)


class DualMatrix:
    """n x n matrix of dual numbers, stored as two exact integer matrices
    (the X^0 and X^1 parts)."""

    def __init__(self, real: Sequence[Sequence[int]], eps: Sequence[Sequence[int]], modulus: Optional[int] = None):
        self.real = np.array(real, dtype=object)
        self.eps = np.array(eps, dtype=object)
        if self.real.shape != self.eps.shape or self.real.ndim != 2 or self.real.shape[0] != self.real.shape[1]:
            raise ValueError("parts must be square matrices of the same size")
        self.modulus = modulus
        if modulus:
            self.real %= modulus
            self.eps %= modulus

    @property
    def n(self) -> int:
        return self.real.shape[0]

    @classmethod
    def identity(cls, n: int, modulus: Optional[int] = None) -> "DualMatrix":
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(eye, [[0] * n for _ in range(n)], modulus)

    def entry(self, i: int, j: int) -> Dual:
        return Dual(int(self.real[i, j]), int(self.eps[i, j]))

    def __add__(self, o: "DualMatrix") -> "DualMatrix":
        return DualMatrix(self.real + o.real, self.eps + o.eps, self.modulus)

    def __sub__(self, o: "DualMatrix") -> "DualMatrix":
        return DualMatrix(self.real - o.real, self.eps - o.eps, self.modulus)

    def __matmul__(self, o: "DualMatrix") -> "DualMatrix":
        return DualMatrix(self.real.dot(o.real), self.real.dot(o.eps) + self.eps.dot(o.real), self.modulus)

    def __eq__(self, o: object) -> bool:
        return isinstance(o, DualMatrix) and np.array_equal(self.real, o.real) and np.array_equal(self.eps, o.eps)

    def trace(self) -> Dual:
        return Dual(int(sum(self.real.diagonal())), int(sum(self.eps.diagonal())))

    def power(self, k: int) -> "DualMatrix":
        out = DualMatrix.identity(self.n, self.modulus)
        for _ in range(k):
            out = out @ self
        return out

    def det(self) -> Dual:
        """Leibniz expansion over permutations."""
        total = ZERO
        for perm in itertools.permutations(range(self.n)):
            term = Dual(_sign(perm))
            for i, j in enumerate(perm):
                term = term * self.entry(i, j)
                if term.is_zero():
                    break
            total = total + term
        return total

    def det_cofactor(self) -> Dual:
        """Laplace expansion along the first row (independent of Leibniz)."""
        return _cofactor([[self.entry(i, j) for j in range(self.n)] for i in range(self.n)])


def _sign(perm: Sequence[int]) -> int:
    s, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def _cofactor(m: list[list[Dual]]) -> Dual:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------------------
# The matrices A, B, C
# ---------------------------------------------------------------------------


def nilpotent_matrix(values: Sequence[Sequence[int]], modulus: Optional[int] = None) -> DualMatrix:
    """Lower entries a_ij (i > j), upper entries X a_ij (i < j), zero diagonal."""
    n = len(values)
    real = [[values[i][j] if i > j else 0 for j in range(n)] for i in range(n)]
    eps = [[values[i][j] if i < j else 0 for j in range(n)] for i in range(n)]
    return DualMatrix(real, eps, modulus)


def product_values(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    """The c_ij: lower part of L_A + L_B + L_A L_B and upper part of
    L_A U_B + U_A L_B + U_A + U_B (the X coefficient)."""
    n = len(a)
    la = np.array([[a[i][j] if i > j else 0 for j in range(n)] for i in range(n)], dtype=object)
    ua = np.array([[a[i][j] if i < j else 0 for j in range(n)] for i in range(n)], dtype=object)
    lb = np.array([[b[i][j] if i > j else 0 for j in range(n)] for i in range(n)], dtype=object)
    ub = np.array([[b[i][j] if i < j else 0 for j in range(n)] for i in range(n)], dtype=object)
    lower = la + lb + la.dot(lb)
    upper = la.dot(ub) + ua.dot(lb) + ua + ub
    return [[int(lower[i, j]) if i > j else (int(upper[i, j]) if i < j else 0) for j in range(n)] for i in range(n)]


def _log_series(m: DualMatrix) -> Dual:
    """1 + sum_{i=2}^n (-1)^(i-1) Tr(M^i) / i, exact (Tr(M^i) is divisible by i)."""
    total_u, total_v = Fraction(1), Fraction(0)
    pw = m.power(1)
    for i in range(2, m.n + 1):
        pw = pw @ m
        tr = pw.trace()
        sign = -1 if i % 2 == 0 else 1
        total_u += Fraction(sign * tr.u, i)
        total_v += Fraction(sign * tr.v, i)
    if total_u.denominator != 1 or total_v.denominator != 1:
        raise ArithmeticError("trace of a power not divisible by its exponent")
    return Dual(int(total_u), int(total_v))


def cycle_sum(values: Sequence[Sequence[int]]) -> int:
    """sum over i >= 2 and n >= j1 > ... > ji >= 1 of
    (-1)^(i-1) v_{j1 j2} v_{j2 j3} ... v_{ji j1}."""
    n = len(values)
    total = 0
    for i in range(2, n + 1):
        for js in itertools.combinations(range(n - 1, -1, -1), i):
            term = 1
            for t in range(i):
                term *= values[js[t]][js[(t + 1) % i]]
            total += (-1) ** (i - 1) * term
    return total


@dataclass
class IdentityReport:
    n: int
    residuals: dict  # name -> Dual residual

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())


def random_values(n: int, rng: random.Random, bits: int = 64) -> list[list[int]]:
    lim = 2 ** (bits - 1)
    return [[0 if i == j else rng.randrange(-lim, lim) for j in range(n)] for i in range(n)]


def prop_identity_residuals(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], modulus: Optional[int] = None) -> IdentityReport:
    n = len(a)
    if modulus:
        # the log series divides by i, so evaluate over Z on the residues and reduce at the end
        a = [[x % modulus for x in row] for row in a]
        b = [[x % modulus for x in row] for row in b]
    c = product_values(a, b)
    A, B, C = (nilpotent_matrix(v) for v in (a, b, c))
    eye = DualMatrix.identity(n)
    dets = {name: (eye + M).det() for name, M in (("A", A), ("B", B), ("C", C))}
    logs = {name: _log_series(M) for name, M in (("A", A), ("B", B), ("C", C))}
    tr_ab = (A @ B).trace()
    res = {}
    for name in "ABC":
        res[f"(1)[{name}]"] = logs[name] - dets[name]
    res["(2)"] = dets["A"] + dets["B"] - ONE - dets["A"] * dets["B"]
    res["(3)"] = dets["A"] * dets["B"] - dets["C"] - tr_ab
    res["(4)"] = tr_ab + (logs["C"] - ONE) - (logs["A"] - ONE) - (logs["B"] - ONE)
    if modulus:
        res = {k: Dual(r.u % modulus, r.v % modulus) for k, r in res.items()}
    return IdentityReport(n, res)


def verify_prop_identity(n: int, seed: int = 0, trials: int = 1, bits: int = 64, modulus: Optional[int] = None) -> IdentityReport:
    """Residuals of the four dual-number identities on random integer
    assignments; the report keeps the first nonzero residual if any."""
    if not 2 <= n <= 6:
        raise ValueError("n must lie in [2, 6]")
    rng = random.Random(seed)
    report = None
    for _ in range(trials):
        report = prop_identity_residuals(random_values(n, rng, bits), random_values(n, rng, bits), modulus)
        if not report.ok:
            return report
    return report


def trace_identity_value(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> int:
    """sum_{i<j} (a_ij b_ji + a_ji b_ij) + cycle_sum(c) - cycle_sum(a) - cycle_sum(b)."""
    n = len(a)
    if any(len(row) != n for row in a) or any(len(row) != n for row in b) or len(b) != n:
        raise ValueError("assignment must be two n x n arrays")
    c = product_values(a, b)
    cross = sum(a[i][j] * b[j][i] + a[j][i] * b[i][j] for i in range(n) for j in range(i + 1, n))
    return cross + cycle_sum(c) - cycle_sum(a) - cycle_sum(b)


def verify_trace_identity(n: int, assignment: tuple[Sequence[Sequence[int]], Sequence[Sequence[int]]]) -> bool:
    a, b = assignment
    if len(a) != n:
        raise ValueError("assignment size does not match n")
    return trace_identity_value(a, b) == 0


# ---------------------------------------------------------------------------
# The digit identity on a Sylow subgroup
# ---------------------------------------------------------------------------


def _coord_at(index, part: Partition, level: int, pos: tuple[int, int]) -> Optional[Coordinate]:
    for s in index.to_order:
        if s.l == level and s.pos(part) == pos:
            return s
    return None


@dataclass
class CobSets:
    x: int
    t0: Coordinate
    phi_t0: Coordinate
    diagonal: list[Coordinate]  # S^x_2
    upper: list[Coordinate]  # S~^x_1
    phi: dict  # s -> phi(s) for s in upper


def cob_sets(partition: Partition, p: int, t0: Coordinate) -> CobSets:
    """The coordinate sets of the digit identity for t0 with Pos(t0) = (x, x+1)."""
    index = build_index_set(partition, p)
    x, y = t0.pos(partition)
    if y != x + 1:
        raise ValueError("t0 must sit just above the diagonal")
    diag = [s for s in index.to_order if s.l == 1 and s.chi(partition) == 0 and s.pos(partition)[0] <= x]
    upper = [s for s in index.to_order if s.l == 1 and s.chi(partition) < 0 and s.pos(partition)[1] <= x]
    phi = {}
    for s in upper:
        i, j = s.pos(partition)
        phi[s] = _coord_at(index, partition, 0, (j, i))
    phi_t0 = _coord_at(index, partition, 0, (x + 1, x))
    return CobSets(x, t0, phi_t0, diag, upper, phi)


def t1_set(partition: Partition, p: int) -> list[Coordinate]:
    """Coordinates (1, 1, 1, m, m+1) between neighbouring one-row blocks."""
    index = build_index_set(partition, p)
    out = []
    for m in range(1, partition.k):
        if partition.mults[m - 1] == 1 and partition.mults[m] == 1:
            s = Coordinate(1, 1, 1, m, m + 1)
            if s in index.to_order:
                out.append(s)
    return out


def cob_residual(sets: CobSets, a: dict, b: dict, c: dict, p: int) -> int:
    """sum_{S^x_2} v_s - sum_{S~^x_1} (a_s b_phi(s) + a_phi(s) b_s) - a_t0 b_phi(t0) mod p."""
    get = lambda d, s: 0 if s is None else d.get(s, 0)
    lhs = sum(c[s] - a[s] - b[s] for s in sets.diagonal)
    rhs = sum(get(a, s) * get(b, sets.phi[s]) + get(a, sets.phi[s]) * get(b, s) for s in sets.upper)
    rhs += get(a, sets.t0) * get(b, sets.phi_t0)
    return (lhs - rhs) % p


def verify_inflation_cob(
    partition: Partition, p: int, t0: Optional[Coordinate] = None, samples: Optional[int] = None, seed: int = 0
) -> dict:
    """Check the digit identity on all pairs (when samples is None) or on
    random pairs of Sylow elements.  Returns a summary; vacuous when T1 is
    empty."""
    t1 = t1_set(partition, p)
    if t0 is None:
        if not t1:
            return {"vacuous": True, "pairs": 0, "failures": 0, "t1": []}
        t0 = t1[0]
    sets = cob_sets(partition, p, t0)
    index = build_index_set(partition, p)
    if samples is None:
        from .structures import enumerate_group

        elems = enumerate_group("P", partition, p)
        codes = [encode_coords(g, index) for g in elems]
        pairs = ((i, j) for i in range(len(elems)) for j in range(len(elems)))
        failures = total = 0
        for i, j in pairs:
            c = encode_coords(mul(elems[i], elems[j]), index)
            total += 1
            failures += cob_residual(sets, codes[i], codes[j], c, p) != 0
    else:
        rng = random.Random(seed)
        failures = total = 0
        for _ in range(samples):
            g, h = random_sylow(partition, p, rng), random_sylow(partition, p, rng)
            res = cob_residual(sets, encode_coords(g, index), encode_coords(h, index), encode_coords(mul(g, h), index), p)
            total += 1
            failures += res != 0
    return {"vacuous": False, "pairs": total, "failures": failures, "t1": t1, "t0": t0, "sets": sets}
