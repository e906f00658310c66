"""Partitions, the abelian p-group A_lambda, its automorphism group as block
matrices, the unipotent Sylow subgroup, the diagonal torsion subgroup, and the
coordinate bookkeeping for Sylow elements.

Matrix indices are 1-based in the public coordinate API (matching the usual
block-matrix conventions) and 0-based inside :class:`AutMatrix`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .linalg import padic_digits

DEFAULT_CAP = 10**5


class MalformedMatrix(ValueError):
    """A block violates the divisibility rule for its position."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured element cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} has {size} elements, above the cap of {cap}")
        self.size = size
        self.cap = cap


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Strictly decreasing parts with multiplicities."""

    parts: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts or len(self.parts) != len(self.mults):
            raise ValueError("partition needs matching non-empty parts and multiplicities")
        if any(b >= a for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must strictly decrease: {self.parts}")
        if min(self.parts) < 1 or min(self.mults) < 1:
            raise ValueError("parts and multiplicities must be positive")

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> "Partition":
        """Accept "2,1,1" style text (or a sequence) of non-increasing parts."""
        if isinstance(text, str):
            items = [s.strip() for s in text.split(",") if s.strip()]
            try:
                values = [int(s) for s in items]
            except ValueError as exc:
                raise ValueError(f"bad partition text {text!r}") from exc
        else:
            values = [int(v) for v in text]
        if not values:
            raise ValueError("empty partition")
        if any(b > a for a, b in zip(values, values[1:])):
            raise ValueError(f"parts must be non-increasing: {values}")
        parts, mults = [], []
        for v, grp in itertools.groupby(values):
            parts.append(v)
            mults.append(len(list(grp)))
        return cls(tuple(parts), tuple(mults))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def rho(self) -> int:
        return sum(self.mults)

    def expanded(self) -> tuple[int, ...]:
        return tuple(v for v, r in zip(self.parts, self.mults) for _ in range(r))

    def text(self) -> str:
        return ",".join(str(v) for v in self.expanded())

    def block_of_row(self) -> tuple[int, ...]:
        """0-based block index of each 0-based matrix row."""
        return tuple(m for m, r in enumerate(self.mults) for _ in range(r))

    def block_offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for r in self.mults:
            out.append(acc)
            acc += r
        return tuple(out)

    def gaps(self) -> tuple[int, ...]:
        """Successive differences lambda_i - lambda_{i+1}, with lambda_{k+1} = 0."""
        ext = self.parts + (0,)
        return tuple(a - b for a, b in zip(ext, ext[1:]))

    def has_gap(self) -> bool:
        """True when some difference (counting the last part against 0) is >= 2."""
        return any(g >= 2 for g in self.gaps())

    def first_gap(self) -> Optional[int]:
        """1-based index i of the first part with lambda_i - lambda_{i+1} >= 2."""
        for i, g in enumerate(self.gaps(), start=1):
            if g >= 2:
                return i
        return None

    def is_staircase(self) -> bool:
        """Parts are k, k-1, ..., 1."""
        return self.parts == tuple(range(self.k, 0, -1))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.expanded()) + ")"


# ---------------------------------------------------------------------------
# A_lambda and block matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianElement:
    """Element of A_lambda stored as one residue per matrix row."""

    partition: Partition
    prime: int
    comps: tuple[int, ...]

    def __post_init__(self) -> None:
        mods = row_moduli(self.partition, self.prime)
        if len(self.comps) != len(mods):
            raise ValueError("component count does not match the partition")
        object.__setattr__(self, "comps", tuple(c % m for c, m in zip(self.comps, mods)))

    def __add__(self, other: "AbelianElement") -> "AbelianElement":
        return AbelianElement(
            self.partition, self.prime, tuple(a + b for a, b in zip(self.comps, other.comps))
        )


def row_moduli(partition: Partition, p: int) -> tuple[int, ...]:
    return tuple(p**v for v in partition.expanded())


def row_exponents(partition: Partition) -> tuple[int, ...]:
    return partition.expanded()


def min_valuation(partition: Partition, x: int, y: int) -> int:
    """Least p-adic valuation allowed at 0-based entry (x, y)."""
    lam = partition.expanded()
    return max(0, lam[x] - lam[y])


@dataclass(frozen=True)
class AutMatrix:
    """Endomorphism of A_lambda as a rho x rho integer matrix; row x is read
    modulo p^{lambda of that row}.  Entries above the diagonal blocks must be
    divisible by p^{lambda_m - lambda_n}."""

    partition: Partition
    prime: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        mods = row_moduli(self.partition, self.prime)
        rho = len(mods)
        if len(self.entries) != rho or any(len(r) != rho for r in self.entries):
            raise MalformedMatrix(f"expected a {rho}x{rho} matrix")
        ents = tuple(tuple(v % mods[x] for v in row) for x, row in enumerate(self.entries))
        p = self.prime
        for x in range(rho):
            for y in range(rho):
                need = min_valuation(self.partition, x, y)
                if need and ents[x][y] % p**need:
                    raise MalformedMatrix(
                        f"entry ({x + 1},{y + 1}) = {ents[x][y]} not divisible by {p}^{need}"
                    )
        object.__setattr__(self, "entries", ents)

    @classmethod
    def _trusted(cls, partition: Partition, prime: int, entries) -> "AutMatrix":
        obj = object.__new__(cls)
        object.__setattr__(obj, "partition", partition)
        object.__setattr__(obj, "prime", prime)
        object.__setattr__(obj, "entries", entries)
        return obj

    @classmethod
    def identity(cls, partition: Partition, p: int) -> "AutMatrix":
        rho = partition.rho
        return cls._trusted(
            partition, p, tuple(tuple(int(x == y) for y in range(rho)) for x in range(rho))
        )

    @classmethod
    def elementary(cls, partition: Partition, p: int, x: int, y: int, value: int) -> "AutMatrix":
        """E_(x,y)(value) = I + value e_(x,y), 1-based position.  On the
        diagonal this is the diagonal matrix with 1 + value at (x, x)."""
        rho = partition.rho
        ent = [[int(a == b) for b in range(rho)] for a in range(rho)]
        ent[x - 1][y - 1] += value
        return cls(partition, p, tuple(tuple(r) for r in ent))

    @classmethod
    def diagonal(cls, partition: Partition, p: int, diag: Sequence[int]) -> "AutMatrix":
        rho = partition.rho
        return cls(
            partition,
            p,
            tuple(tuple(diag[x] if x == y else 0 for y in range(rho)) for x in range(rho)),
        )

    @property
    def rho(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "AutMatrix") -> "AutMatrix":
        return mul(self, other)

    def block(self, m: int, n: int) -> tuple[tuple[int, ...], ...]:
        """0-based block (m, n)."""
        off = self.partition.block_offsets()
        rm, rn = self.partition.mults[m], self.partition.mults[n]
        return tuple(
            tuple(self.entries[off[m] + i][off[n] + j] for j in range(rn)) for i in range(rm)
        )


def mul(a: AutMatrix, b: AutMatrix) -> AutMatrix:
    if a.partition != b.partition or a.prime != b.prime:
        raise ValueError("matrices belong to different groups")
    mods = row_moduli(a.partition, a.prime)
    rho = len(mods)
    be = b.entries
    cols = list(zip(*be))
    ent = tuple(
        tuple(sum(u * v for u, v in zip(row, col)) % mods[x] for col in cols)
        for x, row in enumerate(a.entries)
    )
    return AutMatrix._trusted(a.partition, a.prime, ent)


def _det(mat: Sequence[Sequence[int]], modulus: int) -> int:
    """Determinant over Z/modulus by fraction-free expansion (small sizes)."""
    n = len(mat)
    if n == 0:
        return 1 % modulus
    if n == 1:
        return mat[0][0] % modulus
    if n == 2:
        return (mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) % modulus
    total = 0
    for j in range(n):
        if mat[0][j] % modulus == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        sign = -1 if j % 2 else 1
        total += sign * mat[0][j] * _det(minor, modulus)
    return total % modulus


def det_mod(mat: Sequence[Sequence[int]], modulus: int) -> int:
    return _det([list(r) for r in mat], modulus)


def is_automorphism(g: AutMatrix) -> bool:
    """Every diagonal block invertible mod p (equivalently g has an inverse)."""
    p = g.prime
    return all(det_mod(g.block(m, m), p) != 0 for m in range(g.partition.k))


def _inv_matrix_mod(mat: list[list[int]], modulus: int) -> list[list[int]]:
    """Inverse over Z/modulus of a matrix whose determinant is a unit."""
    n = len(mat)
    aug = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if pow_unit(aug[r][c], modulus)), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c] % modulus, -1, modulus)
        aug[c] = [(v * inv) % modulus for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] % modulus:
                f = aug[r][c]
                aug[r] = [(v - f * w) % modulus for v, w in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def pow_unit(x: int, modulus: int) -> bool:
    from math import gcd

    return gcd(x % modulus, modulus) == 1


def inv(g: AutMatrix) -> AutMatrix:
    """Two-sided inverse by Newton iteration X <- X + X(I - gX), starting from
    the block lower triangular inverse of g mod p.  The error squares each
    step and every entry of the error is divisible by p after the first, so
    the loop ends within log2(lambda_1) + 1 rounds."""
    if not is_automorphism(g):
        raise ValueError("matrix is not an automorphism")
    part, p = g.partition, g.prime
    rho = g.rho
    lam = part.expanded()
    x0 = _inv_matrix_mod([[v % p for v in row] for row in g.entries], p)
    ent = tuple(
        tuple(x0[x][y] if min_valuation(part, x, y) == 0 else 0
              for y in range(rho))
        for x in range(rho)
    )
    x = AutMatrix._trusted(part, p, tuple(
        tuple(v % p ** lam[r] for v in row) for r, row in enumerate(ent)))
    ident = AutMatrix.identity(part, p)
    mods = row_moduli(part, p)
    for _ in range(max(lam).bit_length() + 2):
        gx = mul(g, x)
        if gx == ident:
            return x
        err = AutMatrix._trusted(part, p, tuple(
            tuple((int(a == b) - gx.entries[a][b]) % mods[a] for b in range(rho))
            for a in range(rho)))
        xe = mul(x, err)
        x = AutMatrix._trusted(part, p, tuple(
            tuple((x.entries[a][b] + xe.entries[a][b]) % mods[a] for b in range(rho))
            for a in range(rho)))
    raise ArithmeticError("Newton inverse did not converge")  # pragma: no cover


def act(g: AutMatrix, a: AbelianElement) -> AbelianElement:
    """Natural action g . a on A_lambda."""
    if g.partition != a.partition or g.prime != a.prime:
        raise ValueError("incompatible partition or prime")
    mods = row_moduli(g.partition, g.prime)
    comps = tuple(
        sum(u * v for u, v in zip(row, a.comps)) % mods[x] for x, row in enumerate(g.entries)
    )
    return AbelianElement(a.partition, a.prime, comps)


def phi_map(g: AutMatrix) -> tuple[int, ...]:
    """Determinants of the diagonal blocks mod p."""
    return tuple(det_mod(g.block(m, m), g.prime) for m in range(g.partition.k))


# ---------------------------------------------------------------------------
# Coordinates on the Sylow subgroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Coordinate:
    """s = (l, i, j, m, n), all but l 1-based: the p^l digit of entry (i, j)
    of block (m, n)."""

    l: int
    i: int
    j: int
    m: int
    n: int

    def pos(self, partition: Partition) -> tuple[int, int]:
        off = partition.block_offsets()
        return off[self.m - 1] + self.i, off[self.n - 1] + self.j

    def chi(self, partition: Partition) -> int:
        x, y = self.pos(partition)
        return x - y

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.l, self.i, self.j, self.m, self.n)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.as_tuple())) + ")"


EMPTY = None  # the distinguished least element of S


def coordinate_set(partition: Partition) -> list[Coordinate]:
    """S minus the empty element, in no particular order."""
    out = []
    lam, rho = partition.parts, partition.mults
    k = partition.k
    for m in range(1, k + 1):
        for n in range(1, k + 1):
            for i in range(1, rho[m - 1] + 1):
                for j in range(1, rho[n - 1] + 1):
                    for l in range(lam[m - 1]):
                        if m == n and l == 0 and i <= j:
                            continue
                        if m < n and l <= lam[m - 1] - lam[n - 1] - 1:
                            continue
                        out.append(Coordinate(l, i, j, m, n))
    return out


def to_key(s: Coordinate, partition: Partition) -> tuple[int, int, int]:
    """Sort key: ascending key order is ascending total order."""
    x, _ = s.pos(partition)
    return (-s.l, -s.chi(partition), -x)


@dataclass(frozen=True)
class IndexSet:
    """The coordinate set S with its total order, the subset T and the
    modified order that moves T to the top."""

    partition: Partition
    prime: int
    to_order: tuple[Coordinate, ...]
    t_set: frozenset
    mto_order: tuple[Coordinate, ...]
    t_branch: str

    def __len__(self) -> int:
        return len(self.to_order)

    def order(self, which: str) -> tuple[Coordinate, ...]:
        if which.lower() == "to":
            return self.to_order
        if which.lower() == "mto":
            return self.mto_order
        raise ValueError(f"unknown order {which!r}")

    def less(self, s: Optional[Coordinate], t: Optional[Coordinate], which: str = "to") -> bool:
        if s == t:
            return False
        if s is EMPTY:
            return True
        if t is EMPTY:
            return False
        seq = self.order(which)
        return seq.index(s) < seq.index(t)

    def above(self, s: Optional[Coordinate], which: str = "to") -> tuple[Coordinate, ...]:
        """Coordinates strictly greater than s."""
        seq = self.order(which)
        if s is EMPTY:
            return seq
        return seq[seq.index(s) + 1 :]

    def predecessor(self, s: Coordinate, which: str = "to") -> Optional[Coordinate]:
        seq = self.order(which)
        i = seq.index(s)
        return EMPTY if i == 0 else seq[i - 1]

    def max_non_t(self) -> Optional[Coordinate]:
        rest = [s for s in self.to_order if s not in self.t_set]
        return rest[-1] if rest else EMPTY


def build_index_set(partition: Partition, prime: int) -> IndexSet:
    coords = coordinate_set(partition)
    to_order = tuple(sorted(coords, key=lambda s: to_key(s, partition)))
    members = set(coords)
    t = {s for s in coords if s.l == 0 and s.chi(partition) == 1}
    if partition.k > 1:
        branch = "k>1"
        for m in range(1, partition.k):
            corner = Coordinate(1, 1, partition.mults[m], m, m + 1)
            if corner in members:
                t.add(corner)
    else:
        branch = "k=1"
    mto = tuple([s for s in to_order if s not in t] + [s for s in to_order if s in t])
    return IndexSet(partition, prime, to_order, frozenset(t), mto, branch)


def encode_coords(g: AutMatrix, index: Optional[IndexSet] = None) -> dict[Coordinate, int]:
    """Digits a_s of a Sylow element g (unipotent lower triangular mod p)."""
    part, p = g.partition, g.prime
    if not in_sylow(g):
        raise ValueError("matrix is not unipotent lower triangular mod p")
    coords = index.to_order if index is not None else coordinate_set(part)
    lam = part.expanded()
    digits_cache: dict[tuple[int, int], list[int]] = {}
    out = {}
    for s in coords:
        x, y = s.pos(part)
        key = (x, y)
        if key not in digits_cache:
            v = g.entries[x - 1][y - 1]
            if x == y:
                v -= 1
            digits_cache[key] = padic_digits(v % p ** lam[x - 1], p, lam[x - 1])
        out[s] = digits_cache[key][s.l]
    return out


def decode_coords(
    values: dict[Coordinate, int], partition: Partition, p: int
) -> AutMatrix:
    """Inverse of :func:`encode_coords`; missing coordinates count as 0."""
    rho = partition.rho
    ent = [[int(x == y) for y in range(rho)] for x in range(rho)]
    valid = set(coordinate_set(partition))
    for s, a in values.items():
        if s not in valid:
            raise ValueError(f"{s} is not a coordinate for {partition}")
        if not 0 <= a < p:
            raise ValueError(f"digit {a} at {s} outside [0, {p})")
        x, y = s.pos(partition)
        ent[x - 1][y - 1] += a * p**s.l
    return AutMatrix(partition, p, tuple(tuple(r) for r in ent))


def in_sylow(g: AutMatrix) -> bool:
    p = g.prime
    for x, row in enumerate(g.entries):
        for y, v in enumerate(row):
            if x == y and v % p != 1 % p:
                return False
            if y > x and v % p:
                return False
    return True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def sylow_order_log(partition: Partition) -> int:
    return len(coordinate_set(partition))


def aut_order(partition: Partition, p: int) -> int:
    """|G_lambda| by counting free digits and invertible diagonal blocks."""
    lam, mult = partition.parts, partition.mults
    total = 1
    k = partition.k
    for m in range(k):
        for n in range(k):
            cells = mult[m] * mult[n]
            if m == n:
                r = mult[m]
                gl = 1
                for i in range(r):
                    gl *= p**r - p**i
                total *= gl * p ** ((lam[m] - 1) * r * r)
            elif m < n:
                total *= p ** (lam[n] * cells)
            else:
                total *= p ** (lam[m] * cells)
    return total


def teichmuller_units(p: int, e: int) -> list[int]:
    """The p-1 roots of unity of order dividing p-1 in Z/p^e."""
    q = p**e
    out = sorted({pow(a, p ** (e - 1), q) for a in range(1, p)})
    return out


def enumerate_group(kind: str, partition: Partition, p: int, cap: int = DEFAULT_CAP) -> list[AutMatrix]:
    kind = kind.upper().replace("_LAMBDA", "").rstrip("Λ")
    if kind in ("P", "P_LAMBDA", "SYLOW"):
        size = p ** sylow_order_log(partition)
        if size > cap:
            raise CapExceeded("P_lambda", size, cap)
        index = build_index_set(partition, p)
        coords = index.to_order
        out = []
        for digits in itertools.product(range(p), repeat=len(coords)):
            out.append(decode_coords(dict(zip(coords, digits)), partition, p))
        return out
    if kind in ("D", "DIAG"):
        size = (p - 1) ** partition.rho
        if size > cap:
            raise CapExceeded("D_lambda", size, cap)
        lam = partition.expanded()
        choices = [teichmuller_units(p, v) for v in lam]
        return [AutMatrix.diagonal(partition, p, d) for d in itertools.product(*choices)]
    if kind in ("G", "GL", "AUT"):
        size = aut_order(partition, p)
        if size > cap:
            raise CapExceeded("G_lambda", size, cap)
        return list(_iter_aut(partition, p))
    raise ValueError(f"unknown group kind {kind!r}")


def _iter_aut(partition: Partition, p: int) -> Iterator[AutMatrix]:
    lam = partition.expanded()
    rho = len(lam)
    ranges = []
    for x in range(rho):
        for y in range(rho):
            need = min_valuation(partition, x, y)
            step = p**need
            ranges.append(range(0, p ** lam[x], step))
    for flat in itertools.product(*ranges):
        ent = tuple(tuple(flat[x * rho : (x + 1) * rho]) for x in range(rho))
        g = AutMatrix._trusted(partition, p, ent)
        if is_automorphism(g):
            yield g


def random_sylow(partition: Partition, p: int, rng: random.Random) -> AutMatrix:
    coords = coordinate_set(partition)
    return decode_coords({s: rng.randrange(p) for s in coords}, partition, p)


def random_aut(partition: Partition, p: int, rng: random.Random) -> AutMatrix:
    lam = partition.expanded()
    rho = len(lam)
    while True:
        ent = []
        for x in range(rho):
            row = []
            for y in range(rho):
                need = min_valuation(partition, x, y)
                row.append(rng.randrange(0, p ** lam[x], p**need))
            ent.append(tuple(row))
        g = AutMatrix._trusted(partition, p, tuple(ent))
        if is_automorphism(g):
            return g


def gl_partition(n: int, k: int) -> Partition:
    """GL_n(Z/p^k) is the automorphism group of (Z/p^k)^n."""
    return Partition((k,), (n,))
