"""Exact arithmetic over Z/p^e and the linear-algebra kernels used by the
cohomology engines.

Two solvers live here:

* :class:`Echelon` keeps a reduced row echelon basis over F_p and absorbs
  equations chunk by chunk, so that huge equation streams never have to be
  materialised at once.
* :func:`howell_form` and friends work over Z/p^e, where zero divisors make
  plain Gaussian elimination unreliable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

_FLOAT_EXACT = 2**52


def _check_prime_power(p: int, e: int = 1) -> None:
    if p < 2 or p >= 2**16:
        raise ValueError(f"prime {p} outside supported range [2, 65536)")
    if any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"exponent must be positive, got {e}")


@dataclass(frozen=True)
class ResidueInt:
    """An element of Z/p^e."""

    value: int
    prime: int
    exponent: int

    def __post_init__(self) -> None:
        _check_prime_power(self.prime, self.exponent)
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime**self.exponent

    def is_unit(self) -> bool:
        return self.value % self.prime != 0

    def inverse(self) -> "ResidueInt":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.modulus}")
        return ResidueInt(pow(self.value, -1, self.modulus), self.prime, self.exponent)

    def valuation(self) -> int:
        return valuation(self.value, self.prime, self.exponent)

    def __add__(self, other: "ResidueInt") -> "ResidueInt":
        return ResidueInt(self.value + other.value, self.prime, self.exponent)

    def __sub__(self, other: "ResidueInt") -> "ResidueInt":
        return ResidueInt(self.value - other.value, self.prime, self.exponent)

    def __mul__(self, other: "ResidueInt") -> "ResidueInt":
        return ResidueInt(self.value * other.value, self.prime, self.exponent)

    def __neg__(self) -> "ResidueInt":
        return ResidueInt(-self.value, self.prime, self.exponent)


def valuation(x: int, p: int, e: int) -> int:
    """p-adic valuation of x in Z/p^e, with v(0) = e."""
    x %= p**e
    if x == 0:
        return e
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def padic_digits(x: ResidueInt | int, p: int | None = None, e: int | None = None) -> list[int]:
    """Base-p digits d_0..d_{e-1} of a residue, least significant first."""
    if isinstance(x, ResidueInt):
        value, p, e = x.value, x.prime, x.exponent
    else:
        if p is None or e is None:
            raise TypeError("plain integers need explicit p and e")
        value = x % p**e
    digits = []
    for _ in range(e):
        digits.append(value % p)
        value //= p
    return digits


def from_digits(digits: Sequence[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(digits))


# ---------------------------------------------------------------------------
# F_p elimination
# ---------------------------------------------------------------------------


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for small non-negative integer matrices, exactly."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] * (p - 1) ** 2 < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(prod, p).astype(np.int64)
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def _eliminate(block: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a small dense block (rows already reduced
    against any outside basis).  Returns (nonzero rows, pivot columns)."""
    m = block % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    nz_cols = np.flatnonzero(m.any(axis=0)) if rows else np.array([], dtype=np.int64)
    for c in nz_cols:
        if r == rows:
            break
        col = m[r:, c]
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        k = r + hits[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        factors = m[:, c].copy()
        factors[r] = 0
        sel = np.flatnonzero(factors)
        if sel.size:
            m[sel] = (m[sel] - np.outer(factors[sel], m[r])) % p
        pivots.append(int(c))
        r += 1
    return m[:r], pivots


class Echelon:
    """Incrementally maintained reduced row echelon basis over F_p.

    Rows are absorbed with :meth:`add`; memory stays O(rank x ncols) no matter
    how many rows stream through.  Pivot choice is the first nonzero column,
    which keeps the basis deterministic.
    """

    def __init__(self, ncols: int, p: int):
        _check_prime_power(p)
        self.ncols = ncols
        self.p = p
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return int(self.rows.shape[0])

    def copy(self) -> "Echelon":
        other = Echelon(self.ncols, self.p)
        other.rows = self.rows.copy()
        other.pivots = self.pivots.copy()
        return other

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Reduce rows modulo the current row space (result vanishes on pivots)."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % self.p
        if self.rank == 0 or v.shape[0] == 0:
            return v
        coeff = v[:, self.pivots]
        return (v - _matmul_mod(coeff, self.rows, self.p)) % self.p

    def contains(self, vecs: np.ndarray) -> np.ndarray:
        return ~self.reduce(vecs).any(axis=1)

    def add(self, vecs: np.ndarray) -> int:
        """Absorb rows; returns the rank increase."""
        red = self.reduce(vecs)
        red = red[red.any(axis=1)]
        if red.shape[0] == 0:
            return 0
        new_rows, new_piv = _eliminate(red, self.p)
        if not new_piv:
            return 0
        if self.rank:
            coeff = self.rows[:, new_piv]
            self.rows = (self.rows - _matmul_mod(coeff, new_rows, self.p)) % self.p
        rows = np.vstack([self.rows, new_rows])
        piv = np.concatenate([self.pivots, np.array(new_piv, dtype=np.int64)])
        order = np.argsort(piv, kind="stable")
        self.rows = rows[order]
        self.pivots = piv[order]
        return len(new_piv)

    def absorb(self, chunks: Iterable[np.ndarray]) -> "Echelon":
        for chunk in chunks:
            self.add(chunk)
        return self

    def nullspace(self) -> np.ndarray:
        """Basis (as rows) of {x : R x = 0} where R is the current row space."""
        p = self.p
        free = np.setdiff1d(np.arange(self.ncols), self.pivots)
        basis = np.zeros((free.size, self.ncols), dtype=np.int64)
        basis[np.arange(free.size), free] = 1
        if self.rank:
            # x_pivot = -sum over free columns of R[pivot_row, free] * x_free
            basis[:, self.pivots] = (-self.rows[:, free].T) % p
        return basis


def _as_chunks(system) -> Iterator[np.ndarray]:
    if isinstance(system, np.ndarray):
        yield system
        return
    for chunk in system:
        yield np.atleast_2d(np.asarray(chunk, dtype=np.int64))


def fp_solve(system, ncols: int, p: int, mode: str = "rank", rhs_column: bool = False):
    """Solve a (possibly streamed) linear system over F_p.

    ``system`` is either a 2-D array or an iterable of 2-D row chunks with
    ``ncols`` columns.  With ``rhs_column=True`` the last column is the right
    hand side and ``ncols`` counts it.

    mode ``rank``   -> int rank of the coefficient part
    mode ``kernel`` -> array whose rows span the kernel {x : A x = 0}
    mode ``solve``  -> one particular solution, or None when inconsistent
    """
    ech = Echelon(ncols, p).absorb(_as_chunks(system))
    if mode == "rank":
        if rhs_column:
            return int(np.count_nonzero(ech.pivots < ncols - 1))
        return ech.rank
    if mode == "kernel":
        if rhs_column:
            raise ValueError("kernel mode takes a homogeneous system")
        return ech.nullspace()
    if mode == "solve":
        if not rhs_column:
            raise ValueError("solve mode needs rhs_column=True")
        last = ncols - 1
        if np.any(ech.pivots == last):
            return None
        x = np.zeros(last, dtype=np.int64)
        if ech.rank:
            x[ech.pivots] = ech.rows[:, last]
        return x
    raise ValueError(f"unknown mode {mode!r}")


def fp_rank(mat: np.ndarray, p: int) -> int:
    mat = np.atleast_2d(np.asarray(mat, dtype=np.int64))
    if mat.size == 0:
        return 0
    return Echelon(mat.shape[1], p).absorb([mat]).rank


def fp_inverse(mat: np.ndarray, p: int) -> np.ndarray:
    mat = np.asarray(mat, dtype=np.int64) % p
    n = mat.shape[0]
    aug = np.hstack([mat, np.eye(n, dtype=np.int64)])
    red, piv = _eliminate(aug, p)
    if len(piv) < n or piv[n - 1] >= n:
        raise ZeroDivisionError("matrix is singular mod p")
    return red[:, n:]


# ---------------------------------------------------------------------------
# Howell form over Z/p^e
# ---------------------------------------------------------------------------


@dataclass
class HowellForm:
    """Echelon generators of a submodule of (Z/p^e)^n.

    Each row has a leading entry p^v at ``pivots[i]``; the module has order
    prod p^(e - v).  Every element of the module reduces to zero against the
    rows, which is the property that makes membership and solving reliable.
    """

    rows: np.ndarray
    pivots: list[int]
    valuations: list[int]
    p: int
    e: int

    @property
    def modulus(self) -> int:
        return self.p**self.e

    def log_order(self) -> int:
        """log_p of the number of elements of the module."""
        return sum(self.e - v for v in self.valuations)

    def reduce(self, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reduce one vector; returns (remainder, coefficients over rows)."""
        q = self.modulus
        v = np.asarray(vec, dtype=np.int64) % q
        coeff = np.zeros(len(self.pivots), dtype=np.int64)
        for k, (c, val) in enumerate(zip(self.pivots, self.valuations)):
            a = int(v[c])
            if a == 0:
                continue
            if a % self.p**val:
                break
            f = (a // self.p**val) % q
            coeff[k] = f
            v = (v - f * self.rows[k]) % q
        return v, coeff

    def contains(self, vec: np.ndarray) -> bool:
        rem, _ = self.reduce(vec)
        return not rem.any()


def howell_form(gens: np.ndarray, p: int, e: int, ncols: Optional[int] = None) -> HowellForm:
    """Howell-style echelon form of the row span of ``gens`` over Z/p^e.

    Column by column: the row of least valuation becomes the pivot, the
    column is cleared from the others, and p^(e-v) times the pivot row (which
    vanishes on that column but still lies in the module) is fed back in.
    """
    _check_prime_power(p, e)
    q = p**e
    gens = np.atleast_2d(np.asarray(gens, dtype=np.int64))
    if ncols is None:
        ncols = gens.shape[1] if gens.size else 0
    work = gens.reshape(-1, ncols) % q
    work = work[work.any(axis=1)]
    out_rows, pivots, vals = [], [], []
    for c in range(ncols):
        if work.shape[0] == 0:
            break
        col = work[:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        v_all = np.array([valuation(int(x), p, e) for x in col[nz]])
        k = int(nz[np.argmin(v_all)])
        v = int(v_all.min())
        row = work[k].copy()
        unit = (int(row[c]) // p**v) % q
        row = (row * pow(unit, -1, q)) % q
        rest = np.delete(work, k, axis=0)
        if rest.shape[0]:
            f = rest[:, c] // p**v
            rest = (rest - np.outer(f, row)) % q
        extra = (row * p ** (e - v)) % q
        if extra.any():
            rest = np.vstack([rest, extra[None, :]])
        work = rest[rest.any(axis=1)] if rest.shape[0] else rest
        out_rows.append(row)
        pivots.append(c)
        vals.append(v)
    # back-reduce entries above each pivot to canonical residues
    rows = np.array(out_rows, dtype=np.int64).reshape(-1, ncols)
    for i in range(len(pivots)):
        for j in range(i):
            a = int(rows[j, pivots[i]])
            f = a // p ** vals[i]
            if f:
                rows[j] = (rows[j] - f * rows[i]) % q
    return HowellForm(rows, pivots, vals, p, e)


@dataclass
class HowellSolution:
    """Solution set x0 + span(kernel) of a system over Z/p^e."""

    particular: np.ndarray
    kernel: HowellForm

    def count(self) -> int:
        return self.kernel.p ** self.kernel.log_order()

    def enumerate(self) -> list[tuple[int, ...]]:
        """All solutions (small systems only)."""
        q = self.kernel.modulus
        sols = {tuple(int(x) for x in self.particular % q)}
        for row, v in zip(self.kernel.rows, self.kernel.valuations):
            order = self.kernel.p ** (self.kernel.e - v)
            sols = {tuple((np.array(s) + t * row) % q) for s in sols for t in range(order)}
        return sorted(tuple(int(x) for x in s) for s in sols)


class NoSolution(Exception):
    """Raised when a linear system over Z/p^e has an empty solution set."""


def howell_kernel(a: np.ndarray, p: int, e: int) -> HowellForm:
    """Generators (Howell form) of {x : A x = 0 mod p^e}."""
    q = p**e
    a = np.atleast_2d(np.asarray(a, dtype=np.int64)) % q
    m, n = a.shape
    graph = np.hstack([a.T, np.eye(n, dtype=np.int64)])
    hf = howell_form(graph, p, e, ncols=m + n)
    keep = [i for i, c in enumerate(hf.pivots) if c >= m]
    rows = hf.rows[keep][:, m:] if keep else np.zeros((0, n), dtype=np.int64)
    return HowellForm(
        rows, [hf.pivots[i] - m for i in keep], [hf.valuations[i] for i in keep], p, e
    )


def howell_solve(a: np.ndarray, b: np.ndarray, p: int, e: int) -> HowellSolution:
    """All x with A x = b (mod p^e); raises :class:`NoSolution` if empty."""
    q = p**e
    a = np.atleast_2d(np.asarray(a, dtype=np.int64)) % q
    b = np.asarray(b, dtype=np.int64).reshape(-1) % q
    m, n = a.shape
    graph = np.hstack([a.T, np.eye(n, dtype=np.int64)])
    hf = howell_form(graph, p, e, ncols=m + n)
    # reduce (b | 0): the coefficient part of the reducer records -x
    target = np.concatenate([b, np.zeros(n, dtype=np.int64)])
    rem, _ = hf.reduce(target)
    if rem[:m].any():
        raise NoSolution("system has no solution")
    particular = (-rem[m:]) % q
    return HowellSolution(particular, howell_kernel(a, p, e))


def module_log_order(gens: np.ndarray, p: int, e: int, ncols: int) -> int:
    """log_p of the order of the submodule of (Z/p^e)^ncols spanned by gens."""
    if np.asarray(gens).size == 0:
        return 0
    return howell_form(gens, p, e, ncols=ncols).log_order()
