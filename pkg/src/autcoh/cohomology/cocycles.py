"""Explicit cochains: the carry cocycle on a cyclic group, the standard
coboundaries v_s = -d w_s on a Sylow subgroup, the product cocycles u_t and
the named cocycles on G1, G3 and G4."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..structures import Coordinate
from .tables import GroupTable, cyclic


class BadScale(ValueError):
    pass


def cyclic_cocycle(p: int, r: int, k: int = 1, sigma: int = 1) -> tuple[GroupTable, np.ndarray]:
    """k f_sigma on Z/p^r with f(a, b) = floor((a + b) / p^r) on residues
    in [0, p^r) and f_sigma(a, b) = f(sigma a, sigma b)."""
    n = p**r
    if not 1 <= k <= p - 1:
        raise BadScale(f"multiplier must lie in [1, {p - 1}]")
    if sigma % p == 0 or pow(sigma, p - 1, n) != 1:
        raise BadScale(f"sigma = {sigma} is not a root of unity of order dividing {p - 1} mod {n}")
    a = (np.arange(n) * sigma) % n
    table = k * ((a[:, None] + a[None, :]) // n) % p
    return cyclic(n), table


def _coord_column(group: GroupTable, s) -> np.ndarray:
    index = group.meta["index"]
    pos = {c: i for i, c in enumerate(index.to_order)}
    if s not in pos:
        raise KeyError(f"{s} is not a coordinate of this group")
    return group.meta["coords"][pos[s]]


def w_cochain(group: GroupTable, s: Coordinate) -> np.ndarray:
    """w_s(g^a) = a_s."""
    return _coord_column(group, s).astype(np.int64)


def v_cochain(group: GroupTable, s: Coordinate, p: int) -> np.ndarray:
    """v_s(g^a, g^b) = c_s - a_s - b_s where g^c = g^a g^b."""
    w = w_cochain(group, s)
    return (w[group.mul] - w[:, None] - w[None, :]) % p


def phi_coordinate(s: Coordinate) -> Coordinate:
    """(l, i, j, m, n) -> (l - 1, j, i, n, m)."""
    return Coordinate(s.l - 1, s.j, s.i, s.n, s.m)


def t1_coordinates(group: GroupTable) -> list[Coordinate]:
    """Coordinates (1, 1, 1, m, m+1) whose blocks m and m+1 have size one."""
    index = group.meta["index"]
    part = index.partition
    out = []
    for m in range(1, part.k):
        if part.mults[m - 1] == 1 and part.mults[m] == 1:
            s = Coordinate(1, 1, 1, m, m + 1)
            if s in index.to_order:
                out.append(s)
    return out


def u_cochain(group: GroupTable, t: Coordinate, p: int) -> np.ndarray:
    """u_t(g^a, g^b) = a_{phi(t)} b_t."""
    a_phi = _coord_column(group, phi_coordinate(t))
    b_t = _coord_column(group, t)
    return (a_phi[:, None] * b_t[None, :]) % p


def _named(group: GroupTable, terms: list[tuple[str, str]]) -> np.ndarray:
    names = group.meta["coord_names"]
    coords = group.meta["coords"]
    p = group.meta["prime"]
    out = np.zeros((group.order, group.order), dtype=np.int64)
    for left, right in terms:
        out += coords[names.index(left)][:, None] * coords[names.index(right)][None, :]
    return out % p


# name -> (group key, [(first-argument coordinate, second-argument coordinate)])
NAMED_COCYCLES = {
    "z_G1": ("G1", [("b", "c")]),
    "z_G3": ("G3", [("a", "c"), ("b", "e")]),
    "y_G4": ("G4", [("c", "a"), ("d", "f")]),
    "z_G4": ("G4", [("a", "c"), ("b", "e")]),
}


def named_cochains(name: str, group: GroupTable, s: Optional[Coordinate] = None, p: Optional[int] = None) -> np.ndarray:
    """The named cochains as tables (1-cochains as vectors)."""
    if name in NAMED_COCYCLES:
        key, terms = NAMED_COCYCLES[name]
        if group.name.split("(")[0] != key:
            raise ValueError(f"{name} lives on {key}, not on {group.name}")
        return _named(group, terms)
    if "index" not in group.meta:
        raise ValueError(f"{name} needs a Sylow group with coordinates")
    p = p or group.meta["index"].prime
    if s is None:
        raise ValueError(f"{name} needs a coordinate")
    if name == "w_s":
        return w_cochain(group, s) % p
    if name == "v_s":
        return v_cochain(group, s, p)
    if name == "u_t":
        return u_cochain(group, s, p)
    raise ValueError(f"unknown cochain {name!r}")
