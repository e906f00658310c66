"""Brute-force and pc engines for H^1 and H^2 with trivial F_p coefficients."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autcoh.cohomology.brute import (
    CohomologyCapExceeded,
    NotACocycle,
    check_cocycle,
    coboundary,
    h1_dim,
    h2_brute,
    h2_full_table,
    is_coboundary,
)
from autcoh.cohomology.cocycles import cyclic_cocycle
from autcoh.cohomology.pc import PcPresentation, h2_pc, pc_cohomology_space, pc_from_chief_series, pc_from_table
from autcoh.cohomology.tables import aut_table, cyclic, named_group, product, sylow_table, trivial
from autcoh.structures import Partition, gl_partition
from helpers import symmetric


def _p_part(n: int, p: int) -> int:
    return 1 if n % p == 0 else 0


class TestBruteKnownValues:
    @pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (3, 2), (2, 3)])
    def test_cyclic(self, p, r):
        assert h2_brute(cyclic(p**r), p).dim == 1

    def test_klein(self):
        assert h2_brute(product(cyclic(2), cyclic(2)), 2).dim == 3

    def test_trivial(self):
        assert h2_brute(trivial(), 3).dim == 0

    def test_coprime(self):
        assert h2_brute(cyclic(4), 3).dim == 0

    def test_cap(self):
        with pytest.raises(CohomologyCapExceeded):
            h2_brute(cyclic(400), 2)

    def test_h1(self):
        assert h1_dim(cyclic(9), 3) == 1
        assert h1_dim(sylow_table(Partition.parse("2,1"), 3), 3) == 2
        assert h1_dim(aut_table(Partition.parse("2,1"), 5), 5) == 0


class TestLiteralOracle:
    @pytest.mark.parametrize(
        "group,p",
        [(cyclic(3), 3), (cyclic(4), 2), (product(cyclic(2), cyclic(2)), 2), (symmetric(3), 3), (symmetric(3), 2), (cyclic(6), 3)],
        ids=["Z3", "Z4", "V4", "S3@3", "S3@2", "Z6@3"],
    )
    def test_brute_matches_full_table(self, group, p):
        full = h2_full_table(group, p)
        assert h2_brute(group, p).dim == full["h2_dim"]
        # normalization does not change the quotient
        assert h2_full_table(group, p, normalized=True)["h2_dim"] == full["h2_dim"]


class TestProductFormula:
    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(1, 9), st.integers(1, 9))
    def test_cyclic_factors(self, p, a, b):
        g = product(cyclic(a), cyclic(b))
        expect = _p_part(a, p) + _p_part(b, p) + _p_part(a, p) * _p_part(b, p)
        assert h2_brute(g, p).dim == expect


class TestCoboundaries:
    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([(3, 9), (2, 8), (5, 5)]), st.integers(0, 10**6))
    def test_random_coboundary_found(self, pn, seed):
        p, n = pn
        g = cyclic(n)
        v = np.random.default_rng(seed).integers(0, p, size=n)
        dv = coboundary(g, p, v)
        assert check_cocycle(g, p, dv)
        w = is_coboundary(g, p, dv)
        assert w is not None and np.array_equal(coboundary(g, p, w), dv)

    def test_standard_cocycle_not_coboundary(self):
        g, f = cyclic_cocycle(5, 1)
        assert is_coboundary(g, 5, f) is None

    def test_rejects_non_cocycle(self):
        g = cyclic(3)
        bad = np.zeros((3, 3), dtype=np.int64)
        bad[1, 1] = 1
        with pytest.raises(NotACocycle):
            is_coboundary(g, 3, bad)

    def test_coords_kill_coboundaries(self):
        g = sylow_table(Partition.parse("2,1"), 3)
        sp = h2_brute(g, 3)
        v = np.random.default_rng(0).integers(0, 3, size=g.order)
        v[0] = 0  # class coordinates are read on normalized cocycles
        assert not sp.coords(coboundary(g, 3, v)).any()
        for i, t in enumerate(sp.basis_tables()):
            assert check_cocycle(g, 3, t)
            assert list(sp.coords(t)) == [int(j == i) for j in range(sp.dim)]


class TestPc:
    def test_single_generator(self):
        assert h2_pc(PcPresentation(3, 1, [(0,)], {})).dim == 1

    @pytest.mark.parametrize("name", ["G1", "G2"])
    def test_named_matches_brute(self, name):
        g = named_group(name, 3)
        assert pc_cohomology_space(pc_from_table(g, 3)).dim == h2_brute(g, 3).dim

    @pytest.mark.parametrize("lam,p", [("2,1", 3), ("1,1,1", 3), ("1,1", 5), ("2,1", 2), ("1,1,1", 2)])
    def test_sylow_matches_brute(self, lam, p):
        g = sylow_table(Partition.parse(lam), p)
        assert pc_cohomology_space(pc_from_table(g, p)).dim == h2_brute(g, p).dim

    def test_chief_presentation_21(self):
        pres = pc_from_chief_series(Partition.parse("2,1"), 3)
        assert pres.n == 3 and pres.check_consistent()
        assert h2_pc(pres).dim == h2_brute(sylow_table(Partition.parse("2,1"), 3), 3).dim

    def test_chief_presentation_11(self):
        pres = pc_from_chief_series(Partition.parse("1,1"), 3)
        assert pres.n == 1 and pres.power == [(0,)]

    def test_normal_forms_211(self):
        pres = pc_from_chief_series(Partition.parse("2,1,1"), 3)
        assert len(pres.normal_forms()) == 3**6
        assert pres.check_consistent()

    def test_pc_basis_classes_are_cocycles(self):
        g = named_group("G2", 3)
        sp = pc_cohomology_space(pc_from_table(g, 3))
        assert all(check_cocycle(g, 3, t) for t in sp.basis_tables())
