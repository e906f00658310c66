"""Maps between cohomology groups: conjugation, invariants, restriction,
inflation, transgression, theta, stable classes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autcoh.cohomology.brute import coboundary, h2_brute, hom_basis
from autcoh.cohomology.cocycles import cyclic_cocycle
from autcoh.cohomology.maps import (
    NotCentral,
    conj_action,
    diagonal_action_perms,
    extension_cocycle,
    hs_exactness,
    inflate,
    inner_perm,
    invariant_subspace,
    restrict,
    stable_subspace,
    sylow_subgroup,
    theta,
    transgress,
)
from autcoh.cohomology.tables import aut_table, cyclic, named_diagonal_perms, named_group, product, sylow_table
from autcoh.structures import Partition
from helpers import alternating4, symmetric


def _mult_perm(n: int, s: int) -> np.ndarray:
    return (np.arange(n) * s) % n


class TestConjAction:
    def test_identity(self):
        sp = h2_brute(named_group("G1", 3), 3)
        assert np.array_equal(conj_action(sp, np.arange(9)), np.eye(sp.dim, dtype=np.int64))

    def test_inner_is_identity(self):
        g = sylow_table(Partition.parse("2,1"), 3)
        sp = h2_brute(g, 3)
        for x in range(1, g.order, 5):
            assert np.array_equal(conj_action(sp, inner_perm(g, x)), np.eye(sp.dim, dtype=np.int64))

    def test_unit_multiplication_on_z9(self):
        g, f = cyclic_cocycle(3, 2)
        sp = h2_brute(g, 3)
        # sigma = 8 is the unit of order 2; it sends [f] to -[f]
        m = conj_action(sp, _mult_perm(9, 8))
        assert m.tolist() == [[2]]

    def test_functorial(self):
        g = sylow_table(Partition.parse("2,1"), 5)
        sp = h2_brute(g, 5)
        a, b = diagonal_action_perms(g)[:2]
        ma, mb = conj_action(sp, a), conj_action(sp, b)
        mab = conj_action(sp, a[b])
        assert np.array_equal(mab, (ma @ mb) % 5) or np.array_equal(mab, (mb @ ma) % 5)


class TestInvariants:
    @pytest.mark.parametrize("name", ["G1", "G2"])
    def test_projector_idempotent(self, name):
        g = named_group(name, 3)
        res = invariant_subspace(h2_brute(g, 3), named_diagonal_perms(g))
        pr = res.projector
        assert np.array_equal((pr @ pr) % 3, pr)

    def test_projector_fixes_exactly_invariant_classes(self):
        g = named_group("G1", 3)
        sp = h2_brute(g, 3)
        perms = named_diagonal_perms(g)
        res = invariant_subspace(sp, perms)
        mats = [conj_action(sp, q) for q in perms]
        # brute: all vectors fixed by every generator
        fixed = []
        for v in np.ndindex(*([3] * sp.dim)):
            v = np.array(v)
            if all(np.array_equal((v @ m) % 3, v) for m in mats):
                fixed.append(v)
        assert 3**res.space.dim == len(fixed)
        assert all(np.array_equal((v @ res.projector) % 3, v) for v in fixed)

    def test_rejects_p_divisible_group(self):
        g = cyclic(9)
        sp = h2_brute(g, 3)
        with pytest.raises(ValueError):
            invariant_subspace(sp, [_mult_perm(9, 4)])  # 4 has order 3 mod 9


class TestRestrictInflate:
    def test_zero(self):
        z = np.zeros((9, 9), dtype=np.int64)
        assert not restrict(z, [0, 3, 6]).any()
        assert not inflate(np.zeros((3, 3), dtype=np.int64), np.arange(9) % 3).any()


class TestTheta:
    def test_symmetric_cocycle_zero(self):
        g, f = cyclic_cocycle(3, 2)
        assert not theta(g, f, np.arange(9), 3).any()

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6))
    def test_well_defined_on_classes(self, seed):
        g = sylow_table(Partition.parse("2,1"), 3)
        center = [x for x in range(g.order) if (g.mul[x] == g.mul[:, x]).all()]
        sp = h2_brute(g, 3)
        c = sp.basis_tables()[seed % sp.dim]
        v = np.random.default_rng(seed).integers(0, 3, size=g.order)
        assert np.array_equal(theta(g, c, center, 3), theta(g, (c + coboundary(g, 3, v)) % 3, center, 3))

    def test_not_central(self):
        g = symmetric(3)
        with pytest.raises(NotCentral):
            theta(g, np.zeros((6, 6), dtype=np.int64), [0, 1], 3)


class TestTransgression:
    def test_z9_over_z3(self):
        g = cyclic(9)
        sub = g.closure([3])
        q, proj = g.quotient(sub)
        ext = extension_cocycle(g, sub, q, proj)
        hq = h2_brute(q, 3)
        phi = hom_basis(g.subgroup(sub)[0], 3)[0]
        assert hq.coords(transgress(phi, ext)).any()
        assert hs_exactness(g, sub, 3, "Z/9").ok

    def test_split_extension_trivial_transgression(self):
        g = product(cyclic(3), cyclic(3))
        sub = [g.index((0, j)) for j in range(3)]
        q, proj = g.quotient(sub)
        ext = extension_cocycle(g, sub, q, proj)
        hq = h2_brute(q, 3)
        for phi in hom_basis(g.subgroup(sub)[0], 3):
            assert not hq.coords(transgress(phi, ext)).any()
        assert hs_exactness(g, sub, 3).ok


class TestStable:
    def test_self_sylow(self):
        g = sylow_table(Partition.parse("2,1"), 3)
        assert stable_subspace(g, np.arange(g.order), 3).space.dim == h2_brute(g, 3).dim

    @pytest.mark.parametrize(
        "group,p",
        [
            (symmetric(3), 3),
            (product(cyclic(3), symmetric(3)), 3),
            (alternating4(), 2),
            (aut_table(Partition.parse("1,1"), 3), 3),
            (symmetric(4), 2),
        ],
        ids=["S3@3", "Z3xS3@3", "A4@2", "GL2(3)@3", "S4@2"],
    )
    def test_matches_brute(self, group, p):
        sylow = sylow_subgroup(group, p)
        assert stable_subspace(group, sylow, p).space.dim == h2_brute(group, p).dim

    def test_known_dims(self):
        assert stable_subspace(alternating4(), sylow_subgroup(alternating4(), 2), 2).space.dim == 1
        g = product(cyclic(3), symmetric(3))
        assert stable_subspace(g, sylow_subgroup(g, 3), 3).space.dim == 1

    def test_sylow_order(self):
        g = aut_table(Partition.parse("2,1"), 5)
        assert sylow_subgroup(g, 5).size == 125
