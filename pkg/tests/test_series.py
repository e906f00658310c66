import itertools
import random

import numpy as np
import pytest

from autcoh.cohomology.tables import aut_table, from_matrices, sylow_table
from autcoh.series import (
    SubgroupDescriptor,
    abelianization,
    chief_series,
    coset_reps,
    elementary_product,
    gl_generators,
    matrix_commutator_subgroup,
    sl_factorize,
    strong_approx_decompose,
    verify_series,
)
from autcoh.structures import AutMatrix, Partition, det_mod, gl_partition, inv, mul


class TestChiefSeries:
    def test_21_orders(self):
        cs = chief_series(Partition.parse("2,1"), 3, "TO")
        assert len(cs) == 3
        assert verify_series(cs).orders == [1, 3, 9, 27]

    def test_11_one_step(self):
        cs = chief_series(Partition.parse("1,1"), 5)
        rep = verify_series(cs)
        assert len(cs) == 1 and rep.orders == [1, 5] and rep.ok

    @pytest.mark.parametrize("lam", ["2,1", "2,1,1", "1,1,1", "3,1"])
    @pytest.mark.parametrize("order", ["TO", "MTO"])
    def test_central_index_p(self, lam, order):
        part = Partition.parse(lam)
        rep = verify_series(chief_series(part, 3, order), sylow_table(part, 3))
        assert rep.indices_all_p and rep.normal and rep.central and rep.subgroups

    @pytest.mark.parametrize("lam", ["2,1", "2,1,1", "1,1,1"])
    def test_mto_derived_term(self, lam):
        part = Partition.parse(lam)
        rep = verify_series(chief_series(part, 3, "MTO"), sylow_table(part, 3))
        assert rep.derived_matches is True


class TestCosetReps:
    def test_predecessor_gives_p(self):
        index = chief_series(Partition.parse("2,1"), 3).index
        t2 = index.to_order[1]
        assert len(coset_reps(index, index.to_order[0], t2)) == 3

    def test_whole_group(self):
        index = chief_series(Partition.parse("2,1"), 3).index
        reps = coset_reps(index, None, index.to_order[-1])
        assert len({r.entries for r in reps}) == 27

    def test_two_step_distinct(self):
        index = chief_series(Partition.parse("2,1"), 3).index
        t1, t2 = index.to_order[0], index.to_order[2]
        reps = coset_reps(index, t1, t2)
        assert len(reps) == 9
        below = SubgroupDescriptor(index, t1, "TO")
        for g, h in itertools.combinations(reps, 2):
            assert not below.contains(mul(inv(g), h))


class TestCommutators:
    def test_gl2_z2(self):
        assert len(matrix_commutator_subgroup(gl_generators(2, 2, 1))) == 3

    def test_gl2_z3(self):
        sub = matrix_commutator_subgroup(gl_generators(2, 3, 1))
        assert len(sub) == 24 and all(det_mod(g.entries, 3) == 1 for g in sub)

    def test_sylow_21_derived(self):
        t = sylow_table(Partition.parse("2,1"), 3)
        d = t.derived_subgroup()
        assert d.size == 3
        index = t.meta["index"]
        rows = [list(index.to_order).index(s) for s in index.t_set]
        assert set(d.tolist()) == set(np.flatnonzero((t.meta["coords"][rows] == 0).all(axis=0)).tolist())


class TestAbelianization:
    def test_sylow_211(self):
        assert abelianization(sylow_table(Partition.parse("2,1,1"), 3))["invariants"] == [3, 3, 3]

    def test_g21_p3(self):
        ab = abelianization(aut_table(Partition.parse("2,1"), 3))
        assert ab["order"] == 4 and ab["p_ranks"].get(3, 0) == 0

    def test_gl2_z4_even(self):
        g = aut_table(gl_partition(2, 2), 2)
        assert abelianization(g)["order"] % 2 == 0


class TestSlFactorize:
    def test_identity(self):
        assert sl_factorize([[1, 0], [0, 1]], 3, 2) == []

    def test_elementary(self):
        assert sl_factorize([[1, 5], [0, 1]], 3, 2) == [(1, 2, 5)]

    def test_diag(self):
        m = [[2, 0], [0, 5]]
        assert elementary_product(sl_factorize(m, 3, 2), 2, 9) == m

    def test_random_sl3(self):
        rng = random.Random(3)
        for _ in range(50):
            while True:
                m = [[rng.randrange(9) for _ in range(3)] for _ in range(3)]
                d = det_mod(m, 9)
                if d % 3:
                    break
            dinv = pow(d, -1, 9)
            m = [[(row[0] * dinv) % 9] + row[1:] for row in m]
            assert elementary_product(sl_factorize(m, 3, 2), 3, 9) == m


class TestStrongApprox:
    def test_scalar(self):
        assert strong_approx_decompose([[4]], 3, 2) == ([[1]], [[1]])

    def test_det_one(self):
        g = [[1, 3], [2, 7]]
        assert det_mod(g, 9) == 1
        g1, h = strong_approx_decompose(g, 3, 2)
        assert g1 == g and all(x == 0 for row in h for x in row)

    def test_random(self):
        rng = random.Random(5)
        done = 0
        while done < 100:
            g = [[rng.randrange(9) for _ in range(2)] for _ in range(2)]
            if det_mod(g, 9) % 3 != 1:
                continue
            g1, h = strong_approx_decompose(g, 3, 2)
            assert det_mod(g1, 9) == 1
            assert all((g1[i][j] + 3 * h[i][j]) % 9 == g[i][j] for i in range(2) for j in range(2))
            done += 1
