import dataclasses
import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from autcoh.identity import (
    DualMatrix,
    cob_residual,
    cob_sets,
    cycle_sum,
    nilpotent_matrix,
    product_values,
    prop_identity_residuals,
    random_values,
    t1_set,
    trace_identity_value,
    verify_inflation_cob,
    verify_prop_identity,
    verify_trace_identity,
)
from autcoh.structures import Partition, build_index_set, encode_coords, enumerate_group, mul

small_values = lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)


class TestDualMatrix:
    def test_det_matches_cofactor(self):
        rng = random.Random(2)
        for n in range(2, 6):
            m = nilpotent_matrix(random_values(n, rng, 16))
            full = DualMatrix.identity(n) + m
            assert full.det() == full.det_cofactor()

    @pytest.mark.parametrize("n", [2, 3])
    def test_det_matches_sympy(self, n):
        x = sympy.Symbol("x")
        rng = random.Random(n)
        vals = random_values(n, rng, 8)
        sym = sympy.Matrix(n, n, lambda i, j: (1 if i == j else 0) + (vals[i][j] if i > j else (x * vals[i][j] if i < j else 0)))
        poly = sympy.Poly(sympy.expand(sym.det()), x)
        # truncate at X^2 = 0
        coeffs = {k[0]: int(v) for k, v in zip(poly.monoms(), poly.coeffs())}
        d = (DualMatrix.identity(n) + nilpotent_matrix(vals)).det()
        assert (d.u, d.v) == (coeffs.get(0, 0), coeffs.get(1, 0))

    def test_cycle_sum_n3(self):
        rng = random.Random(4)
        for _ in range(20):
            v = [[rng.randrange(-9, 10) if i != j else 0 for j in range(3)] for i in range(3)]
            direct = -v[1][0] * v[0][1] - v[2][0] * v[0][2] - v[2][1] * v[1][2] + v[2][1] * v[1][0] * v[0][2]
            assert cycle_sum(v) == direct


class TestPropIdentity:
    def test_zero_assignment(self):
        z = [[0, 0], [0, 0]]
        assert prop_identity_residuals(z, z).ok

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_random(self, n):
        assert verify_prop_identity(n, seed=n, trials=100 if n < 5 else 30).ok

    def test_over_modulus(self):
        assert verify_prop_identity(4, seed=1, trials=20, modulus=3**6).ok

    def test_n_range(self):
        with pytest.raises(ValueError):
            verify_prop_identity(7)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(small_values(n), small_values(n))))
    def test_property(self, ab):
        a, b = ab
        assert prop_identity_residuals(a, b).ok


class TestTraceIdentity:
    def test_zero(self):
        z = [[0] * 3 for _ in range(3)]
        assert trace_identity_value(z, z) == 0

    def test_symbolic_n2(self):
        a12, a21, b12, b21 = sympy.symbols("a12 a21 b12 b21")
        expr = a12 * b21 + a21 * b12 - (a21 + b21) * (a12 + b12) + a21 * a12 + b21 * b12
        assert sympy.expand(expr) == 0
        # and the library's c_ij for n = 2 are the ones in the expression
        rng = random.Random(0)
        for _ in range(20):
            a, b = random_values(2, rng), random_values(2, rng)
            c = product_values(a, b)
            assert c[1][0] == a[1][0] + b[1][0] and c[0][1] == a[0][1] + b[0][1]
            assert trace_identity_value(a, b) == 0

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_random(self, n):
        rng = random.Random(100 + n)
        assert all(verify_trace_identity(n, (random_values(n, rng), random_values(n, rng))) for _ in range(200))

    def test_not_an_identity_without_cross_terms(self):
        rng = random.Random(3)
        a, b = random_values(3, rng, 10), random_values(3, rng, 10)
        c = product_values(a, b)
        assert cycle_sum(c) - cycle_sum(a) - cycle_sum(b) != 0

    def test_shape_check(self):
        with pytest.raises(ValueError):
            trace_identity_value([[0, 0], [0, 0]], [[0]])


class TestInflationCob:
    def test_vacuous_111(self):
        assert t1_set(Partition.parse("1,1,1"), 3) == []
        assert verify_inflation_cob(Partition.parse("1,1,1"), 3)["vacuous"]

    @pytest.mark.parametrize("lam,p", [("2,1", 3), ("2,1", 5)])
    def test_exhaustive(self, lam, p):
        r = verify_inflation_cob(Partition.parse(lam), p)
        assert not r["vacuous"] and r["failures"] == 0 and r["pairs"] == p ** (2 * 3)

    @pytest.mark.parametrize("p", [3, 5])
    def test_sampled_321(self, p):
        part = Partition.parse("3,2,1")
        for t0 in t1_set(part, p):
            r = verify_inflation_cob(part, p, t0=t0, samples=100, seed=p)
            assert r["failures"] == 0

    def test_t0_term_is_needed(self):
        part, p = Partition.parse("2,1"), 3
        t0 = t1_set(part, p)[0]
        sets = dataclasses.replace(cob_sets(part, p, t0), phi_t0=None)
        index = build_index_set(part, p)
        elems = enumerate_group("P", part, p)
        bad = 0
        for g, h in itertools.product(elems, repeat=2):
            a, b, c = encode_coords(g, index), encode_coords(h, index), encode_coords(mul(g, h), index)
            bad += cob_residual(sets, a, b, c, p) != 0
        assert bad > 0
