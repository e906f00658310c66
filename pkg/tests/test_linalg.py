import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autcoh.linalg import (
    Echelon,
    NoSolution,
    ResidueInt,
    fp_inverse,
    fp_rank,
    fp_solve,
    from_digits,
    howell_form,
    howell_solve,
    padic_digits,
    valuation,
)


class TestDigits:
    def test_seventeen(self):
        assert padic_digits(17, 3, 3) == [2, 2, 1]

    def test_zero(self):
        assert padic_digits(0, 5, 4) == [0, 0, 0, 0]

    def test_max_element(self):
        assert padic_digits(3**4 - 1, 3, 4) == [2, 2, 2, 2]

    def test_residue_input(self):
        assert padic_digits(ResidueInt(17, 3, 3)) == [2, 2, 1]

    @given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.data())
    def test_round_trip(self, p, e, data):
        x = data.draw(st.integers(0, p**e - 1))
        digits = padic_digits(x, p, e)
        assert len(digits) == e and all(0 <= d < p for d in digits)
        assert from_digits(digits, p) == x


class TestResidue:
    def test_unit_inverse(self):
        x = ResidueInt(2, 3, 2)
        assert (x * x.inverse()).value == 1

    def test_nonunit_has_valuation(self):
        assert ResidueInt(18, 3, 3).valuation() == 2
        assert valuation(0, 3, 3) == 3

    def test_nonunit_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            ResidueInt(3, 3, 2).inverse()


class TestFpSolve:
    def test_identity_rank(self):
        eye = np.eye(4, dtype=np.int64)
        assert fp_solve(eye, 4, 3) == 4
        assert fp_solve(eye, 4, 3, mode="kernel").shape[0] == 0

    def test_proportional_rows(self):
        m = np.array([[1, 1], [2, 2]])
        assert fp_rank(m, 3) == 1
        assert fp_solve(m, 2, 3, mode="kernel").shape[0] == 1

    def test_z3_cocycle_system(self):
        # unknowns c(a, b), a, b in Z/3; the cocycle identity gives a 9-variable system
        n = 3
        rows = []
        for a, b, c in itertools.product(range(n), repeat=3):
            r = np.zeros(n * n, dtype=np.int64)
            for (x, y), s in (((b, c), 1), ((a, (b + c) % n), 1), (((a + b) % n, c), -1), ((a, b), -1)):
                r[x * n + y] += s
            rows.append(r % 3)
        dim = fp_solve(np.array(rows), 9, 3, mode="kernel").shape[0]
        # exhaustive oracle over all 3^9 functions
        brute = 0
        for vals in itertools.product(range(3), repeat=9):
            f = np.array(vals).reshape(3, 3)
            if all(
                (f[b, c] + f[a, (b + c) % 3] - f[(a + b) % 3, c] - f[a, b]) % 3 == 0
                for a, b, c in itertools.product(range(3), repeat=3)
            ):
                brute += 1
        assert 3**dim == brute
        assert dim == 3

    def test_solve_consistent_and_inconsistent(self):
        aug = np.array([[1, 1, 2], [0, 1, 1]])
        x = fp_solve(aug, 3, 5, mode="solve", rhs_column=True)
        assert ((aug[:, :2] @ x - aug[:, 2]) % 5 == 0).all()
        bad = np.array([[1, 1, 1], [1, 1, 2]])
        assert fp_solve(bad, 3, 5, mode="solve", rhs_column=True) is None

    def test_streamed_chunks_match_array(self):
        rng = np.random.default_rng(1)
        m = rng.integers(0, 7, size=(40, 12))
        assert fp_solve(iter([m[:13], m[13:30], m[30:]]), 12, 7) == fp_rank(m, 7)

    def test_inverse(self):
        m = np.array([[1, 2], [3, 4]])
        inv = fp_inverse(m, 5)
        assert ((m @ inv) % 5 == np.eye(2, dtype=np.int64)).all()

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(1, 6), st.data())
    def test_rank_nullity(self, p, r, c, data):
        vals = data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
        m = np.array(vals, dtype=np.int64).reshape(r, c)
        ker = fp_solve(m, c, p, mode="kernel")
        assert fp_rank(m, p) + ker.shape[0] == c
        assert not ((m @ ker.T) % p).any()

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 5), st.data())
    def test_rank_matches_sympy(self, r, c, data):
        from sympy import GF
        from sympy.polys.matrices import DomainMatrix

        vals = data.draw(st.lists(st.integers(0, 2), min_size=r * c, max_size=r * c))
        m = np.array(vals, dtype=np.int64).reshape(r, c)
        dm = DomainMatrix([[GF(3)(int(x)) for x in row] for row in m], (r, c), GF(3))
        assert fp_rank(m, 3) == dm.rank()


class TestEchelon:
    def test_incremental_rank(self):
        e = Echelon(3, 5)
        assert e.add(np.array([[1, 2, 3]])) == 1
        assert e.add(np.array([[2, 4, 6]])) == 0
        assert e.add(np.array([[0, 1, 0]])) == 1
        assert e.contains(np.array([[1, 3, 3]]))[0]


class TestHowell:
    def test_three_x_six_mod_nine(self):
        sol = howell_solve(np.array([[3]]), np.array([6]), 3, 2)
        assert sol.enumerate() == [(2,), (5,), (8,)]

    def test_unit_coefficient(self):
        assert howell_solve(np.array([[2]]), np.array([1]), 3, 2).enumerate() == [(5,)]

    def test_two_equations(self):
        a = np.array([[1, 1], [0, 3]])
        b = np.array([1, 3])
        sol = howell_solve(a, b, 3, 2)
        brute = sorted(
            (x, y) for x in range(9) for y in range(9) if (x + y) % 9 == 1 and (3 * y) % 9 == 3
        )
        assert sol.enumerate() == brute
        assert sol.count() == len(brute) == 3

    def test_no_solution(self):
        with pytest.raises(NoSolution):
            howell_solve(np.array([[3]]), np.array([1]), 3, 2)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.data())
    def test_solution_count_exhaustive(self, r, c, data):
        p, e = 3, 2
        q = p**e
        a = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))).reshape(r, c)
        b = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=r, max_size=r)))
        brute = [x for x in itertools.product(range(q), repeat=c) if not ((a @ np.array(x) - b) % q).any()]
        try:
            sol = howell_solve(a, b, p, e)
        except NoSolution:
            assert brute == []
            return
        assert sol.count() == len(brute)
        assert sol.enumerate() == sorted(brute)

    def test_log_order_of_span(self):
        form = howell_form(np.array([[3, 0], [0, 1]]), 3, 2)
        assert form.log_order() == 3  # 3 * 9 elements
