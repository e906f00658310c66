import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autcoh.structures import (
    AbelianElement,
    AutMatrix,
    Coordinate,
    MalformedMatrix,
    Partition,
    act,
    aut_order,
    build_index_set,
    decode_coords,
    encode_coords,
    enumerate_group,
    inv,
    is_automorphism,
    mul,
    phi_map,
    random_aut,
    random_sylow,
    teichmuller_units,
)

P21 = Partition.parse("2,1")


class TestPartition:
    def test_parse_and_text(self):
        part = Partition.parse("2,1,1")
        assert part.parts == (2, 1) and part.mults == (1, 2)
        assert part.text() == "2,1,1" and part.rho == 3

    def test_rejects_increasing(self):
        with pytest.raises(ValueError):
            Partition.parse("1,2")

    def test_gaps(self):
        assert Partition.parse("3,1").has_gap()
        assert Partition.parse("2").has_gap()  # lambda_k >= 2 counts as a gap to 0
        assert not Partition.parse("2,1").has_gap()


class TestIndexSet:
    @pytest.mark.parametrize("lam,size,t", [("2,1", 3, 2), ("2,1,1", 6, 3), ("1,1,1", 3, 2)])
    def test_sizes(self, lam, size, t):
        index = build_index_set(Partition.parse(lam), 3)
        assert len(index) == size
        assert len(index.t_set) == t

    def test_modified_order_puts_t_on_top(self):
        index = build_index_set(Partition.parse("2,1,1"), 3)
        top = index.mto_order[-len(index.t_set):]
        assert set(top) == set(index.t_set)


class TestAutMatrix:
    def test_identity_is_automorphism(self):
        assert is_automorphism(AutMatrix.identity(P21, 3))

    def test_upper_block_must_be_divisible(self):
        with pytest.raises(MalformedMatrix):
            AutMatrix(P21, 3, ((1, 1), (0, 1)))

    def test_lower_block_arbitrary(self):
        g = AutMatrix(P21, 3, ((1, 3), (2, 1)))
        assert is_automorphism(g)
        assert mul(g, inv(g)) == AutMatrix.identity(P21, 3)

    def test_identity_multiplication(self):
        g = AutMatrix(P21, 3, ((4, 3), (2, 1)))
        assert mul(g, AutMatrix.identity(P21, 3)) == g

    def test_elementary_add(self):
        part = Partition.parse("1,1")
        e1 = AutMatrix.elementary(part, 5, 2, 1, 1)
        assert mul(e1, e1) == AutMatrix.elementary(part, 5, 2, 1, 2)

    def test_coordinate_law_21(self):
        # [[1+3a, 3b], [c, 1]] composes with c additive and a picking up b c'
        p = 3
        for a, b, c, a2, b2, c2 in [(1, 2, 1, 2, 1, 2), (0, 1, 1, 0, 0, 1), (2, 2, 2, 1, 1, 1)]:
            g = AutMatrix(P21, p, ((1 + 3 * a, 3 * b), (c, 1)))
            h = AutMatrix(P21, p, ((1 + 3 * a2, 3 * b2), (c2, 1)))
            prod = mul(g, h)
            assert prod.entries[1][0] == (c + c2) % 3
            assert prod.entries[0][0] == (1 + 3 * (a + a2 + b * c2)) % 9


class TestPhi:
    def test_identity(self):
        assert phi_map(AutMatrix.identity(P21, 3)) == (1, 1)

    def test_diagonal(self):
        g = AutMatrix.diagonal(P21, 3, [2, 1])
        assert phi_map(g) == (2, 1)

    def test_elementary(self):
        part = Partition.parse("1,1")
        assert phi_map(AutMatrix.elementary(part, 5, 2, 1, 3)) == (1,)


class TestCoordinates:
    def test_identity_all_zero(self):
        index = build_index_set(P21, 3)
        assert set(encode_coords(AutMatrix.identity(P21, 3), index).values()) == {0}

    def test_matrix_form(self):
        g = AutMatrix(P21, 3, ((1 + 3 * 2, 3 * 1), (2, 1)))
        coords = encode_coords(g)
        assert sorted(coords.values()) == [1, 2, 2]
        assert coords[Coordinate(1, 1, 1, 1, 1)] == 2

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from(["2,1", "2,1,1", "1,1,1", "3,1"]), st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
    def test_round_trip(self, lam, p, seed):
        part = Partition.parse(lam)
        g = random_sylow(part, p, random.Random(seed))
        assert decode_coords(encode_coords(g), part, p) == g


class TestCounts:
    def test_orders_21(self):
        assert len(enumerate_group("P", P21, 3)) == 27
        assert len(enumerate_group("G", P21, 3)) == 108 == aut_order(P21, 3)

    def test_diagonal_units(self):
        units = teichmuller_units(3, 2)
        assert len(units) == 2 and all(pow(u, 2, 9) == 1 for u in units)

    @pytest.mark.parametrize("lam,p", [("1,1", 2), ("1,1", 3), ("2", 3), ("2,1", 2)])
    def test_aut_order_matches_enumeration(self, lam, p):
        part = Partition.parse(lam)
        assert len(enumerate_group("G", part, p)) == aut_order(part, p)


class TestAction:
    def test_identity(self):
        a = AbelianElement(P21, 3, (4, 2))
        assert act(AutMatrix.identity(P21, 3), a) == a

    def test_scalar(self):
        part = Partition.parse("1")
        assert act(AutMatrix.diagonal(part, 3, [2]), AbelianElement(part, 3, (1,))).comps == (2,)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**6))
    def test_action_axiom(self, seed):
        rng = random.Random(seed)
        part = Partition.parse("2,1,1")
        g, h = random_aut(part, 3, rng), random_aut(part, 3, rng)
        a = AbelianElement(part, 3, tuple(rng.randrange(9) for _ in range(3)))
        assert act(mul(g, h), a) == act(g, act(h, a))
