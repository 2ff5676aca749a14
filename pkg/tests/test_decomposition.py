import random
from fractions import Fraction

import pytest

from toricwonder import (
    InvalidBuildingSet,
    InvalidPartition,
    NotInPoset,
    connected_components,
    custom_building_set,
    factors,
    finest_integral_decomposition,
    irreducible_layers,
    is_c_irreducible,
    is_complex_decomposition,
    is_integral_decomposition,
    is_z_irreducible,
    point_layer,
)
from oracles import oracle_finest, random_vectors

F = Fraction


class TestPredicates:
    def test_index_two_not_integral(self):
        assert not is_integral_decomposition(
            [(1, 1), (1, -1)], (((0,), (1,)))
        )

    def test_standard_basis_integral(self):
        assert is_integral_decomposition([(1, 0), (0, 1)], ((0,), (1,)))

    def test_trivial_partition(self):
        assert is_integral_decomposition([(1, 1), (1, -1)], ((0, 1),))
        assert is_complex_decomposition([(1, 1), (1, -1)], ((0, 1),))

    def test_complex_splits_index_two(self):
        assert is_complex_decomposition([(1, 1), (1, -1)], ((0,), (1,)))

    def test_connected_triple_no_split(self):
        vecs = [(1, 0), (0, 1), (1, 1)]
        for blocks in (((0,), (1, 2)), ((1,), (0, 2)), ((2,), (0, 1))):
            assert not is_complex_decomposition(vecs, blocks)

    def test_bad_partition(self):
        with pytest.raises(InvalidPartition):
            is_integral_decomposition([(1, 0), (0, 1)], ((0,),))


class TestConnectedComponents:
    def test_index_two_pair_disconnected(self):
        # independent vectors share no circuit, despite Z-irreducibility
        assert connected_components([(1, 1), (1, -1)]) == ((0,), (1,))

    def test_orthogonal_split(self):
        assert connected_components([(1, 0), (0, 1)]) == ((0,), (1,))

    def test_triple_connected(self):
        assert connected_components([(1, 0), (0, 1), (1, 1)]) == ((0, 1, 2),)


class TestFinest:
    def test_index_two_block(self):
        assert finest_integral_decomposition([(1, 1), (1, -1)]) == ((0, 1),)

    def test_orthogonal(self):
        assert finest_integral_decomposition([(1, 0), (0, 1)]) == (
            (0,),
            (1,),
        )

    def test_empty_rejected(self):
        with pytest.raises(InvalidPartition):
            finest_integral_decomposition([])

    def test_oracle_small_sweep(self):
        rng = random.Random(101)
        for _ in range(60):
            vecs = random_vectors(rng)
            got = finest_integral_decomposition(vecs)
            want, unique = oracle_finest(vecs)
            assert got == want
            assert unique


class TestIrreducibility:
    def test_index_two_pair(self):
        assert is_z_irreducible([(1, 1), (1, -1)])
        assert not is_c_irreducible([(1, 1), (1, -1)])

    def test_single_vector(self):
        assert is_z_irreducible([(1, 1)])
        assert is_c_irreducible([(1, 1)])

    def test_orthogonal_both_reducible(self):
        assert not is_z_irreducible([(1, 0), (0, 1)])
        assert not is_c_irreducible([(1, 0), (0, 1)])


class TestBuildingSets:
    def test_two_lines_members(self, two_lines):
        _, poset, building = two_lines
        assert len(building.members) == 4
        dims = sorted(m.dim for m in building.members)
        assert dims == [0, 0, 1, 1]

    def test_doubled_square_members(self, doubled_square):
        arr, poset, building = doubled_square
        assert len(building.members) == 8
        point_members = [m for m in building.members if m.dim == 0]
        coords = {m.coordinates for m in point_members}
        assert coords == {(F(0), F(0)), (F(1, 2), F(1, 2))}

    def test_hypersurfaces_always_members(self, doubled_square):
        _, poset, building = doubled_square
        for layer in poset.layers:
            if layer.dim == poset.arrangement.rank - 1:
                assert layer in building

    def test_custom_full_poset_valid(self, two_lines):
        _, poset, _ = two_lines
        bs = custom_building_set(poset, poset.layers)
        assert set(bs.members) == set(poset.layers)

    def test_custom_missing_hypersurface_invalid(self, two_lines):
        _, poset, building = two_lines
        smaller = [m for m in building.members if m.dim == 0]
        with pytest.raises(InvalidBuildingSet):
            custom_building_set(poset, smaller)

    def test_custom_rejects_foreign_layer(self, two_lines, doubled_square):
        _, poset32, _ = two_lines
        _, poset23, _ = doubled_square
        foreign = next(l for l in poset23.layers if l not in poset32)
        with pytest.raises(NotInPoset):
            custom_building_set(poset32, [foreign])


class TestFactors:
    def test_p3_splits(self, doubled_square):
        arr, poset, building = doubled_square
        p3 = point_layer(arr, (0, F(1, 2)))
        fs = factors(poset, p3, building)
        assert len(fs) == 2
        got = {
            (arr.characters[m.support[0]].vector, arr.characters[m.support[0]].value)
            for m in fs
        }
        assert got == {((1, 0), F(0)), ((0, 1), F(1, 2))}

    def test_member_is_own_factor(self, two_lines):
        _, poset, building = two_lines
        for m in building.members:
            assert factors(poset, m, building) == [m]

    def test_p1_irreducible_two_lines(self, two_lines):
        arr, poset, building = two_lines
        p1 = point_layer(arr, (0, 0))
        assert factors(poset, p1, building) == [p1]

    def test_intersection_recovers_layer(self, doubled_square):
        from toricwonder import intersection_components

        arr, poset, building = doubled_square
        for layer in poset.layers:
            fs = factors(poset, layer, building)
            comps = intersection_components(arr, fs)
            assert layer in comps
