import random
from fractions import Fraction

import pytest

from toricwonder import (
    Arrangement,
    EmptySubset,
    InfiniteIndex,
    Layer,
    NotComplete,
    NotPrimitive,
    WeightedCharacter,
    ZeroVector,
    build_poset,
    complete_subsets,
    is_complete,
    layer_components,
    layer_from_complete_set,
    localized,
    normalize,
    point_layer,
)
from oracles import random_arrangement

F = Fraction


class TestNormalize:
    def test_doubled_square(self, doubled_square):
        arr, _, _ = doubled_square
        got = {(ch.vector, ch.value) for ch in arr.characters}
        assert got == {
            ((1, 0), F(0)),
            ((1, 0), F(1, 2)),
            ((0, 1), F(0)),
            ((0, 1), F(1, 2)),
            ((1, 1), F(0)),
            ((1, -1), F(0)),
        }
        assert len(arr.characters) == 6

    def test_primitive_unchanged(self):
        raw = [((1, 1), F(0)), ((1, -1), F(1, 2))]
        arr = normalize(2, raw)
        assert [(c.vector, c.value) for c in arr.characters] == raw

    def test_triple_split(self):
        arr = normalize(1, [((3,), F(0))])
        assert {(c.vector, c.value) for c in arr.characters} == {
            ((1,), F(0)),
            ((1,), F(1, 3)),
            ((1,), F(2, 3)),
        }

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            normalize(2, [((0, 0), F(0))])

    def test_validation(self):
        with pytest.raises(NotPrimitive):
            Arrangement(2, (WeightedCharacter((2, 0), F(0)),))
        with pytest.raises(InfiniteIndex):
            Arrangement(2, (WeightedCharacter((1, 0), F(0)),))


class TestLayerComponents:
    def test_two_points(self, two_lines):
        arr, _, _ = two_lines
        comps = layer_components(arr, (0, 1))
        assert len(comps) == 2
        coords = {c.coordinates for c in comps}
        assert coords == {(F(0), F(0)), (F(1, 2), F(1, 2))}

    def test_single_character(self, two_lines):
        arr, _, _ = two_lines
        comps = layer_components(arr, (0,))
        assert len(comps) == 1 and comps[0].dim == 1

    def test_point_p3(self, doubled_square):
        arr, _, _ = doubled_square
        idx_a = next(
            i for i, c in enumerate(arr.characters)
            if c.vector == (1, 0) and c.value == 0
        )
        idx_b = next(
            i for i, c in enumerate(arr.characters)
            if c.vector == (0, 1) and c.value == F(1, 2)
        )
        comps = layer_components(arr, (idx_a, idx_b))
        assert len(comps) == 1
        assert comps[0].coordinates == (F(0), F(1, 2))

    def test_empty_subset(self, two_lines):
        arr, _, _ = two_lines
        with pytest.raises(EmptySubset):
            layer_components(arr, ())


class TestPoset:
    def test_two_lines_layers(self, two_lines):
        _, poset, _ = two_lines
        dims = sorted(l.dim for l in poset.layers)
        assert dims == [0, 0, 1, 1]

    def test_doubled_square_layers(self, doubled_square):
        _, poset, _ = doubled_square
        dims = sorted(l.dim for l in poset.layers)
        assert dims == [0] * 4 + [1] * 6

    def test_rank_one(self):
        arr = normalize(1, [((1,), F(0))])
        assert len(build_poset(arr).layers) == 1

    def test_points_canonical_order(self, doubled_square):
        _, poset, _ = doubled_square
        coords = [p.coordinates for p in poset.points]
        assert coords == sorted(coords)
        assert set(coords) == {
            (F(0), F(0)),
            (F(1, 2), F(1, 2)),
            (F(0), F(1, 2)),
            (F(1, 2), F(0)),
        }

    def test_two_lines_points(self, two_lines):
        _, poset, _ = two_lines
        assert [p.coordinates for p in poset.points] == [
            (F(0), F(0)),
            (F(1, 2), F(1, 2)),
        ]

    def test_hasse_edges(self, two_lines):
        _, poset, _ = two_lines
        edges = poset.hasse_edges()
        # each point sits below both hypersurfaces
        assert len(edges) == 4
        assert all(a.dim == 0 and b.dim == 1 for a, b in edges)


class TestLocalized:
    def test_p1_doubled_square(self, doubled_square):
        arr, _, _ = doubled_square
        p1 = point_layer(arr, (0, 0))
        vecs = {arr.characters[i].vector for i in localized(arr, p1)}
        assert vecs == {(1, 0), (0, 1), (1, 1), (1, -1)}
        assert len(localized(arr, p1)) == 4

    def test_p3_doubled_square(self, doubled_square):
        arr, _, _ = doubled_square
        p3 = point_layer(arr, (0, F(1, 2)))
        got = {
            (arr.characters[i].vector, arr.characters[i].value)
            for i in localized(arr, p3)
        }
        assert got == {((1, 0), F(0)), ((0, 1), F(1, 2))}

    def test_all_through_origin_two_lines(self, two_lines):
        arr, _, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        assert localized(arr, p1) == (0, 1)


class TestFlats:
    def test_two_lines_flats(self, two_lines):
        arr, _, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        flats = complete_subsets(arr, p1)
        assert flats == [(), (0,), (1,), (0, 1)]

    def test_single_vector(self):
        arr = normalize(1, [((1,), F(0))])
        p = point_layer(arr, (0,))
        assert complete_subsets(arr, p) == [(), (0,)]

    def test_doubled_square_p1_six_flats(self, doubled_square):
        arr, _, _ = doubled_square
        p1 = point_layer(arr, (0, 0))
        flats = complete_subsets(arr, p1)
        assert len(flats) == 6
        sizes = sorted(len(f) for f in flats)
        assert sizes == [0, 1, 1, 1, 1, 4]

    def test_is_complete(self, two_lines):
        arr, _, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        assert is_complete(arr, p1, (0,))
        assert is_complete(arr, p1, (0, 1))
        assert not is_complete(arr, p1, (2,))


class TestLayerFromCompleteSet:
    def test_hypersurface(self, two_lines):
        arr, poset, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        layer = layer_from_complete_set(arr, p1, (0,))
        assert layer.lattice.basis == ((1, 1),)
        assert layer.values == (F(0),)
        assert layer in poset

    def test_empty_rejected(self, two_lines):
        arr, _, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        with pytest.raises(NotComplete):
            layer_from_complete_set(arr, p1, ())

    def test_full_flat_is_point(self, two_lines):
        arr, _, _ = two_lines
        p1 = point_layer(arr, (0, 0))
        assert layer_from_complete_set(arr, p1, (0, 1)) == p1


class TestLayerBasics:
    def test_equality_ignores_support(self, two_lines):
        arr, poset, _ = two_lines
        a = poset.layers[0]
        b = Layer(a.lattice, a.values, ())
        assert a == b and hash(a) == hash(b)

    def test_value_of(self, two_lines):
        _, poset, _ = two_lines
        h = next(l for l in poset.layers if l.lattice.basis == ((1, 1),))
        assert h.value_of((1, 1)) == 0
        assert h.value_of((2, 2)) == 0
        assert h.value_of((1, 0)) is None

    def test_containment_random(self):
        rng = random.Random(21)
        for _ in range(15):
            arr = random_arrangement(rng)
            poset = build_poset(arr)
            for a in poset.layers:
                assert a.contains(a)
            for p in poset.points:
                for l in poset.layers:
                    if l.contains(p):
                        assert set(l.support) <= set(p.support)
