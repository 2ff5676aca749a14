"""Integral and complex decompositions of character sets.

A partition of a vector set is a complex decomposition when block ranks
add up, and an integral decomposition when additionally the direct sum of
the block saturations is the saturation of the whole set (index one).
The finest integral decomposition exists and is unique; its blocks are
the irreducible pieces underlying the building set of layers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidBuildingSet, InvalidPartition, NotInPoset
from .arrangement import Arrangement, Layer, LayerPoset, layer_from_complete_set
from .lattices import Sublattice, saturate

Partition = tuple[tuple[int, ...], ...]


def _canonical_partition(blocks) -> Partition:
    blocks = tuple(tuple(sorted(b)) for b in blocks)
    return tuple(sorted(blocks, key=lambda b: b[0]))


def _check_partition(n: int, blocks: Partition):
    flat = [i for b in blocks for i in b]
    if sorted(flat) != list(range(n)) or any(not b for b in blocks):
        raise InvalidPartition(f"{blocks} is not a partition of 0..{n - 1}")


def _rank(vectors) -> int:
    if not vectors:
        return 0
    return Sublattice.from_rows(len(vectors[0]), vectors).rank


def is_complex_decomposition(vectors, blocks) -> bool:
    """True iff the block spans are rationally independent."""
    blocks = _canonical_partition(blocks)
    _check_partition(len(vectors), blocks)
    total = sum(_rank([vectors[i] for i in b]) for b in blocks)
    return total == _rank(vectors)


def is_integral_decomposition(vectors, blocks) -> bool:
    """True iff the block saturations direct-sum to the saturation of the whole."""
    blocks = _canonical_partition(blocks)
    _check_partition(len(vectors), blocks)
    n = len(vectors[0])
    sats = [saturate(Sublattice.from_rows(n, [vectors[i] for i in b])) for b in blocks]
    if sum(s.rank for s in sats) != _rank(vectors):
        return False
    joint = Sublattice.from_rows(n, [row for s in sats for row in s.basis])
    return joint == saturate(Sublattice.from_rows(n, vectors))


def connected_components(vectors) -> Partition:
    """Components of the linear matroid: the circuit-connectivity classes."""
    n = len(vectors)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    independent = {(): True}
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            indep = _rank([vectors[i] for i in subset]) == size
            independent[subset] = indep
            if indep:
                continue
            # circuit: dependent with all maximal proper subsets independent
            if all(
                independent[subset[:k] + subset[k + 1 :]] for k in range(size)
            ):
                for i in subset[1:]:
                    union(subset[0], i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return _canonical_partition(groups.values())


def _set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [head]] + part[i + 1 :]
        yield [[head]] + part


def finest_integral_decomposition(vectors) -> Partition:
    """The unique finest partition into irreducible blocks.

    Blocks of any integral decomposition are unions of matroid components,
    so the search runs over coarsenings of the component partition.
    """
    if not vectors:
        raise InvalidPartition("cannot decompose an empty set")
    comps = connected_components(vectors)
    best: Partition | None = None
    for grouping in _set_partitions(list(range(len(comps)))):
        blocks = _canonical_partition(
            tuple(i for c in group for i in comps[c]) for group in grouping
        )
        if best is not None and len(blocks) <= len(best):
            continue
        if is_integral_decomposition(vectors, blocks):
            best = blocks
    assert best is not None  # the trivial partition always qualifies
    return best


def is_z_irreducible(vectors) -> bool:
    return len(finest_integral_decomposition(vectors)) == 1


def is_c_irreducible(vectors) -> bool:
    if not vectors:
        raise InvalidPartition("cannot decompose an empty set")
    return len(connected_components(vectors)) == 1


@dataclass(frozen=True)
class BuildingSet:
    """A family of layers decomposing every localized flat."""

    members: tuple[Layer, ...]
    flavor: str  # "irreducible" | "custom"

    def members_through(self, p: Layer) -> list[Layer]:
        return [m for m in self.members if m.contains(p)]

    def __contains__(self, layer: Layer) -> bool:
        return any(m == layer for m in self.members)


def irreducible_layers(poset: LayerPoset) -> BuildingSet:
    """All layers whose localized character set is Z-irreducible."""
    arr = poset.arrangement
    members = tuple(
        layer
        for layer in poset.layers
        if is_z_irreducible([arr.characters[i].vector for i in layer.support])
    )
    return BuildingSet(members, "irreducible")


def custom_building_set(poset: LayerPoset, members) -> BuildingSet:
    """A user-chosen building set; the defining property is validated."""
    from .arrangement import complete_subsets  # local to avoid cycle noise

    arr = poset.arrangement
    members = tuple(sorted(set(members), key=Layer.key))
    for m in members:
        if m not in poset:
            raise NotInPoset(f"{m} is not a layer of the arrangement")
    bs = BuildingSet(members, "custom")
    for p in poset.points:
        local = [m for m in members if m.contains(p)]
        for flat in complete_subsets(arr, p):
            if not flat:
                continue
            inside = [
                set(m.support) for m in local if set(m.support) <= set(flat)
            ]
            maximal = [
                s for s in inside if not any(s < t for t in inside)
            ]
            blocks = {tuple(sorted(s)) for s in maximal}
            flat_vectors = [arr.characters[i].vector for i in flat]
            pos = {i: k for k, i in enumerate(flat)}
            if sorted(i for b in blocks for i in b) != sorted(flat):
                raise InvalidBuildingSet(
                    f"flat {flat} at point {p.values} is not covered"
                )
            index_blocks = tuple(tuple(pos[i] for i in b) for b in blocks)
            if not is_integral_decomposition(flat_vectors, index_blocks):
                raise InvalidBuildingSet(
                    f"flat {flat} at point {p.values} is not decomposed"
                )
    return bs


def factors(poset: LayerPoset, layer: Layer, building: BuildingSet) -> list[Layer]:
    """The building-set factors of a layer; their intersection is the layer."""
    if layer not in poset:
        raise NotInPoset(f"{layer} is not a layer of the arrangement")
    if layer in building:
        return [layer]
    above = [m for m in building.members if m.contains(layer)]
    # factors are the minimal members above the layer, i.e. the ones with
    # maximal localized support inside the layer's support
    out = [
        m
        for m in above
        if not any(o is not m and set(m.support) < set(o.support) for o in above)
    ]
    return sorted(out, key=Layer.key)
