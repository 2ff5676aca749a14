"""Toric arrangements with torsion constants and their layer posets.

A hypersurface is a pair (lambda, r): a primitive integer character and a
fraction r in [0,1) standing for the constant exp(2*pi*i*r).  A layer is
a connected component of an intersection of hypersurfaces, encoded by a
saturated sublattice together with the torsion values the lattice basis
takes on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import (
    EmptySubset,
    InfiniteIndex,
    NotAPoint,
    NotComplete,
    NotPrimitive,
    ZeroVector,
)
from .lattices import (
    Matrix,
    Sublattice,
    Vector,
    identity_matrix,
    is_primitive,
    mod1,
    saturate,
    solve_torsion_system,
)


@dataclass(frozen=True)
class WeightedCharacter:
    """A primitive character with a root-of-unity constant exp(2*pi*i*value)."""

    vector: Vector
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))
        object.__setattr__(self, "value", mod1(Fraction(self.value)))


@dataclass(frozen=True)
class Arrangement:
    rank: int
    characters: tuple[WeightedCharacter, ...]

    def __post_init__(self):
        seen = set()
        for ch in self.characters:
            if len(ch.vector) != self.rank:
                raise ZeroVector(
                    f"character {ch.vector} does not have length {self.rank}"
                )
            if not any(ch.vector):
                raise ZeroVector("zero character is not allowed")
            if not is_primitive(ch.vector):
                raise NotPrimitive(f"character {ch.vector} is not primitive")
            if ch in seen:
                raise ValueError(f"duplicate character {ch}")
            seen.add(ch)
        span = Sublattice.from_rows(self.rank, [ch.vector for ch in self.characters])
        if span.rank < self.rank:
            raise InfiniteIndex(
                "the characters span a rank-%d sublattice of Z^%d; restrict the "
                "ambient lattice to the intersection with their rational span "
                "and re-submit" % (span.rank, self.rank)
            )

    @property
    def vectors(self) -> Matrix:
        return tuple(ch.vector for ch in self.characters)


def normalize(rank: int, raw) -> Arrangement:
    """Split non-primitive characters into their primitive components.

    A pair (v, r) with gcd d > 1 becomes the d pairs (v/d, (r+i)/d), i.e.
    the connected components of the original hypersurface.  Duplicates are
    merged, keeping first-occurrence order.
    """
    out: list[WeightedCharacter] = []
    seen = set()
    for vec, r in raw:
        vec = tuple(int(x) for x in vec)
        if not any(vec):
            raise ZeroVector("zero character is not allowed")
        d = 0
        for x in vec:
            d = gcd(d, x)
        prim = tuple(x // d for x in vec)
        r = mod1(Fraction(r))
        for i in range(d):
            ch = WeightedCharacter(prim, (r + i) / d)
            if ch not in seen:
                seen.add(ch)
                out.append(ch)
    return Arrangement(rank, tuple(out))


@dataclass(frozen=True, eq=False)
class Layer:
    """A layer: saturated sublattice plus torsion values on its HNF basis.

    `support` lists the arrangement characters whose hypersurface contains
    the layer; it is derived data and excluded from equality.
    """

    lattice: Sublattice
    values: tuple[Fraction, ...]
    support: tuple[int, ...] = ()

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return self.lattice == other.lattice and self.values == other.values

    def __hash__(self):
        return hash((self.lattice, self.values))

    @property
    def dim(self) -> int:
        return self.lattice.ambient_rank - self.lattice.rank

    def value_of(self, vector) -> Fraction | None:
        """The constant the character takes on this layer, if any."""
        c = self.lattice.coords(vector)
        if c is None:
            return None
        return mod1(sum(q * v for q, v in zip(c, self.values)))

    def contains(self, other: "Layer") -> bool:
        """True iff `other` is a subvariety of `self`."""
        for row, val in zip(self.lattice.basis, self.values):
            if other.value_of(row) != val:
                return False
        return True

    @property
    def coordinates(self) -> tuple[Fraction, ...]:
        """Torsion coordinates of a 0-dimensional layer."""
        if self.dim != 0:
            raise NotAPoint("only 0-dimensional layers have coordinates")
        # a saturated full-rank sublattice is Z^n with the identity basis
        return self.values

    def key(self):
        return (self.lattice.rank, self.support, self.lattice.basis, self.values)

    def __repr__(self):
        return f"Layer(basis={self.lattice.basis}, values={self.values})"


def _support(arr: Arrangement, lattice: Sublattice, values) -> tuple[int, ...]:
    probe = Layer(lattice, tuple(values))
    return tuple(
        i
        for i, ch in enumerate(arr.characters)
        if probe.value_of(ch.vector) == ch.value
    )


def make_layer(arr: Arrangement, lattice: Sublattice, values) -> Layer:
    values = tuple(mod1(v) for v in values)
    return Layer(lattice, values, _support(arr, lattice, values))


def layer_components(arr: Arrangement, subset) -> list[Layer]:
    """The connected components cut out by the given characters."""
    subset = sorted(set(subset))
    if not subset:
        raise EmptySubset("a nonempty character subset is required")
    mat = tuple(arr.characters[i].vector for i in subset)
    rhs = tuple(arr.characters[i].value for i in subset)
    sol = solve_torsion_system(mat, rhs)
    if sol is None:
        return []
    lattice = saturate(Sublattice.from_rows(arr.rank, mat))
    out = []
    for phi in sol.representatives:
        values = tuple(
            mod1(sum(Fraction(x) * p for x, p in zip(row, phi)))
            for row in lattice.basis
        )
        out.append(make_layer(arr, lattice, values))
    return out


@dataclass(frozen=True)
class LayerPoset:
    arrangement: Arrangement
    layers: tuple[Layer, ...]

    def leq(self, a: Layer, b: Layer) -> bool:
        """a <= b iff a is contained in b."""
        return b.contains(a)

    @property
    def points(self) -> tuple[Layer, ...]:
        pts = [l for l in self.layers if l.dim == 0]
        return tuple(sorted(pts, key=lambda l: l.values))

    def hasse_edges(self) -> list[tuple[Layer, Layer]]:
        edges = []
        for a, b in itertools.permutations(self.layers, 2):
            if a is b or not self.leq(a, b):
                continue
            if any(
                c is not a and c is not b and self.leq(a, c) and self.leq(c, b)
                for c in self.layers
            ):
                continue
            edges.append((a, b))
        return edges

    def __contains__(self, layer: Layer) -> bool:
        return any(l == layer for l in self.layers)


def build_poset(arr: Arrangement) -> LayerPoset:
    """All layers over all nonempty character subsets, deduplicated.

    The ambient torus itself is not a layer.
    """
    found: dict[Layer, Layer] = {}
    m = len(arr.characters)
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            for layer in layer_components(arr, subset):
                found.setdefault(layer, layer)
    layers = sorted(found, key=Layer.key)
    return LayerPoset(arr, tuple(layers))


def points(arr: Arrangement) -> list[Layer]:
    return list(build_poset(arr).points)


def localized(arr: Arrangement, p: Layer) -> tuple[int, ...]:
    """Indices of the characters whose hypersurface passes through `p`."""
    if p.dim != 0:
        raise NotAPoint("localization requires a 0-dimensional layer")
    return _support(arr, p.lattice, p.values)


def _closure(arr: Arrangement, ground, subset) -> tuple[int, ...]:
    span = Sublattice.from_rows(arr.rank, [arr.characters[i].vector for i in subset])
    return tuple(
        i for i in ground if span.spans_rationally(arr.characters[i].vector)
    )


def complete_subsets(arr: Arrangement, p: Layer) -> list[tuple[int, ...]]:
    """All flats of the localized character set at the point `p`.

    Includes the empty set and the full localized set.
    """
    ground = localized(arr, p)
    flats = {()}
    for size in range(1, len(ground) + 1):
        for subset in itertools.combinations(ground, size):
            flats.add(_closure(arr, ground, subset))
    return sorted(flats, key=lambda f: (len(f), f))


def is_complete(arr: Arrangement, p: Layer, subset) -> bool:
    ground = localized(arr, p)
    subset = tuple(sorted(subset))
    if any(i not in ground for i in subset):
        return False
    return _closure(arr, ground, subset) == subset


def layer_from_complete_set(arr: Arrangement, p: Layer, subset) -> Layer:
    """The layer through `p` whose localized support is the given flat."""
    subset = tuple(sorted(subset))
    if not subset or not is_complete(arr, p, subset):
        raise NotComplete(f"{subset} is not a nonempty flat at {p}")
    lattice = saturate(
        Sublattice.from_rows(arr.rank, [arr.characters[i].vector for i in subset])
    )
    phi = p.coordinates
    values = tuple(
        mod1(sum(Fraction(x) * q for x, q in zip(row, phi))) for row in lattice.basis
    )
    return make_layer(arr, lattice, values)


def point_layer(arr: Arrangement, coordinates) -> Layer:
    """The 0-dimensional layer at the given torsion coordinates."""
    lattice = Sublattice(arr.rank, identity_matrix(arr.rank))
    return make_layer(arr, lattice, tuple(mod1(Fraction(c)) for c in coordinates))
