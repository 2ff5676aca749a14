import pytest
from fractions import Fraction

from toricwonder import build_poset, irreducible_layers, normalize, point_layer


@pytest.fixture(scope="session")
def two_lines():
    """The two-hypersurface rank-2 arrangement {ts = 1}, {t/s = 1}."""
    arr = normalize(2, [((1, 1), 0), ((1, -1), 0)])
    poset = build_poset(arr)
    return arr, poset, irreducible_layers(poset)


@pytest.fixture(scope="session")
def doubled_square():
    """The doubled-square arrangement; normalization splits t², s²."""
    arr = normalize(
        2, [((2, 0), 0), ((0, 2), 0), ((1, 1), 0), ((1, -1), 0)]
    )
    poset = build_poset(arr)
    return arr, poset, irreducible_layers(poset)


@pytest.fixture(scope="session")
def chain3():
    """Rank-3 arrangement with an index-2 middle layer, giving 3-chains."""
    arr = normalize(3, [((1, 1, 0), 0), ((1, -1, 0), 0), ((0, 0, 1), 0)])
    poset = build_poset(arr)
    return arr, poset, irreducible_layers(poset)


def origin(arr):
    return point_layer(arr, (Fraction(0),) * arr.rank)
