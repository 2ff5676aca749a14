"""Wonderful models of toric arrangements: layers, building sets, nested
sets, adapted chart coordinates, transitions, curve limits, and divisor
combinatorics — all in exact rational arithmetic."""

from .errors import (
    EmptySubset,
    InfiniteIndex,
    InvalidBuildingSet,
    InvalidGerm,
    InvalidPartition,
    IsMinimal,
    NotAPoint,
    NotComplete,
    NotContained,
    NotInBuildingSet,
    NotInOverlap,
    NotInPoset,
    NotNested,
    NotPrimitive,
    NotSaturated,
    OnDivisor,
    OutsideDomain,
    ParseError,
    ToricError,
    ZeroVector,
)
from .lattices import (
    Sublattice,
    TorsionSolution,
    complete_to_basis,
    hermite_normal_form,
    intersect,
    is_primitive,
    is_saturated,
    lattice_index,
    saturate,
    smith_normal_form,
    solve_torsion_system,
)
from .arrangement import (
    Arrangement,
    Layer,
    LayerPoset,
    WeightedCharacter,
    build_poset,
    complete_subsets,
    is_complete,
    layer_components,
    layer_from_complete_set,
    localized,
    normalize,
    point_layer,
    points,
)
from .decomposition import (
    BuildingSet,
    connected_components,
    custom_building_set,
    factors,
    finest_integral_decomposition,
    irreducible_layers,
    is_c_irreducible,
    is_complex_decomposition,
    is_integral_decomposition,
    is_z_irreducible,
)
from .nested import (
    Flag,
    NestedSet,
    center,
    core,
    enumerate_all_maximal,
    enumerate_maximal,
    intersection_components,
    is_nested,
    successor,
)
from .charts import (
    Chart,
    ChartFunction,
    CurveGerm,
    TransitionReport,
    adapted_basis_rows,
    atlas,
    build_chart,
    chart_for_curve,
    cover_sweep,
    divisor_dim,
    maximal_constant_member,
    overlap_sweep,
    residual_sweep,
    roundtrip_sweep,
    transition,
)

__version__ = "0.1.0"
