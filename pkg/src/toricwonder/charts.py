"""Chart atlas of the wonderful model.

Every maximal nested set S with center p carries a coordinate chart: an
adapted integral basis indexed by the members of S, a polynomial map from
chart coordinates to the torus (each basis character equals its constant
plus a product of coordinates over the members below it), the inverse by
successor ratios, and for every character through p a unit function whose
product with the corresponding coordinate monomial recovers the character
minus its constant.  Boundary data (divisor intersections, curve limits)
is read off the same coordinates.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InvalidGerm,
    NotAPoint,
    NotInBuildingSet,
    NotInOverlap,
    OnDivisor,
    OutsideDomain,
)
from .arrangement import Arrangement, Layer, LayerPoset, layer_from_complete_set
from .decomposition import BuildingSet, factors
from .lattices import (
    Sublattice,
    Vector,
    express_in_rows,
    hermite_basis,
    intersect,
    invert_unimodular,
    mod1,
    smith_normal_form,
    vec_mat,
)
from .nested import (
    NestedSet,
    enumerate_all_maximal,
    intersection_components,
    is_nested,
)

DEFAULT_TOL = 1e-9


def unit_root(angle: Fraction) -> complex:
    return cmath.exp(2j * cmath.pi * float(angle))


def maximal_constant_member(members, phi, vector) -> Layer | None:
    """The largest member on which `vector` is constant with its value at p.

    Returns None when the character is not constant on any member.
    """
    target = mod1(sum(Fraction(x) * q for x, q in zip(vector, phi)))
    hits = [m for m in members if m.value_of(vector) == target]
    if not hits:
        return None
    top = max(hits, key=lambda m: sum(m.contains(o) for o in hits))
    assert all(top.contains(o) for o in hits)
    return top


def _reduce_mod_lattice(vector, lattice: Sublattice) -> Vector:
    """Canonical representative of `vector` modulo the sublattice."""
    v = list(vector)
    for row in lattice.basis:
        p = next(j for j, x in enumerate(row) if x)
        q = v[p] // row[p]
        v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def adapted_basis_rows(members) -> list[Vector]:
    """An integral basis adapted to a nested set, by peeling minimal members.

    Returns a basis of the sum of the members' saturated lattices; for a
    maximal nested set that sum is the whole of Z^n.
    """
    members = sorted(members, key=Layer.key)
    if not members:
        return []
    # a minimal member, canonically chosen
    c = next(
        m
        for m in members
        if not any(o is not m and m.contains(o) for o in members)
    )
    rest = [m for m in members if m is not c]
    rows_rest = adapted_basis_rows(rest)
    n = c.lattice.ambient_rank
    lat_rest = Sublattice.from_rows(n, rows_rest)
    lat_all = Sublattice.from_rows(
        n, list(lat_rest.basis) + list(c.lattice.basis)
    )
    if lat_all.rank == lat_rest.rank:
        return rows_rest
    # quotient generators of lat_all / lat_rest, lifted into the minimal
    # member's lattice and canonically reduced
    coords = tuple(lat_all.coords(row) for row in lat_rest.basis)
    new_rows = []
    if not coords:
        gens = [tuple(int(i == j) for j in range(lat_all.rank)) for i in range(lat_all.rank)]
    else:
        snf = smith_normal_form(coords)
        vinv = invert_unimodular(snf.right)
        gens = list(vinv[lat_rest.rank :])
    stacked = tuple(c.lattice.basis) + tuple(lat_rest.basis)
    overlap = intersect(lat_rest, c.lattice)
    for g in gens:
        ambient = vec_mat(g, lat_all.basis)
        combo = express_in_rows(stacked, ambient)
        assert combo is not None, "quotient generator must lift"
        lift = vec_mat(combo[: c.lattice.rank], c.lattice.basis)
        new_rows.append(_reduce_mod_lattice(lift, overlap))
    return rows_rest + new_rows


@dataclass(frozen=True)
class BetaTerm:
    """One summand of the unit-function expansion of a character.

    Evaluates to sign * e^{2 pi i angle} * prod member-values^exponent *
    prod (member-value - root of unity).
    """

    member: int
    sign: int
    angle: Fraction
    monomial: tuple[tuple[int, int], ...]
    linear: tuple[tuple[int, Fraction], ...]

    def eval(self, values) -> complex:
        out = self.sign * unit_root(self.angle)
        for idx, e in self.monomial:
            out *= values[idx] ** e
        for idx, angle in self.linear:
            out *= values[idx] - unit_root(angle)
        return out


@dataclass(frozen=True)
class ChartFunction:
    """The unit factor of (character - constant) in chart coordinates.

    On the dense open part of the chart it equals
    (character - constant) / prod of the coordinates below `base_member`;
    it extends regularly over the divisor and is nonzero at 0.
    """

    chart: "Chart"
    vector: Vector
    value: Fraction
    base_member: int
    terms: tuple[BetaTerm, ...]

    def __call__(self, z) -> complex:
        values = self.chart.member_character_values(z)
        base_below = set(self.chart.below[self.base_member])
        total = 0j
        for term in self.terms:
            contrib = term.eval(values)
            for e in self.chart.below[term.member]:
                if e not in base_below:
                    contrib *= z[e]
            total += contrib
        return total


@dataclass(eq=False)
class Chart:
    """A chart of the model attached to a maximal nested set."""

    poset: LayerPoset
    nested_set: NestedSet
    members: tuple[Layer, ...]
    basis: tuple[Vector, ...]  # basis[i] is the character assigned to members[i]
    tolerance: float = DEFAULT_TOL
    constants: tuple[Fraction, ...] = field(init=False)
    below: tuple[tuple[int, ...], ...] = field(init=False)
    succ: tuple[int | None, ...] = field(init=False)
    _basis_inv: tuple = field(init=False)
    _functions: dict = field(init=False, default_factory=dict)

    def __post_init__(self):
        phi = self.point_coordinates
        self.constants = tuple(
            mod1(sum(Fraction(x) * q for x, q in zip(row, phi)))
            for row in self.basis
        )
        below = []
        succ = []
        for i, c in enumerate(self.members):
            inside = [j for j, d in enumerate(self.members) if c.contains(d)]
            below.append(tuple(inside))
            proper = [j for j in inside if j != i]
            if proper:
                top = max(
                    proper,
                    key=lambda j: sum(
                        self.members[j].contains(self.members[k]) for k in proper
                    ),
                )
                succ.append(top)
            else:
                succ.append(None)
        self.below = tuple(below)
        self.succ = tuple(succ)
        self._basis_inv = invert_unimodular(self.basis)

    @property
    def center(self) -> Layer:
        return self.nested_set.center

    @property
    def point_coordinates(self) -> tuple[Fraction, ...]:
        return self.center.coordinates

    @property
    def rank(self) -> int:
        return len(self.members)

    def index_of(self, member: Layer) -> int:
        return self.members.index(member)

    # -- coordinate maps ------------------------------------------------

    def member_character_values(self, z) -> list[complex]:
        """The value of each basis character at the image torus point."""
        out = []
        for i in range(self.rank):
            prod = 1 + 0j
            for e in self.below[i]:
                prod *= z[e]
            out.append(prod + unit_root(self.constants[i]))
        return out

    def in_coordinate_domain(self, z) -> bool:
        return all(
            abs(v) > self.tolerance for v in self.member_character_values(z)
        )

    def chart_to_torus(self, z) -> tuple[complex, ...]:
        values = self.member_character_values(z)
        if any(abs(v) <= self.tolerance for v in values):
            raise OutsideDomain("a torus coordinate would vanish")
        return tuple(
            _int_power_product(values, self._basis_inv[j])
            for j in range(self.rank)
        )

    def character_value(self, t, vector) -> complex:
        return _int_power_product(t, vector)

    def torus_to_chart(self, t) -> tuple[complex, ...]:
        nums = [
            self.character_value(t, row) - unit_root(a)
            for row, a in zip(self.basis, self.constants)
        ]
        out = []
        for i in range(self.rank):
            if self.succ[i] is None:
                out.append(nums[i])
            else:
                den = nums[self.succ[i]]
                if abs(den) <= self.tolerance:
                    raise OnDivisor(
                        f"coordinate {i}: successor character sits on its divisor"
                    )
                out.append(nums[i] / den)
        return tuple(out)

    # -- the unit functions --------------------------------------------

    def constant_member(self, vector) -> Layer | None:
        """The largest member on which the character matches its value at p."""
        return maximal_constant_member(
            self.members, self.point_coordinates, vector
        )

    def character_unit(self, vector, value: Fraction) -> ChartFunction:
        key = (tuple(vector), mod1(Fraction(value)))
        if key not in self._functions:
            self._functions[key] = self._expand(*key)
        return self._functions[key]

    def _expand(self, vector, value) -> ChartFunction:
        phi = self.point_coordinates
        at_p = mod1(sum(Fraction(x) * q for x, q in zip(vector, phi)))
        if at_p != value:
            raise OutsideDomain(
                "the character does not pass through the chart center"
            )
        terms = []
        pref = Fraction(0)
        cur = tuple(vector)
        base = None
        while any(cur):
            layer = self.constant_member(cur)
            assert layer is not None, "character must be constant on a member"
            c = self.index_of(layer)
            if base is None:
                base = c
            coeffs = vec_mat(cur, self._basis_inv)
            assert all(
                coeffs[j] == 0
                for j in range(self.rank)
                if j not in self.below_inverse(c)
            )
            m_c = coeffs[c]
            assert m_c != 0
            monomial = [
                (j, coeffs[j])
                for j in self.below_inverse(c)
                if j != c and coeffs[j] != 0
            ]
            sign = 1
            angle = pref
            k = abs(m_c)
            if m_c < 0:
                sign = -1
                monomial.append((c, m_c))
                angle += m_c * self.constants[c]
            linear = tuple(
                (c, mod1(self.constants[c] + Fraction(j, k)))
                for j in range(1, k)
            )
            terms.append(BetaTerm(c, sign, mod1(angle), tuple(monomial), linear))
            pref += m_c * self.constants[c]
            cur = tuple(
                x - m_c * y for x, y in zip(cur, self.basis[c])
            )
        assert base is not None
        return ChartFunction(self, tuple(vector), value, base, tuple(terms))

    def below_inverse(self, i) -> tuple[int, ...]:
        """Indices of members containing member i (including itself)."""
        return tuple(
            j for j in range(self.rank) if self.members[j].contains(self.members[i])
        )

    # -- membership -----------------------------------------------------

    def point_support(self) -> tuple[int, ...]:
        return self.center.support

    def in_chart(self, z) -> bool:
        """True iff z lies in the open chart domain of the model."""
        values = self.member_character_values(z)
        if any(abs(v) <= self.tolerance for v in values):
            return False
        t = self.chart_to_torus(z)
        arr = self.poset.arrangement
        for layer in self.poset.layers:
            if layer.contains(self.center):
                continue
            if self._on_layer(t, layer):
                return False
        for i in self.point_support():
            ch = arr.characters[i]
            f = self.character_unit(ch.vector, ch.value)
            if abs(f(z)) <= self.tolerance:
                return False
        return True

    def _on_layer(self, t, layer: Layer) -> bool:
        for row, val in zip(layer.lattice.basis, layer.values):
            if abs(self.character_value(t, row) - unit_root(val)) > self.tolerance:
                return False
        return True

    def coordinate_monomial(self, z, base_member: int) -> complex:
        prod = 1 + 0j
        for e in self.below[base_member]:
            prod *= z[e]
        return prod


def _int_power_product(values, exponents) -> complex:
    out = 1 + 0j
    for v, e in zip(values, exponents):
        if e:
            out *= v ** e
    return out


def build_chart(
    poset: LayerPoset,
    nested_set: NestedSet,
    basis_rows=None,
    tolerance: float = DEFAULT_TOL,
) -> Chart:
    """Build the chart of a maximal nested set, checking adaptedness.

    `basis_rows` may supply an explicit adapted basis (any order); by
    default one is constructed.
    """
    members = nested_set.members
    if nested_set.center.dim != 0:
        raise NotAPoint("charts exist only for maximal nested sets")
    if basis_rows is None:
        basis_rows = adapted_basis_rows(members)
    phi = nested_set.center.coordinates
    assignment: dict[int, Vector] = {}
    for row in basis_rows:
        layer = maximal_constant_member(members, phi, row)
        assert layer is not None, "adapted basis vector must be constant somewhere"
        idx = members.index(layer)
        assert idx not in assignment, "assignment must be a bijection"
        assignment[idx] = tuple(row)
    assert len(assignment) == len(members)
    basis = tuple(assignment[i] for i in range(len(members)))
    chart = Chart(poset, nested_set, members, basis, tolerance)
    _check_adapted(chart)
    return chart


def _check_adapted(chart: Chart):
    n = chart.rank
    for i, member in enumerate(chart.members):
        rows = [chart.basis[j] for j in chart.below_inverse(i)]
        assert (
            hermite_basis(rows) == member.lattice.basis
        ), "basis is not adapted to the nested set"
    from .lattices import determinant

    assert abs(determinant(chart.basis)) == 1


def atlas(
    poset: LayerPoset, building: BuildingSet, tolerance: float = DEFAULT_TOL
) -> list[Chart]:
    return [
        build_chart(poset, s, tolerance=tolerance)
        for s in enumerate_all_maximal(poset, building)
    ]


# -- chart transitions --------------------------------------------------


@dataclass(frozen=True)
class TransitionReport:
    """Per-member record of which overlap clause applies and its witness."""

    entries: tuple[tuple[Layer, str, float], ...]


def transition(source: Chart, target: Chart, z) -> tuple[tuple[complex, ...], TransitionReport]:
    """Coordinates of the same model point in the target chart."""
    if not source.in_chart(z):
        raise NotInOverlap("the point is not in the source chart")
    t = source.chart_to_torus(z)
    try:
        z_target = target.torus_to_chart(t)
    except OnDivisor:
        z_target = _transition_on_divisor(source, target, z, t)
    if not target.in_chart(z_target):
        raise NotInOverlap("the image is not in the target chart")
    entries = []
    for i, c in enumerate(source.members):
        if c in target.members:
            j = target.members.index(c)
            mag = abs(z[i] / z_target[j]) if abs(z_target[j]) > 0 else float("inf")
            entries.append((c, "shared-ratio", mag))
        else:
            entries.append((c, "invertible", abs(z[i])))
    return z_target, TransitionReport(tuple(entries))


def _transition_on_divisor(source, target, z, t):
    """Successor ratios computed through the source chart's unit functions."""
    phi = source.point_coordinates
    out = []
    for i in range(target.rank):
        num_vec = target.basis[i]
        num_val = target.constants[i]
        if target.succ[i] is None:
            out.append(
                target.character_value(t, num_vec) - unit_root(num_val)
            )
            continue
        j = target.succ[i]
        den = target.character_value(t, target.basis[j]) - unit_root(
            target.constants[j]
        )
        num = target.character_value(t, num_vec) - unit_root(num_val)
        if abs(den) > target.tolerance:
            out.append(num / den)
            continue
        # both characters vanish towards the divisor: factor through the
        # source chart and cancel common coordinate monomials exactly
        for vec, val in ((num_vec, num_val), (target.basis[j], target.constants[j])):
            at_p = mod1(sum(Fraction(x) * q for x, q in zip(vec, phi)))
            if at_p != mod1(val):
                raise NotInOverlap(
                    "a vanishing target character misses the source center"
                )
        fnum = source.character_unit(num_vec, num_val)
        fden = source.character_unit(target.basis[j], target.constants[j])
        below_num = set(source.below[fnum.base_member])
        below_den = set(source.below[fden.base_member])
        if not below_den <= below_num:
            raise NotInOverlap("the successor ratio is singular at this point")
        ratio = fnum(z)
        dval = fden(z)
        if abs(dval) <= source.tolerance:
            raise NotInOverlap("unit function of the denominator vanishes")
        ratio /= dval
        for e in below_num - below_den:
            ratio *= z[e]
        out.append(ratio)
    return tuple(out)


# -- divisor combinatorics ----------------------------------------------


def divisor_dim(poset: LayerPoset, building: BuildingSet, members) -> int | None:
    """Dimension of the divisor intersection indexed by `members`.

    None means the intersection is empty (the family is not nested).
    """
    members = list(members)
    for m in members:
        if m not in building:
            raise NotInBuildingSet(f"{m} is not in the building set")
    ok, _ = is_nested(members, building, poset)
    if not ok:
        return None
    return poset.arrangement.rank - len(members)


# -- curve limits -------------------------------------------------------


@dataclass(frozen=True)
class CurveGerm:
    """A polynomial logarithmic germ phi_p + sum s^j v_j based at a point."""

    point: Layer
    jets: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.point.dim != 0:
            raise NotAPoint("curve germs are based at point layers")
        object.__setattr__(
            self,
            "jets",
            tuple(tuple(Fraction(x) for x in v) for v in self.jets),
        )

    def order(self, vector):
        """1-based order of vanishing of the character along the germ."""
        for j, v in enumerate(self.jets, start=1):
            if sum(Fraction(x) * y for x, y in zip(vector, v)) != 0:
                return j
        return None

    def pairing(self, vector, j) -> Fraction:
        return sum(Fraction(x) * y for x, y in zip(vector, self.jets[j - 1]))


def chart_for_curve(
    poset: LayerPoset,
    building: BuildingSet,
    germ: CurveGerm,
    tolerance: float = DEFAULT_TOL,
) -> tuple[Chart, tuple[complex, ...]]:
    """The chart in which the germ has a limit, and the limit coordinates."""
    arr = poset.arrangement
    p = germ.point
    support = p.support
    orders = {}
    for i in support:
        n = germ.order(arr.characters[i].vector)
        if n is None:
            raise InvalidGerm(
                f"the germ stays inside the hypersurface of character {i}"
            )
        orders[i] = n
    # flag of completions by vanishing order, factored into the building set
    collected: list[Layer] = []
    for h in range(1, max(orders.values()) + 1):
        level = tuple(sorted(i for i in support if orders[i] >= h))
        if not level:
            break
        layer = layer_from_complete_set(arr, p, level)
        for f in factors(poset, layer, building):
            if f not in collected:
                collected.append(f)
    candidates = sorted(building.members_through(p), key=Layer.key)
    n = arr.rank
    for cand in candidates:
        if len(collected) == n:
            break
        if cand in collected:
            continue
        ok, _ = is_nested(collected + [cand], building, poset)
        if ok:
            comps = intersection_components(arr, collected + [cand])
            if any(c.contains(p) for c in comps):
                collected.append(cand)
    assert len(collected) == n, "could not complete to a maximal nested set"
    nested_set = NestedSet(tuple(collected), p)
    chart = build_chart(poset, nested_set, tolerance=tolerance)
    chart = _fit_basis_to_germ(poset, chart, germ)
    z_limit = _limit_coordinates(chart, germ)
    assert chart.in_chart(z_limit), "curve limit must land inside the chart"
    return chart, z_limit


def _level(chart: Chart, germ: CurveGerm, member: Layer) -> int:
    arr = chart.poset.arrangement
    return min(germ.order(arr.characters[i].vector) for i in member.support)


def _fit_basis_to_germ(poset, chart: Chart, germ: CurveGerm) -> Chart:
    """Adjust the adapted basis so each assigned character vanishes at the
    minimal order available on its member (required for finite limits)."""
    rows = {i: chart.basis[i] for i in range(chart.rank)}
    order = sorted(
        range(chart.rank), key=lambda i: chart.members[i].lattice.rank
    )
    changed = False
    for i in order:
        h = _level(chart, germ, chart.members[i])
        nval = germ.order(rows[i])
        if nval is not None and nval <= h:
            continue
        donor = None
        for j in range(chart.rank):
            if j == i or not chart.members[j].contains(chart.members[i]):
                continue
            nj = germ.order(rows[j])
            if nj == h:
                donor = j
                break
        assert donor is not None, "a germ-compatible adjustment must exist"
        rows[i] = tuple(x + y for x, y in zip(rows[i], rows[donor]))
        changed = True
    if not changed:
        return chart
    return build_chart(
        poset,
        chart.nested_set,
        basis_rows=[rows[i] for i in range(chart.rank)],
        tolerance=chart.tolerance,
    )


def _limit_coordinates(chart: Chart, germ: CurveGerm) -> tuple[complex, ...]:
    out = []
    for i in range(chart.rank):
        j = chart.succ[i]
        if j is None:
            out.append(0j)
            continue
        ni = germ.order(chart.basis[i])
        nj = germ.order(chart.basis[j])
        assert nj is not None, "successor character must leave its hypersurface"
        if ni is None or ni > nj:
            out.append(0j)
        elif ni == nj:
            num = unit_root(chart.constants[i]) * germ.pairing(chart.basis[i], ni)
            den = unit_root(chart.constants[j]) * germ.pairing(chart.basis[j], nj)
            out.append(num / den)
        else:
            raise InvalidGerm("the germ has no limit in the selected chart")
    return tuple(out)


# -- verification sweeps ------------------------------------------------


def _sample_coordinate(rng) -> complex:
    r = 0.1 + 0.4 * rng.random()
    theta = 2 * cmath.pi * rng.random()
    return r * cmath.exp(1j * theta)


def residual_sweep(chart: Chart, rng, samples: int = 100) -> float:
    """Max relative defect of unit * monomial == character - constant."""
    arr = chart.poset.arrangement
    worst = 0.0
    for _ in range(samples):
        z = tuple(_sample_coordinate(rng) for _ in range(chart.rank))
        if not chart.in_coordinate_domain(z):
            continue
        t = chart.chart_to_torus(z)
        for i in chart.point_support():
            ch = arr.characters[i]
            f = chart.character_unit(ch.vector, ch.value)
            lhs = f(z) * chart.coordinate_monomial(z, f.base_member)
            rhs = chart.character_value(t, ch.vector) - unit_root(ch.value)
            rel = abs(lhs - rhs) / (1 + abs(chart.character_value(t, ch.vector)))
            worst = max(worst, rel)
    return worst


def roundtrip_sweep(chart: Chart, rng, samples: int = 100) -> float:
    worst = 0.0
    for _ in range(samples):
        z = tuple(_sample_coordinate(rng) for _ in range(chart.rank))
        if not chart.in_coordinate_domain(z):
            continue
        t = chart.chart_to_torus(z)
        try:
            z_back = chart.torus_to_chart(t)
        except OnDivisor:
            continue
        err = max(
            abs(a - b) / (1 + abs(a)) for a, b in zip(z, z_back)
        )
        worst = max(worst, err)
    return worst


def overlap_sweep(
    source: Chart, target: Chart, rng, samples: int = 20, max_tries: int = 2000
):
    """Magnitudes witnessing chart-overlap invertibility.

    Returns a list of per-sample lists of (layer, clause, magnitude);
    empty when the charts do not visibly overlap among the tried samples.
    """
    reports = []
    tries = 0
    while len(reports) < samples and tries < max_tries:
        tries += 1
        z = tuple(_sample_coordinate(rng) for _ in range(source.rank))
        try:
            if not source.in_chart(z):
                continue
            _, report = transition(source, target, z)
        except (NotInOverlap, OutsideDomain, OnDivisor):
            continue
        reports.append(report.entries)
    return reports


def cover_sweep(charts, rng, samples: int = 500, tolerance: float = 1e-6) -> int:
    """How many random complement points land in some chart; resamples
    points that fall numerically close to a hypersurface."""
    if not charts:
        return 0
    poset = charts[0].poset
    arr = poset.arrangement
    n = arr.rank
    covered = 0
    done = 0
    while done < samples:
        phi = [rng.random() for _ in range(n)]
        t = tuple(cmath.exp(2j * cmath.pi * x) for x in phi)
        if any(
            abs(_int_power_product(t, ch.vector) - unit_root(ch.value)) < tolerance
            for ch in arr.characters
        ):
            continue
        done += 1
        for chart in charts:
            try:
                z = chart.torus_to_chart(t)
            except OnDivisor:
                continue
            if all(abs(x) > chart.tolerance for x in z) and chart.in_chart(z):
                covered += 1
                break
    return covered
