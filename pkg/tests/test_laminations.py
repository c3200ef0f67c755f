import random
from fractions import Fraction

import pytest

from sl3shear.laminations import (
    Component,
    ComponentSum,
    CornerArc,
    GlobalPicture,
    Honeycomb,
    InvalidPicture,
    PinnedLamination,
    SpiralEnd,
    UnknownComponentKind,
    add_peripheral_chain,
    coords_of_components,
    dynkin_geometric,
    elementary_lamination,
    empty_picture,
    geometric_ensemble,
    normalize_integral,
    shear_frozen,
    shear_unfrozen,
)
from sl3shear.seeds import Sl3IndexSet, extended_matrix
from sl3shear.tropical import TropicalPoint, dynkin_cluster
from sl3shear.verify import realizable_component_sum

F = Fraction


def quad_corners(tri):
    """(t-corner of T_L, b-corner of T_L, t-corner of T_R, b-corner of T_R)
    of the unique interior edge."""
    e = tri.interior_edges[0]
    (tl, il), (tr, ir) = tri.slots(e)
    return {
        "e": e,
        "tl": tl,
        "tr": tr,
        "t_left": (tl, il % 3),
        "b_left": (tl, (il - 1) % 3),
        "t_right": (tr, (ir - 1) % 3),
        "b_right": (tr, ir % 3),
    }


def one_curve_picture(tri, kind, weight=F(1)):
    """The four curve components of the flip quadrilateral as pictures."""
    q = quad_corners(tri)
    arcs = {
        "alpha+": [(q["t_left"], "ccw"), (q["b_right"], "cw")],
        "alpha+rev": [(q["t_left"], "cw"), (q["b_right"], "ccw")],
        "alpha-": [(q["b_left"], "cw"), (q["t_right"], "ccw")],
        "alpha-rev": [(q["b_left"], "ccw"), (q["t_right"], "cw")],
    }[kind]
    corners = {}
    for corner, orient in arcs:
        corners.setdefault(corner, []).append(CornerArc(orient, weight))
    return GlobalPicture(tri, corners=corners)


def honeycomb_pattern_picture(tri, kind):
    q = quad_corners(tri)
    hcs = {
        "tau+L": ({q["tl"]: Honeycomb("sink", 1)}, [(q["t_right"], "cw")]),
        "tau+R": ({q["tl"]: Honeycomb("sink", 1)}, [(q["b_right"], "ccw")]),
        "tau-L": ({q["tl"]: Honeycomb("source", 1)}, [(q["t_right"], "ccw")]),
        "tau-R": ({q["tl"]: Honeycomb("source", 1)}, [(q["b_right"], "cw")]),
        "h": ({q["tl"]: Honeycomb("sink", 1), q["tr"]: Honeycomb("source", 1)}, []),
        "h-rev": ({q["tl"]: Honeycomb("source", 1), q["tr"]: Honeycomb("sink", 1)}, []),
    }
    honeycombs, arcs = hcs[kind]
    corners = {}
    for corner, orient in arcs:
        corners.setdefault(corner, []).append(CornerArc(orient))
    return GlobalPicture(tri, honeycombs, corners)


def test_empty_picture_shear(polygon4):
    assert shear_unfrozen(empty_picture(polygon4)).coords == {}


def test_single_curve_contribution(polygon4):
    q = quad_corners(polygon4)
    u = F(5, 3)
    pic = one_curve_picture(polygon4, "alpha+", u)
    x = shear_unfrozen(pic)
    assert dict(x.coords) == {("edge", q["e"], 1): u}


@pytest.mark.parametrize(
    "kind,entry",
    [("alpha+", ((1, 0))), ("alpha+rev", (0, 1)), ("alpha-", (-1, 0)), ("alpha-rev", (0, -1))],
)
def test_curve_corridors(polygon4, kind, entry):
    q = quad_corners(polygon4)
    x = shear_unfrozen(one_curve_picture(polygon4, kind))
    want = {}
    if entry[0]:
        want[("edge", q["e"], 1)] = F(entry[0])
    if entry[1]:
        want[("edge", q["e"], 2)] = F(entry[1])
    assert dict(x.coords) == want


def test_honeycomb_split_contributions(polygon4):
    """A sink of height n1+n2+n3 in T_L: n1 legs exit via the top of T_R,
    n2 bridge into a source, n3 exit via the bottom; the face counts the
    height, the bridged legs contribute only via the far face."""
    q = quad_corners(polygon4)
    n1, n2, n3 = 2, 1, 3
    corners = {
        q["t_right"]: [CornerArc("cw")] * n1,
        q["b_right"]: [CornerArc("ccw")] * n3,
    }
    pic = GlobalPicture(
        polygon4,
        {q["tl"]: Honeycomb("sink", n1 + n2 + n3), q["tr"]: Honeycomb("source", n2)},
        corners,
    )
    x = shear_unfrozen(pic)
    assert x[("tri", q["tl"])] == n1 + n2 + n3
    assert x[("tri", q["tr"])] == -n2
    assert x[("edge", q["e"], 2)] == -n1
    assert x[("edge", q["e"], 1)] == 0


def test_honeycomb_decomposition(polygon4):
    """x of the (n1, n2, n3) pattern equals n1 x(tau+L) + n2 x(h) + n3
    x(tau+R)."""
    q = quad_corners(polygon4)
    n1, n2, n3 = 2, 1, 3
    corners = {
        q["t_right"]: [CornerArc("cw")] * n1,
        q["b_right"]: [CornerArc("ccw")] * n3,
    }
    whole = shear_unfrozen(
        GlobalPicture(
            polygon4,
            {q["tl"]: Honeycomb("sink", n1 + n2 + n3), q["tr"]: Honeycomb("source", n2)},
            corners,
        )
    )
    parts = {}
    for kind, n in (("tau+L", n1), ("h", n2), ("tau+R", n3)):
        comp = coords_of_components(
            ComponentSum(polygon4, [Component(kind, q["e"], F(n))]), "X"
        )
        for i, v in comp.coords.items():
            parts[i] = parts.get(i, F(0)) + v
    unfrozen = set(Sl3IndexSet(polygon4).unfrozen)
    assert {i: v for i, v in parts.items() if i in unfrozen} == dict(whole.coords)


@pytest.mark.parametrize(
    "kind", ["alpha+", "alpha+rev", "alpha-", "alpha-rev", "tau+L", "tau+R", "tau-L", "tau-R", "h", "h-rev"]
)
def test_rule_consistency_tables_vs_pictures(polygon4, kind):
    """The X-tables of the quadrilateral components agree with the shear
    of their one-component pictures (unfrozen part and, with zero
    pinnings, the frozen part too)."""
    q = quad_corners(polygon4)
    if kind.startswith("alpha"):
        pic = one_curve_picture(polygon4, kind)
    else:
        pic = honeycomb_pattern_picture(polygon4, kind)
    table = coords_of_components(ComponentSum(polygon4, [Component(kind, q["e"])]), "X")
    full = shear_frozen(PinnedLamination(pic, {}))
    assert dict(full.coords) == dict(table.coords)


def test_frozen_coordinates_direct_substitution(triangle):
    t = triangle.triangles[0]
    e = triangle.boundary_intervals[0]
    pl = PinnedLamination(empty_picture(triangle), {e: (F(1), F(0))})
    x = shear_frozen(pl)
    assert x[("edge", e, 1)] == 1 and x[("edge", e, 2)] == 0


def test_frozen_coordinates_cw_arc(triangle):
    t = triangle.triangles[0]
    e = triangle.boundary_intervals[0]
    (slot, _) = triangle.slots(e)
    m = (slot[0], (slot[1] - 1) % 3)
    pic = GlobalPicture(triangle, corners={m: [CornerArc("cw")]})
    x = shear_frozen(PinnedLamination(pic, {}))
    assert x[("edge", e, 1)] == -1


def test_frozen_coordinates_face_term(triangle):
    t = triangle.triangles[0]
    pic = GlobalPicture(triangle, {t: Honeycomb("sink", 2)})
    x = shear_frozen(PinnedLamination(pic, {}))
    for e in triangle.boundary_intervals:
        assert x[("edge", e, 2)] == -2
        assert x[("edge", e, 1)] == 0


def test_component_tables_examples(triangle):
    t = triangle.triangles[0]
    iset = Sl3IndexSet(triangle)
    pairs = [iset.side_pair((t, a)) for a in range(3)]
    order = [("tri", t), *pairs[1], *pairs[2], *pairs[0]]
    a = coords_of_components(
        ComponentSum(triangle, [Component("alpha", t, F(1), corner=0)]), "A"
    )
    assert [a[i] for i in order] == [F(2, 3), F(1, 3), F(2, 3), 0, 0, F(2, 3), F(1, 3)]
    x = coords_of_components(ComponentSum(triangle, [Component("tau-", t, F(1))]), "X")
    assert dict(x.coords) == {("tri", t): F(-1)}
    assert coords_of_components(ComponentSum(triangle, []), "X").coords == {}


def test_component_tables_ensemble_relation(triangle, polygon4):
    from sl3shear.verify import component_table_cases, _ensemble_of

    for tri, comp in component_table_cases():
        s = ComponentSum(tri, [comp])
        a = coords_of_components(s, "A")
        x = coords_of_components(s, "X")
        assert dict(x.coords) == _ensemble_of(a.coords, tri), comp.kind


def test_unknown_component_kind(triangle):
    with pytest.raises(UnknownComponentKind):
        coords_of_components(
            ComponentSum(triangle, [Component("nonsense", "T1", F(1))]), "X"
        )


def test_geometric_ensemble_examples(triangle):
    t = triangle.triangles[0]
    s = ComponentSum(triangle, [Component("tau+", t, F(1))])
    pl = geometric_ensemble(s)
    assert pl.delta == {}
    x = shear_frozen(pl)
    iset = Sl3IndexSet(triangle)
    pairs = [iset.side_pair((t, a)) for a in range(3)]
    order = [("tri", t), *pairs[1], *pairs[2], *pairs[0]]
    assert [x[i] for i in order] == [F(1), F(0), F(-1), F(0), F(-1), F(0), F(-1)]

    # one cw peripheral of weight 2 at a marked point
    m = sorted(triangle.vertices)[0]
    s2 = ComponentSum(triangle, [Component("peripheral-cw", m, F(2))])
    pl2 = geometric_ensemble(s2)
    hits = [e for e in triangle.boundary_intervals if triangle.edge_endpoints(e)[0] == m]
    assert len(hits) == 1
    assert pl2.delta[hits[0]] == (F(-2), F(0))
    assert list(pl2.underlying) == []


def test_geometric_ensemble_rejects_negative_weight(triangle):
    t = triangle.triangles[0]
    from sl3shear.laminations import NegativeNonPeripheralWeight

    s = ComponentSum(triangle, [Component("tau+", t, F(-1))])
    with pytest.raises(NegativeNonPeripheralWeight):
        geometric_ensemble(s)


def test_ensemble_relation_on_random_bounded(polygon4):
    from sl3shear.verify import _ensemble_of

    rng = random.Random(4)
    for _ in range(50):
        s = realizable_component_sum(polygon4, rng)
        pl = geometric_ensemble(s)
        a = coords_of_components(s, "A")
        want = _ensemble_of(a.coords, polygon4)
        assert dict(shear_frozen(pl).coords) == want


def test_dynkin_geometric_examples(triangle):
    t = triangle.triangles[0]
    s = ComponentSum(triangle, [Component("tau+", t, F(1))])
    s2 = dynkin_geometric(s)
    assert [c.kind for c in s2] == ["tau-"]
    x = coords_of_components(s2, "X")
    assert x[("tri", t)] == F(-1)
    s3 = dynkin_geometric(s2)
    assert [c.kind for c in s3] == ["tau+"]


def test_dynkin_geometric_on_pictures(polygon4, torus):
    rng = random.Random(8)
    from sl3shear.reconstruct import reconstruct

    for tri in (polygon4, torus):
        iset = Sl3IndexSet(tri)
        for _ in range(30):
            coords = {i: F(rng.randint(-3, 3)) for i in iset.unfrozen}
            x = TropicalPoint("X", coords, tri=tri, restricted=True)
            pic = reconstruct(x, tri)
            flipped = dynkin_geometric(pic)
            assert flipped.validate() == []
            lhs = shear_unfrozen(flipped)
            rhs = dynkin_cluster(x, tri)
            rhs_unfrozen = {i: v for i, v in rhs.coords.items() if i in set(iset.unfrozen)}
            assert dict(lhs.coords) == rhs_unfrozen
            back = dynkin_geometric(flipped)
            assert shear_unfrozen(back) == x


def test_peripheral_neutrality(polygon5, torus):
    from sl3shear.reconstruct import reconstruct

    rng = random.Random(9)
    for tri in (polygon5, torus):
        iset = Sl3IndexSet(tri)
        for _ in range(20):
            coords = {i: F(rng.randint(-3, 3)) for i in iset.unfrozen}
            x = TropicalPoint("X", coords, tri=tri, restricted=True)
            pic = reconstruct(x, tri)
            v = rng.choice(sorted(tri.vertices))
            pic2 = add_peripheral_chain(pic, v, rng.choice(["cw", "ccw"]), F(rng.randint(1, 3)))
            assert shear_unfrozen(pic2) == x


def test_weighted_linearity(polygon4):
    q = quad_corners(polygon4)
    u = F(7, 2)
    one = coords_of_components(ComponentSum(polygon4, [Component("alpha+", q["e"], F(1))]), "A")
    many = coords_of_components(ComponentSum(polygon4, [Component("alpha+", q["e"], u)]), "A")
    assert {i: u * v for i, v in one.coords.items()} == dict(many.coords)


def test_normalize_integral_examples(polygon4):
    q = quad_corners(polygon4)
    pic = one_curve_picture(polygon4, "alpha+", F(1, 2))
    pic = add_peripheral_chain(pic, sorted(polygon4.vertices)[0], "cw", F(1, 3))
    u, scaled = normalize_integral(pic)
    assert u == 6
    assert scaled.validate() == []
    x = shear_unfrozen(pic)
    y = shear_unfrozen(scaled)
    assert {i: 6 * v for i, v in x.coords.items()} == dict(y.coords)
    u2, same = normalize_integral(scaled)
    assert u2 == 1


def test_validation_catches_bad_pictures(polygon4):
    q = quad_corners(polygon4)
    # unbalanced pairing: an arc on one side of the interior edge only
    pic = GlobalPicture(polygon4, corners={q["t_left"]: [CornerArc("ccw")]})
    assert any("unbalanced" in d for d in pic.validate())
    # spiral tail at a non-puncture corner
    pic2 = GlobalPicture(
        polygon4, corners={q["t_left"]: [SpiralEnd("cw", False)]}
    )
    assert any("non-puncture" in d for d in pic2.validate())
    with pytest.raises(InvalidPicture):
        shear_unfrozen(pic)


def test_elementary_laminations_exhaustive(triangle, polygon4):
    for tri in (triangle, polygon4):
        iset = Sl3IndexSet(tri)
        for k in iset.all:
            pl = elementary_lamination(tri, k)
            assert dict(shear_frozen(pl).coords) == {k: F(-1)}


def test_elementary_lamination_face_shape(polygon4):
    e = polygon4.interior_edges[0]
    (tl, _), _ = polygon4.slots(e)
    pl = elementary_lamination(polygon4, ("tri", tl))
    pic = pl.underlying
    assert pic.honeycombs[tl].orient == "source"
    assert pic.honeycombs[tl].height == 1


def test_elementary_lamination_frozen_shape(polygon4):
    e = polygon4.boundary_intervals[0]
    pl = elementary_lamination(polygon4, ("edge", e, 1))
    assert pl.underlying.corners == {}
    assert pl.delta == {e: (F(-1), F(0))}


def test_honeycomb_leg_split(polygon4):
    from sl3shear.laminations import honeycomb_leg_split

    q = quad_corners(polygon4)
    e = q["e"]
    (tl, il), (tr, ir) = polygon4.slots(e)
    n1, n2, n3 = 2, 1, 3
    corners = {
        q["t_right"]: [CornerArc("cw")] * n1,
        q["b_right"]: [CornerArc("ccw")] * n3,
    }
    pic = GlobalPicture(
        polygon4,
        {tl: Honeycomb("sink", n1 + n2 + n3), tr: Honeycomb("source", n2)},
        corners,
    )
    assert honeycomb_leg_split(pic, tl, il) == (n1, n2, n3)
    assert honeycomb_leg_split(pic, tr, ir) == (0, n2, 0)
    assert honeycomb_leg_split(pic, tl, (il + 1) % 3) is None  # boundary side


def test_normalize_pinned_component_sum(triangle):
    t = triangle.triangles[0]
    s = ComponentSum(triangle, [Component("alpha", t, F(2, 3), corner=0)])
    e = triangle.boundary_intervals[0]
    pl = PinnedLamination(s, {e: (F(1, 2), F(0))})
    u, scaled = normalize_integral(pl)
    assert u == 6
    assert scaled.delta[e] == (F(3), F(0))
    x = shear_frozen(pl)
    y = shear_frozen(scaled)
    assert {i: 6 * v for i, v in x.coords.items()} == dict(y.coords)
