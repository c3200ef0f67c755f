import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3shear.seeds import (
    ExchangeMatrix,
    RationalMatrix,
    Sl3IndexSet,
    exchange_matrix,
    flip_mutation_sequence,
)
from sl3shear.surface import MarkedSurfaceSpec, build
from sl3shear.tropical import (
    BadLabeling,
    TropicalPoint,
    apply_flip,
    dynkin_cluster,
    dynkin_cluster_by_mutation,
    ensemble,
    flip_local_labels,
    flip_x_closed_form,
    mutate_a,
    mutate_x,
    principal_embed,
)

F = Fraction


def eps2(frozen=()):
    m = RationalMatrix([1, 2])
    m[1, 2] = F(1)
    m[2, 1] = F(-1)
    return ExchangeMatrix(m, frozen)


def test_mutate_x_example():
    p = TropicalPoint("X", {1: F(1)})
    q = mutate_x(p, eps2(), 1)
    assert q[1] == F(-1) and q[2] == F(1)


def test_mutate_x_zero_pivot():
    p = TropicalPoint("X", {2: F(5)})
    q = mutate_x(p, eps2(), 1)
    assert q == p


def test_mutate_a_example():
    p = TropicalPoint("A", {2: F(1)})
    q = mutate_a(p, eps2(), 1)
    assert q[1] == F(1) and q[2] == F(1)


def test_mutate_a_zero():
    p = TropicalPoint("A", {})
    assert mutate_a(p, eps2(), 1) == p


@settings(max_examples=50, deadline=None)
@given(st.integers(-9, 9), st.integers(-9, 9))
def test_mutations_involutive(a, b):
    # the return trip uses the mutated exchange matrix
    from sl3shear.seeds import mutate_matrix

    eps = eps2()
    eps_after = mutate_matrix(eps, 1)
    px = TropicalPoint("X", {1: F(a), 2: F(b)})
    assert mutate_x(mutate_x(px, eps, 1), eps_after, 1) == px
    pa = TropicalPoint("A", {1: F(a), 2: F(b)})
    assert mutate_a(mutate_a(pa, eps, 1), eps_after, 1) == pa


def _local_points(tri, e, values):
    lab = flip_local_labels(tri, e)
    return TropicalPoint("X", {lab[n]: F(v) for n, v in values.items()}, tri=tri)


def _read_local(q, tri, e):
    # after the flip the labels keep their geometric positions
    t2, corr = tri.flip_edge(e)
    lab = flip_local_labels(tri, e)
    return {n: q[corr.index_map[lab[n]]] for n in range(1, 13)}


def test_closed_form_zero(polygon4):
    e = polygon4.interior_edges[0]
    p = TropicalPoint("X", {}, tri=polygon4)
    q = flip_x_closed_form(p, polygon4, e)
    assert q.coords == {}


def test_closed_form_e1(polygon4):
    e = polygon4.interior_edges[0]
    p = _local_points(polygon4, e, {1: 1})
    out = _read_local(flip_x_closed_form(p, polygon4, e), polygon4, e)
    want = {n: F(0) for n in range(1, 13)}
    want.update({4: F(-1), 5: F(1), 10: F(1)})
    assert out == want


def test_closed_form_e3(polygon4):
    e = polygon4.interior_edges[0]
    p = _local_points(polygon4, e, {3: 1})
    out = _read_local(flip_x_closed_form(p, polygon4, e), polygon4, e)
    want = {n: F(0) for n in range(1, 13)}
    want.update({2: F(-1), 6: F(1), 9: F(1)})
    assert out == want


def test_closed_form_needs_distinct_labels(torus):
    e = torus.interior_edges[0]
    p = TropicalPoint("X", {}, tri=torus)
    with pytest.raises(BadLabeling):
        flip_x_closed_form(p, torus, e)


def test_apply_flip_matches_closed_form(polygon4):
    rng = random.Random(0)
    iset = Sl3IndexSet(polygon4)
    e = polygon4.interior_edges[0]
    for _ in range(150):
        coords = {i: F(rng.randint(-20, 20), rng.randint(1, 8)) for i in iset.all}
        p = TropicalPoint("X", coords, tri=polygon4)
        assert apply_flip(p, polygon4, e) == flip_x_closed_form(p, polygon4, e)


def test_apply_flip_identity_outside(polygon5):
    rng = random.Random(1)
    iset = Sl3IndexSet(polygon5)
    for e in polygon5.interior_edges:
        lab = set(flip_local_labels(polygon5, e).values())
        for _ in range(30):
            coords = {i: F(rng.randint(-9, 9)) for i in iset.all}
            p = TropicalPoint("X", coords, tri=polygon5)
            q = apply_flip(p, polygon5, e)
            for i in iset.all:
                if i not in lab:
                    assert q[i] == p[i]


def test_double_flip_returns_point(polygon4):
    rng = random.Random(2)
    iset = Sl3IndexSet(polygon4)
    e = polygon4.interior_edges[0]
    _, _, c1 = flip_mutation_sequence(polygon4, e)
    t2, _ = polygon4.flip_edge(e)
    _, _, c2 = flip_mutation_sequence(t2, e)
    comp = {i: c2.index_map[c1.index_map[i]] for i in c1.index_map}
    for _ in range(100):
        coords = {i: F(rng.randint(-9, 9), rng.randint(1, 4)) for i in iset.all}
        p = TropicalPoint("X", coords, tri=polygon4)
        r = apply_flip(apply_flip(p, polygon4, e), t2, e)
        assert all(r[comp[i]] == p[i] for i in comp)


def test_scaling_equivariance(polygon4):
    rng = random.Random(3)
    iset = Sl3IndexSet(polygon4)
    e = polygon4.interior_edges[0]
    for _ in range(50):
        coords = {i: F(rng.randint(-9, 9), rng.randint(1, 4)) for i in iset.all}
        p = TropicalPoint("X", coords, tri=polygon4)
        u = F(rng.randint(1, 7), rng.randint(1, 5))
        assert apply_flip(p.scale(u), polygon4, e) == apply_flip(p, polygon4, e).scale(u)
        assert dynkin_cluster(p.scale(u), polygon4) == dynkin_cluster(p, polygon4).scale(u)


def test_ensemble_triangle_alpha_row(triangle):
    # a(alpha) from the component tables, fed through the linear map
    t = triangle.triangles[0]
    iset = Sl3IndexSet(triangle)
    pairs = [iset.side_pair((t, a)) for a in range(3)]
    order = [("tri", t), *pairs[1], *pairs[2], *pairs[0]]
    a_vals = [F(2, 3), F(1, 3), F(2, 3), F(0), F(0), F(2, 3), F(1, 3)]
    a = TropicalPoint("A", dict(zip(order, a_vals)), tri=triangle)
    x = ensemble(a, triangle)
    assert [x[i] for i in order] == [F(0), F(0), F(-1), F(0), F(0), F(0), F(0)]


def test_ensemble_triangle_tau_row(triangle):
    t = triangle.triangles[0]
    iset = Sl3IndexSet(triangle)
    pairs = [iset.side_pair((t, a)) for a in range(3)]
    order = [("tri", t), *pairs[1], *pairs[2], *pairs[0]]
    a_vals = [F(1), F(1, 3), F(2, 3), F(1, 3), F(2, 3), F(1, 3), F(2, 3)]
    a = TropicalPoint("A", dict(zip(order, a_vals)), tri=triangle)
    x = ensemble(a, triangle)
    assert [x[i] for i in order] == [F(1), F(0), F(-1), F(0), F(-1), F(0), F(-1)]


def test_ensemble_linear_zero(polygon4):
    a = TropicalPoint("A", {}, tri=polygon4)
    assert ensemble(a, polygon4).coords == {}


def test_dynkin_zero_and_example(polygon4):
    assert dynkin_cluster(TropicalPoint("X", {}, tri=polygon4), polygon4).coords == {}
    e = polygon4.interior_edges[0]
    (tl, _), (tr, _) = polygon4.slots(e)
    p = TropicalPoint("X", {("tri", tl): F(1)}, tri=polygon4)
    q = dynkin_cluster(p, polygon4)
    unfrozen = Sl3IndexSet(polygon4).unfrozen
    assert q[("tri", tl)] == F(-1)
    assert q[("edge", e, 1)] == F(1)
    for i in unfrozen:
        if i not in (("tri", tl), ("edge", e, 1)):
            assert q[i] == 0


@pytest.mark.parametrize("name", ["triangle", "polygon4", "annulus11", "torus"])
def test_dynkin_closed_form_equals_sequence(name, request):
    tri = request.getfixturevalue(name)
    rng = random.Random(5)
    iset = Sl3IndexSet(tri)
    for _ in range(120):
        coords = {i: F(rng.randint(-12, 12), rng.randint(1, 6)) for i in iset.all}
        p = TropicalPoint("X", coords, tri=tri)
        q = dynkin_cluster(p, tri)
        assert q == dynkin_cluster_by_mutation(p, tri)
        assert dynkin_cluster(q, tri) == p


def test_principal_embed_basics(polygon4):
    assert principal_embed({}, polygon4).coords == {}
    e = polygon4.edges[0]
    p = principal_embed({e: F(1)}, polygon4)
    assert p[("edge", e, 1)] == F(1) and p[("edge", e, 2)] == F(1)
    assert sum(1 for v in p.coords.values() if v) == 2
    assert dynkin_cluster(p, polygon4) == p


def test_principal_locus_preserved_by_flips(polygon5):
    rng = random.Random(6)
    for _ in range(60):
        sl2 = {e: F(rng.randint(-8, 8), rng.randint(1, 4)) for e in polygon5.edges}
        p = principal_embed(sl2, polygon5)
        for e in polygon5.interior_edges:
            q = apply_flip(p, polygon5, e)
            for t in q.tri.triangles:
                assert q[("tri", t)] == 0
            for e2 in q.tri.edges:
                assert q[("edge", e2, 1)] == q[("edge", e2, 2)]


def classical_sl2_flip(y, tri, e):
    """The textbook tropical flip of rank-1 shear coordinates on the
    quadrilateral at ``e``: the diagonal negates, the two sides meeting
    it at one pair of opposite corners gain [y_e]_+, the other two lose
    [-y_e]_+."""
    from sl3shear.tropical import pos

    lab = flip_local_labels(tri, e)
    edge_of = {n: lab[n][1] for n in (5, 7, 9, 11)}
    ye = y[e]
    out = dict(y)
    out[e] = -ye
    for n in (5, 9):
        out[edge_of[n]] = y[edge_of[n]] + pos(ye)
    for n in (7, 11):
        out[edge_of[n]] = y[edge_of[n]] - pos(-ye)
    return out


def test_flip_agrees_with_classical_rank1_rule(polygon4, polygon5):
    rng = random.Random(41)
    for tri in (polygon4, polygon5):
        for e in tri.interior_edges:
            lab = flip_local_labels(tri, e)
            outer = {lab[n][1] for n in (5, 7, 9, 11)}
            if len(outer) < 4:
                continue
            for _ in range(60):
                y = {e2: F(rng.randint(-8, 8), rng.randint(1, 4)) for e2 in tri.edges}
                p = principal_embed(y, tri)
                q = apply_flip(p, tri, e)
                want = classical_sl2_flip(y, tri, e)
                for e2 in q.tri.edges:
                    assert q[("edge", e2, 1)] == want[e2]
                    assert q[("edge", e2, 2)] == want[e2]


def test_apply_flip_matches_closed_form_every_edge(polygon5):
    rng = random.Random(43)
    iset = Sl3IndexSet(polygon5)
    for e in polygon5.interior_edges:
        for _ in range(80):
            coords = {i: F(rng.randint(-20, 20), rng.randint(1, 8)) for i in iset.all}
            p = TropicalPoint("X", coords, tri=polygon5)
            assert apply_flip(p, polygon5, e) == flip_x_closed_form(p, polygon5, e)
