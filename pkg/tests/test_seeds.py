from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3shear.seeds import (
    ExchangeMatrix,
    FrozenIndexMutation,
    Mutate,
    RationalMatrix,
    Sl3IndexSet,
    apply_matrix_steps,
    dynkin_mutation_sequence,
    exchange_matrix,
    extended_matrix,
    flip_mutation_sequence,
    m_matrix,
    mutate_matrix,
)
from sl3shear.surface import MarkedSurfaceSpec, build

F = Fraction


def small_matrix(entries, n=3, frozen=()):
    m = RationalMatrix(list(range(1, n + 1)))
    for (i, j), v in entries.items():
        m[i, j] = v
        m[j, i] = -v
    return ExchangeMatrix(m, frozen)


def triangle_labels(tri):
    """The paper's labels on a triangle: face 0 and the side pairs
    (5,6), (1,2), (3,4) counterclockwise."""
    t = tri.triangles[0]
    iset = Sl3IndexSet(tri)
    pairs = [iset.side_pair((t, a)) for a in range(3)]
    return {
        0: ("tri", t),
        5: pairs[0][0], 6: pairs[0][1],
        1: pairs[1][0], 2: pairs[1][1],
        3: pairs[2][0], 4: pairs[2][1],
    }


def test_index_set_counts(polygon4, torus):
    for tri in (polygon4, torus):
        iset = Sl3IndexSet(tri)
        chi = tri.euler_char_punctured()
        mb = tri.n_special()
        assert len(iset) == -8 * chi + 5 * mb
        assert len(iset.unfrozen) == -8 * chi + 3 * mb


def test_triangle_extended_rows(triangle):
    lab = triangle_labels(triangle)
    _, ext = extended_matrix(triangle)
    rows = {
        0: [0, -1, 1, -1, 1, -1, 1],
        1: [1, -1, 0, 0, 0, 0, -1],
        2: [-1, 1, -1, 1, 0, 0, 0],
        3: [1, 0, -1, -1, 0, 0, 0],
        4: [-1, 0, 0, 1, -1, 1, 0],
        5: [1, 0, 0, 0, -1, -1, 0],
        6: [-1, 1, 0, 0, 0, 1, -1],
    }
    for i, want in rows.items():
        got = [ext[lab[i], lab[j]] for j in range(7)]
        assert got == [F(v) for v in want], f"row {i}"


def test_triangle_dashed_entry(triangle):
    lab = triangle_labels(triangle)
    _, eps = exchange_matrix(triangle)
    assert eps[lab[2], lab[1]] == F(1, 2)
    assert eps[lab[0], lab[1]] == F(-1)


def test_skew_symmetry_and_range(polygon5, torus):
    for tri in (polygon5, torus):
        _, eps = exchange_matrix(tri)
        assert eps.check() == []


def test_m_matrix_entries(triangle, torus):
    mm = m_matrix(triangle)
    e = triangle.boundary_intervals[0]
    p, q = ("edge", e, 1), ("edge", e, 2)
    assert mm[p, p] == F(-1) and mm[q, q] == F(-1)
    assert mm[p, q] == F(1, 2) and mm[q, p] == F(1, 2)
    iset, _ = exchange_matrix(triangle)
    for i in iset.unfrozen:
        assert all(mm[i, j] == 0 for j in iset.all)
    assert m_matrix(torus).entries == {}


def test_mutate_2x2_sign_flip():
    eps = small_matrix({(1, 2): F(1)}, n=2)
    out = mutate_matrix(eps, 1)
    assert out[1, 2] == F(-1)


def test_mutate_3x3_hand_example():
    eps = small_matrix({(1, 2): F(1), (2, 3): F(1)})
    out = mutate_matrix(eps, 2)
    assert out[1, 3] == F(1)
    assert out[1, 2] == F(-1)
    assert out[2, 3] == F(-1)


def test_mutate_frozen_rejected():
    eps = small_matrix({(1, 2): F(1)}, n=2, frozen={2})
    with pytest.raises(FrozenIndexMutation):
        mutate_matrix(eps, 2)


@settings(max_examples=60, deadline=None)
@given(
    st.dictionaries(
        st.tuples(st.integers(1, 4), st.integers(1, 4)).filter(lambda ij: ij[0] < ij[1]),
        st.integers(-3, 3),
        max_size=6,
    ),
    st.integers(1, 4),
)
def test_mutation_involution(entries, k):
    eps = small_matrix({ij: F(v) for ij, v in entries.items()}, n=4)
    assert mutate_matrix(mutate_matrix(eps, k), k) == eps


@pytest.mark.parametrize(
    "maker",
    [
        lambda: build(MarkedSurfaceSpec.polygon(4)),
        lambda: build(MarkedSurfaceSpec.polygon(5)),
        lambda: build(MarkedSurfaceSpec.annulus(1, 1)),
        lambda: build(MarkedSurfaceSpec.once_punctured_torus()),
    ],
)
def test_flip_sequence_matches_fresh_matrix(maker):
    tri = maker()
    for e in tri.interior_edges:
        steps, t2, corr = flip_mutation_sequence(tri, e)
        _, eps = exchange_matrix(tri)
        _, eps2 = exchange_matrix(t2)
        assert apply_matrix_steps(eps, steps) == eps2


def test_flip_sequence_then_reverse_is_identity(polygon4):
    e = polygon4.interior_edges[0]
    steps1, t2, _ = flip_mutation_sequence(polygon4, e)
    steps2, t3, _ = flip_mutation_sequence(t2, e)
    _, eps = exchange_matrix(polygon4)
    _, eps3 = exchange_matrix(t3)
    assert apply_matrix_steps(eps, steps1 + steps2) == eps3
    assert polygon4.is_isomorphic(t3)


def test_amalgamation_locality(polygon5):
    # per-triangle blocks add: deleting one triangle leaves the rest
    iset, eps = exchange_matrix(polygon5)
    t0 = polygon5.triangles[0]
    from sl3shear.seeds import _add_arrow

    local = RationalMatrix(iset.all)
    pairs = [iset.side_pair((t0, a)) for a in range(3)]
    for a in range(3):
        p, q = pairs[a]
        p_next = pairs[(a + 1) % 3][0]
        _add_arrow(local, p, ("tri", t0), 1)
        _add_arrow(local, ("tri", t0), q, 1)
        _add_arrow(local, q, p_next, 1)
        _add_arrow(local, q, p, F(1, 2))
    rest = RationalMatrix(iset.all)
    for (i, j), v in eps.matrix.entries.items():
        rest[i, j] = v - local[i, j]
    touched = {("tri", t0)}
    for a in range(3):
        touched.update(pairs[a])
    for (i, j), v in rest.entries.items():
        if i == ("tri", t0) or j == ("tri", t0):
            assert v == 0


def test_dynkin_sequence_triangle(triangle):
    steps = dynkin_mutation_sequence(triangle)
    t = triangle.triangles[0]
    assert steps[0] == Mutate(("tri", t))
    mapping = steps[-1].as_dict()
    for e in triangle.edges:
        assert mapping[("edge", e, 1)] == ("edge", e, 2)
        assert mapping[("edge", e, 2)] == ("edge", e, 1)


def test_dynkin_sequence_is_matrix_involution(polygon4, torus):
    for tri in (polygon4, torus):
        steps = dynkin_mutation_sequence(tri)
        _, eps = exchange_matrix(tri)
        assert apply_matrix_steps(eps, steps + steps) == eps


def test_matrix_json_roundtrip(polygon4):
    from sl3shear import io as jio

    _, eps = exchange_matrix(polygon4)
    obj = jio.exchange_matrix_to_obj(eps)
    back = jio.exchange_matrix_from_obj(obj)
    assert back == eps
