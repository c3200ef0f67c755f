"""Randomized property suites: the shipping form of the acceptance
criteria.  Every suite is deterministic given its seed and checks exact
equality of rationals; there are no tolerances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .surface import MarkedSurfaceSpec, build
from .seeds import (
    Sl3IndexSet,
    exchange_matrix,
    extended_matrix,
    m_matrix,
    mutate_matrix,
)
from .tropical import (
    TropicalPoint,
    apply_flip,
    dynkin_cluster,
    dynkin_cluster_by_mutation,
    ensemble,
    flip_x_closed_form,
    mutate_a,
    mutate_x,
    principal_embed,
)
from .laminations import (
    Component,
    ComponentSum,
    CornerArc,
    GlobalPicture,
    Honeycomb,
    PinnedLamination,
    add_peripheral_chain,
    coords_of_components,
    dynkin_geometric,
    elementary_lamination,
    geometric_ensemble,
    shear_frozen,
    shear_unfrozen,
)
from .reconstruct import identifier_relations, reconstruct, roundtrip_check
from .glue import ShiftElement, glue_coordinates, glue_laminations, shift_action


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}"


def _fixtures():
    return {
        "triangle": build(MarkedSurfaceSpec.polygon(3)),
        "polygon4": build(MarkedSurfaceSpec.polygon(4)),
        "polygon5": build(MarkedSurfaceSpec.polygon(5)),
        "annulus11": build(MarkedSurfaceSpec.annulus(1, 1)),
        "torus": build(MarkedSurfaceSpec.once_punctured_torus()),
    }


def _random_rational(rng, num=20, den=8):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _random_x(rng, iset, restricted=True, num=20, den=8):
    domain = iset.unfrozen if restricted else iset.all
    coords = {i: _random_rational(rng, num, den) for i in domain}
    return coords


def flip_equivalence_suite(trials=1000, seed=0):
    """Criterion 1: the 4-mutation flip composite equals the closed-form
    map exactly, on polygon(4) with rational points."""
    rng = random.Random(seed)
    tri = build(MarkedSurfaceSpec.polygon(4))
    iset = Sl3IndexSet(tri)
    e = tri.interior_edges[0]
    fails = 0
    for _ in range(trials):
        p = TropicalPoint("X", _random_x(rng, iset, restricted=False), tri=tri)
        if apply_flip(p, tri, e) != flip_x_closed_form(p, tri, e):
            fails += 1
    return SuiteResult(
        "flip-equivalence", fails == 0, f"{trials} rational points, {fails} mismatches"
    )


def roundtrip_suite(trials=500, seed=0, entry_range=6):
    """Criterion 2: shear(reconstruct(x)) == x with depth stability, on
    polygon(4), polygon(5), annulus(1,1) and the once-punctured torus."""
    rng = random.Random(seed)
    fx = _fixtures()
    fails = []
    total = 0
    for name in ("polygon4", "polygon5", "annulus11", "torus"):
        tri = fx[name]
        iset = Sl3IndexSet(tri)
        for _ in range(trials):
            coords = {i: Fraction(rng.randint(-entry_range, entry_range)) for i in iset.unfrozen}
            x = TropicalPoint("X", coords, tri=tri, restricted=True)
            rep = roundtrip_check(x, tri)
            total += 1
            if not (rep["ok"] and rep["stable"]):
                fails.append((name, coords))
    return SuiteResult(
        "round-trip", not fails, f"{total} integral vectors on 4 fixtures, {len(fails)} failures"
    )


def _ensemble_of(a_coords, tri):
    _, ext = extended_matrix(tri)
    out = {}
    for (i, j), v in ext.entries.items():
        aj = a_coords.get(j, Fraction(0))
        if aj:
            out[i] = out.get(i, Fraction(0)) + v * aj
    return {k: v for k, v in out.items() if v}


def component_table_cases():
    tri3 = build(MarkedSurfaceSpec.polygon(3))
    tri4 = build(MarkedSurfaceSpec.polygon(4))
    t3 = tri3.triangles[0]
    e4 = tri4.interior_edges[0]
    cases = []
    for kind in ("alpha", "alpha-star"):
        for c in range(3):
            cases.append((tri3, Component(kind, t3, Fraction(1), corner=c)))
    for kind in ("tau+", "tau-"):
        cases.append((tri3, Component(kind, t3, Fraction(1))))
    for kind in (
        "alpha+", "alpha+rev", "alpha-", "alpha-rev",
        "tau+L", "tau+R", "tau-L", "tau-R", "h", "h-rev",
    ):
        cases.append((tri4, Component(kind, e4, Fraction(1))))
    for v in sorted(tri3.vertices):
        for kind in ("peripheral-cw", "peripheral-ccw"):
            cases.append((tri3, Component(kind, v, Fraction(1))))
    for v in sorted(tri4.vertices):
        for kind in ("peripheral-cw", "peripheral-ccw"):
            cases.append((tri4, Component(kind, v, Fraction(1))))
    return cases


def ensemble_table_suite():
    """Criterion 3: every encoded component table satisfies
    X = (eps + m) . A entry-exactly, and the paper's alpha and tau+ rows
    come out as (0,0,-1,0,0,0,0) and (1,0,-1,0,-1,0,-1)."""
    fails = []
    for tri, comp in component_table_cases():
        s = ComponentSum(tri, [comp])
        a = coords_of_components(s, "A")
        x = coords_of_components(s, "X")
        if dict(x.coords) != _ensemble_of(a.coords, tri):
            fails.append(comp.kind)
    tri3 = build(MarkedSurfaceSpec.polygon(3))
    t3 = tri3.triangles[0]
    alpha = coords_of_components(
        ComponentSum(tri3, [Component("alpha", t3, Fraction(1), corner=0)]), "X"
    )
    tau = coords_of_components(ComponentSum(tri3, [Component("tau+", t3, Fraction(1))]), "X")
    iset3 = Sl3IndexSet(tri3)
    pairs = [iset3.side_pair((t3, a)) for a in range(3)]
    order = [("tri", t3), pairs[1][0], pairs[1][1], pairs[2][0], pairs[2][1], pairs[0][0], pairs[0][1]]
    alpha_row = tuple(alpha[i] for i in order)
    tau_row = tuple(tau[i] for i in order)
    if alpha_row != (0, 0, -1, 0, 0, 0, 0):
        fails.append(f"alpha row {alpha_row}")
    if tau_row != (1, 0, -1, 0, -1, 0, -1):
        fails.append(f"tau+ row {tau_row}")
    n = len(component_table_cases()) + 2
    return SuiteResult(
        "ensemble-tables", not fails, f"{n} table checks, failures: {fails or 'none'}"
    )


def ensemble_flip_suite(trials=300, seed=0):
    """Criterion 4: ensemble o (A-flip) == (X-flip) o ensemble on
    polygon(4), exactly."""
    rng = random.Random(seed)
    tri = build(MarkedSurfaceSpec.polygon(4))
    iset = Sl3IndexSet(tri)
    e = tri.interior_edges[0]
    fails = 0
    for _ in range(trials):
        a = TropicalPoint("A", _random_x(rng, iset, restricted=False), tri=tri)
        a2 = apply_flip(a, tri, e)
        lhs = ensemble(a2, a2.tri)
        rhs = apply_flip(ensemble(a, tri), tri, e)
        if lhs != rhs:
            fails += 1
    return SuiteResult(
        "ensemble-flip-commutation", fails == 0, f"{trials} rational A-points, {fails} mismatches"
    )


def ensemble_single_mutation_report(trials=200, seed=0):
    """Convention diagnostic (not a pass/fail gate): the ensemble also
    commutes with single arbitrary mutations when the frozen m-matrix is
    held fixed."""
    rng = random.Random(seed)
    tri = build(MarkedSurfaceSpec.polygon(4))
    iset, eps = exchange_matrix(tri)
    mm = m_matrix(tri)
    fails = 0
    for _ in range(trials):
        a = TropicalPoint("A", _random_x(rng, iset, restricted=False, num=10, den=4), tri=tri)
        k = rng.choice(iset.unfrozen)
        a2 = mutate_a(a, eps, k)
        eps2 = mutate_matrix(eps, k)
        lhs = {}
        for (i, j), v in (eps2.matrix + mm).entries.items():
            if a2[j]:
                lhs[i] = lhs.get(i, Fraction(0)) + v * a2[j]
        lhs = {k2: v for k2, v in lhs.items() if v}
        x0 = TropicalPoint("X", _ensemble_of(a.coords, tri), tri=tri)
        rhs = mutate_x(x0, eps, k)
        if lhs != dict(rhs.coords):
            fails += 1
    return SuiteResult(
        "ensemble-single-mutation (diagnostic)",
        True,
        f"{trials} single mutations, {fails} mismatches observed",
    )


def realizable_component_sum(tri, rng, n_components=3):
    """A random component sum that is realizable as a picture: the
    honeycomb orientations within each triangle agree."""
    tri_kinds = ["alpha", "alpha-star", "tau+", "tau-"]
    quad_kinds = [
        "alpha+", "alpha+rev", "alpha-", "alpha-rev",
        "tau+L", "tau+R", "tau-L", "tau-R", "h", "h-rev",
    ]
    hc_orient = {
        "tau+": {"carrier": "sink"},
        "tau-": {"carrier": "source"},
        "tau+L": {"left": "sink"}, "tau+R": {"left": "sink"},
        "tau-L": {"left": "source"}, "tau-R": {"left": "source"},
        "h": {"left": "sink", "right": "source"},
        "h-rev": {"left": "source", "right": "sink"},
    }
    orient_of = {}
    comps = []
    guard = 0
    while len(comps) < n_components and guard < 50 * n_components:
        guard += 1
        if tri.interior_edges and rng.random() < 0.6:
            e = rng.choice(tri.interior_edges)
            kind = rng.choice(quad_kinds)
            (tl, _), (tr, _) = tri.slots(e)
            need = {}
            spec = hc_orient.get(kind, {})
            if "left" in spec:
                need[tl] = spec["left"]
            if "right" in spec:
                need[tr] = spec["right"]
            if any(orient_of.get(t2, need[t2]) != need[t2] for t2 in need):
                continue
            orient_of.update(need)
            comps.append(Component(kind, e, Fraction(rng.randint(1, 3))))
        else:
            t = rng.choice(tri.triangles)
            kind = rng.choice(tri_kinds)
            if kind in ("tau+", "tau-"):
                if any(tri.is_interior(tri.edge_at((t, a))) for a in range(3)):
                    continue
                need = hc_orient[kind]["carrier"]
                if orient_of.get(t, need) != need:
                    continue
                orient_of[t] = need
                comps.append(Component(kind, t, Fraction(rng.randint(1, 3))))
            else:
                corner = rng.randint(0, 2)
                if tri.is_interior(tri.edge_at((t, corner))) or tri.is_interior(
                    tri.edge_at((t, (corner + 1) % 3))
                ):
                    continue
                comps.append(Component(kind, t, Fraction(rng.randint(1, 3)), corner=corner))
        if rng.random() < 0.3:
            v = rng.choice(sorted(tri.vertices))
            comps.append(
                Component(rng.choice(["peripheral-cw", "peripheral-ccw"]), v, Fraction(rng.randint(1, 2)))
            )
    return ComponentSum(tri, comps)


def dynkin_suite(trials=500, seed=0):
    """Criterion 5: the closed-form Dynkin action equals the mutation
    composite, squares to the identity, and intertwines the geometric
    orientation reversal on component fixtures."""
    rng = random.Random(seed)
    fx = _fixtures()
    fails = []
    for name in ("triangle", "polygon4", "annulus11", "torus"):
        tri = fx[name]
        iset = Sl3IndexSet(tri)
        for _ in range(trials):
            p = TropicalPoint("X", _random_x(rng, iset, restricted=False, num=12, den=6), tri=tri)
            q = dynkin_cluster(p, tri)
            if q != dynkin_cluster_by_mutation(p, tri):
                fails.append((name, "closed-vs-sequence"))
            if dynkin_cluster(q, tri) != p:
                fails.append((name, "involution"))
    for name in ("triangle", "polygon4"):
        tri = fx[name]
        for _ in range(200):
            s = realizable_component_sum(tri, rng)
            delta = {
                e: (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
                for e in tri.boundary_intervals
            }
            pl = PinnedLamination(s, delta)
            lhs = shear_frozen(dynkin_geometric(pl))
            rhs = dynkin_cluster(shear_frozen(pl), tri)
            if lhs != rhs:
                fails.append((name, "geometric"))
    return SuiteResult("dynkin-coherence", not fails, f"failures: {fails[:4] or 'none'}")


def two_triangle_fixture():
    return build(
        MarkedSurfaceSpec.table([("T0", ("a0", "a1", "a2")), ("T1", ("b0", "b1", "b2"))])
    )


def random_pinned_two_triangles(rng, integral=True):
    tri = two_triangle_fixture()
    honeycombs = {}
    corners = {}
    for t in tri.triangles:
        r = rng.randint(-3, 3)
        if r > 0:
            honeycombs[t] = Honeycomb("sink", r)
        elif r < 0:
            honeycombs[t] = Honeycomb("source", -r)
        for c in range(3):
            stack = []
            for _ in range(rng.randint(0, 3)):
                w = Fraction(rng.randint(1, 3)) if integral else Fraction(
                    rng.randint(1, 5), rng.randint(1, 3)
                )
                stack.append(CornerArc(rng.choice(["cw", "ccw"]), w))
            if stack:
                corners[(t, c)] = stack
    pic = GlobalPicture(tri, honeycombs, corners)
    delta = {}
    for e in tri.boundary_intervals:
        if integral:
            delta[e] = (Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
        else:
            delta[e] = (
                Fraction(rng.randint(-8, 8), rng.randint(1, 3)),
                Fraction(rng.randint(-8, 8), rng.randint(1, 3)),
            )
    return PinnedLamination(pic, delta)


def _glued_expectation(x, e_l, e_r):
    want = {}
    e1, e2 = glue_coordinates(
        (x[("edge", e_l, 1)], x[("edge", e_l, 2)]),
        (x[("edge", e_r, 1)], x[("edge", e_r, 2)]),
    )
    if e1:
        want[("edge", e_l, 1)] = e1
    if e2:
        want[("edge", e_l, 2)] = e2
    for i, v in x.coords.items():
        if i[0] == "edge" and i[1] in (e_l, e_r):
            continue
        if v:
            want[i] = v
    return want


def amalgamation_suite(trials=200, shift_trials=100, seed=0):
    """Criterion 6: picture-level gluing of two triangles into the square
    satisfies the crosswise sum formula and is shift-invariant."""
    rng = random.Random(seed)
    fails = 0
    for _ in range(trials):
        pl = random_pinned_two_triangles(rng)
        x = shear_frozen(pl)
        glued = glue_laminations(pl, "a2", "b0")
        if dict(shear_frozen(glued).coords) != _glued_expectation(x, "a2", "b0"):
            fails += 1
    shift_fails = 0
    for _ in range(shift_trials):
        pl = random_pinned_two_triangles(rng, integral=bool(rng.getrandbits(1)))
        mu = ShiftElement(_random_rational(rng, 5, 3), _random_rational(rng, 5, 3))
        g1 = glue_laminations(pl, "a2", "b0")
        g2 = glue_laminations(shift_action(pl, "a2", "b0", mu), "a2", "b0")
        if shear_frozen(g1) != shear_frozen(g2):
            shift_fails += 1
    ok = fails == 0 and shift_fails == 0
    return SuiteResult(
        "amalgamation",
        ok,
        f"{trials} gluings ({fails} bad), {shift_trials} shifts ({shift_fails} bad)",
    )


def principal_suite(trials=200, seed=0):
    """Criterion 7: the embedded sl2 locus x_{E,1} = x_{E,2}, x_T = 0 is
    fixed by the Dynkin action and preserved by every flip."""
    rng = random.Random(seed)
    fx = _fixtures()
    fails = []
    for name in ("triangle", "polygon4", "polygon5", "annulus11", "torus"):
        tri = fx[name]
        for _ in range(trials):
            sl2 = {e: _random_rational(rng, 8, 4) for e in tri.edges}
            p = principal_embed(sl2, tri)
            for e in tri.edges:
                if p[("edge", e, 1)] != p[("edge", e, 2)]:
                    fails.append((name, "locus"))
            if dynkin_cluster(p, tri) != p:
                fails.append((name, "dynkin-fixed"))
            for e in tri.interior_edges:
                q = apply_flip(p, tri, e)
                if any(q[("tri", t)] != 0 for t in q.tri.triangles) or any(
                    q[("edge", e2, 1)] != q[("edge", e2, 2)] for e2 in q.tri.edges
                ):
                    fails.append((name, f"flip {e}"))
    return SuiteResult("principal-locus", not fails, f"failures: {fails[:4] or 'none'}")


def elementary_suite():
    """Criterion 8: shear_frozen(elementary_lamination(k)) = -e_k for
    every index on the triangle and the square."""
    fails = []
    for name in ("triangle", "polygon4"):
        tri = _fixtures()[name]
        iset = Sl3IndexSet(tri)
        for k in iset.all:
            pl = elementary_lamination(tri, k)
            x = shear_frozen(pl)
            if dict(x.coords) != {k: Fraction(-1)}:
                fails.append((name, k, dict(x.coords)))
    return SuiteResult("elementary-laminations", not fails, f"failures: {fails[:3] or 'none'}")


def traveler_suite(trials=100, seed=0, entry_range=4):
    """Criterion 9: the identifier relations k_out + k_in = x_{E,1} +
    [x_{T_R}]_+ (and the mirrored sheet) on reconstructed fixtures."""
    rng = random.Random(seed)
    fx = _fixtures()
    fails = 0
    total = 0
    for name in ("polygon4", "polygon5", "annulus11", "torus"):
        tri = fx[name]
        iset = Sl3IndexSet(tri)
        for _ in range(trials):
            coords = {i: Fraction(rng.randint(-entry_range, entry_range)) for i in iset.unfrozen}
            x = TropicalPoint("X", coords, tri=tri, restricted=True)
            pic = reconstruct(x, tri)
            total += 1
            if identifier_relations(pic, x):
                fails += 1
    return SuiteResult(
        "traveler-identifiers", fails == 0, f"{total} reconstructions, {fails} with violations"
    )


SUITES = {
    "flip": lambda trials, seed: flip_equivalence_suite(max(trials, 1), seed),
    "roundtrip": lambda trials, seed: roundtrip_suite(max(trials // 4, 1), seed),
    "ensemble-tables": lambda trials, seed: ensemble_table_suite(),
    "ensemble-flip": lambda trials, seed: ensemble_flip_suite(max(trials, 1), seed),
    "dynkin": lambda trials, seed: dynkin_suite(max(trials // 4, 1), seed),
    "amalgamation": lambda trials, seed: amalgamation_suite(
        max(trials, 1), max(trials // 2, 1), seed
    ),
    "principal": lambda trials, seed: principal_suite(max(trials // 4, 1), seed),
    "elementary": lambda trials, seed: elementary_suite(),
    "travelers": lambda trials, seed: traveler_suite(max(trials // 4, 1), seed),
}


def run_suites(names, trials, seed):
    results = []
    for name in names:
        results.append(SUITES[name](trials, seed))
    results.append(ensemble_single_mutation_report(min(trials, 200), seed))
    return results
