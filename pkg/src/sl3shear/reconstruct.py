"""Reconstruction of a good-position picture from shear coordinates.

The inverse map places a honeycomb of height |x_T| in every triangle and
infinite alternating corner-arc stacks at every corner, then pairs the
strand sets across each interior edge by the pinning rule

    n_L^+ = x_{E,1},  n_R^- = [x_{T_R}]_+,
    n_L^- = [x_{T_L}]_+,  n_R^+ = x_{E,2},

so that a strand at parameter t on one side is paired with the strand at
parameter (n_L + n_R) - t on the other.  Instead of materializing the
infinite picture, travelers are traced arithmetically on the parameters:
the finitely many crossings that do not hug a corner of their
quadrilateral seed the trace, peripheral components never appear, and a
spiralling end is recognized exactly when a full turn around a puncture
repeats with a deeper parameter.  Only the surviving travelers are
materialized, with spiral tails truncated to a sign marker after a fixed
number of extra turns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laminations import (
    CornerArc,
    GlobalPicture,
    Honeycomb,
    SpiralEnd,
    InvalidPicture,
    shear_unfrozen,
)
from .tropical import TropicalPoint, pos


class TruncationTooShallow(Exception):
    pass


class NonIntegralInput(Exception):
    pass


HALF = Fraction(1, 2)


def default_depth(x, tri):
    """The default truncation bound: the largest quadrilateral coordinate
    mass plus two."""
    best = 0
    for e in tri.interior_edges:
        (tl, _), (tr, _) = tri.slots(e)
        mass = (
            abs(x[("edge", e, 1)])
            + abs(x[("edge", e, 2)])
            + abs(x[("tri", tl)])
            + abs(x[("tri", tr)])
        )
        best = max(best, mass)
    return int(best) + 2


class _CoordTracer:
    """Traveler tracing on the implicit infinite picture of a coordinate
    vector.  States are (slot, direction, parameter) with direction 'in'
    or 'out' relative to the slot's triangle."""

    def __init__(self, tri, x, step_cap):
        self.tri = tri
        self.x = x
        self.step_cap = step_cap
        self._faces = {t: x[("tri", t)] for t in tri.triangles}
        self._sigma = {}
        for e in tri.interior_edges:
            (tl, _), (tr, _) = tri.slots(e)
            self._sigma[(e, "lr")] = x[("edge", e, 1)] + pos(self._faces[tr])
            self._sigma[(e, "rl")] = x[("edge", e, 2)] + pos(self._faces[tl])
        self.probe_span = 2 + max(
            (len(tri.corners_at_vertex(v)) for v in tri.vertices), default=2
        )

    def face(self, t):
        return self._faces[t]

    def in_legs(self, t):
        return pos(self._faces[t])

    def out_legs(self, t):
        return pos(-self._faces[t])

    def sigma(self, e, sheet):
        return self._sigma[(e, sheet)]

    # -- elementary moves -------------------------------------------------

    def step_out(self, slot, k):
        """Cross the biangle from an outgoing strand; None on boundary."""
        e = self.tri.edge_at(slot)
        sl, sr = self.tri.slots(e)
        if sr is None:
            return None
        if slot == sl:
            return (sr, "in", self.sigma(e, "lr") - k)
        return (sl, "in", self.sigma(e, "rl") - k)

    def step_in(self, slot, k):
        """Continue inside the triangle from an incoming strand.

        Returns ('turn', next_state, corner, hug) with hug 'initial' or
        'terminal', or ('sink', triangle)."""
        t, i = slot
        a = self.in_legs(t)
        if k < 0:
            nxt = ((t, (i - 1) % 3), "out", self.out_legs(t) - k)
            return ("turn", nxt, (t, (i - 1) % 3), "initial")
        if k < a:
            return ("sink", t)
        nxt = ((t, (i + 1) % 3), "out", a - k)
        return ("turn", nxt, (t, i % 3), "terminal")

    def step_back_in(self, slot, k):
        """Predecessor of an incoming strand: back across the biangle;
        None if the strand starts on the boundary."""
        e = self.tri.edge_at(slot)
        sl, sr = self.tri.slots(e)
        if sr is None:
            return None
        if slot == sr:
            return (sl, "out", self.sigma(e, "lr") - k)
        return (sr, "out", self.sigma(e, "rl") - k)

    def step_back_out(self, slot, k):
        """Predecessor of an outgoing strand inside its triangle.

        Returns ('turn', prev_state, corner, hug) or ('source', triangle);
        hug is named for the *backward* travel direction: 'terminal'
        turns wind clockwise toward the puncture (sign +)."""
        t, i = slot
        b = self.out_legs(t)
        if k > b:
            prev = ((t, (i + 1) % 3), "in", b - k)
            return ("turn", prev, (t, i % 3), "terminal")
        if k > 0:
            return ("source", t)
        prev = ((t, (i - 1) % 3), "in", self.in_legs(t) - k)
        return ("turn", prev, (t, (i - 1) % 3), "initial")

    # -- windows -----------------------------------------------------------

    def seed_window(self, e, sheet):
        """Half-integer out-parameters on the (left for 'lr', right for
        'rl') side whose crossings do not hug a corner."""
        (tl, _), (tr, _) = self.tri.slots(e)
        sigma = self.sigma(e, sheet)
        if sheet == "lr":
            own_legs = self.out_legs(tl)
            far_coord = self.x[("edge", e, 1)]
        else:
            own_legs = self.out_legs(tr)
            far_coord = self.x[("edge", e, 2)]
        lo = min(Fraction(0), far_coord)
        hi = max(own_legs, sigma)
        k = lo + HALF
        out = []
        while k < hi:
            out.append(k)
            k += 1
        return out

    def crossing_hugs(self, slot, k):
        """The corner hugged by a crossing leaving via (slot, k), or None
        if it does not hug: both ends must sit in matching corner zones."""
        nxt = self.step_out(slot, k)
        if nxt is None:
            return None
        slot2, _, k2 = nxt
        t, i = slot
        t2, i2 = slot2
        # terminal corner of the out-side matches initial corner of the
        # far side and vice versa
        if k > self.out_legs(t) and k2 < 0:
            return (t, i % 3)
        if k < 0 and k2 > self.in_legs(t2):
            return (t, (i - 1) % 3)
        return None


@dataclass
class Transit:
    corner: tuple
    orient: str  # arc orientation: 'ccw' for initial hugs, 'cw' for terminal
    rank: Fraction
    vertex: str


@dataclass
class Traveler:
    """A traced curve: an alternating sequence of crossings and transits.

    ``start``/``end`` are ('boundary', slot, param), ('source', tri),
    ('sink', tri) or ('spiral', vertex, sign); loops have both ends None.
    """

    crossings: list  # out-states (slot, 'out', param)
    transits: list  # Transit records, forward order
    start: tuple
    end: tuple
    tail_transits_start: list
    tail_transits_end: list
    kind: str  # 'arc' | 'loop' | 'spiral'
    key: tuple = None


def _hug_rank(tracer, corner, hug, in_state):
    """Depth rank of a turn among same-orientation arcs at its corner."""
    _, _, k = in_state
    t = in_state[0][0]
    if hug == "initial":
        return -k - HALF
    return k - tracer.in_legs(t) - HALF


def _spiral_probe(tracer, history):
    """Detect an infinite spiral from the recent turn history: a revisit
    of the same (slot, direction) with all turns in between winding the
    same way around one puncture vertex and the parameter moving deeper
    into its branch.  Same-direction turns around a common vertex make
    the one-turn return map a translation, so a deeper revisit repeats
    forever."""
    if len(history) < 2:
        return None
    state, vertex, kind = history[-1]
    # one full turn around a vertex revisits (slot, direction) within its
    # corner count, so a bounded backward scan suffices
    lo = max(0, len(history) - 1 - tracer.probe_span)
    for idx in range(len(history) - 2, lo - 1, -1):
        st2, v2, k2 = history[idx]
        if v2 != vertex or k2 != kind:
            return None
        if st2[0] == state[0] and st2[1] == state[1]:
            drift = state[2] - st2[2]
            if drift == 0:
                return None
            deeper = drift > 0 if state[2] > 0 else drift < 0
            if deeper and tracer.tri.vertices[vertex] == "puncture":
                return vertex
            return None
    return None


def _trace_forward(tracer, seed, stop_states=None):
    """Follow a traveler forward from an out-state until it terminates.

    Returns (crossings, transits, end, closed) where ``end`` describes
    the forward end and ``closed`` is True for a closed loop."""
    crossings = []
    transits = []
    hug_history = []
    state = seed
    visited = set()
    steps = 0
    while True:
        steps += 1
        if steps > tracer.step_cap:
            raise TruncationTooShallow("trace exceeded the step bound")
        if state in visited:
            return crossings, transits, None, True
        visited.add(state)
        slot, direction, k = state
        if direction == "out":
            crossings.append(state)
            nxt = tracer.step_out(slot, k)
            if nxt is None:
                return crossings, transits, ("boundary", slot, k), False
            state = nxt
            continue
        kind, *rest = tracer.step_in(slot, k)
        if kind == "sink":
            return crossings, transits, ("sink", rest[0]), False
        _, nxt, corner, hug = (kind, *rest)
        vertex = tracer.tri.corner_vertex(*corner)
        transits.append(
            Transit(
                corner,
                "ccw" if hug == "initial" else "cw",
                _hug_rank(tracer, corner, hug, state),
                vertex,
            )
        )
        hug_history.append((state, vertex, hug))
        sp = _spiral_probe(tracer, hug_history)
        if sp is not None:
            sign = "+" if hug == "terminal" else "-"
            # the tail continues from the out-state after this turn
            return crossings, transits, ("spiral", sp, sign, nxt), False
        state = nxt


def _trace_backward(tracer, seed):
    """Follow a traveler backward from an out-state to its start."""
    crossings = []
    transits = []
    hug_history = []
    state = seed
    visited = set()
    steps = 0
    first = True
    while True:
        steps += 1
        if steps > tracer.step_cap:
            raise TruncationTooShallow("trace exceeded the step bound")
        if state in visited:
            return crossings, transits, None, True
        visited.add(state)
        slot, direction, k = state
        if direction == "out":
            if not first:
                crossings.append(state)
            first = False
            kind, *rest = tracer.step_back_out(slot, k)
            if kind == "source":
                return crossings, transits, ("source", rest[0]), False
            _, prev, corner, hug = (kind, *rest)
            vertex = tracer.tri.corner_vertex(*corner)
            transits.append(
                Transit(
                    corner,
                    # backward 'terminal' hugs undo forward left turns
                    "ccw" if hug == "terminal" else "cw",
                    _hug_rank_backward(tracer, corner, hug, state),
                    vertex,
                )
            )
            hug_history.append((state, vertex, hug))
            sp = _spiral_probe(tracer, hug_history)
            if sp is not None:
                sign = "+" if hug == "terminal" else "-"
                # the tail continues backward from the in-state before
                return crossings, transits, ("spiral", sp, sign, prev), False
            state = prev
            continue
        prev = tracer.step_back_in(slot, k)
        if prev is None:
            return crossings, transits, ("boundary", slot, k), False
        state = prev


def _hug_rank_backward(tracer, corner, hug, out_state):
    (t, _), _, j = out_state
    if hug == "terminal":
        # forward left turn entering at parameter out_legs - j < 0
        return -(tracer.out_legs(t) - j) - HALF
    # forward right turn entering at in_legs - j > in_legs
    return (tracer.in_legs(t) - j) - tracer.in_legs(t) - HALF


def trace_coordinates(x, tri, step_cap):
    """All non-peripheral travelers of the implicit infinite picture."""
    tracer = _CoordTracer(tri, x, step_cap)
    seen = {}
    for e in tri.interior_edges:
        sl, sr = tri.slots(e)
        for sheet, slot in (("lr", sl), ("rl", sr)):
            for k in tracer.seed_window(e, sheet):
                if tracer.crossing_hugs(slot, k) is not None:
                    continue
                seed = (slot, "out", k)
                fc, ft, fend, closed = _trace_forward(tracer, seed)
                if closed:
                    trav = Traveler(fc, ft, None, None, [], [], "loop")
                else:
                    bc, bt, bend, closed_b = _trace_backward(tracer, seed)
                    crossings = list(reversed(bc)) + fc
                    transits = list(reversed(bt)) + ft
                    kind = "arc"
                    if (fend and fend[0] == "spiral") or (bend and bend[0] == "spiral"):
                        kind = "spiral"
                    trav = Traveler(crossings, transits, bend, fend, bt, ft, kind)
                # identify a traveler by its non-hugging crossings: the
                # portion of a spiral tail that a trace records depends on
                # where the trace started, the core does not
                core = [
                    s for s in trav.crossings
                    if tracer.crossing_hugs(s[0], s[2]) is None
                ]
                trav.key = min((str(s[0]), str(s[2])) for s in core)
                seen.setdefault(trav.key, trav)
    return tracer, sorted(seen.values(), key=lambda tv: tv.key)


def _extend_spiral(tracer, end_desc, forward, turns):
    """Materialize ``turns`` extra full turns of a spiral and the tail
    marker.  Returns (extra transits, (corner, channel_orient, rank,
    SpiralEnd))."""
    vertex = end_desc[1]
    state = end_desc[3]
    n_turns = turns * len(tracer.tri.corners_at_vertex(vertex))
    extra = []
    if forward:
        # state: the out-state continuing the spiral
        for _ in range(n_turns):
            s_in = tracer.step_out(state[0], state[2])
            _, nxt, corner, hug = tracer.step_in(s_in[0], s_in[2])
            extra.append(
                Transit(
                    corner,
                    "ccw" if hug == "initial" else "cw",
                    _hug_rank(tracer, corner, hug, s_in),
                    vertex,
                )
            )
            state = nxt
        s_in = tracer.step_out(state[0], state[2])
        _, _, corner, hug = tracer.step_in(s_in[0], s_in[2])
        winding = "cw" if hug == "terminal" else "ccw"
        rank = _hug_rank(tracer, corner, hug, s_in)
        channel = "cw" if hug == "terminal" else "ccw"
        marker = SpiralEnd(winding, outgoing=False)
    else:
        # state: the in-state continuing backward
        for _ in range(n_turns):
            s_out = tracer.step_back_in(state[0], state[2])
            _, prev, corner, hug = tracer.step_back_out(s_out[0], s_out[2])
            extra.append(
                Transit(
                    corner,
                    "ccw" if hug == "terminal" else "cw",
                    _hug_rank_backward(tracer, corner, hug, s_out),
                    vertex,
                )
            )
            state = prev
        s_out = tracer.step_back_in(state[0], state[2])
        _, _, corner, hug = tracer.step_back_out(s_out[0], s_out[2])
        winding = "cw" if hug == "terminal" else "ccw"
        rank = _hug_rank_backward(tracer, corner, hug, s_out)
        channel = "ccw" if hug == "terminal" else "cw"
        marker = SpiralEnd(winding, outgoing=True)
    return extra, (corner, channel, rank, marker)


def reconstruct(x, tri, depth=None, spiral_turns=2, normalize=True):
    """Build the good-position picture of an integral coordinate vector.

    Rational vectors are rejected with :class:`NonIntegralInput` when
    ``normalize`` is false; otherwise they are scaled integral first and
    the resulting picture rescaled back (weights 1/u).
    """
    from .seeds import Sl3IndexSet

    coords = {}
    for i in Sl3IndexSet(tri).all:
        coords[i] = Fraction(x[i]) if not _is_frozen(i, tri) else Fraction(0)
    nonint = [i for i, v in coords.items() if v.denominator != 1]
    if nonint:
        if not normalize:
            raise NonIntegralInput(nonint[0])
        from math import lcm

        u = lcm(*[coords[i].denominator for i in nonint])
        xs = TropicalPoint(
            "X", {i: v * u for i, v in coords.items()}, tri=tri, restricted=True
        )
        pic = reconstruct(xs, tri, depth=depth, spiral_turns=spiral_turns)
        return _rescale_picture(pic, Fraction(1, u))
    xv = _Coords(coords)
    if depth is None:
        depth = default_depth(xv, tri)
    step_cap = max(256, 8 * len(tri.edges) * (depth + 4))
    tracer, travelers = trace_coordinates(xv, tri, step_cap)
    return _materialize(tracer, travelers, spiral_turns)


class _Coords:
    def __init__(self, coords):
        self._c = coords

    def __getitem__(self, i):
        return self._c.get(i, Fraction(0))


def _is_frozen(i, tri):
    return i[0] == "edge" and tri.is_boundary(i[1])


def _rescale_picture(pic, w):
    from dataclasses import replace as _r

    honeycombs = {t: Honeycomb(h.orient, h.height, h.weight * w) for t, h in pic.honeycombs.items()}
    corners = {
        c: tuple(_r(entry, weight=entry.weight * w) for entry in stack)
        for c, stack in pic.corners.items()
    }
    return GlobalPicture(pic.tri, honeycombs, corners, pic.pairings)


def _materialize(tracer, travelers, spiral_turns):
    tri = tracer.tri
    honeycombs = {}
    for t in tri.triangles:
        v = tracer.face(t)
        if v > 0:
            honeycombs[t] = Honeycomb("sink", int(v))
        elif v < 0:
            honeycombs[t] = Honeycomb("source", int(-v))
    per_corner = {}

    def put(corner, channel, rank, entry):
        key = 2 * rank + (0 if channel == "cw" else 1)
        per_corner.setdefault(corner, []).append((key, entry))

    for trav in travelers:
        for tr in trav.transits:
            put(tr.corner, tr.orient, tr.rank, CornerArc(tr.orient))
        for end, forward in ((trav.start, False), (trav.end, True)):
            if end is not None and end[0] == "spiral":
                extra, (corner, channel, rank, marker) = _extend_spiral(
                    tracer, end, forward, spiral_turns
                )
                for tr in extra:
                    put(tr.corner, tr.orient, tr.rank, CornerArc(tr.orient))
                put(corner, channel, rank, marker)
    corners = {}
    for c, items in per_corner.items():
        items.sort(key=lambda kv: kv[0])
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise InvalidPicture(f"colliding stack ranks at corner {c}")
        corners[c] = tuple(entry for _, entry in items)
    pic = GlobalPicture(tri, honeycombs, corners)
    diags = pic.validate()
    if diags:
        raise InvalidPicture("; ".join(diags))
    return pic


# -- explicit-picture tracing ------------------------------------------------


@dataclass
class PictureTraveler:
    kind: str  # 'arc' | 'loop' | 'spiral'
    peripheral: bool
    route: tuple  # edge ids crossed, in forward order
    identifiers: tuple  # ((edge, k_out, k_in, sheet), ...) per crossing
    start: tuple
    end: tuple


def _picture_maps(pic):
    """Index the strand lists of a picture: continuation map inside the
    triangles and pairing map across the biangles."""
    tri = pic.tri
    lists = {}
    for t in tri.triangles:
        for i in range(3):
            for d in ("in", "out"):
                lists[((t, i), d)] = pic.strand_list((t, i), d)
    arc_ends = {}
    for (slot, d), refs in lists.items():
        for idx, ref in enumerate(refs):
            if ref.origin[0] == "corner":
                arc_ends.setdefault((ref.origin[1], ref.origin[2], d), []).append(
                    (slot, idx)
                )
    pair_fwd = {}
    pair_bwd = {}
    for e in tri.interior_edges:
        sl, sr = tri.slots(e)
        lr, rl = pic.pairings[e]
        for i, j in lr:
            pair_fwd[(sl, i)] = (sr, j)
            pair_bwd[(sr, j)] = (sl, i)
        for i, j in rl:
            pair_fwd[(sr, i)] = (sl, j)
            pair_bwd[(sl, j)] = (sr, i)
    return lists, arc_ends, pair_fwd, pair_bwd


def _continue_inside(pic, lists, arc_ends, slot, idx):
    """From an incoming strand, the outgoing strand where its component
    leaves the triangle, or a terminal event."""
    ref = lists[(slot, "in")][idx]
    if ref.origin[0] == "leg":
        return ("sink", slot[0])
    _, corner, p = ref.origin
    entry = pic.corner_stack(corner)[p]
    if isinstance(entry, SpiralEnd):
        return ("spiral", pic.tri.corner_vertex(*corner), entry.sign)
    outs = arc_ends.get((corner, p, "out"), [])
    if len(outs) != 1:
        raise InvalidPicture(f"arc at {corner} lacks an outgoing end")
    return ("go", *outs[0])


def _continue_back_inside(pic, lists, arc_ends, slot, idx):
    ref = lists[(slot, "out")][idx]
    if ref.origin[0] == "leg":
        return ("source", slot[0])
    _, corner, p = ref.origin
    entry = pic.corner_stack(corner)[p]
    if isinstance(entry, SpiralEnd):
        return ("spiral", pic.tri.corner_vertex(*corner), entry.sign)
    ins = arc_ends.get((corner, p, "in"), [])
    if len(ins) != 1:
        raise InvalidPicture(f"arc at {corner} lacks an incoming end")
    return ("go", *ins[0])


def traveler_trace(pic):
    """Trace every curve of a picture, classifying its type and recording
    its route and biangle identifiers."""
    diags = pic.validate()
    if diags:
        raise InvalidPicture("; ".join(diags))
    tri = pic.tri
    lists, arc_ends, pair_fwd, pair_bwd = _picture_maps(pic)
    visited = set()
    travelers = []
    starts = []
    for (slot, d), refs in sorted(lists.items(), key=lambda kv: str(kv[0])):
        if d != "out":
            continue
        for idx in range(len(refs)):
            starts.append((slot, idx))
    for start in starts:
        if start in visited:
            continue
        # walk backward to the beginning of the component (or find a loop)
        pos0 = start
        start_desc = None
        seen_back = set()
        while True:
            if pos0 in seen_back:
                start_desc = ("loop",)
                break
            seen_back.add(pos0)
            back = _continue_back_inside(pic, lists, arc_ends, *pos0)
            if back[0] != "go":
                start_desc = back
                break
            prev_in = back[1:]
            if prev_in not in pair_bwd:
                start_desc = ("boundary", *prev_in)
                break
            pos0 = pair_bwd[prev_in]
        head = pos0
        # walk forward collecting route and identifiers
        route = []
        idents = []
        posn = head
        end_desc = None
        seen_fwd = set()
        while True:
            if posn in seen_fwd:
                end_desc = ("loop",)
                break
            seen_fwd.add(posn)
            visited.add(posn)
            slot, idx = posn
            e = tri.edge_at(slot)
            nxt = pair_fwd.get(posn)
            if nxt is None:
                end_desc = ("boundary", slot, idx)
                route.append(e)
                break
            sl, _ = tri.slots(e)
            sheet = "lr" if slot == sl else "rl"
            k_out = pic.strand_parameter(slot, "out", idx)
            k_in = pic.strand_parameter(nxt[0], "in", nxt[1])
            route.append(e)
            idents.append((e, k_out, k_in, sheet))
            step = _continue_inside(pic, lists, arc_ends, *nxt)
            if step[0] != "go":
                end_desc = step
                break
            posn = step[1:]
        if start_desc == ("loop",):
            verts = _loop_vertices(pic, head, lists, arc_ends, pair_fwd)
            peripheral = verts is not None
            travelers.append(
                PictureTraveler("loop", peripheral, tuple(route), tuple(idents), None, None)
            )
            continue
        kind = "arc"
        if (end_desc and end_desc[0] == "spiral") or start_desc[0] == "spiral":
            kind = "spiral"
        travelers.append(
            PictureTraveler(kind, False, tuple(route), tuple(idents), start_desc, end_desc)
        )
    return travelers


def _loop_vertices(pic, head, lists, arc_ends, pair_fwd):
    """The common hugged vertex of a closed loop, or None if the loop is
    not peripheral."""
    verts = set()
    posn = head
    seen = set()
    while posn not in seen:
        seen.add(posn)
        nxt = pair_fwd[posn]
        step = _continue_inside(pic, lists, arc_ends, *nxt)
        if step[0] != "go":
            return None
        ref = lists[(nxt[0], "in")][nxt[1]]
        _, corner, _ = ref.origin
        verts.add(pic.tri.corner_vertex(*corner))
        posn = step[1:]
    return verts if len(verts) == 1 else None


def identifier_relations(pic, x=None):
    """Check the traveler-identifier relations on every biangle crossing:
    k_out + k_in = x_{E,1} + [x_{T_R}]_+ on the left-to-right sheet and
    x_{E,2} + [x_{T_L}]_+ on the other.  Returns a list of violations."""
    if x is None:
        x = shear_unfrozen(pic)
    tri = pic.tri
    bad = []
    for trav in traveler_trace(pic):
        for (e, k_out, k_in, sheet) in trav.identifiers:
            (tl, _), (tr, _) = tri.slots(e)
            if sheet == "lr":
                want = x[("edge", e, 1)] + pos(x[("tri", tr)])
            else:
                want = x[("edge", e, 2)] + pos(x[("tri", tl)])
            if k_out + k_in != want:
                bad.append((e, sheet, k_out, k_in, want))
    return bad


def roundtrip_check(x, tri, depth=None):
    """Verify shear(reconstruct(x)) == x exactly, with depth stability.

    Rational vectors are handled by positive rescaling.  Returns a dict
    report with the reconstructed picture included.
    """
    from math import lcm

    from .seeds import Sl3IndexSet

    coords = {i: Fraction(x[i]) for i in Sl3IndexSet(tri).unfrozen}

    u = lcm(*[v.denominator for v in coords.values()]) if coords else 1
    xi = TropicalPoint("X", {i: v * u for i, v in coords.items()}, tri=tri, restricted=True)
    if depth is None:
        depth = default_depth(_Coords(dict(xi.coords)), tri)
    pic = reconstruct(xi, tri, depth=depth)
    pic2 = reconstruct(xi, tri, depth=depth + 2)
    y = shear_unfrozen(pic)
    y2 = shear_unfrozen(pic2)
    target = TropicalPoint("X", dict(xi.coords), tri=tri, restricted=True)
    report = {
        "ok": y == target and y2 == target,
        "stable": y == y2,
        "scale": u,
        "picture": pic,
        "shear": y,
    }
    return report
