"""Triangulation states with exact coordinates and the flip action.

A state is a triangulation reached from the canonical base T0 by flips.  It
stores, for every edge of T0, the normal data of that base arc expressed in
the *current* frame.  The intersection matrix between current edges and base
edges is the transpose read-off of those laminations, which is exactly what
an isotopy key needs, so flipping is a local update and no global retracing
ever happens.
"""

from __future__ import annotations

from .errors import CoordinateError, DescentError, FlipError, WordError
from .normal import NormalData
from .surfaces import CombTriangulation, SurfaceSig, base_triangulation


class IsotopyKey:
    """Identity of a flip-graph vertex: sorted rows of (vector, tag) pairs.

    Rows are geometric intersection vectors of the triangulation's edges
    against the base edges; sorting makes the key invariant under edge
    relabeling.
    """

    __slots__ = ("sig", "rows", "_hash")

    def __init__(self, sig: SurfaceSig, rows):
        self.sig = sig
        self.rows = tuple(sorted(rows))
        self._hash = hash((sig, self.rows))

    def __eq__(self, other):
        return (
            isinstance(other, IsotopyKey)
            and self.sig == other.sig
            and self.rows == other.rows
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"IsotopyKey({self.sig}, {len(self.rows)} rows)"

    def to_json_dict(self):
        return {
            "surface": {"genus": self.sig.genus, "punctures": self.sig.punctures},
            "rows": [
                {"vector": [str(v) for v in vec], "tag": tag} for vec, tag in self.rows
            ],
        }


class TriState:
    """A triangulation of S reached from T0 by a recorded flip word."""

    __slots__ = ("base", "frame", "base_rows", "history", "_key")

    def __init__(self, base, frame, base_rows, history):
        self.base = base
        self.frame = frame
        self.base_rows = base_rows
        self.history = history
        self._key = None

    @classmethod
    def from_base(cls, sig_or_base):
        base = (
            sig_or_base
            if isinstance(sig_or_base, CombTriangulation)
            else base_triangulation(sig_or_base)
        )
        rows = tuple(NormalData.edge_arc(base, e) for e in range(base.num_edges))
        return cls(base, base, rows, ())

    @property
    def sig(self):
        return self.base.sig

    def flippable_edges(self):
        return self.frame.flippable_edges()

    def flip(self, e: int) -> "TriState":
        new_frame, sq = self.frame.flip(e)
        rows = tuple(x.apply_flip(new_frame, sq) for x in self.base_rows)
        return TriState(self.base, new_frame, rows, self.history + (e,))

    def carry(self, lam: NormalData, e: int):
        """Transport an extra lamination along the flip of edge ``e``."""
        new_frame, sq = self.frame.flip(e)
        return lam.apply_flip(new_frame, sq)

    def row_vector(self, j: int):
        """Intersection numbers of current edge ``j`` with the base edges."""
        return tuple(x.edge_weight(j) for x in self.base_rows)

    def row_tag(self, j: int):
        for k, x in enumerate(self.base_rows):
            if x.parallel[j]:
                return k
        return None

    def key(self) -> IsotopyKey:
        if self._key is None:
            rows = []
            for j in range(self.frame.num_edges):
                vec = self.row_vector(j)
                tag = self.row_tag(j) if not any(vec) else None
                rows.append((vec, -1 if tag is None else tag))
            self._key = IsotopyKey(self.sig, rows)
        return self._key

    def edge_arc_in_base(self, j: int) -> NormalData:
        """The arc of current edge ``j`` expressed over the base frame."""
        from .normal import arc_from_vector

        vec = self.row_vector(j)
        tag = self.row_tag(j) if not any(vec) else None
        return arc_from_vector(self.base, vec, tag)

    def to_json_dict(self):
        d = self.frame.to_json_dict()
        d["rows"] = [
            {
                "vector": [str(v) for v in self.row_vector(j)],
                "tag": self.row_tag(j) if not any(self.row_vector(j)) else None,
            }
            for j in range(self.frame.num_edges)
        ]
        d["word"] = list(self.history)
        return d


# -- descent ------------------------------------------------------------


def _flip_all(frame, lams, e):
    new_frame, sq = frame.flip(e)
    return new_frame, [x.apply_flip(new_frame, sq) for x in lams]


def _choose_flip(frame, target):
    """Spec strategy: flippable edge with maximal target weight, lowest label."""
    best = None
    for e in sorted(frame.flippable_edges()):
        w = target.edge_weight(e)
        if best is None or w > best[0]:
            best = (w, e)
    if best is None:
        raise DescentError("no flippable edges")
    return best[1]


def _plateau_escape(frame, target, limit=60000):
    """Breadth-first hunt for a flip path that strictly drops total weight."""
    start_w = target.total_weight()
    seen = {(frame.key(), target.key())}
    queue = [(frame, target, ())]
    head = 0
    while head < len(queue):
        f, x, path = queue[head]
        head += 1
        for e in sorted(f.flippable_edges()):
            nf, sq = f.flip(e)
            nx = x.apply_flip(nf, sq)
            if nx.total_weight() < start_w:
                return path + (e,)
            k = (nf.key(), nx.key())
            if k not in seen and len(seen) < limit:
                seen.add(k)
                queue.append((nf, nx, path + (e,)))
    raise DescentError("plateau escape exhausted its search budget")


def descend_to_edge(frame, lams, target_index):
    """Flip the frame until the target arc becomes an edge.

    Returns (frame, lams, edge index, flip path).  The iteration cap of ten
    times the starting weight is a bug tripwire, not a tunable.
    """
    lams = list(lams)
    target = lams[target_index]
    if target.num_ends() not in (0, 2) or not target.is_single_arc():
        raise CoordinateError("descent target must be a single arc")
    cap = 10 * target.total_weight() + 30
    path = []
    stall = 0
    last_w = target.total_weight()
    while not target.is_zero():
        if len(path) > cap:
            raise DescentError(
                f"descent exceeded its iteration cap of {cap}; "
                "this indicates a transport bug"
            )
        if stall >= 25:
            for e in _plateau_escape(frame, target):
                frame, lams = _flip_all(frame, lams, e)
                path.append(e)
            target = lams[target_index]
            stall = 0
            last_w = target.total_weight()
            continue
        e = _choose_flip(frame, target)
        frame, lams = _flip_all(frame, lams, e)
        path.append(e)
        target = lams[target_index]
        w = target.total_weight()
        if w < last_w:
            stall = 0
            last_w = w
        else:
            stall += 1
    edge = next(e for e, k in enumerate(target.parallel) if k)
    return frame, lams, edge, tuple(path)


def shorten_curve(frame, lams, target_index):
    """Flip until the target closed curve has total weight two."""
    lams = list(lams)
    target = lams[target_index]
    if target.num_ends() or sum(target.parallel):
        raise CoordinateError("shorten target must be a closed multicurve")
    cap = 10 * target.total_weight() + 60
    path = []
    stall = 0
    last_w = target.total_weight()
    while target.total_weight() > 2:
        if len(path) > cap:
            raise DescentError("curve shortening exceeded its cap")
        if stall >= 25:
            for e in _plateau_escape(frame, target):
                frame, lams = _flip_all(frame, lams, e)
                path.append(e)
            target = lams[target_index]
            stall = 0
            last_w = target.total_weight()
            continue
        e = _choose_flip(frame, target)
        frame, lams = _flip_all(frame, lams, e)
        path.append(e)
        target = lams[target_index]
        w = target.total_weight()
        if w < last_w:
            stall = 0
            last_w = w
        else:
            stall += 1
    return frame, lams, tuple(path)


# -- geometric intersection numbers ----------------------------------------


def intersection_number(a: NormalData, b: NormalData) -> int:
    """Minimal-position intersection count of two single objects.

    Arcs are descended until they coincide with an edge, carrying the other
    object along; curve pairs are settled in a frame where one of them has
    weight two, where the relative position freedom is a finite grid.
    """
    if a.frame != b.frame:
        raise CoordinateError("objects live over different frames")
    for x, y in ((a, b), (b, a)):
        if x.is_zero() and sum(x.parallel) == 1:
            e = next(i for i, k in enumerate(x.parallel) if k)
            return y.edge_weight(e)
    if a.num_ends():
        frame, lams, edge, _ = descend_to_edge(a.frame, [a, b], 0)
        return lams[1].edge_weight(edge)
    if b.num_ends():
        frame, lams, edge, _ = descend_to_edge(a.frame, [b, a], 0)
        return lams[1].edge_weight(edge)
    return curve_intersection(a, b)


def _triangle_chords(x, t):
    """Chords of x in triangle t as ((side, 2*pos+1) endpoint pairs);
    end arcs use the corner position marker."""
    chords = []
    for i in range(3):
        mprev = x.side_count(t, (i - 1) % 3)
        for j in range(x.cc[t][i]):
            p1 = ((i - 1) % 3, 2 * (mprev - 1 - j) + 1)
            p2 = (i, 2 * j + 1)
            chords.append((p1, p2))
        for j in range(x.dd[t][i]):
            p1 = (i, 2 * (x.cc[t][i] + j) + 1)
            p2 = ((i + 2) % 3, -1)  # corner marker
            chords.append((p1, p2))
    return chords


def _boundary_pos(t_counts, point):
    """Linear coordinate of (side, offset) around the triangle boundary."""
    side, off = point
    base = 0
    for i in range(side):
        base += 2 * t_counts[i] + 2
    if off == -1:
        # the corner at the start of this side
        return base
    return base + 1 + off


def _interleaved(c1, c2, total):
    a1, a2 = sorted(c1)
    inside = sum(1 for p in c2 if a1 < p < a2)
    if c2[0] == a1 or c2[0] == a2 or c2[1] == a1 or c2[1] == a2:
        return False  # shared corner endpoints can be pushed apart
    return inside == 1


def curve_intersection(x: NormalData, c: NormalData) -> int:
    """i(x, c) for c a single closed curve, by the weight-two grid count."""
    if not c.is_single_closed_curve():
        raise CoordinateError("second argument must be a single closed curve")
    frame, lams, _ = shorten_curve(x.frame, [c, x], 0)
    c2, x2 = lams
    comps = [p for p in c2.decompose() if p[0] == "curve"]
    slots = comps[0][1]
    if len(slots) != 2:
        raise DescentError("shortened curve does not have weight two")
    s1, s2 = slots
    e1 = frame.edge_of_slot[s1]
    e2 = frame.edge_of_slot[s2]
    w1 = x2.edge_weight(e1)
    w2 = x2.edge_weight(e2)

    def piece_endpoints(s_in, q_in, s_out, q_out, xlam):
        t = frame.partner(s_in) // 3
        i_in = frame.partner(s_in) % 3
        m_in = xlam.side_count(t, i_in)
        return t, ((i_in, 2 * (m_in - q_in)), (s_out % 3, 2 * q_out))

    best = None
    for q1 in range(w1 + 1):
        for q2 in range(w2 + 1):
            ta, chord_a = piece_endpoints(s1, q1, s2, q2, x2)
            tb, chord_b = piece_endpoints(s2, q2, s1, q1, x2)
            tri_counts = {}
            for t in (ta, tb):
                tri_counts[t] = [x2.side_count(t, i) for i in range(3)]
            pieces = [(ta, chord_a), (tb, chord_b)]
            # an embedded curve cannot self-cross
            if ta == tb:
                pa = tuple(_boundary_pos(tri_counts[ta], p) for p in chord_a)
                pb = tuple(_boundary_pos(tri_counts[ta], p) for p in chord_b)
                if _interleaved(pa, pb, None):
                    continue
            count = 0
            for t, chord in pieces:
                cpos = tuple(_boundary_pos(tri_counts[t], p) for p in chord)
                for xc in _triangle_chords(x2, t):
                    xpos = tuple(_boundary_pos(tri_counts[t], p) for p in xc)
                    if _interleaved(cpos, xpos, None):
                        count += 1
            if e1 == e2:
                count += 2 * x2.parallel[e1]
            else:
                count += x2.parallel[e1] + x2.parallel[e2]
            if best is None or count < best:
                best = count
    return best


# -- mapping-class words ------------------------------------------------


class MappingClassWord:
    """Flips plus a closing slot relabeling returning to the base map.

    Moves are ``("flip", edge)`` or ``("relabel", slot_map, edge_perm)``;
    validation replays the moves on the base frame and demands the exact
    base combinatorics at the end.
    """

    def __init__(self, base: CombTriangulation, moves):
        self.base = base
        self.moves = tuple(moves)
        self._validate()

    def _validate(self):
        frame = self.base
        for mv in self.moves:
            frame = self._apply_to_frame(frame, mv)
        if frame != self.base:
            raise WordError("word does not return to the base combinatorics")

    @staticmethod
    def _apply_to_frame(frame, mv):
        if mv[0] == "flip":
            if not frame.is_flippable(mv[1]):
                raise WordError(f"edge {mv[1]} is not flippable at this point")
            return frame.flip(mv[1])[0]
        _, slot_map, edge_perm = mv
        n = len(frame.gluing)
        gluing = [0] * n
        labels = [0] * n
        for s in range(n):
            gluing[slot_map[s]] = slot_map[frame.gluing[s]]
            labels[slot_map[s]] = edge_perm[frame.edge_of_slot[s]]
        return CombTriangulation(frame.sig, gluing, labels, check=False)

    def act(self, lam: NormalData) -> NormalData:
        """Induced action on a lamination expressed over the base frame."""
        if lam.frame != self.base:
            raise WordError("lamination is not expressed over the base frame")
        frame = self.base
        cur = lam
        for mv in self.moves:
            if mv[0] == "flip":
                new_frame, sq = frame.flip(mv[1])
                cur = cur.apply_flip(new_frame, sq)
                frame = new_frame
            else:
                _, slot_map, edge_perm = mv
                new_frame = self._apply_to_frame(frame, mv)
                out = NormalData(new_frame)
                for t in range(frame.num_triangles):
                    img = slot_map[3 * t]
                    t2, j = img // 3, img % 3
                    for i in range(3):
                        if slot_map[3 * t + i] != 3 * t2 + (j + i) % 3:
                            raise WordError("slot map is not simplicial")
                        out.cc[t2][(j + i) % 3] = cur.cc[t][i]
                        out.dd[t2][(j + i) % 3] = cur.dd[t][i]
                for e, k in enumerate(cur.parallel):
                    out.parallel[edge_perm[e]] = k
                cur = out
                frame = new_frame
        return cur

    def act_on_state(self, state: TriState) -> TriState:
        """g . T: replay this word from the base, then T's flip history."""
        fresh = TriState.from_base(self.base)
        frame = fresh.frame
        rows = list(fresh.base_rows)
        for mv in self.moves:
            if mv[0] == "flip":
                new_frame, sq = frame.flip(mv[1])
                rows = [x.apply_flip(new_frame, sq) for x in rows]
                frame = new_frame
            else:
                _, slot_map, edge_perm = mv
                new_frame = self._apply_to_frame(frame, mv)
                new_rows = []
                for x in rows:
                    out = NormalData(new_frame)
                    for t in range(frame.num_triangles):
                        img = slot_map[3 * t]
                        t2, j = img // 3, img % 3
                        for i in range(3):
                            out.cc[t2][(j + i) % 3] = x.cc[t][i]
                            out.dd[t2][(j + i) % 3] = x.dd[t][i]
                    for e, k in enumerate(x.parallel):
                        out.parallel[edge_perm[e]] = k
                    new_rows.append(out)
                rows = new_rows
                frame = new_frame
        if frame != self.base:
            raise WordError("word does not return to the base combinatorics")
        state2 = TriState(self.base, frame, tuple(rows), ())
        for e in state.history:
            state2 = state2.flip(e)
        return state2

    def inverse(self) -> "MappingClassWord":
        moves = []
        for mv in reversed(self.moves):
            if mv[0] == "flip":
                moves.append(mv)
            else:
                _, slot_map, edge_perm = mv
                inv_slots = [0] * len(slot_map)
                inv_edges = [0] * len(edge_perm)
                for s, img in enumerate(slot_map):
                    inv_slots[img] = s
                for e, img in enumerate(edge_perm):
                    inv_edges[img] = e
                moves.append(("relabel", tuple(inv_slots), tuple(inv_edges)))
        return MappingClassWord(self.base, moves)

    def __mul__(self, other: "MappingClassWord") -> "MappingClassWord":
        """Composition: (self * other) acts like self after other."""
        return MappingClassWord(self.base, other.moves + self.moves)


def find_isomorphism(frame: CombTriangulation, target: CombTriangulation):
    """A slot map + edge permutation carrying ``frame`` onto ``target``.

    Orientation-preserving simplicial isomorphisms only.  Returns
    (slot_map, edge_perm) or None.
    """
    f = frame.num_triangles
    if f != target.num_triangles or frame.num_edges != target.num_edges:
        return None

    def try_seed(t_img, rot):
        slot_map = {0 + i: 3 * t_img + (rot + i) % 3 for i in range(3)}
        tri_map = {0: (t_img, rot)}
        stack = [0]
        while stack:
            t = stack.pop()
            t2, j = tri_map[t]
            for i in range(3):
                s = 3 * t + i
                s_img = 3 * t2 + (j + i) % 3
                p = frame.gluing[s]
                p_img = target.gluing[s_img]
                pt, pi = p // 3, p % 3
                qt, qi = p_img // 3, p_img % 3
                rot2 = (qi - pi) % 3
                if pt in tri_map:
                    if tri_map[pt] != (qt, rot2):
                        return None
                else:
                    tri_map[pt] = (qt, rot2)
                    for k in range(3):
                        slot_map[3 * pt + k] = 3 * qt + (rot2 + k) % 3
                    stack.append(pt)
        edge_perm = [None] * frame.num_edges
        for s in range(3 * f):
            e = frame.edge_of_slot[s]
            e2 = target.edge_of_slot[slot_map[s]]
            if edge_perm[e] is None:
                edge_perm[e] = e2
            elif edge_perm[e] != e2:
                return None
        if sorted(edge_perm) != list(range(frame.num_edges)):
            return None
        return tuple(slot_map[s] for s in range(3 * f)), tuple(edge_perm)

    for t_img in range(f):
        for rot in range(3):
            got = try_seed(t_img, rot)
            if got is not None:
                return got
    return None


def close_word(base: CombTriangulation, flips) -> MappingClassWord:
    """Build a word from a flip sequence by appending the closing relabel."""
    frame = base
    for e in flips:
        frame = frame.flip(e)[0]
    iso = find_isomorphism(frame, base)
    if iso is None:
        raise WordError("flip sequence does not return to the base combinatorics")
    moves = [("flip", e) for e in flips]
    moves.append(("relabel",) + iso)
    return MappingClassWord(base, moves)
