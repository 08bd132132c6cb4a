"""Normal position of arcs, curves and multicurves in a triangulation.

An essential multiarc/multicurve in minimal position with respect to an
ideal triangulation meets each triangle in *corner arcs* (cutting off one
corner) and *end arcs* (running from a side to the opposite vertex, for
components ending at a puncture).  Components isotopic to an edge of the
triangulation cross nothing and are stored separately as parallel counts.

The triple (corner counts, end counts, parallel counts) is a complete
isotopy invariant and everything else in the package is derived from it:
edge intersection vectors, transport under flips, tracing of strands and
decomposition into components.  The transport rules are exact — they
implement the full strand rewrite across the flipped square, including the
configurations near punctures where the naive tropical exchange formula
undercounts by one.
"""

from __future__ import annotations

from .errors import CoordinateError
from .surfaces import CombTriangulation, FlipSquare


def _overlap(a0, a1, b0, b1):
    return max(0, min(a1, b1) - max(a0, b0))


class NormalData:
    """Corner/end/parallel counts of a normal multiobject in a frame.

    ``cc[t][i]`` counts corner arcs at corner ``(t, i)`` (the vertex between
    sides ``i-1`` and ``i``); ``dd[t][i]`` counts end arcs crossing side
    ``i`` and ending at the opposite vertex; ``parallel[e]`` counts
    components isotopic to edge ``e``.
    """

    __slots__ = ("frame", "cc", "dd", "parallel")

    def __init__(self, frame: CombTriangulation, cc=None, dd=None, parallel=None):
        f = frame.num_triangles
        self.frame = frame
        self.cc = [list(row) for row in cc] if cc else [[0, 0, 0] for _ in range(f)]
        self.dd = [list(row) for row in dd] if dd else [[0, 0, 0] for _ in range(f)]
        self.parallel = (
            list(parallel) if parallel else [0] * frame.num_edges
        )

    # -- constructors ---------------------------------------------------

    @classmethod
    def edge_arc(cls, frame, e):
        x = cls(frame)
        x.parallel[e] = 1
        return x

    def copy(self):
        return NormalData(self.frame, self.cc, self.dd, self.parallel)

    def add(self, other):
        """Disjoint-union sum (valid when the pieces can be nested apart)."""
        if other.frame is not self.frame and other.frame != self.frame:
            raise CoordinateError("cannot add normal data over different frames")
        out = self.copy()
        for t in range(len(out.cc)):
            for i in range(3):
                out.cc[t][i] += other.cc[t][i]
                out.dd[t][i] += other.dd[t][i]
        for e in range(len(out.parallel)):
            out.parallel[e] += other.parallel[e]
        return out

    # -- derived counts ---------------------------------------------------

    def side_count(self, t, i):
        return self.cc[t][i] + self.cc[t][(i + 1) % 3] + self.dd[t][i]

    def edge_weight(self, e):
        s = self.frame.edge_slots(e)[0]
        return self.side_count(s // 3, s % 3)

    def weights(self):
        return tuple(self.edge_weight(e) for e in range(self.frame.num_edges))

    def total_weight(self):
        return sum(self.weights())

    def num_ends(self):
        return sum(sum(row) for row in self.dd)

    def is_zero(self):
        return (
            all(v == 0 for row in self.cc for v in row)
            and all(v == 0 for row in self.dd for v in row)
        )

    def coords(self):
        """Public (vector, tag) form; tag only for a bare edge arc."""
        vec = self.weights()
        tag = None
        if self.is_zero():
            tagged = [e for e, k in enumerate(self.parallel) if k]
            if len(tagged) == 1 and self.parallel[tagged[0]] == 1:
                tag = tagged[0]
        return vec, tag

    def key(self):
        return (
            tuple(tuple(r) for r in self.cc),
            tuple(tuple(r) for r in self.dd),
            tuple(self.parallel),
        )

    def __eq__(self, other):
        return isinstance(other, NormalData) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NormalData(weights={self.weights()}, parallel={self.parallel})"

    # -- validity ---------------------------------------------------------

    def check(self):
        for t in range(len(self.cc)):
            for i in range(3):
                if self.cc[t][i] < 0 or self.dd[t][i] < 0:
                    raise CoordinateError(f"negative count in triangle {t}")
                # ends into a vertex exclude corner arcs at that vertex
                if self.cc[t][i] and self.dd[t][(i + 1) % 3]:
                    raise CoordinateError(
                        f"corner {t},{i} carries both corner arcs and incoming ends"
                    )
        for e in range(self.frame.num_edges):
            s1, s2 = self.frame.edge_slots(e)
            if self.side_count(s1 // 3, s1 % 3) != self.side_count(s2 // 3, s2 % 3):
                raise CoordinateError(f"side counts disagree across edge {e}")
            if self.parallel[e] < 0:
                raise CoordinateError("negative parallel count")
        return self

    # -- flip transport ----------------------------------------------------

    def apply_flip(self, new_frame: CombTriangulation, sq: FlipSquare):
        """Exact rewrite of the strand data across a flipped square.

        The square has corners Q, R, P, S with the old diagonal P--Q and new
        diagonal R--S; sides a = QR, b = RP in ``t1`` and c = PS, d = SQ in
        ``t2``.  Strands crossing the old diagonal are matched positionally
        (corner blocks at each end, end-arc blocks in the middle), rewritten
        against the new diagonal, and components that coincide with a
        diagonal move in or out of the parallel counts.
        """
        t1, ie, t2, je = sq.t1, sq.ie, sq.t2, sq.je
        cc1, dd1 = self.cc[t1], self.dd[t1]
        cc2, dd2 = self.cc[t2], self.dd[t2]
        g1 = cc1[(ie + 1) % 3]   # corner Q in t1 (e^a)
        g2 = cc1[(ie + 2) % 3]   # corner R (a^b)
        g3 = cc1[ie]             # corner P (b^e)
        de = dd1[ie]             # ends e -> R
        da = dd1[(ie + 1) % 3]   # ends a -> P
        db = dd1[(ie + 2) % 3]   # ends b -> Q
        m1 = cc2[je]             # corner Q in t2 (d^e)
        m3 = cc2[(je + 1) % 3]   # corner P (e^c)
        m4 = cc2[(je + 2) % 3]   # corner S (c^d)
        ee = dd2[je]             # ends e -> S
        ec = dd2[(je + 1) % 3]   # ends c -> Q
        ed = dd2[(je + 2) % 3]   # ends d -> P
        pe = self.parallel[sq.edge]

        m = g1 + de + g3
        if m != m1 + ee + m3:
            raise CoordinateError("inconsistent counts on flipped edge")
        # positional matching along the diagonal, measured from corner Q
        n_ad = _overlap(0, g1, 0, m1)
        n_a4 = _overlap(0, g1, m1, m1 + ee)
        n_ac = _overlap(0, g1, m1 + ee, m)
        n_d2 = _overlap(g1, g1 + de, 0, m1)
        z_new = _overlap(g1, g1 + de, m1, m1 + ee)
        n_c2 = _overlap(g1, g1 + de, m1 + ee, m)
        n_bd = _overlap(g1 + de, m, 0, m1)
        n_b4 = _overlap(g1 + de, m, m1, m1 + ee)
        n_bc = _overlap(g1 + de, m, m1 + ee, m)

        out = self.copy()
        out.frame = new_frame
        # new t1 = (b, c, e'): corners R, P, S at positions 0, 1, 2
        out.cc[t1][0] = g2 + n_bd + db
        out.cc[t1][1] = n_bc
        out.cc[t1][2] = m4 + n_ac + ec
        out.dd[t1][0] = n_b4
        out.dd[t1][1] = n_c2
        out.dd[t1][2] = da + ed + pe
        # new t2 = (d, a, e'): corners S, Q, R at positions 0, 1, 2
        out.cc[t2][0] = m4 + n_bd + ed
        out.cc[t2][1] = n_ad
        out.cc[t2][2] = g2 + n_ac + da
        out.dd[t2][0] = n_d2
        out.dd[t2][1] = n_a4
        out.dd[t2][2] = db + ec + pe
        out.parallel[sq.edge] = z_new
        return out

    # -- strand following ---------------------------------------------------

    def step(self, t, i, k):
        """Continue the strand entering triangle ``t`` through side ``i`` at
        position ``k`` (0-based from vertex ``u_i``).

        Returns ``("side", t, j, k')`` for an exit through side ``j`` of the
        same triangle, or ``("end", t, v, idx)`` when the strand terminates
        at corner ``v``.
        """
        ci = self.cc[t][i]
        cj = self.cc[t][(i + 1) % 3]
        di = self.dd[t][i]
        if k < ci:
            j = (i - 1) % 3
            return ("side", t, j, self.side_count(t, j) - 1 - k)
        if k < ci + di:
            return ("end", t, (i + 2) % 3, k - ci)
        r = self.side_count(t, i) - 1 - k
        if r >= cj:
            raise CoordinateError("strand position out of range")
        return ("side", t, (i + 1) % 3, r)

    def cross(self, t, i, k):
        """Carry a side position across the glued edge (reverses order)."""
        s = self.frame.partner(3 * t + i)
        t2, i2 = s // 3, s % 3
        return t2, i2, self.side_count(t, i) - 1 - k

    def end_start(self, t, i, idx):
        """Entry data for end arc ``idx`` on side ``i`` of ``t``, walking
        away from its vertex: the strand leaves the triangle through side
        ``i`` at position ``cc[t][i] + idx``."""
        return (t, i, self.cc[t][i] + idx)

    # -- decomposition ---------------------------------------------------

    def trace_arc_walk(self, t, i, idx):
        """Walk of the arc component with an end on side ``i`` of ``t``.

        Returns (start corner, [crossed slot ids], end corner); the start
        corner is the vertex the chosen end sits at.
        """
        start = (t, (i + 2) % 3)
        slots = []
        pos = self.end_start(t, i, idx)
        while True:
            tt, ii, kk = pos
            slots.append(3 * tt + ii)
            tt, ii, kk = self.cross(tt, ii, kk)
            res = self.step(tt, ii, kk)
            if res[0] == "end":
                return start, slots, (res[1], res[2])
            _, tt, ii, kk = res
            pos = (tt, ii, kk)

    def decompose(self):
        """Split into components.

        Returns a list of records: ``("arc", start, slots, end)``,
        ``("curve", slots)`` with slots a cyclic crossing list, and
        ``("edge", e, count)`` for parallel components.
        """
        comps = []
        seen = set()  # (t, i, k) entry points consumed

        def consume(tt, ii, kk):
            seen.add((tt, ii, kk))
            t2, i2, k2 = self.cross(tt, ii, kk)
            seen.add((t2, i2, k2))

        for t in range(len(self.dd)):
            for i in range(3):
                for idx in range(self.dd[t][i]):
                    tt, ii, kk = self.end_start(t, i, idx)
                    if (tt, ii, kk) in seen:
                        continue
                    start, slots, end = self.trace_arc_walk(t, i, idx)
                    pos = (tt, ii, kk)
                    while True:
                        consume(*pos)
                        t2, i2, k2 = self.cross(*pos)
                        res = self.step(t2, i2, k2)
                        if res[0] == "end":
                            break
                        pos = (res[1], res[2], res[3])
                    comps.append(("arc", start, slots, end))
        for t in range(len(self.cc)):
            for i in range(3):
                for k in range(self.side_count(t, i)):
                    if (t, i, k) in seen:
                        continue
                    slots = []
                    pos = (t, i, k)
                    while pos not in seen:
                        consume(*pos)
                        slots.append(3 * pos[0] + pos[1])
                        t2, i2, k2 = self.cross(*pos)
                        res = self.step(t2, i2, k2)
                        if res[0] == "end":
                            raise CoordinateError("open strand found while tracing curves")
                        pos = (res[1], res[2], res[3])
                    comps.append(("curve", slots))
        for e, cnt in enumerate(self.parallel):
            if cnt:
                comps.append(("edge", e, cnt))
        return comps

    def is_single_arc(self):
        if self.num_ends() == 2:
            comps = self.decompose()
            return len(comps) == 1 and comps[0][0] == "arc"
        if self.num_ends() == 0 and self.is_zero():
            return sum(self.parallel) == 1
        return False

    def is_single_closed_curve(self):
        if self.num_ends() or sum(self.parallel):
            return False
        comps = self.decompose()
        return len(comps) == 1 and comps[0][0] == "curve"

    def curve_is_vertex_link(self, slots):
        """Whether a traced closed component is the link of one puncture.

        The component is given by its crossing slot list; it is a vertex
        link iff every piece is a corner arc and the corners visited form
        exactly one vertex cycle, each corner once.
        """
        frame = self.frame
        corners = []
        n = len(slots)
        for a in range(n):
            s_out = slots[(a + 1) % n]
            s_in = frame.partner(slots[a])
            t_in, i_in = s_in // 3, s_in % 3
            t_out, i_out = s_out // 3, s_out % 3
            if t_in != t_out:
                raise CoordinateError("invalid crossing sequence")
            if i_out == (i_in + 1) % 3:
                corners.append(3 * t_in + i_out)
            elif i_in == (i_out + 1) % 3:
                corners.append(3 * t_in + i_in)
            else:
                return False
        for cyc in frame.vertex_cycles():
            if sorted(corners) == sorted(cyc):
                return True
        return False


# -- walks ------------------------------------------------------------------


def reduce_closed_walk(frame, slots):
    """Cancel U-turns in a cyclic crossing sequence until normal."""
    slots = list(slots)
    changed = True
    while changed and slots:
        changed = False
        n = len(slots)
        for a in range(n):
            b = (a + 1) % n
            if slots[b] == frame.partner(slots[a]):
                for idx in sorted((a, b), reverse=True):
                    del slots[idx]
                changed = True
                break
    return slots


def reduce_open_walk(frame, start, slots, end):
    """Normalize an open walk: internal U-turns plus endpoint half-bigons.

    ``start`` and ``end`` are corners (t, i); crossings are slot ids of the
    sides crossed, listed from the start.
    """
    slots = list(slots)
    changed = True
    while changed:
        changed = False
        for a in range(len(slots) - 1):
            if slots[a + 1] == frame.partner(slots[a]):
                del slots[a + 1]
                del slots[a]
                changed = True
                break
        if changed:
            continue
        if slots:
            t, c = start
            s1 = slots[0]
            if s1 // 3 != t:
                raise CoordinateError("walk does not start in its triangle")
            i = s1 % 3
            if i == c or (i + 1) % 3 == c:
                p = frame.partner(s1)
                t2, j = p // 3, p % 3
                start = (t2, (j + 1) % 3 if i == c else j)
                del slots[0]
                changed = True
                continue
            t, c = end
            sl = frame.partner(slots[-1])
            if sl // 3 != t:
                raise CoordinateError("walk does not end in its triangle")
            i = sl % 3
            if i == c or (i + 1) % 3 == c:
                s_back = slots[-1]
                t2, j = s_back // 3, s_back % 3
                end = (t2, (j + 1) % 3 if i == c else j)
                del slots[-1]
                changed = True
    return start, slots, end


def closed_walk_to_normal(frame, slots):
    """Rich data of the closed curve with the given reduced crossing list."""
    slots = reduce_closed_walk(frame, slots)
    if not slots:
        raise CoordinateError("closed walk is null-homotopic into a triangle")
    x = NormalData(frame)
    n = len(slots)
    for a in range(n):
        s_in = frame.partner(slots[a])
        s_out = slots[(a + 1) % n]
        _tally_segment(x, s_in, s_out)
    x.check()
    return x


def open_walk_to_normal(frame, start, slots, end):
    """Rich data of the arc with the given walk; detects edge coincidence."""
    start, slots, end = reduce_open_walk(frame, start, slots, end)
    x = NormalData(frame)
    if not slots:
        # the arc lives in one fan of triangles around... after reduction an
        # arc with no crossings is isotopic into a triangle between two of
        # its corners, i.e. onto the side joining them.
        t, c1 = start
        t2, c2 = end
        if t != t2:
            raise CoordinateError("reduced walk has disconnected endpoints")
        if c1 == c2:
            raise CoordinateError("walk reduces to a point at a puncture")
        # side from corner c1 to corner c2 is the side whose endpoints are
        # those corners: side i touches corners i and i+1
        i = c1 if (c1 + 1) % 3 == c2 else c2
        x.parallel[frame.edge_of_slot[3 * t + i]] = 1
        return x
    t, c = start
    first = slots[0] % 3
    if (first + 2) % 3 != c:
        raise CoordinateError("reduced walk leaves through a side at its own corner")
    x.dd[t][first] += 1
    t, c = end
    last = frame.partner(slots[-1])
    lastside = last % 3
    if (lastside + 2) % 3 != c:
        raise CoordinateError("reduced walk arrives through a side at its own corner")
    x.dd[t][lastside] += 1
    for a in range(len(slots) - 1):
        _tally_segment(x, frame.partner(slots[a]), slots[a + 1])
    x.check()
    return x


def _tally_segment(x, s_in, s_out):
    t, i = s_in // 3, s_in % 3
    t2, j = s_out // 3, s_out % 3
    if t != t2:
        raise CoordinateError("consecutive crossings not in a common triangle")
    if i == j:
        raise CoordinateError("walk is not reduced")
    if j == (i + 1) % 3:
        x.cc[t][j] += 1
    else:
        x.cc[t][i] += 1


# -- reconstruction from bare vectors ----------------------------------------


def multicurve_from_vector(frame, vector):
    """Rich data of the multicurve with the given edge weights.

    Corner counts are forced: twice the corner count at a corner equals the
    sum of the weights of its two sides minus the opposite side.
    """
    x = NormalData(frame)
    w = list(vector)
    if len(w) != frame.num_edges:
        raise CoordinateError("vector length does not match edge count")
    for t in range(frame.num_triangles):
        m = [w[frame.edge_of_slot[3 * t + i]] for i in range(3)]
        for i in range(3):
            v = m[(i - 1) % 3] + m[i] - m[(i + 1) % 3]
            if v < 0 or v % 2:
                raise CoordinateError(
                    f"vector is not realizable by a multicurve (triangle {t})"
                )
            x.cc[t][i] = v // 2
    x.check()
    return x


def arc_from_vector(frame, vector, tag=None):
    """Rich data of the single arc with the given (vector, tag) coordinates.

    The two arc ends are located by exhausting the finitely many consistent
    placements; ambiguity (two distinct arcs with identical vectors) raises.
    """
    w = list(vector)
    if len(w) != frame.num_edges:
        raise CoordinateError("vector length does not match edge count")
    if all(v == 0 for v in w):
        if tag is None:
            raise CoordinateError("zero vector requires a coincidence tag")
        return NormalData.edge_arc(frame, tag)
    ends = []
    for t in range(frame.num_triangles):
        for i in range(3):
            ends.append((t, i))
    found = []
    for a in range(len(ends)):
        for b in range(a, len(ends)):
            dd = [[0, 0, 0] for _ in range(frame.num_triangles)]
            dd[ends[a][0]][ends[a][1]] += 1
            dd[ends[b][0]][ends[b][1]] += 1
            x = _solve_with_ends(frame, w, dd)
            if x is not None and x.is_single_arc():
                if not any(x == y for y in found):
                    found.append(x)
    if not found:
        raise CoordinateError("vector is not realizable by a single arc")
    if len(found) > 1:
        raise CoordinateError(
            "ambiguous arc vector: multiple non-isotopic arcs share it"
        )
    return found[0]


def _solve_with_ends(frame, w, dd):
    x = NormalData(frame)
    for t in range(frame.num_triangles):
        m = [w[frame.edge_of_slot[3 * t + i]] for i in range(3)]
        for i in range(3):
            v = (
                m[(i - 1) % 3] - dd[t][(i - 1) % 3]
                + m[i] - dd[t][i]
                - m[(i + 1) % 3] + dd[t][(i + 1) % 3]
            )
            if v < 0 or v % 2:
                return None
            x.cc[t][i] = v // 2
        x.dd[t] = list(dd[t])
    try:
        x.check()
    except CoordinateError:
        return None
    if x.weights() != tuple(w):
        return None
    return x
