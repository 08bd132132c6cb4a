"""Combinatorial surfaces and ideal triangulations.

A triangulation of the punctured surface S_{g,n} is stored as a combinatorial
map: F triangles, each with three side slots listed in counterclockwise
order, a fixed-point-free involution gluing the 3F slots in pairs, and an
edge label for each slot pair.

Conventions used throughout the package:

* slot ``3*t + i`` is side ``i`` of triangle ``t``;
* side ``i`` of a triangle runs counterclockwise from vertex ``u_i`` to
  vertex ``u_{i+1}`` (indices mod 3), so corner ``(t, i)`` sits at ``u_i``
  between sides ``i-1`` and ``i``;
* gluings reverse orientation, as they must on an orientable surface whose
  triangles are all counterclockwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from .errors import SurfaceError, TriangulationError, FlipError


@dataclass(frozen=True)
class SurfaceSig:
    """Signature (genus, punctures) of a finite-type punctured surface."""

    genus: int
    punctures: int

    @property
    def complexity(self) -> int:
        return 3 * self.genus - 3 + self.punctures

    @property
    def num_edges(self) -> int:
        return 6 * self.genus - 6 + 3 * self.punctures

    @property
    def num_triangles(self) -> int:
        return 4 * self.genus - 4 + 2 * self.punctures

    def __str__(self):
        return f"S_{{{self.genus},{self.punctures}}}"


def make_surface(genus: int, punctures: int) -> SurfaceSig:
    """Validated surface signature.

    Requires at least one puncture, positive complexity, and rejects the
    three-punctured sphere outright.
    """
    if genus < 0:
        raise SurfaceError(f"genus must be nonnegative, got {genus}")
    if punctures < 1:
        raise SurfaceError(f"need at least one puncture, got {punctures}")
    if (genus, punctures) == (0, 3):
        raise SurfaceError("excluded surface: three-punctured sphere")
    sig = SurfaceSig(genus, punctures)
    if sig.complexity <= 0:
        raise SurfaceError(
            f"complexity 3g-3+n = {sig.complexity} of S_{{{genus},{punctures}}} "
            "is not positive; only annuli below complexity one are modeled, "
            "and they never carry triangulations"
        )
    return sig


class FlipSquare:
    """Bookkeeping for one flip: the two triangles and the diagonal slots.

    ``t1`` holds the diagonal at position ``ie``; going counterclockwise its
    other sides are ``a`` then ``b``.  ``t2`` holds the matching slot at
    ``je`` followed by ``c`` then ``d``.  Coordinate transport reads the old
    corner data through these offsets.
    """

    __slots__ = ("edge", "t1", "ie", "t2", "je")

    def __init__(self, edge, t1, ie, t2, je):
        self.edge = edge
        self.t1 = t1
        self.ie = ie
        self.t2 = t2
        self.je = je


class CombTriangulation:
    """Immutable combinatorial map of an ideal triangulation."""

    __slots__ = ("sig", "gluing", "edge_of_slot", "_edge_slots", "_key", "_vertex_cycles")

    def __init__(self, sig: SurfaceSig, gluing, edge_of_slot, check: bool = True):
        self.sig = sig
        self.gluing = tuple(gluing)
        self.edge_of_slot = tuple(edge_of_slot)
        slots_per_edge = {}
        for s, e in enumerate(self.edge_of_slot):
            slots_per_edge.setdefault(e, []).append(s)
        self._edge_slots = tuple(
            tuple(slots_per_edge.get(e, ())) for e in range(self.num_edges)
        )
        self._key = None
        self._vertex_cycles = None
        if check:
            self.validate()

    # -- basic shape --------------------------------------------------

    @property
    def num_triangles(self) -> int:
        return len(self.gluing) // 3

    @property
    def num_edges(self) -> int:
        return self.sig.num_edges

    def slot(self, t: int, i: int) -> int:
        return 3 * t + i % 3

    def tri_of(self, slot: int) -> int:
        return slot // 3

    def side_of(self, slot: int) -> int:
        return slot % 3

    def partner(self, slot: int) -> int:
        return self.gluing[slot]

    def edge_slots(self, e: int):
        return self._edge_slots[e]

    def edge_endpoints(self, e: int):
        """Vertex-cycle ids of the two ends of edge ``e`` (may coincide)."""
        s = self._edge_slots[e][0]
        t, i = s // 3, s % 3
        v = self.vertex_of_corner()
        return (v[self.slot(t, i)], v[self.slot(t, (i + 1) % 3)])

    # -- vertices -----------------------------------------------------

    def vertex_cycles(self):
        """Corner orbits around punctures.

        Walking from corner ``(t, i)`` across side ``i-1`` lands on the
        corner of the glued triangle at the matching end of the shared side.
        Orbits of that rotation are in bijection with the punctures.
        """
        if self._vertex_cycles is None:
            corners = []
            seen = [False] * len(self.gluing)
            for start in range(len(self.gluing)):
                if seen[start]:
                    continue
                orbit = []
                c = start
                while not seen[c]:
                    seen[c] = True
                    orbit.append(c)
                    t, i = c // 3, c % 3
                    c = self.gluing[self.slot(t, (i - 1) % 3)]
                corners.append(tuple(orbit))
            self._vertex_cycles = tuple(corners)
        return self._vertex_cycles

    def vertex_of_corner(self):
        """Map corner id (= slot id) to its vertex-cycle index."""
        out = [0] * len(self.gluing)
        for v, orbit in enumerate(self.vertex_cycles()):
            for c in orbit:
                out[c] = v
        return out

    # -- validation ---------------------------------------------------

    def validate(self):
        n_slots = len(self.gluing)
        if n_slots != 3 * self.sig.num_triangles:
            raise TriangulationError(
                f"expected {3 * self.sig.num_triangles} slots, got {n_slots}"
            )
        if len(self.edge_of_slot) != n_slots:
            raise TriangulationError("edge labels and gluing length differ")
        for s, p in enumerate(self.gluing):
            if not 0 <= p < n_slots or p == s:
                raise TriangulationError(f"gluing is not fixed-point free at slot {s}")
            if self.gluing[p] != s:
                raise TriangulationError(f"gluing is not an involution at slot {s}")
            if self.edge_of_slot[p] != self.edge_of_slot[s]:
                raise TriangulationError(f"glued slots {s},{p} carry different edges")
        for e in range(self.num_edges):
            if len(self._edge_slots[e]) != 2:
                raise TriangulationError(
                    f"edge {e} appears on {len(self._edge_slots[e])} slots, expected 2"
                )
        # connectivity through gluings
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for i in range(3):
                t2 = self.gluing[3 * t + i] // 3
                if t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
        if len(seen) != self.num_triangles:
            raise TriangulationError("underlying surface is not connected")
        # Euler characteristic: V - E + F = 2 - 2g with V = punctures
        v = len(self.vertex_cycles())
        if v != self.sig.punctures:
            raise TriangulationError(
                f"{v} vertex cycles but {self.sig.punctures} punctures"
            )
        euler = v - self.num_edges + self.num_triangles
        if euler != 2 - 2 * self.sig.genus:
            raise TriangulationError(
                f"Euler characteristic {euler} != {2 - 2 * self.sig.genus}"
            )

    # -- identity -----------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.sig, self.gluing, self.edge_of_slot)
        return self._key

    def __eq__(self, other):
        return isinstance(other, CombTriangulation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (
            f"CombTriangulation({self.sig}, {self.num_triangles} triangles, "
            f"{self.num_edges} edges)"
        )

    # -- flips ----------------------------------------------------------

    def is_flippable(self, e: int) -> bool:
        """An edge flips iff its two slots lie in distinct triangles."""
        s1, s2 = self._edge_slots[e]
        return s1 // 3 != s2 // 3

    def flippable_edges(self):
        return {e for e in range(self.num_edges) if self.is_flippable(e)}

    def square(self, e: int) -> FlipSquare:
        if not self.is_flippable(e):
            raise FlipError(f"edge {e} is self-folded and cannot be flipped")
        s1, s2 = self._edge_slots[e]
        return FlipSquare(e, s1 // 3, s1 % 3, s2 // 3, s2 % 3)

    def flip(self, e: int):
        """Flip edge ``e``; returns (new triangulation, FlipSquare).

        With the diagonal running between square corners P and Q, side order
        (a, b) around ``t1`` and (c, d) around ``t2``, the rewiring puts
        (b, c, e') on ``t1`` and (d, a, e') on ``t2``; the new diagonal keeps
        the old edge label.
        """
        sq = self.square(e)
        t1, ie, t2, je = sq.t1, sq.ie, sq.t2, sq.je
        sa = self.slot(t1, ie + 1)
        sb = self.slot(t1, ie + 2)
        sc = self.slot(t2, je + 1)
        sd = self.slot(t2, je + 2)
        se1 = self.slot(t1, ie)
        se2 = self.slot(t2, je)
        # new positions: t1 -> (b, c, e'), t2 -> (d, a, e')
        move = {
            sb: 3 * t1 + 0,
            sc: 3 * t1 + 1,
            se1: 3 * t1 + 2,
            sd: 3 * t2 + 0,
            sa: 3 * t2 + 1,
            se2: 3 * t2 + 2,
        }
        new_pos = lambda s: move.get(s, s)
        gluing = list(self.gluing)
        labels = list(self.edge_of_slot)
        new_gluing = list(gluing)
        new_labels = list(labels)
        for old, new in move.items():
            new_labels[new] = labels[old]
        for old_slot in (sa, sb, sc, sd):
            p = gluing[old_slot]
            new_gluing[new_pos(old_slot)] = new_pos(p)
            new_gluing[new_pos(p)] = new_pos(old_slot)
        new_gluing[3 * t1 + 2] = 3 * t2 + 2
        new_gluing[3 * t2 + 2] = 3 * t1 + 2
        new_labels[3 * t1 + 2] = e
        new_labels[3 * t2 + 2] = e
        out = CombTriangulation(self.sig, new_gluing, new_labels, check=False)
        return out, sq

    # -- serialization ------------------------------------------------

    def to_json_dict(self):
        return {
            "surface": {"genus": self.sig.genus, "punctures": self.sig.punctures},
            "triangles": [
                [3 * t, 3 * t + 1, 3 * t + 2] for t in range(self.num_triangles)
            ],
            "gluing": list(self.gluing),
            "edge_labels": list(self.edge_of_slot),
        }

    @classmethod
    def from_json_dict(cls, data):
        try:
            sig = make_surface(data["surface"]["genus"], data["surface"]["punctures"])
            gluing = [int(x) for x in data["gluing"]]
            labels = [int(x) for x in data["edge_labels"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise TriangulationError(f"malformed triangulation JSON: {exc}") from exc
        return cls(sig, gluing, labels)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _cone_triangle(gluing, labels, t, next_edge):
    """Cone a new puncture into triangle ``t``.

    The triangle (x, y, z) is replaced by three triangles around a new
    central vertex w; sides x, y, z keep their outside gluings.  Two new
    triangles are appended, so the coned triangle count rises by two and
    three new edge labels are used.
    """
    f = len(gluing) // 3
    ta, tb, tc = t, f, f + 1
    remap = {3 * t: 3 * ta, 3 * t + 1: 3 * tb, 3 * t + 2: 3 * tc}
    x, y, z = labels[3 * t], labels[3 * t + 1], labels[3 * t + 2]
    gx, gy, gz = (remap.get(gluing[3 * t + i], gluing[3 * t + i]) for i in range(3))
    p, q, r = next_edge, next_edge + 1, next_edge + 2
    gluing.extend([0] * 6)
    labels.extend([0] * 6)

    def put(tri, sides, glues):
        for i in range(3):
            labels[3 * tri + i] = sides[i]
            gluing[3 * tri + i] = glues[i]

    # ta = (x, u1->w, w->u0), tb = (y, u2->w, w->u1), tc = (z, u0->w, w->u2)
    put(ta, (x, q, p), (gx, 3 * tb + 2, 3 * tc + 1))
    put(tb, (y, r, q), (gy, 3 * tc + 2, 3 * ta + 1))
    put(tc, (z, p, r), (gz, 3 * ta + 2, 3 * tb + 1))
    gluing[gx] = 3 * ta
    gluing[gy] = 3 * tb
    gluing[gz] = 3 * tc


def _polygon_base(genus: int):
    """Fan-triangulated 4g-gon with the standard a b a' b' identifications."""
    m = 4 * genus
    # boundary side k runs from polygon vertex k to k+1
    side_edge = {}
    for j in range(genus):
        side_edge[4 * j] = 2 * j          # a_j
        side_edge[4 * j + 2] = 2 * j      # a_j reversed
        side_edge[4 * j + 1] = 2 * j + 1  # b_j
        side_edge[4 * j + 3] = 2 * j + 1  # b_j reversed
    n_tri = m - 2
    gluing = [0] * (3 * n_tri)
    labels = [0] * (3 * n_tri)
    # triangle T_k = (0, k, k+1) for k = 1..m-2, stored at index k-1.
    # slots: 0 -> side (0,k), 1 -> boundary side k, 2 -> side (k+1,0)
    diag_edge = {k: 2 * genus + (k - 2) for k in range(2, m - 1)}
    boundary_slot = {}
    for k in range(1, m - 1):
        t = k - 1
        labels[3 * t + 1] = side_edge[k]
        boundary_slot[k] = 3 * t + 1
        if k == 1:
            labels[3 * t] = side_edge[0]
            boundary_slot[0] = 3 * t
        else:
            labels[3 * t] = diag_edge[k]
            gluing[3 * t] = 3 * (t - 1) + 2
            gluing[3 * (t - 1) + 2] = 3 * t
        if k == m - 2:
            labels[3 * t + 2] = side_edge[m - 1]
            boundary_slot[m - 1] = 3 * t + 2
        else:
            labels[3 * t + 2] = diag_edge[k + 1]
    for j in range(genus):
        for u, v in ((4 * j, 4 * j + 2), (4 * j + 1, 4 * j + 3)):
            su, sv = boundary_slot[u], boundary_slot[v]
            gluing[su] = sv
            gluing[sv] = su
    return gluing, labels


def _tetrahedron_base():
    """Four-punctured sphere as the boundary of a tetrahedron."""
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
    edge_index = {}
    labels = []
    directed = {}
    for t, (p, q, r) in enumerate(faces):
        verts = (p, q, r)
        for i in range(3):
            a, b = verts[i], verts[(i + 1) % 3]
            key = (min(a, b), max(a, b))
            if key not in edge_index:
                edge_index[key] = len(edge_index)
            labels.append(edge_index[key])
            directed[(a, b)] = 3 * t + i
    gluing = [0] * 12
    for (a, b), s in directed.items():
        gluing[s] = directed[(b, a)]
    return gluing, labels


def base_triangulation(sig: SurfaceSig) -> CombTriangulation:
    """Deterministic canonical triangulation T0 of S_{g,n}.

    For genus g >= 1 this is the fan-triangulated 4g-gon with all polygon
    vertices identified to one puncture; for genus 0 it is the tetrahedron.
    Extra punctures are coned into triangle 0 one at a time.  On S_{1,1}
    the three edges are the arcs of slopes 1/0, 0/1 and 1/1 of the square
    picture, labeled 0, 1, 2 in that order.
    """
    if sig.genus == 0:
        if sig.punctures < 4:
            raise SurfaceError("genus zero needs at least four punctures")
        gluing, labels = _tetrahedron_base()
        base_n = 4
    else:
        gluing, labels = _polygon_base(sig.genus)
        base_n = 1
    for extra in range(sig.punctures - base_n):
        next_edge = max(labels) + 1
        _cone_triangle(gluing, labels, 0, next_edge)
    return CombTriangulation(sig, gluing, labels)
