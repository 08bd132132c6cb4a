"""Slope arithmetic on the once-punctured torus.

Arcs and essential curves on S_{1,1} are classified by primitive integer
slopes (p, q).  With the base triangulation's edges carrying the slopes
(1,0), (0,1) and (1,1), interior intersection numbers are determinant
counts: two distinct arc slopes meet |ps - qr| - 1 times, two curve slopes
|ps - qr| times.  The arc graph of S_{1,1} is the Farey graph on slopes,
with edges exactly between determinant-one pairs, and distances there are
computed by a shortest continued-fraction recursion.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from .errors import CoordinateError

#: slopes of the three base edges, in label order
BASE_SLOPES = ((1, 0), (0, 1), (1, 1))


def normalize_slope(p: int, q: int):
    g = gcd(p, q)
    if g == 0:
        raise CoordinateError("slope (0, 0) is not a slope")
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return (p, q)


def slope_det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def arc_slope_intersection(a, b) -> int:
    a = normalize_slope(*a)
    b = normalize_slope(*b)
    if a == b:
        return 0
    return abs(slope_det(a, b)) - 1


def curve_slope_intersection(a, b) -> int:
    return abs(slope_det(normalize_slope(*a), normalize_slope(*b)))


def arc_vector(slope):
    """(vector, tag) coordinates of the arc with this slope, over T0."""
    s = normalize_slope(*slope)
    for k, e in enumerate(BASE_SLOPES):
        if s == normalize_slope(*e):
            return (0, 0, 0), k
    return tuple(arc_slope_intersection(s, e) for e in BASE_SLOPES), None


def curve_vector(slope):
    s = normalize_slope(*slope)
    return tuple(curve_slope_intersection(s, e) for e in BASE_SLOPES)


def slope_of_arc_vector(vec, tag=None):
    """Invert :func:`arc_vector`; raises if the vector is not a slope."""
    if tag is not None:
        if any(vec):
            raise CoordinateError("tagged coordinates must be the zero vector")
        return normalize_slope(*BASE_SLOPES[tag])
    x0, x1, x2 = vec
    aq, ap, ad = x0 + 1, x1 + 1, x2 + 1
    for sp in (1, -1):
        p, q = sp * ap, aq
        if abs(p - q) == ad and gcd(p, q) == 1:
            return normalize_slope(p, q)
    raise CoordinateError(f"vector {vec} is not the coordinate vector of a slope arc")


def slope_of_curve_vector(vec):
    x0, x1, x2 = vec
    for sp in (1, -1):
        p, q = sp * x1, x0
        if (p, q) != (0, 0) and abs(p - q) == x2 and gcd(p, q) == 1:
            return normalize_slope(p, q)
    raise CoordinateError(f"vector {vec} is not the coordinate vector of a slope curve")


def twist_slope(a, c, n: int = 1):
    """Slope of the n-fold twist about the curve of slope c applied to a."""
    a = normalize_slope(*a)
    c = normalize_slope(*c)
    d = slope_det(a, c)
    return normalize_slope(a[0] + n * d * c[0], a[1] + n * d * c[1])


def farey_neighbors(a, b) -> bool:
    return abs(slope_det(normalize_slope(*a), normalize_slope(*b))) == 1


@lru_cache(maxsize=None)
def _dist_to_infinity(p: int, q: int) -> int:
    """Farey distance from p/q to 1/0.

    Shortest integer continued fractions: each step moves to a fraction
    with strictly smaller denominator through a neighbor of the current
    vertex, and only the two integer quotients around p/q can start a
    geodesic.
    """
    q = abs(q)
    if q == 0:
        return 0
    if q == 1:
        return 1
    lo = p // q
    best = None
    for n in (lo, lo + 1):
        r = p - n * q
        if r == 0:
            continue
        d = _dist_to_infinity(q, r)
        if best is None or d < best:
            best = d
    return 1 + best


def farey_distance(a, b) -> int:
    """Exact distance between two slopes in the Farey graph."""
    a = normalize_slope(*a)
    b = normalize_slope(*b)
    if a == b:
        return 0
    # move b to 1/0 by an integer unimodular map
    r, s = b
    g, u, v = _ext_gcd(r, s)
    # v*r - u*s = ... choose (u, v) with r*v - s*u = 1
    p, q = a
    p2 = v * p - u * q
    q2 = -s * p + r * q
    return _dist_to_infinity(p2, q2)


def _ext_gcd(r, s):
    """g, u, v with r*v - s*u = g = gcd(r, s)."""
    old_r, rr = r, s
    old_s, ss = 1, 0
    old_t, tt = 0, 1
    while rr:
        k = old_r // rr
        old_r, rr = rr, old_r - k * rr
        old_s, ss = ss, old_s - k * ss
        old_t, tt = tt, old_t - k * tt
    # old_s * r + old_t * s = g
    return old_r, -old_t, old_s


def farey_geodesic_exists_check(a, b, d):  # pragma: no cover - debugging aid
    return farey_distance(a, b) == d
