"""Exception types shared across the package."""


class SurfaceError(ValueError):
    """Invalid surface signature (excluded or sub-critical complexity)."""


class TriangulationError(ValueError):
    """Structurally invalid combinatorial triangulation data."""


class FlipError(ValueError):
    """Requested flip is not available (edge missing or self-folded)."""


class DescentError(RuntimeError):
    """Coordinate descent exceeded its iteration cap.

    Raised only as a bug tripwire; never a legitimate outcome for valid
    input data.
    """


class WordError(ValueError):
    """A mapping-class word does not return to the base combinatorics."""


class ProjectionError(ValueError):
    """Projection request is undefined (empty projection, annular misuse)."""


class CoordinateError(ValueError):
    """Invalid or ambiguous normal-coordinate data."""
