"""Newton polygons of one-sided cloud data.

A polygon here is built from a cloud of points ``(m, u_m)`` with integer
abscissas and integer (or infinite, encoded as ``None``) ordinates.  The
*principal part* is the initial chain of sides of strictly negative slope,
running from the leftmost finite point to the leftmost point of minimal
ordinate.  Each side carries its slope -h/e in lowest terms and both
endpoints; the integer points on a side at abscissas x0, x0+e, ..., x1 index
the coefficients of its residual polynomial (computed by the caller, since
reduction is level-dependent).
"""

from __future__ import annotations

from fractions import Fraction


class Side:
    """One side of a Newton polygon, of slope -h/e with gcd(h, e) = 1."""

    __slots__ = ("slope", "x0", "y0", "x1", "y1", "h", "e")

    def __init__(self, x0, y0, x1, y1):
        if x1 <= x0:
            raise ValueError("side endpoints out of order")
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.slope = Fraction(y1 - y0, x1 - x0)
        self.h = -self.slope.numerator
        self.e = self.slope.denominator

    @property
    def degree(self):
        """Number of segments between integer points: the residual degree."""
        return (self.x1 - self.x0) // self.e

    def abscissas(self):
        """Integer points of the side, left to right."""
        return range(self.x0, self.x1 + 1, self.e)

    def serialize(self):
        """Flat 5-tuple form ``[slope, x0, y0, x1, y1]`` (slope as a string
        when fractional)."""
        s = self.slope
        sl = int(s) if s.denominator == 1 else str(s)
        return [sl, self.x0, self.y0, self.x1, self.y1]

    def __repr__(self):
        return "Side(%s; (%d,%d)-(%d,%d))" % (
            self.slope, self.x0, self.y0, self.x1, self.y1)

    def __eq__(self, other):
        if not isinstance(other, Side):
            return NotImplemented
        return (self.x0, self.y0, self.x1, self.y1) == (
            other.x0, other.y0, other.x1, other.y1)


def lower_hull(points):
    """Vertices of the lower convex hull of (x, y) points, collinear points
    dropped; input need not be sorted."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # keep only strict right turns (downward convexity)
            if (y1 - y0) * (p[0] - x1) >= (p[1] - y1) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def principal_polygon(points):
    """Sides of strictly negative slope of the lower hull of a point cloud.

    ``points`` is an iterable of ``(m, u)`` with ``u = None`` meaning the
    point is absent (infinite ordinate).  Returns a list of :class:`Side`
    in increasing slope order; empty when the leftmost finite point already
    has minimal ordinate.
    """
    finite = [(m, u) for m, u in points if u is not None]
    if not finite:
        raise ValueError("empty point cloud")
    hull = lower_hull(finite)
    sides = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if y1 >= y0:
            break
        sides.append(Side(x0, y0, x1, y1))
    return sides


def polygon_length(sides):
    """Total horizontal length of a chain of sides."""
    return sides[-1].x1 - sides[0].x0 if sides else 0


def polygon_index(sides):
    """Lattice points on or below the chain, strictly to the right of its
    left endpoint and strictly above the horizontal through its right
    endpoint.  This is the chain's contribution to a p-adic index."""
    if not sides:
        return 0
    y_end = sides[-1].y1
    total = 0
    for s in sides:
        for x in range(s.x0 + 1, s.x1 + 1):
            yval = s.y0 + (x - s.x0) * s.slope  # Fraction
            floor_y = yval.numerator // yval.denominator
            if floor_y > y_end:
                total += floor_y - y_end
    return total


def render_side(side):
    """Bracketed display form, e.g. ``[ -1/2, 0, 12, 24, 0 ]``."""
    s = side.serialize()
    return "[ %s ]" % ", ".join(str(v) for v in s)


def render_point(x, y):
    return "( %s , %s )" % (x, y)
