import random
from fractions import Fraction

import pytest

from primeideals import newton


def test_basic_two_sided_polygon():
    # trinomial data: points (0,60), (50,50), (1000,0)
    sides = newton.principal_polygon([(0, 60), (50, 50), (1000, 0)])
    assert len(sides) == 2
    assert sides[0].slope == Fraction(-1, 5)
    assert (sides[0].h, sides[0].e, sides[0].degree) == (1, 5, 10)
    assert sides[1].slope == Fraction(-1, 19)
    assert (sides[1].h, sides[1].e, sides[1].degree) == (1, 19, 50)
    assert newton.polygon_length(sides) == 1000


def test_side_serialization_and_render():
    s = newton.Side(0, 12, 24, 0)
    assert s.slope == Fraction(-1, 2)
    assert s.serialize() == ["-1/2", 0, 12, 24, 0]
    assert newton.render_side(s) == "[ -1/2, 0, 12, 24, 0 ]"
    t = newton.Side(0, 3, 1, 0)
    assert t.serialize() == [-3, 0, 3, 1, 0]
    assert newton.render_point(0, 12) == "( 0 , 12 )"


def test_principal_part_stops_at_minimum():
    # ordinates rise again after the minimum: only falling sides are kept
    sides = newton.principal_polygon([(0, 4), (1, 1), (2, 0), (3, 5), (4, 9)])
    assert [s.slope for s in sides] == [Fraction(-3), Fraction(-1)]
    assert sides[-1].x1 == 2


def test_empty_principal_part():
    assert newton.principal_polygon([(0, 0), (1, 3), (2, 7)]) == []
    assert newton.principal_polygon([(0, 0)]) == []


def test_missing_points_are_skipped():
    sides = newton.principal_polygon([(0, 2), (1, None), (2, 0)])
    assert len(sides) == 1
    assert sides[0].slope == Fraction(-1)


def test_hull_is_convex_and_below_cloud():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 30)
        pts = sorted({(x, rng.randint(0, 40)) for x in rng.sample(range(50), n)})
        hull = newton.lower_hull(pts)
        slopes = [Fraction(y1 - y0, x1 - x0)
                  for (x0, y0), (x1, y1) in zip(hull, hull[1:])]
        assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
        # every cloud point is on or above the hull
        for x, y in pts:
            for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
                if x0 <= x <= x1:
                    assert Fraction(y) >= Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
        assert hull[0] == pts[0] and hull[-1] == pts[-1]


def _brute_index(sides):
    if not sides:
        return 0
    y_end = sides[-1].y1
    count = 0
    for s in sides:
        for x in range(s.x0 + 1, s.x1 + 1):
            y = y_end + 1
            while Fraction(y) <= s.y0 + (x - s.x0) * s.slope:
                count += 1
                y += 1
    return count


def test_polygon_index_examples():
    # single side (0,1)-(2,0): no interior lattice points
    assert newton.polygon_index([newton.Side(0, 1, 2, 0)]) == 0
    # side (0,3)-(2,0): exactly the point (1,1)
    assert newton.polygon_index([newton.Side(0, 3, 2, 0)]) == 1
    # side (0,2)-(2,0): the on-side point (1,1) counts
    assert newton.polygon_index([newton.Side(0, 2, 2, 0)]) == 1
    assert newton.polygon_index([]) == 0


def test_polygon_index_matches_brute_force():
    rng = random.Random(6)
    for _ in range(100):
        # random decreasing convex chain
        pts = [(0, rng.randint(5, 60))]
        x, y = 0, pts[0][1]
        slopes = sorted({Fraction(-rng.randint(1, 9), rng.randint(1, 9))
                         for _ in range(rng.randint(1, 4))})
        sides = []
        for sl in slopes:
            w = sl.denominator * rng.randint(1, 4)
            ny = y + int(sl * w)
            if ny < 0:
                break
            sides.append(newton.Side(x, y, x + w, ny))
            x, y = x + w, ny
        if not sides:
            continue
        assert newton.polygon_index(sides) == _brute_index(sides)


def test_abscissas():
    s = newton.Side(0, 12, 24, 0)
    assert list(s.abscissas()) == list(range(0, 25, 2))
