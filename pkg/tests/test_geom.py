import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from conftest import int_points
from hypothesis import given, settings
from hypothesis import strategies as st

from theta6.combinatorics import introducing_triangles
from theta6.generators import gen_vertical_line
from theta6.geom import (
    DOWN,
    UP,
    GeneralPositionError,
    Point,
    Triangle,
    bounding_region,
    cone_index,
    contains,
    disjoint_closed,
    from_cartesian,
    general_position,
    interiors_disjoint,
    segments_cross,
    smallest_triangle,
    sqrt3,
    td_size,
)

coord = st.integers(-200, 200)
points = st.builds(Point.tri, coord, coord)


def tri_triangle(rng: random.Random, orientation: str) -> Triangle:
    t0, t1 = rng.randint(-20, 20), rng.randint(-20, 20)
    size = rng.randint(1, 20)
    t2 = -t0 - t1 - size if orientation == UP else -t0 - t1 + size
    return Triangle(orientation, (Fraction(t0), Fraction(t1), Fraction(t2)))


# --- points and ingestion -------------------------------------------------


def test_coordinates_sum_to_zero():
    with pytest.raises(ValueError):
        Point(Fraction(1), Fraction(1), Fraction(1))
    p = Point.tri(3, -7)
    assert p.l2 == 4 and sum(p.coords) == 0


def test_from_cartesian_origin_and_vertical_axis():
    assert from_cartesian(0, 0, 5) == Point.tri(0, 0, 0)
    assert from_cartesian(0, 2, 5) == Point.tri(2, -1, -1)


def test_from_cartesian_against_integer_sqrt():
    p = from_cartesian(1, 0, 30)
    assert p.l0 == 0 and p.l2 == -p.l1 and isinstance(p.l1, Fraction)
    # sqrt(3)/2 to 60 digits from an independent integer square root
    digits = 60
    ref = Fraction(math.isqrt(3 * 10 ** (2 * digits)), 10**digits) / 2
    assert abs(p.l1 - ref) < Fraction(1, 10**30)
    getcontext().prec = 80
    assert abs(Decimal(p.l1.numerator) / Decimal(p.l1.denominator) - Decimal(3).sqrt() / 2) < Decimal("1e-30")


def test_sqrt3_truncation_is_consistent():
    assert sqrt3(10) < sqrt3(20) < Fraction(1732050808, 10**9) + Fraction(1, 10**9)
    assert sqrt3(30) ** 2 < 3 < (sqrt3(30) + Fraction(1, 10**30)) ** 2
    with pytest.raises(ValueError):
        sqrt3(0)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), "inf", "-Infinity"])
def test_from_cartesian_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        from_cartesian(bad, 0)


# --- cones ----------------------------------------------------------------


def angle_cone(apex: Point, q: Point) -> int:
    x0, y0 = apex.cartesian()
    x1, y1 = q.cartesian()
    ang = math.degrees(math.atan2(y1 - y0, x1 - x0)) % 360
    # C1 is the sector (0, 60) counter-clockwise from the positive x-axis
    return int(ang // 60) + 1


def test_cone_examples_match_angle_oracle():
    o = Point.tri(0, 0)
    up, down = Point.tri(2, -1, -1), Point.tri(-2, 1, 1)
    assert cone_index(o, up) == 2 == angle_cone(o, up)
    assert cone_index(o, down) == 5 == angle_cone(o, down)


def test_cone_index_agrees_with_angles_on_random_pairs():
    pts = int_points(60, 1)
    for p in pts:
        for q in pts:
            if p != q:
                assert cone_index(p, q) == angle_cone(p, q)


def test_cone_antisymmetry():
    rng = random.Random(5)
    for _ in range(100):
        p, q = int_points(2, rng.randrange(10**9))
        assert cone_index(p, q) == ((cone_index(q, p) + 2) % 6) + 1


def test_cone_index_rejects_ties():
    with pytest.raises(GeneralPositionError):
        cone_index(Point.tri(0, 0), Point.tri(0, 5))


def test_odd_cone_iff_apex_is_corner_of_up_triangle():
    pts = int_points(30, 2)
    for p in pts:
        for q in pts:
            if p == q:
                continue
            T = smallest_triangle(p, q, UP)
            assert (cone_index(p, q) % 2 == 1) == (p in T.corners())


# --- triangles --------------------------------------------------------------


def test_smallest_triangle_hand_example():
    T = smallest_triangle(Point.tri(2, -1, -1), Point.tri(0, 0, 0), UP)
    assert T.t == (0, -1, -1) and T.size == 2


def test_smallest_triangle_of_equal_points_is_degenerate():
    p = Point.tri(3, 4)
    for o in (UP, DOWN):
        T = smallest_triangle(p, p, o)
        assert T.degenerate and not contains(T, p, "open") and contains(T, p, "closed")


def test_up_and_down_sizes_agree():
    rng = random.Random(3)
    for _ in range(100):
        p, q = int_points(2, rng.randrange(10**9))
        s = smallest_triangle(p, q, UP).size
        assert s == smallest_triangle(p, q, DOWN).size == td_size(p, q)
        assert s == sum(abs(a - b) for a, b in zip(p.coords, q.coords)) / 2


def test_both_points_on_boundary_exactly_one_corner():
    pts = int_points(25, 4)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            for o in (UP, DOWN):
                T = smallest_triangle(p, q, o)
                assert contains(T, p) and contains(T, q)
                assert not contains(T, p, "open") and not contains(T, q, "open")
                assert (p in T.corners()) + (q in T.corners()) == 1


def test_contains_corner_and_barycenter():
    T = Triangle(UP, (Fraction(0), Fraction(-1), Fraction(-1)))
    for c in T.corners():
        assert contains(T, c, "closed") and not contains(T, c, "open")
    assert contains(T, T.barycenter(), "open")
    D = Triangle(DOWN, (Fraction(1), Fraction(2), Fraction(0)))
    assert contains(D, D.barycenter(), "open")


def test_contains_bad_mode():
    with pytest.raises(ValueError):
        contains(Triangle(UP, (Fraction(0),) * 3), Point.tri(0, 0), "half")


def test_triangle_rejects_negative_size():
    with pytest.raises(ValueError):
        Triangle(UP, (Fraction(1), Fraction(1), Fraction(1)))
    with pytest.raises(ValueError):
        Triangle("sideways", (Fraction(0),) * 3)


@given(points, points, points, st.sampled_from([UP, DOWN]))
def test_open_implies_closed(p, q, r, o):
    T = smallest_triangle(p, q, o)
    if contains(T, r, "open"):
        assert contains(T, r, "closed")


# --- disjointness -------------------------------------------------------------


def test_identical_triangles_overlap():
    T = Triangle(UP, (Fraction(0), Fraction(0), Fraction(-10)))
    assert not interiors_disjoint(T, T) and not disjoint_closed(T, T)


def test_nested_up_pair_overlaps():
    A = Triangle(UP, (Fraction(0), Fraction(0), Fraction(-10)))
    B = Triangle(UP, (Fraction(9), Fraction(0), Fraction(-10)))
    # pointwise max of the thresholds is B itself, size 1 > 0
    assert not interiors_disjoint(A, B)
    assert contains(A, B.barycenter(), "open") and contains(B, B.barycenter(), "open")
    C = Triangle(UP, (Fraction(11), Fraction(0), Fraction(-12)))
    assert interiors_disjoint(A, C) and disjoint_closed(A, C)


def test_up_and_down_of_one_pair_share_the_segment():
    pts = int_points(20, 6)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            U, D = smallest_triangle(p, q, UP), smallest_triangle(p, q, DOWN)
            mid = (p + q).scaled(Fraction(1, 2))
            assert contains(U, mid, "open") and contains(D, mid, "open")
            assert not interiors_disjoint(U, D)


def _sample_inside(T: Triangle, rng: np.random.Generator, k: int) -> np.ndarray:
    """k uniform points of T as rows (l0, l1, l2), floats."""
    corners = np.array([[float(v) for v in c.coords] for c in T.corners()])
    a, b = rng.random(k), rng.random(k)
    flip = a + b > 1
    a[flip], b[flip] = 1 - a[flip], 1 - b[flip]
    return corners[0] + np.outer(a, corners[1] - corners[0]) + np.outer(b, corners[2] - corners[0])


def _inside_open(T: Triangle, pts: np.ndarray) -> np.ndarray:
    t = np.array([float(v) for v in T.t])
    return np.all(pts > t, axis=1) if T.orientation == UP else np.all(pts < t, axis=1)


def test_disjointness_against_monte_carlo_oracle():
    rng = random.Random(11)
    nrng = np.random.default_rng(11)
    agree_overlap = agree_disjoint = 0
    for _ in range(200):
        T1 = tri_triangle(rng, rng.choice([UP, DOWN]))
        T2 = tri_triangle(rng, rng.choice([UP, DOWN]))
        sample = _sample_inside(T1, nrng, 10**6)
        hit = bool(_inside_open(T2, sample).any())
        exact_overlap = not interiors_disjoint(T1, T2)
        assert hit == exact_overlap, (T1, T2)
        if hit:
            agree_overlap += 1
        else:
            agree_disjoint += 1
    # the generator produces both outcomes often
    assert agree_overlap > 20 and agree_disjoint > 20


def test_disjointness_symmetry_and_implication():
    rng = random.Random(12)
    for _ in range(2000):
        T1 = tri_triangle(rng, rng.choice([UP, DOWN]))
        T2 = tri_triangle(rng, rng.choice([UP, DOWN]))
        assert interiors_disjoint(T1, T2) == interiors_disjoint(T2, T1)
        assert disjoint_closed(T1, T2) == disjoint_closed(T2, T1)
        if disjoint_closed(T1, T2):
            assert interiors_disjoint(T1, T2)


def test_touching_triangles_disjoint_inside_but_not_closed():
    A = Triangle(UP, (Fraction(0), Fraction(0), Fraction(-4)))
    D = Triangle(DOWN, (Fraction(0), Fraction(0), Fraction(3)))  # meets A only at the origin
    assert interiors_disjoint(A, D) and not disjoint_closed(A, D)
    E = Triangle(UP, (Fraction(0), Fraction(4), Fraction(-6)))  # meets A only at its corner (0, 4, -4)
    assert contains(A, Point.tri(0, 4), "closed") and contains(E, Point.tri(0, 4), "closed")
    assert interiors_disjoint(A, E) and not disjoint_closed(A, E)


# --- general position and bounding region ------------------------------------


def test_general_position_reports_pairs():
    err = general_position([Point.tri(1, 2), Point.tri(1, 5)])
    assert err is not None and err.pair == (0, 1) and err.coord == 0
    assert general_position([Point.tri(1, 2)]) is None
    assert general_position(gen_vertical_line(12).points) is None


def test_bounding_region():
    p = Point.tri(3, -1)
    R = bounding_region([p])
    assert R.up.degenerate and R.down.degenerate
    pts = int_points(40, 7)
    R = bounding_region(pts)
    assert all(contains(R.up, q) and contains(R.down, q) for q in pts)
    for it in introducing_triangles(pts):
        for c in it.triangle.corners():
            assert R.contains(c)
    with pytest.raises(ValueError):
        bounding_region([])


def test_segments_cross():
    assert segments_cross((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))
    assert segments_cross((0, 0), (2, 0), (1, 0), (3, 0))
    assert not segments_cross((0, 0), (1, 0), (2, 0), (3, 0))
    assert segments_cross((0, 0), (2, 0), (1, 0), (1, 5))


@settings(max_examples=200)
@given(points, points)
def test_point_arithmetic_roundtrip(p, q):
    assert (p + q) - q == p
    assert p.scaled(2) == p + p
