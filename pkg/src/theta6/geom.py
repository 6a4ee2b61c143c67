"""Exact points and equilateral triangles in triangular coordinates.

A point is stored as the values of three linear functionals whose level
lines make angles of 0, 60 and 120 degrees with the horizontal::

    l0 = y
    l1 = (sqrt(3) * x - y) / 2
    l2 = -l0 - l1

Every predicate used by the graph code is a comparison between these
values, so all of them are exact over the rationals.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

UP = "up"
DOWN = "down"
ORIENTATIONS = (UP, DOWN)

# Sign pattern of (q - p) for each cone C1..C6 of apex p.
CONE_SIGNS = {
    (1, 1, -1): 1,
    (1, -1, -1): 2,
    (1, -1, 1): 3,
    (-1, -1, 1): 4,
    (-1, 1, 1): 5,
    (-1, 1, -1): 6,
}


class GeneralPositionError(ValueError):
    """Two points share a triangular coordinate (a 0/60/120 degree line)."""

    def __init__(self, i: int, j: int, coord: int):
        super().__init__(f"points {i} and {j} share coordinate l{coord}")
        self.pair = (i, j)
        self.coord = coord


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite coordinate {v!r}")
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("nan", "inf", "+inf", "-inf", "infinity", "-infinity"):
            raise ValueError(f"non-finite coordinate {v!r}")
    return Fraction(v)


@dataclass(frozen=True, order=True)
class Point:
    l0: Fraction
    l1: Fraction
    l2: Fraction

    def __post_init__(self):
        if self.l0 + self.l1 + self.l2 != 0:
            raise ValueError("triangular coordinates must sum to zero")

    @classmethod
    def tri(cls, l0, l1, l2=None) -> Point:
        a, b = _frac(l0), _frac(l1)
        c = -a - b if l2 is None else _frac(l2)
        return cls(a, b, c)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.l0, self.l1, self.l2)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __add__(self, other: Point) -> Point:
        return Point(self.l0 + other.l0, self.l1 + other.l1, self.l2 + other.l2)

    def __sub__(self, other: Point) -> Point:
        return Point(self.l0 - other.l0, self.l1 - other.l1, self.l2 - other.l2)

    def scaled(self, k) -> Point:
        k = _frac(k)
        return Point(self.l0 * k, self.l1 * k, self.l2 * k)

    def planar(self) -> tuple[Fraction, Fraction]:
        """Affine image (sqrt(3)*x, y); orientation-preserving, exact."""
        return (2 * self.l1 + self.l0, self.l0)

    def cartesian(self) -> tuple[float, float]:
        return ((2 * float(self.l1) + float(self.l0)) / math.sqrt(3), float(self.l0))


def sqrt3(precision: int) -> Fraction:
    """sqrt(3) truncated to `precision` decimal digits."""
    if precision < 1:
        raise ValueError("precision must be positive")
    scale = 10 ** precision
    return Fraction(math.isqrt(3 * scale * scale), scale)


def from_cartesian(x, y, precision: int = 30) -> Point:
    fx, fy = _frac(x), _frac(y)
    l1 = (sqrt3(precision) * fx - fy) / 2
    return Point(fy, l1, -fy - l1)


def cone_index(apex: Point, q: Point) -> int:
    """Index 1..6 of the cone of `apex` containing `q` (C1 straddles +x)."""
    signs = []
    for i in range(3):
        d = q[i] - apex[i]
        if d == 0:
            raise GeneralPositionError(-1, -1, i)
        signs.append(1 if d > 0 else -1)
    return CONE_SIGNS[tuple(signs)]


@dataclass(frozen=True)
class Triangle:
    """up: {r : l_i(r) >= t_i}; down: {r : l_i(r) <= t_i}."""

    orientation: str
    t: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"bad orientation {self.orientation!r}")
        if self.size < 0:
            raise ValueError("triangle thresholds give negative size")

    @property
    def size(self) -> Fraction:
        s = sum(self.t)
        return -s if self.orientation == UP else s

    @property
    def degenerate(self) -> bool:
        return self.size == 0

    def corners(self) -> list[Point]:
        t0, t1, t2 = self.t
        return [Point(t0, t1, -t0 - t1), Point(t0, -t0 - t2, t2), Point(-t1 - t2, t1, t2)]

    def barycenter(self) -> Point:
        s = self.size / 3
        if self.orientation == UP:
            return Point(self.t[0] + s, self.t[1] + s, self.t[2] + s)
        return Point(self.t[0] - s, self.t[1] - s, self.t[2] - s)

    def to_json(self) -> dict:
        return {"orientation": self.orientation, "t": [str(v) for v in self.t]}

    @classmethod
    def from_json(cls, d: dict) -> Triangle:
        return cls(d["orientation"], tuple(Fraction(v) for v in d["t"]))


def smallest_triangle(p: Point, q: Point, orientation: str) -> Triangle:
    pick = min if orientation == UP else max
    return Triangle(orientation, (pick(p.l0, q.l0), pick(p.l1, q.l1), pick(p.l2, q.l2)))


def td_size(p: Point, q: Point) -> Fraction:
    """Common size of the smallest up and down triangles through p and q."""
    return (abs(p.l0 - q.l0) + abs(p.l1 - q.l1) + abs(p.l2 - q.l2)) / 2


def contains(T: Triangle, r: Point, mode: str = "closed") -> bool:
    t = T.t
    if mode == "open":
        if T.orientation == UP:
            return r.l0 > t[0] and r.l1 > t[1] and r.l2 > t[2]
        return r.l0 < t[0] and r.l1 < t[1] and r.l2 < t[2]
    if mode != "closed":
        raise ValueError(f"bad mode {mode!r}")
    if T.orientation == UP:
        return r.l0 >= t[0] and r.l1 >= t[1] and r.l2 >= t[2]
    return r.l0 <= t[0] and r.l1 <= t[1] and r.l2 <= t[2]


def triangle_inside(inner: Triangle, outer: Triangle) -> bool:
    """Closed containment of one triangle in another."""
    return all(contains(outer, c, "closed") for c in inner.corners())


def _intersect(T1: Triangle, T2: Triangle, strict: bool) -> bool:
    if T1.orientation == T2.orientation:
        if T1.orientation == UP:
            s = -sum(max(a, b) for a, b in zip(T1.t, T2.t))
        else:
            s = sum(min(a, b) for a, b in zip(T1.t, T2.t))
        return s > 0 if strict else s >= 0
    up, down = (T1, T2) if T1.orientation == UP else (T2, T1)
    lo, hi = up.t, down.t
    # box lo <= l <= hi intersected with the plane l0 + l1 + l2 = 0
    if strict:
        return all(a < b for a, b in zip(lo, hi)) and sum(lo) < 0 < sum(hi)
    return all(a <= b for a, b in zip(lo, hi)) and sum(lo) <= 0 <= sum(hi)


def interiors_disjoint(T1: Triangle, T2: Triangle) -> bool:
    return not _intersect(T1, T2, strict=True)


def disjoint_closed(T1: Triangle, T2: Triangle) -> bool:
    return not _intersect(T1, T2, strict=False)


def general_position(points: Sequence[Point]) -> GeneralPositionError | None:
    """Return None if all coordinates are pairwise distinct, else the first violation."""
    for c in range(3):
        seen: dict[Fraction, int] = {}
        for i, p in enumerate(points):
            v = p[c]
            if v in seen:
                return GeneralPositionError(seen[v], i, c)
            seen[v] = i
    return None


def require_general_position(points: Sequence[Point]) -> None:
    err = general_position(points)
    if err is not None:
        raise err


@dataclass(frozen=True)
class Region:
    up: Triangle
    down: Triangle

    def contains(self, r: Point, mode: str = "closed") -> bool:
        return contains(self.up, r, mode) or contains(self.down, r, mode)


def bounding_region(points: Iterable[Point]) -> Region:
    pts = list(points)
    if not pts:
        raise ValueError("bounding_region of an empty point set")
    lo = tuple(min(p[i] for p in pts) for i in range(3))
    hi = tuple(max(p[i] for p in pts) for i in range(3))
    return Region(Triangle(UP, lo), Triangle(DOWN, hi))


def integer_coords(points: Sequence[Point]) -> list[tuple[int, int, int]]:
    """Scale all points by one positive common denominator."""
    den = 1
    for p in points:
        for v in p.coords:
            den = math.lcm(den, v.denominator)
    out = []
    for p in points:
        out.append(tuple(v.numerator * (den // v.denominator) for v in p.coords))
    return out


def orient(a, b, c) -> int:
    """Sign of the cross product (b - a) x (c - a) on planar pairs."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def segments_cross(a, b, c, d) -> bool:
    """True if closed segments ab and cd share a point other than a common endpoint."""
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        return True
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if shared:
        # touching at the shared endpoint only, unless collinear and overlapping
        if o1 == 0 and o2 == 0:
            s = next(iter(shared))
            u = b if a == s else a
            v = d if c == s else c
            return (u[0] - s[0]) * (v[0] - s[0]) + (u[1] - s[1]) * (v[1] - s[1]) > 0
        return False
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True

    def on_seg(p, q, r):
        return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    return (
        (o1 == 0 and on_seg(a, b, c))
        or (o2 == 0 and on_seg(a, b, d))
        or (o3 == 0 and on_seg(c, d, a))
        or (o4 == 0 and on_seg(c, d, b))
    )
