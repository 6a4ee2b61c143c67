"""Deterministic point-set generators, each checking its defining property.

The extremal constructions use fixed small clusters whose coordinates
were found by search; what is validated on every call is the combinatorial
behaviour (edge counts, triangle families, degrees), not the numbers.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import (
    IntroTriangle,
    family_is_valid,
    graph_matching,
    introducing_triangles,
    max_disjoint_triangles,
    min_blocking_set,
    verify_blocking,
)
from .faces import induced_face_profile, planar_coords
from .geom import (
    DOWN,
    UP,
    Point,
    cone_index,
    disjoint_closed,
    from_cartesian,
    general_position,
    orient,
)
from .graph import ProximityGraph, build_fast
from .serialize import points_to_json


class GeneratorValidationError(AssertionError):
    """A generator's output failed its own defining property."""


@dataclass
class Instance:
    name: str
    points: list[Point]
    params: dict
    checks: dict = field(default_factory=dict)
    subset: list[int] | None = None
    family: list[IntroTriangle] | None = None

    @property
    def n(self) -> int:
        return len(self.points)

    def provenance(self) -> dict:
        return {"generator": self.name, "params": self.params, "validation": self.checks}

    def to_json(self) -> dict:
        extra: dict = {"provenance": self.provenance()}
        if self.subset is not None:
            extra["subset"] = self.subset
        if self.family is not None:
            extra["family"] = [it.to_json() for it in self.family]
        return points_to_json(self.points, **extra)


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise GeneratorValidationError(what)


def _finish(inst: Instance) -> Instance:
    err = general_position(inst.points)
    _require(err is None, f"{inst.name}: {err}")
    inst.checks["general_position"] = True
    return inst


def tri(pairs: Sequence[tuple[int, int]]) -> list[Point]:
    return [Point.tri(a, b) for a, b in pairs]


# --- random families ----------------------------------------------------


def gen_vertical_line(n: int) -> Instance:
    """n points on the line x = 0 at heights 0, 2, 4, ..."""
    if n < 1:
        raise ValueError("n must be positive")
    pts = [Point.tri(2 * k, -k) for k in range(n)]
    inst = Instance("vertical", pts, {"n": n})
    g = build_fast(pts)
    _require(sorted(g.edges) == [(k, k + 1) for k in range(n - 1)], "vertical line is not a path")
    inst.checks["edges"] = len(g.edges)
    return _finish(inst)


GRID_BITS = 32


def gen_uniform(n: int, seed: int, precision: int = 30) -> Instance:
    """Uniform points in the unit square, snapped to a 2^-32 grid.

    Uses Python's Mersenne Twister (MT19937, 19937-bit state) seeded with
    `seed`; a draw that collides with an earlier point on a 0/60/120 degree
    line is rejected and redrawn.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    scale = 1 << GRID_BITS
    used: list[set[Fraction]] = [set(), set(), set()]
    pts: list[Point] = []
    rejected = 0
    while len(pts) < n:
        x = Fraction(rng.getrandbits(GRID_BITS), scale)
        y = Fraction(rng.getrandbits(GRID_BITS), scale)
        p = from_cartesian(x, y, precision)
        if any(p[i] in used[i] for i in range(3)):
            rejected += 1
            continue
        for i in range(3):
            used[i].add(p[i])
        pts.append(p)
    inst = Instance("uniform", pts, {"n": n, "seed": seed, "precision": precision, "prng": "MT19937"})
    inst.checks["rejected_draws"] = rejected
    return _finish(inst)


# --- stacked clusters ---------------------------------------------------

CLUSTER_R = tri([(0, 0), (-14, 6), (10, -12), (20, -18)])
CLUSTER_S = tri([(3, -13), (-26, 27), (4, -1), (23, -19), (6, 1)])
# stacking step along cone C1; each cluster spans under a tenth of it
CLUSTER_OFFSET = Point.tri(300, 300)


def stack(cluster: Sequence[Point], t: int, offset: Point = CLUSTER_OFFSET) -> list[Point]:
    return [p + offset.scaled(k) for k in range(t) for p in cluster]


def check_stacking(points: Sequence[Point], k: int) -> dict:
    """Cluster i+1 sits in cone C1 of cluster i; cross triangles join consecutive clusters only."""
    t = len(points) // k
    for c in range(t - 1):
        for i in range(c * k, (c + 1) * k):
            for j in range((c + 1) * k, (c + 2) * k):
                _require(cone_index(points[i], points[j]) == 1, f"point {j} not in cone C1 of point {i}")
    cross = 0
    for it in introducing_triangles(points):
        u, v = it.edge
        cu, cv = u // k, v // k
        if cu == cv:
            continue
        cross += 1
        _require(abs(cu - cv) == 1, f"triangle of edge {it.edge} skips a cluster")
        corners = it.triangle.corners()
        _require(points[u] in corners or points[v] in corners, f"triangle of edge {it.edge} has no endpoint at a corner")
    return {"clusters": t, "cross_triangles": cross}


def _check_cluster_r() -> dict:
    g = build_fast(CLUSTER_R)
    tris = introducing_triangles(CLUSTER_R, g)
    both = sum(1 for f in g.edges.values() if f[0] and f[1])
    _require(len(g.edges) == 5, "cluster R must span 5 edges")
    _require(len(tris) == 8 and both == 3, "cluster R must have 8 triangles, two on each of 3 edges")
    alpha = max_disjoint_triangles(CLUSTER_R, "interior", graph=g).size
    _require(alpha == 3, "cluster R must hold exactly 3 disjoint triangles")
    return {"edges": 5, "triangles": 8, "alpha": 3}


def gen_alpha_clusters(t: int, exact_limit: int = 4) -> Instance:
    """t stacked copies of the four-point cluster R; alpha = 3t."""
    if t < 1:
        raise ValueError("t must be positive")
    pts = stack(CLUSTER_R, t)
    inst = Instance("alpha-clusters", pts, {"t": t})
    inst.checks["cluster"] = _check_cluster_r()
    inst.checks.update(check_stacking(pts, 4))
    if t <= exact_limit:
        fam = max_disjoint_triangles(pts, "interior")
        _require(fam.size == 3 * t, f"alpha = {fam.size}, expected {3 * t}")
        inst.checks["alpha"] = fam.size
        inst.family = list(fam.triangles)
    else:
        inst.checks["alpha"] = "skipped-size"
    return _finish(inst)


def _interior_point(xy, i: int, others: Sequence[int]) -> bool:
    for a, b, c in itertools.combinations(others, 3):
        if len({orient(xy[a], xy[b], xy[i]), orient(xy[b], xy[c], xy[i]), orient(xy[c], xy[a], xy[i])}) == 1:
            return True
    return False


def strong_cluster_crossing(cluster: Sequence[Point] = CLUSTER_S, offset: Point = CLUSTER_OFFSET) -> dict | None:
    """Find the configuration that caps each cluster at two strong-matching edges.

    For two stacked copies, looks for a triangle between the copies that
    leaves exactly five triangles of the upper copy free, spanning only four
    points, with the free triangle on (bottommost point, central point)
    meeting the other four.  Returns a description or None.
    """
    k = len(cluster)
    pts = stack(cluster, 2, offset)
    tris = introducing_triangles(pts)
    upper = [it for it in tris if min(it.edge) >= k]
    xy = planar_coords(cluster)
    central = {i + k for i in range(k) if _interior_point(xy, i, [j for j in range(k) if j != i])}
    bottom = min(range(k), key=lambda i: cluster[i].l0) + k
    for cross in tris:
        if not cross.edge[0] < k <= cross.edge[1]:
            continue
        free = [it for it in upper if disjoint_closed(it.triangle, cross.triangle)]
        span = {x for it in free for x in it.edge}
        if len(free) != 5 or len(span) != 4:
            continue
        for it in free:
            other = set(it.edge) - {bottom}
            if bottom in it.edge and other <= central:
                if all(not disjoint_closed(it.triangle, o.triangle) for o in free if o is not it):
                    return {
                        "cross_edge": list(cross.edge),
                        "free_triangles": len(free),
                        "free_points": len(span),
                        "bottom_central_edge": sorted(x - k for x in it.edge),
                    }
    return None


def gen_strong_clusters(t: int, exact_limit: int = 3) -> Instance:
    """t stacked copies of the five-point cluster S; strong matching number 2t."""
    if t < 1:
        raise ValueError("t must be positive")
    pts = stack(CLUSTER_S, t)
    inst = Instance("strong-clusters", pts, {"t": t})
    single = max_disjoint_triangles(CLUSTER_S, "closed").size
    _require(single == 2, "cluster S must have strong matching number 2")
    crossing = strong_cluster_crossing()
    _require(crossing is not None, "cluster S lacks the intersecting bottom-central triangle")
    inst.checks["cluster"] = {"mu_star": 2, **crossing}
    inst.checks.update(check_stacking(pts, 5))
    if t <= exact_limit:
        fam = max_disjoint_triangles(pts, "closed")
        _require(fam.size == 2 * t, f"strong matching {fam.size}, expected {2 * t}")
        inst.checks["mu_star"] = fam.size
        inst.family = list(fam.triangles)
    else:
        inst.checks["mu_star"] = "skipped-size"
    return _finish(inst)


GADGET_BASE = tri([(0, 0), (3, -5)])
GADGET = tri([(4, -4), (-10, 28), (-12, -6), (-20, -22)])
# the tiny fractional part keeps every copy off the other copies' level lines
GADGET_OFFSET = Point.tri(24 + Fraction(1, 10007), -23 + Fraction(1, 10009))


def gen_blocking_gadgets(t: int) -> Instance:
    """Two points plus t copies of a four-point gadget; certifies (5n - 6)/4 disjoint triangles."""
    if t < 0:
        raise ValueError("t must be non-negative")
    pts = list(GADGET_BASE) + [p + GADGET_OFFSET.scaled(k + 1) for k in range(t) for p in GADGET]
    n = len(pts)
    inst = Instance("blocking-gadgets", pts, {"t": t})
    target = (5 * n - 6) // 4
    fam = max_disjoint_triangles(pts, "interior", solver="greedy")
    if fam.size < target:
        fam = max_disjoint_triangles(pts, "interior", limit=400)
    _require(fam.size >= target, f"found only {fam.size} disjoint triangles, need {target}")
    chosen = list(fam.triangles)[:target]
    _require(family_is_valid(pts, chosen, "interior"), "triangle family is not certified")
    inst.family = chosen
    inst.checks["family_size"] = target
    inst.checks["family_valid"] = True
    return _finish(inst)


# --- dense and high-degree constructions --------------------------------

OCTAHEDRON = tri([(29, 32), (41, -36), (9, -13), (-23, -27), (-38, 28), (-14, 26)])


def many_edges_census(points: Sequence[Point], g: ProximityGraph) -> dict:
    """Split the edges of the line-plus-octahedron set into the five groups of the count."""
    m = len(points) - 6
    a = {i + 1: m + i for i in range(6)}
    line = [e for e in g.edges if e[1] < m]
    spokes = [e for e in g.edges if e[0] < m and e[1] in (a[1], a[3], a[4], a[6])]
    caps = [e for e in g.edges if e[0] < m and e[1] in (a[2], a[5])]
    ring = [e for e in g.edges if e[0] >= m]
    top = max(range(m), key=lambda i: points[i].l0)
    bottom = min(range(m), key=lambda i: points[i].l0)
    deg = [0] * 6
    for u, v in ring:
        deg[u - m] += 1
        deg[v - m] += 1
    return {
        "line": len(line),
        "line_ok": sorted(line) == [(k, k + 1) for k in range(m - 1)],
        "spokes": len(spokes),
        "octahedron": len(ring),
        "octahedron_ok": len(ring) == 12 and all(d == 4 for d in deg),
        "caps": len(caps),
        "caps_ok": sorted(caps) == sorted([(top, a[2]), (bottom, a[5])]),
    }


def gen_many_edges(n: int) -> Instance:
    """n - 6 points on a vertical segment surrounded by an octahedron: 5n - 17 edges."""
    if n < 7:
        raise ValueError("n must be at least 7")
    m = n - 6
    if m == 1:
        line = [Point.tri(4, -2)]
    else:
        line = [Point.tri(Fraction(8 * k, m - 1), Fraction(-4 * k, m - 1)) for k in range(m)]
    pts = line + OCTAHEDRON
    for p in line:
        for i, a in enumerate(OCTAHEDRON):
            _require(cone_index(p, a) == i + 1, "surrounding point outside its cone")
    g = build_fast(pts)
    census = many_edges_census(pts, g)
    _require(census["line_ok"] and census["octahedron_ok"] and census["caps_ok"], f"edge census off: {census}")
    _require(census["spokes"] == 4 * m, f"edge census off: {census}")
    _require(len(g.edges) == 5 * n - 17, f"{len(g.edges)} edges, expected {5 * n - 17}")
    inst = Instance("many-edges", pts, {"n": n})
    inst.checks["edges"] = len(g.edges)
    inst.checks["census"] = census
    return _finish(inst)


HALF_GADGET = tri([
    (-76, -130), (-78, -19), (-82, 20), (254, -128), (-27, -50), (77, 22), (-305, 35),
    (65, -31), (-12, 196), (183, 331), (80, -336), (47, -54), (-81, -72),
])
HALF_LOW = (0, 9)  # the two vertices of the half below degree 7
HALF_OFFSET = Point.tri(-269, 152)


def gen_min_degree7() -> Instance:
    """Two point-reflected copies of a 13-point half whose only deficient vertices are a, b."""
    half = list(HALF_GADGET)
    deg_half = build_fast(half).degrees()
    low = tuple(i for i, d in enumerate(deg_half) if d < 7)
    _require(low == HALF_LOW, f"half-gadget deficient vertices {low}, expected {HALF_LOW}")
    copy = [Point(-p.l0, -p.l1, -p.l2) + HALF_OFFSET for p in half]
    pts = half + copy
    g = build_fast(pts)
    deg = g.degrees()
    _require(len(pts) == 26, "expected 26 points")
    _require(min(deg) == 7, f"minimum degree {min(deg)}, expected 7")
    k = len(half)
    glued = sorted({(u, v) for u in low for v in (low[0] + k, low[1] + k) if (min(u, v), max(u, v)) in g.edges})
    inst = Instance("min-degree7", pts, {})
    inst.checks.update(
        half_degrees=deg_half,
        deficient_in_half=list(low),
        min_degree=min(deg),
        edges=len(g.edges),
        edges_between_deficient_copies=[list(e) for e in glued],
    )
    return _finish(inst)


# --- figure instances ---------------------------------------------------

FIG1 = tri([(0, 8), (16, 28), (26, -6), (15, 20), (28, -3), (-5, 16)])
FIG3 = tri([(10, 27), (-6, 14), (27, 28), (-18, 21), (-7, 17), (-22, -29), (2, 3)])
FIG3_SUBSET = [0, 1, 2, 3, 4, 5]


def gen_figure_examples(which: str) -> Instance:
    if which == "fig1":
        pts = list(FIG1)
        g = build_fast(pts)
        mu = graph_matching(g).size
        bs = min_blocking_set(pts, "exact", graph=g)
        _require(mu == 3, f"matching size {mu}, expected 3")
        _require(bs.size == 5, f"blocking number {bs.size}, expected 5")
        _require(verify_blocking(pts, bs.blockers).ok, "blocking set does not verify")
        inst = Instance("fig1", pts, {"which": which})
        inst.checks.update(edges=len(g.edges), mu=mu, beta=bs.size)
        return _finish(inst)
    if which == "fig3":
        pts = list(FIG3)
        free = 6
        down = induced_face_profile(pts, FIG3_SUBSET, DOWN, method="triangulate")
        up = induced_face_profile(pts, FIG3_SUBSET, UP, method="triangulate")
        _require(down.rep_degree[free] == 3 and down.f3 == 1, "free point not in a degree-3 down face")
        _require(up.rep_degree[free] == 4 and up.f4plus == 1 and up.f5plus == 0, "free point not in a degree-4 up face")
        inst = Instance("fig3", pts, {"which": which}, subset=list(FIG3_SUBSET))
        inst.checks.update(down_degree=3, up_degree=4, f3_down=down.f3, f4plus_up=up.f4plus, f5plus_up=up.f5plus)
        return _finish(inst)
    raise ValueError(f"unknown figure {which!r}")


GENERATORS: dict[str, Callable[..., Instance]] = {
    "vertical": gen_vertical_line,
    "uniform": gen_uniform,
    "alpha-clusters": gen_alpha_clusters,
    "strong-clusters": gen_strong_clusters,
    "blocking-gadgets": gen_blocking_gadgets,
    "many-edges": gen_many_edges,
    "min-degree7": gen_min_degree7,
    "fig1": lambda: gen_figure_examples("fig1"),
    "fig3": lambda: gen_figure_examples("fig3"),
}
