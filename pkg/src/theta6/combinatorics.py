"""Matchings, Tutte-Berge deficiency, blocking sets and disjoint empty triangles."""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .geom import (
    DOWN,
    UP,
    Point,
    Triangle,
    contains,
    disjoint_closed,
    general_position,
    interiors_disjoint,
    smallest_triangle,
)
from .graph import (
    ProximityGraph,
    build_fast,
    degeneracy_order,
    greedy_color,
    greedy_independent,
)


class SizeGuardError(ValueError):
    """Instance too large for an exact solver."""


# --- matching -----------------------------------------------------------


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]
    unmatched: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.edges)


def max_matching(n: int, edges: Iterable[tuple[int, int]]) -> Matching:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    m = nx.max_weight_matching(g, maxcardinality=True)
    pairs = tuple(sorted((min(u, v), max(u, v)) for u, v in m))
    matched = {v for e in pairs for v in e}
    return Matching(pairs, tuple(v for v in range(n) if v not in matched))


def graph_matching(g: ProximityGraph) -> Matching:
    return max_matching(g.n, g.edges)


def is_matching(n: int, edges: Iterable[tuple[int, int]], matching: Iterable[tuple[int, int]]) -> bool:
    es = {(min(u, v), max(u, v)) for u, v in edges}
    used: set[int] = set()
    for u, v in matching:
        if (min(u, v), max(u, v)) not in es or u in used or v in used or u == v:
            return False
        used.update((u, v))
    return True


# --- Tutte-Berge --------------------------------------------------------


@dataclass(frozen=True)
class TutteBergeWitness:
    S: tuple[int, ...]
    odd_components: int
    comp: int
    deficiency: int  # max over tested S of odd(G - S) - |S|
    exact: bool
    # largest comp(G - S) - |S| seen and the set attaining it
    toughness_excess: int = 0
    toughness_S: tuple[int, ...] = ()


def _bit_components(adj_mask: list[int], alive: int) -> tuple[int, int]:
    """(number of components, number of odd components) of the subgraph on `alive`."""
    comps = odd = 0
    rem = alive
    while rem:
        low = rem & -rem
        comp = frontier = low
        while frontier:
            new = 0
            f = frontier
            while f:
                b = f & -f
                new |= adj_mask[b.bit_length() - 1]
                f ^= b
            new &= rem & ~comp
            comp |= new
            frontier = new
        rem &= ~comp
        comps += 1
        odd += bin(comp).count("1") & 1
    return comps, odd


def comp_odd(n: int, adj: Sequence[Iterable[int]], S: Iterable[int]) -> tuple[int, int]:
    adj_mask = [sum(1 << w for w in adj[v]) for v in range(n)]
    alive = ((1 << n) - 1) & ~sum(1 << v for v in set(S))
    return _bit_components(adj_mask, alive)


def tutte_berge(
    n: int,
    adj: Sequence[Iterable[int]],
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    max_exhaustive: int = 20,
) -> TutteBergeWitness:
    adj_mask = [sum(1 << w for w in adj[v]) for v in range(n)]
    full = (1 << n) - 1
    best = (-(10**9), 0, 0, 0)  # (odd - |S|, S mask, odd, comp)
    tough = (-(10**9), 0)

    def consider(mask: int) -> None:
        nonlocal best, tough
        s = bin(mask).count("1")
        c, o = _bit_components(adj_mask, full & ~mask)
        if o - s > best[0]:
            best = (o - s, mask, o, c)
        if c - s > tough[0]:
            tough = (c - s, mask)

    if mode == "exhaustive":
        if n > max_exhaustive:
            raise SizeGuardError(f"exhaustive Tutte-Berge limited to {max_exhaustive} vertices")
        for mask in range(1 << n):
            consider(mask)
    elif mode == "sampled":
        rng = random.Random(seed)
        consider(0)
        for v in range(n):
            consider(adj_mask[v])  # a closed neighbourhood cut isolates v
        for _ in range(samples):
            p = rng.random()
            consider(sum(1 << v for v in range(n) if rng.random() < p))
    else:
        raise ValueError(f"bad mode {mode!r}")
    bits = lambda m: tuple(v for v in range(n) if m >> v & 1)
    return TutteBergeWitness(bits(best[1]), best[2], best[3], best[0], mode == "exhaustive", tough[0], bits(tough[1]))


def sampled_subsets(n: int, count: int, seed: int) -> list[frozenset[int]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = rng.random()
        out.append(frozenset(v for v in range(n) if rng.random() < p))
    return out


# --- introducing triangles ----------------------------------------------


@dataclass(frozen=True)
class IntroTriangle:
    edge: tuple[int, int]
    triangle: Triangle

    def to_json(self) -> dict:
        return {"edge": list(self.edge), **self.triangle.to_json()}


def introducing_triangles(points: Sequence[Point], graph: ProximityGraph | None = None) -> list[IntroTriangle]:
    g = graph if graph is not None else build_fast(points)
    out = []
    for (u, v), (up, down) in sorted(g.edges.items()):
        if up:
            out.append(IntroTriangle((u, v), smallest_triangle(points[u], points[v], UP)))
        if down:
            out.append(IntroTriangle((u, v), smallest_triangle(points[u], points[v], DOWN)))
    return out


@dataclass(frozen=True)
class TriangleFamily:
    triangles: tuple[IntroTriangle, ...]
    mode: str  # "interior" or "closed"
    exact: bool = True

    @property
    def size(self) -> int:
        return len(self.triangles)


def family_is_valid(points: Sequence[Point], family: Iterable[IntroTriangle], mode: str) -> bool:
    """Every triangle is an empty minimal triangle of its edge and they are pairwise disjoint."""
    fam = list(family)
    for it in fam:
        u, v = it.edge
        if smallest_triangle(points[u], points[v], it.triangle.orientation) != it.triangle:
            return False
        if any(contains(it.triangle, r, "open") for r in points):
            return False
    disjoint = interiors_disjoint if mode == "interior" else disjoint_closed
    return all(disjoint(a.triangle, b.triangle) for i, a in enumerate(fam) for b in fam[i + 1:])


# --- maximum independent set (branch and bound) -------------------------


def max_independent_set(n: int, conflict: Sequence[int], limit: int | None = None) -> list[int]:
    """Exact maximum independent set; `conflict[v]` is a bitmask of neighbours.

    Searches for a maximum clique in the complement with a greedy colouring
    bound, taking high-degree vertices first.
    """
    if limit is not None and n > limit:
        raise SizeGuardError(f"exact independent set limited to {limit} vertices")
    full = (1 << n) - 1
    comp = [full & ~conflict[v] & ~(1 << v) for v in range(n)]
    degree = [bin(conflict[v]).count("1") for v in range(n)]
    # highest conflict degree gets coloured first, so it is branched on last
    rank = sorted(range(n), key=lambda v: (-degree[v], v))
    best: list[int] = greedy_mis(n, conflict)

    def colour_sort(P: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        uncoloured = [v for v in rank if P >> v & 1]
        colour = 0
        while uncoloured:
            colour += 1
            cls_mask = 0
            rest = []
            for v in uncoloured:
                if comp[v] & cls_mask:
                    rest.append(v)
                else:
                    cls_mask |= 1 << v
                    order.append(v)
                    bounds.append(colour)
            uncoloured = rest
        return order, bounds

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        order, bounds = colour_sort(P)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] <= len(best):
                return
            v = order[i]
            newP = P & comp[v]
            if newP:
                expand(R + [v], newP)
            elif len(R) + 1 > len(best):
                best = R + [v]
            P &= ~(1 << v)

    if n:
        expand([], full)
    return sorted(best)


def greedy_mis(n: int, conflict: Sequence[int]) -> list[int]:
    alive = (1 << n) - 1
    chosen = []
    while alive:
        v = min(
            (v for v in range(n) if alive >> v & 1),
            key=lambda v: (bin(conflict[v] & alive).count("1"), v),
        )
        chosen.append(v)
        alive &= ~conflict[v] & ~(1 << v)
    return sorted(chosen)


def conflict_masks(tris: Sequence[IntroTriangle], mode: str) -> list[int]:
    disjoint = interiors_disjoint if mode == "interior" else disjoint_closed
    m = len(tris)
    masks = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if not disjoint(tris[i].triangle, tris[j].triangle):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def max_disjoint_triangles(
    points: Sequence[Point],
    mode: str = "interior",
    solver: str = "exact",
    *,
    graph: ProximityGraph | None = None,
    limit: int = 120,
) -> TriangleFamily:
    """Largest family of pairwise disjoint introducing triangles.

    mode "interior" gives alpha(P); mode "closed" gives the strong matching
    number mu*(P).
    """
    if mode not in ("interior", "closed"):
        raise ValueError(f"bad mode {mode!r}")
    tris = introducing_triangles(points, graph)
    masks = conflict_masks(tris, mode)
    if solver == "exact":
        chosen = max_independent_set(len(tris), masks, limit=limit)
    elif solver == "greedy":
        chosen = greedy_mis(len(tris), masks)
    else:
        raise ValueError(f"bad solver {solver!r}")
    fam = tuple(tris[i] for i in chosen)
    if mode == "closed":
        used: set[int] = set()
        for it in fam:
            assert not (set(it.edge) & used), "disjoint closed triangles share an endpoint"
            used.update(it.edge)
    return TriangleFamily(fam, mode, solver == "exact")


# --- blocking sets ------------------------------------------------------


@dataclass(frozen=True)
class BlockingSet:
    blockers: tuple[Point, ...]
    covers: tuple[tuple[int, ...], ...]  # indices into the triangle list, per blocker
    exact: bool
    lower_bound: int = 0

    @property
    def size(self) -> int:
        return len(self.blockers)


@dataclass(frozen=True)
class BlockingCheck:
    ok: bool
    unblocked_triangle: IntroTriangle | None = None
    surviving_edge: tuple[int, int] | None = None
    geometric_ok: bool = True
    rebuild_ok: bool = True


class _Arrangement:
    """Cells of the arrangement of all triangle side lines, in rank space."""

    def __init__(self, points: Sequence[Point], tris: Sequence[IntroTriangle]):
        vals: list[set[Fraction]] = [set(), set(), set()]
        for p in points:
            for i in range(3):
                vals[i].add(p[i])
        for it in tris:
            t = it.triangle.t
            for i in range(3):
                vals[i].add(t[i])
            for c in it.triangle.corners():
                for i in range(3):
                    vals[i].add(c[i])
        self.V = [sorted(v) for v in vals]
        rank = [{v: k for k, v in enumerate(V)} for V in self.V]
        V0, V1, V2 = self.V
        cells = []
        import bisect

        for a in range(1, len(V0)):
            for b in range(1, len(V1)):
                lo2 = -V0[a] - V1[b]
                hi2 = -V0[a - 1] - V1[b - 1]
                c0 = max(1, bisect.bisect_right(V2, lo2))
                for c in range(c0, len(V2)):
                    if V2[c - 1] >= hi2:
                        break
                    cells.append((a, b, c))
        self.cells = np.array(cells, dtype=np.int64).reshape(-1, 3)
        m = len(tris)
        inside = np.zeros((len(cells), m), dtype=bool)
        for j, it in enumerate(tris):
            r = [rank[i][it.triangle.t[i]] for i in range(3)]
            C = self.cells
            if it.triangle.orientation == UP:
                inside[:, j] = (C[:, 0] > r[0]) & (C[:, 1] > r[1]) & (C[:, 2] > r[2])
            else:
                inside[:, j] = (C[:, 0] <= r[0]) & (C[:, 1] <= r[1]) & (C[:, 2] <= r[2])
        self.inside = inside

    def point(self, cell, k: int = 0) -> Point:
        """A point strictly inside the cell; `k` varies the choice."""
        a, b, c = (int(x) for x in cell)
        V0, V1, V2 = self.V
        lam = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5)]
        l2_lo = max(V2[c - 1], -V0[a] - V1[b])
        l2_hi = min(V2[c], -V0[a - 1] - V1[b - 1])
        g = l2_lo + (l2_hi - l2_lo) * lam[k % 5]
        lo = max(V0[a - 1], -g - V1[b])
        hi = min(V0[a], -g - V1[b - 1])
        l0 = lo + (hi - lo) * lam[(k // 5) % 5]
        return Point(l0, -g - l0, g)


def _masks_to_candidates(inside: np.ndarray) -> tuple[list[int], list[int]]:
    """Distinct maximal coverage patterns and one cell index for each."""
    m = inside.shape[1]
    weights = [1 << j for j in range(m)]
    pats: dict[int, int] = {}
    for ci, row in enumerate(inside):
        if not row.any():
            continue
        mask = 0
        for j in np.flatnonzero(row):
            mask |= weights[j]
        pats.setdefault(mask, ci)
    masks = sorted(pats, key=lambda x: (-bin(x).count("1"), x))
    maximal: list[int] = []
    for x in masks:
        if not any(x & y == x for y in maximal):
            maximal.append(x)
    return maximal, [pats[x] for x in maximal]


def _greedy_cover(universe: int, cands: Sequence[int]) -> list[int]:
    chosen = []
    unc = universe
    while unc:
        i = max(range(len(cands)), key=lambda i: (bin(cands[i] & unc).count("1"), -i))
        if not cands[i] & unc:
            raise RuntimeError("triangle cannot be hit by any candidate")
        chosen.append(i)
        unc &= ~cands[i]
    return chosen


def _packing_bound(unc: int, hitters: dict[int, int]) -> int:
    """Triangles no single candidate can hit together: a lower bound on the cover size."""
    lb = 0
    while unc:
        j = (unc & -unc).bit_length() - 1
        lb += 1
        unc &= ~hitters[j]
    return lb


def exact_hitting_set(universe: int, cands: Sequence[int]) -> list[int]:
    """Minimum number of candidate sets covering `universe` (branch and bound)."""
    m = universe.bit_length()
    hit_by: dict[int, list[int]] = {j: [] for j in range(m) if universe >> j & 1}
    for i, c in enumerate(cands):
        for j in hit_by:
            if c >> j & 1:
                hit_by[j].append(i)
    # triangles co-hittable with j
    hitters = {j: 0 for j in hit_by}
    for j, lst in hit_by.items():
        for i in lst:
            hitters[j] |= cands[i]
    best = _greedy_cover(universe, cands)

    def rec(unc: int, chosen: list[int]) -> None:
        nonlocal best
        if not unc:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _packing_bound(unc, hitters) >= len(best):
            return
        j = min(
            (j for j in hit_by if unc >> j & 1),
            key=lambda j: (len(hit_by[j]), j),
        )
        opts = sorted(hit_by[j], key=lambda i: (-bin(cands[i] & unc).count("1"), i))
        for i in opts:
            chosen.append(i)
            rec(unc & ~cands[i], chosen)
            chosen.pop()

    rec(universe, [])
    return best


def _place_blockers(points: Sequence[Point], arr: _Arrangement, cells: Sequence[int]) -> list[Point]:
    placed: list[Point] = []
    used = [set(p[i] for p in points) for i in range(3)]
    for ci in cells:
        for k in range(25):
            b = arr.point(arr.cells[ci], k)
            if all(b[i] not in used[i] for i in range(3)):
                break
        else:
            raise RuntimeError("could not place a blocker in general position")
        for i in range(3):
            used[i].add(b[i])
        placed.append(b)
    return placed


def min_blocking_set(
    points: Sequence[Point],
    mode: str = "exact",
    *,
    graph: ProximityGraph | None = None,
    max_triangles: int = 80,
) -> BlockingSet:
    """Minimum set of points hitting the interior of every introducing triangle.

    Candidates are one interior point per cell of the arrangement of all
    triangle sides; the exact mode solves set cover over them.
    """
    tris = introducing_triangles(points, graph)
    m = len(tris)
    if m == 0:
        return BlockingSet((), (), True, 0)
    if mode == "exact" and m > max_triangles:
        raise SizeGuardError(f"{m} introducing triangles exceed the exact limit {max_triangles}")
    if mode == "greedy" and m > max_triangles:
        return _greedy_blocking_large(points, tris)
    arr = _Arrangement(points, tris)
    cands, cells = _masks_to_candidates(arr.inside)
    universe = (1 << m) - 1
    hitters = {j: 0 for j in range(m)}
    for c in cands:
        for j in range(m):
            if c >> j & 1:
                hitters[j] |= c
    lb = _packing_bound(universe, hitters)
    if mode == "exact":
        chosen = exact_hitting_set(universe, cands)
    elif mode == "greedy":
        chosen = _greedy_cover(universe, cands)
    else:
        raise ValueError(f"bad mode {mode!r}")
    blockers = _place_blockers(points, arr, [cells[i] for i in chosen])
    covers = tuple(tuple(j for j in range(m) if contains(tris[j].triangle, b, "open")) for b in blockers)
    return BlockingSet(tuple(blockers), covers, mode == "exact", lb if mode != "exact" else len(chosen))


def _greedy_blocking_large(points: Sequence[Point], tris: Sequence[IntroTriangle]) -> BlockingSet:
    """Greedy cover with edge midpoints and barycentres as candidates, nudged into general position."""
    cand_pts: list[Point] = []
    for it in tris:
        u, v = it.edge
        cand_pts.append((points[u] + points[v]).scaled(Fraction(1, 2)))
        cand_pts.append(it.triangle.barycenter())
    m = len(tris)
    cands = [sum(1 << j for j in range(m) if contains(tris[j].triangle, c, "open")) for c in cand_pts]
    chosen = _greedy_cover((1 << m) - 1, cands)
    used = [set(p[i] for p in points) for i in range(3)]
    blockers = []
    for i in chosen:
        c = cand_pts[i]
        cover = [j for j in range(m) if cands[i] >> j & 1]
        target = tris[cover[0]].triangle.barycenter()
        eps = Fraction(1, 997)
        b = c
        while not (
            all(b[k] not in used[k] for k in range(3))
            and all(contains(tris[j].triangle, b, "open") for j in cover)
        ):
            b = c + (target - c).scaled(eps)
            eps /= 3
        for k in range(3):
            used[k].add(b[k])
        blockers.append(b)
    covers = tuple(tuple(j for j in range(m) if contains(tris[j].triangle, b, "open")) for b in blockers)
    return BlockingSet(tuple(blockers), covers, False, 0)


def verify_blocking(points: Sequence[Point], blockers: Sequence[Point]) -> BlockingCheck:
    """Two independent checks: every introducing triangle is hit, and G(P + B) has no P-P edge."""
    allp = list(points) + list(blockers)
    if set(points) & set(blockers):
        raise ValueError("blockers must be distinct from the input points")
    err = general_position(allp)
    if err is not None:
        raise err
    first_tri = None
    for it in introducing_triangles(points):
        if not any(contains(it.triangle, b, "open") for b in blockers):
            first_tri = it
            break
    n = len(points)
    g = build_fast(allp)
    first_edge = next((e for e in sorted(g.edges) if e[1] < n), None)
    geo_ok, reb_ok = first_tri is None, first_edge is None
    if geo_ok != reb_ok:
        raise AssertionError("geometric hitting and rebuilt graph disagree")
    return BlockingCheck(geo_ok and reb_ok, first_tri, first_edge, geo_ok, reb_ok)


def trivial_blocking_set(points: Sequence[Point]) -> list[Point]:
    """2(n - 1) blockers: just below every point but the lowest, just above every point but the highest."""
    n = len(points)
    if n < 2:
        return []
    gaps = []
    for i in range(3):
        vs = sorted(p[i] for p in points)
        gaps.extend(b - a for a, b in zip(vs, vs[1:]))
    eps = min(gaps) / 8
    up = Point.tri(2, -1, -1)
    order = sorted(range(n), key=lambda i: points[i].l0)
    out = []
    for i in order[1:]:
        out.append(points[i] - up.scaled(eps))
    for i in order[:-1]:
        out.append(points[i] + up.scaled(eps))
    return out


def extend_with_blocker(points: Sequence[Point], blockers: Sequence[Point]) -> tuple[list[Point], list[Point], Point]:
    """Add a point a1 far in cone C1 together with a blocker b at the right corner of an enclosing down-triangle.

    Returns (P + [a1], B + [b], a1).
    """
    allp = list(points) + list(blockers)
    hi = [max(p[i] for p in allp) for i in range(3)]
    lo = [min(p[i] for p in allp) for i in range(3)]
    margin = max(max(h - l for h, l in zip(hi, lo)), Fraction(1)) / 4
    b = Point(hi[0] + margin, hi[1] + margin, -hi[0] - hi[1] - 2 * margin)
    a1 = b + Point(margin, margin, -2 * margin)
    return list(points) + [a1], list(blockers) + [b], a1


# --- aggregate report ---------------------------------------------------


@dataclass
class Bound:
    value: int
    kind: str  # exact | lower | upper

    def to_json(self) -> dict:
        return {"value": self.value, "kind": self.kind}


def bound_report(
    points: Sequence[Point],
    *,
    exact_matching_limit: int = 400,
    exact_tri_limit: int = 60,
    exhaustive_limit: int = 14,
) -> dict:
    n = len(points)
    if n == 0:
        raise ValueError("empty point set")
    g = build_fast(points)
    adj = g.adjacency()
    deg = g.degrees()
    mu = graph_matching(g)
    tris = introducing_triangles(points, g)
    report: dict = {
        "n": n,
        "edges": len(g.edges),
        "up_edges": sum(1 for f in g.edges.values() if f[0]),
        "down_edges": sum(1 for f in g.edges.values() if f[1]),
        "introducing_triangles": len(tris),
        "min_degree": min(deg) if n else 0,
        "max_degree": max(deg) if n else 0,
        "degeneracy": degeneracy_order(adj)[1],
        "colors": (max(greedy_color(adj)) + 1) if n else 0,
        "independent_set": len(greedy_independent(adj)),
        "mu": Bound(mu.size, "exact"),
    }
    if n <= exhaustive_limit:
        tb = tutte_berge(n, adj, "exhaustive")
    else:
        tb = tutte_berge(n, adj, "sampled", samples=200)
    report["deficiency"] = Bound(n - 2 * mu.size, "exact")
    report["toughness_excess"] = Bound(tb.toughness_excess, "exact" if tb.exact else "lower")
    if len(tris) == 0:
        zero = Bound(0, "exact")
        report.update(alpha=zero, mu_star=zero, beta=zero)
        return report
    if len(tris) <= exact_tri_limit:
        report["alpha"] = Bound(max_disjoint_triangles(points, "interior", graph=g).size, "exact")
        report["mu_star"] = Bound(max_disjoint_triangles(points, "closed", graph=g).size, "exact")
        report["beta"] = Bound(min_blocking_set(points, "exact", graph=g).size, "exact")
    else:
        report["alpha"] = Bound(max_disjoint_triangles(points, "interior", "greedy", graph=g).size, "lower")
        report["mu_star"] = Bound(max_disjoint_triangles(points, "closed", "greedy", graph=g).size, "lower")
        bs = min_blocking_set(points, "greedy", graph=g, max_triangles=exact_tri_limit)
        report["beta"] = Bound(min(bs.size, 2 * (n - 1)), "upper")
    return report
