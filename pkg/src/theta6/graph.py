"""Half-Theta6 graphs, the Theta6-graph, and structural utilities."""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .geom import (
    DOWN,
    UP,
    Point,
    Triangle,
    bounding_region,
    contains,
    integer_coords,
    require_general_position,
    smallest_triangle,
    td_size,
    triangle_inside,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class ProximityGraph:
    points: tuple[Point, ...]
    # (u, v) with u < v  ->  (introduced by up-triangle, introduced by down-triangle)
    edges: dict[Edge, tuple[bool, bool]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.points)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def restrict(self, orientation: str) -> ProximityGraph:
        k = 0 if orientation == UP else 1
        return ProximityGraph(
            self.points,
            {e: ((k == 0), (k == 1)) for e, f in self.edges.items() if f[k]},
        )

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def introducing_triangle(self, u: int, v: int, orientation: str) -> Triangle:
        return smallest_triangle(self.points[u], self.points[v], orientation)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [
                {"u": u, "v": v, "up": up, "down": down}
                for (u, v), (up, down) in sorted(self.edges.items())
            ],
        }


def _add(edges: dict, u: int, v: int, k: int) -> None:
    if u > v:
        u, v = v, u
    up, down = edges.get((u, v), (False, False))
    edges[(u, v)] = (up or k == 0, down or k == 1)


# Odd cones use up-triangles, even cones down-triangles.  For each cone the
# two coordinates that increase (odd) or decrease (even) away from the apex.
_CONE_PAIRS = {1: (0, 1), 3: (0, 2), 5: (1, 2), 2: (1, 2), 4: (0, 1), 6: (0, 2)}


def build_half(points: Sequence[Point], orientation: str) -> ProximityGraph:
    """Connect every point to the nearest point of each of its odd (up) or even (down) cones.

    Direct O(n^2) scan over the cone definition.
    """
    require_general_position(points)
    c = integer_coords(points)
    n = len(c)
    edges: dict[Edge, tuple[bool, bool]] = {}
    cones = (1, 3, 5) if orientation == UP else (2, 4, 6)
    sign = 1 if orientation == UP else -1
    k = 0 if orientation == UP else 1
    for p in range(n):
        cp = c[p]
        for cone in cones:
            a, b = _CONE_PAIRS[cone]
            best, best_d = -1, None
            for q in range(n):
                cq = c[q]
                if sign * (cq[a] - cp[a]) > 0 and sign * (cq[b] - cp[b]) > 0:
                    d = sign * (cq[a] - cp[a] + cq[b] - cp[b])
                    if best_d is None or d < best_d:
                        best, best_d = q, d
            if best >= 0:
                _add(edges, p, best, k)
    return ProximityGraph(tuple(points), edges)


def build_by_oracle(points: Sequence[Point]) -> ProximityGraph:
    """Test emptiness of both minimal triangles of every pair against every other point."""
    require_general_position(points)
    c = integer_coords(points)
    n = len(c)
    edges: dict[Edge, tuple[bool, bool]] = {}
    for u in range(n):
        pu = c[u]
        for v in range(u + 1, n):
            pv = c[v]
            lo = (min(pu[0], pv[0]), min(pu[1], pv[1]), min(pu[2], pv[2]))
            hi = (max(pu[0], pv[0]), max(pu[1], pv[1]), max(pu[2], pv[2]))
            up_empty = not any(
                r[0] > lo[0] and r[1] > lo[1] and r[2] > lo[2] for r in c
            )
            down_empty = not any(
                r[0] < hi[0] and r[1] < hi[1] and r[2] < hi[2] for r in c
            )
            if up_empty or down_empty:
                edges[(u, v)] = (up_empty, down_empty)
    return ProximityGraph(tuple(points), edges)


def _dominance_nearest(a: list[int], b: list[int]) -> list[int]:
    """For each i, the j with a[j] > a[i] and b[j] > b[i] minimising a[j] + b[j] (or -1).

    Sweep in decreasing a with a Fenwick tree of prefix minima over the
    rank of b (largest b first).
    """
    n = len(a)
    order_b = sorted(range(n), key=lambda i: -b[i])
    rank = [0] * n
    for r, i in enumerate(order_b):
        rank[i] = r + 1
    INF = None
    tval: list = [INF] * (n + 1)
    tidx = [-1] * (n + 1)
    out = [-1] * n
    for i in sorted(range(n), key=lambda i: -a[i]):
        # query ranks < rank[i]  (b strictly larger)
        r = rank[i] - 1
        best, best_j = INF, -1
        while r > 0:
            v = tval[r]
            if v is not None and (best is None or v < best):
                best, best_j = v, tidx[r]
            r -= r & -r
        out[i] = best_j
        s = a[i] + b[i]
        r = rank[i]
        while r <= n:
            v = tval[r]
            if v is None or s < v:
                tval[r] = s
                tidx[r] = i
            r += r & -r
    return out


def build_fast(points: Sequence[Point], orientations: Iterable[str] = (UP, DOWN)) -> ProximityGraph:
    """Theta6-graph by six dominance sweeps, O(n log n) per cone."""
    require_general_position(points)
    c = integer_coords(points)
    cols = [[p[i] for p in c] for i in range(3)]
    neg = [[-v for v in col] for col in cols]
    edges: dict[Edge, tuple[bool, bool]] = {}
    for orientation in orientations:
        k = 0 if orientation == UP else 1
        src = cols if orientation == UP else neg
        for a, b in ((0, 1), (0, 2), (1, 2)):
            near = _dominance_nearest(src[a], src[b])
            for p, q in enumerate(near):
                if q >= 0:
                    _add(edges, p, q, k)
    return ProximityGraph(tuple(points), edges)


def theta6(points: Sequence[Point]) -> ProximityGraph:
    return build_fast(points)


def union(g1: ProximityGraph, g2: ProximityGraph) -> ProximityGraph:
    edges = dict(g1.edges)
    for e, (up, down) in g2.edges.items():
        a, b = edges.get(e, (False, False))
        edges[e] = (a or up, b or down)
    return ProximityGraph(g1.points, edges)


# --- surrounding points -------------------------------------------------


@dataclass(frozen=True)
class AugmentedSet:
    base: tuple[Point, ...]
    surround: tuple[Point, ...]  # a1..a6, a_i in cone C_i of every base point

    @property
    def points(self) -> tuple[Point, ...]:
        return self.base + self.surround

    @property
    def surround_indices(self) -> list[int]:
        n = len(self.base)
        return list(range(n, n + 6))


def surround_points(lo, hi, delta) -> list[Point]:
    """Six points just outside the corners of the bounding region.

    `lo`/`hi` are the coordinate-wise minima/maxima of the point set; `delta`
    is either one push distance or six of them.
    """
    d = list(delta) if isinstance(delta, (list, tuple)) else [delta] * 6
    m0, m1, m2 = lo
    M0, M1, M2 = hi
    return [
        Point(M0 + d[0], M1 + d[0], -M0 - M1 - 2 * d[0]),
        Point(-m1 - m2 + 2 * d[1], m1 - d[1], m2 - d[1]),
        Point(M0 + d[2], -M0 - M2 - 2 * d[2], M2 + d[2]),
        Point(m0 - d[3], m1 - d[3], -m0 - m1 + 2 * d[3]),
        Point(-M1 - M2 - 2 * d[4], M1 + d[4], M2 + d[4]),
        Point(m0 - d[5], -m0 - m2 + 2 * d[5], m2 - d[5]),
    ]


def augment(points: Sequence[Point]) -> AugmentedSet:
    """Place a1..a6 outside R(P), near its corners, with a_i in cone C_i of every point."""
    if not points:
        raise ValueError("augment needs at least one point")
    region = bounding_region(points)
    lo, hi = region.up.t, region.down.t
    base = max(region.up.size, region.down.size) / 8 or Fraction(1)
    for attempt in range(64):
        # distinct push distances keep the six points off each other's level lines
        deltas = [base * (1 + Fraction(i + attempt, 7 * (attempt + 1))) for i in range(6)]
        surround = surround_points(lo, hi, deltas)
        allp = list(points) + surround
        if all(len({p[c] for p in allp}) == len(allp) for c in range(3)):
            return AugmentedSet(tuple(points), tuple(surround))
    raise RuntimeError("could not place surrounding points in general position")


# --- spanning tree and paths --------------------------------------------


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[Edge, ...]
    weight: Fraction  # sum of squared triangle sizes (proportional to area)


def mst_td(points: Sequence[Point]) -> SpanningTree:
    """Kruskal under the size of the smallest up-triangle; ties broken by index pair."""
    require_general_position(points)
    n = len(points)
    pairs = sorted(
        (td_size(points[u], points[v]), u, v) for u in range(n) for v in range(u + 1, n)
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    total = Fraction(0)
    for w, u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
            total += w * w
            if len(chosen) == n - 1:
                break
    return SpanningTree(tuple(chosen), total)


class LemmaViolation(AssertionError):
    """A structural property that is proved to hold did not."""


def path_in_triangle(graph: ProximityGraph, p: int, q: int, orientation: str) -> list[int]:
    """Path from p to q in the half-graph using only vertices inside the closed minimal triangle."""
    pts = graph.points
    T = smallest_triangle(pts[p], pts[q], orientation)
    k = 0 if orientation == UP else 1
    inside = {i for i, r in enumerate(pts) if contains(T, r, "closed")}
    adj: dict[int, list[int]] = {i: [] for i in inside}
    for (u, v), flags in graph.edges.items():
        if flags[k] and u in inside and v in inside:
            adj[u].append(v)
            adj[v].append(u)
    prev = {p: p}
    dq = deque([p])
    while dq:
        u = dq.popleft()
        if u == q:
            break
        for w in sorted(adj[u]):
            if w not in prev:
                prev[w] = u
                dq.append(w)
    if q not in prev:
        raise LemmaViolation(f"no {orientation}-path between {p} and {q} inside their triangle")
    path = [q]
    while path[-1] != p:
        path.append(prev[path[-1]])
    path.reverse()
    for u, v in zip(path, path[1:]):
        if not triangle_inside(smallest_triangle(pts[u], pts[v], orientation), T):
            raise LemmaViolation(f"introducing triangle of ({u},{v}) leaves the triangle of ({p},{q})")
    return path


# --- degeneracy ---------------------------------------------------------


def degeneracy_order(adj: Sequence[Iterable[int]]) -> tuple[list[int], int]:
    """Repeatedly remove a minimum-degree vertex; returns (order, degeneracy)."""
    n = len(adj)
    nbrs = [set(a) for a in adj]
    deg = [len(a) for a in nbrs]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    order, k = [], 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        k = max(k, d)
        for w in nbrs[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return order, k


def greedy_color(adj: Sequence[Iterable[int]]) -> list[int]:
    """Colour in reverse degeneracy order; uses at most degeneracy + 1 colours."""
    order, _ = degeneracy_order(adj)
    color = [-1] * len(adj)
    for v in reversed(order):
        used = {color[w] for w in adj[v] if color[w] >= 0}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


def greedy_independent(adj: Sequence[Iterable[int]]) -> list[int]:
    """Largest colour class of the greedy colouring."""
    color = greedy_color(adj)
    if not color:
        return []
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(color):
        classes.setdefault(c, []).append(v)
    return max(classes.values(), key=lambda s: (len(s), [-v for v in s]))


def components(n: int, adj: Sequence[Iterable[int]], removed: set[int] | frozenset = frozenset()) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in range(n):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected_edges(n: int, edges: Iterable[Edge]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return n <= 1 or len(components(n, adj)) == 1
