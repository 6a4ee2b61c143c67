"""Faces of plane straight-line graphs and face degrees.

The degree of a face is the number of triangles in a triangulation of the
face plus two.  A face whose boundary walks have total length k and which
has c boundary components (an isolated vertex is a component of length 0)
has degree k + 2(c - 1).  `face_degree` computes the same number by actually
inserting non-crossing diagonals, which keeps the closed form honest.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cmp_to_key

from .geom import UP, Point, integer_coords, orient, segments_cross
from .graph import AugmentedSet, ProximityGraph, augment, build_fast, components

Dart = tuple[int, int]


class CrossingError(ValueError):
    """Two edges of the input graph intersect."""


def _half(d) -> int:
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _angle_cmp(d1, d2) -> int:
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def planar_coords(points: Sequence[Point]) -> list[tuple[int, int]]:
    """Integer image of (sqrt(3) x, y) for every point."""
    return [(2 * l1 + l0, l0) for l0, l1, _ in integer_coords(points)]


def _signed_area2(xy, walk: Sequence[int]) -> int:
    s = 0
    for i, a in enumerate(walk):
        b = walk[(i + 1) % len(walk)]
        s += xy[a][0] * xy[b][1] - xy[b][0] * xy[a][1]
    return s


def _crossings_right(xy, walk: Sequence[int], q) -> int:
    """Crossings of the rightward horizontal ray from q with the closed walk.

    q must not share a y-coordinate with any walk vertex.
    """
    cnt = 0
    m = len(walk)
    for i in range(m):
        a, b = xy[walk[i]], xy[walk[(i + 1) % m]]
        if (a[1] > q[1]) != (b[1] > q[1]):
            o = orient(a, b, q)
            if (a[1] < b[1] and o > 0) or (a[1] > b[1] and o < 0):
                cnt += 1
    return cnt


@dataclass
class Face:
    id: int
    walks: list[list[int]]  # vertex sequences; for bounded faces walks[0] is the enclosing walk
    darts: list[Dart]
    isolated: list[int]
    is_outer: bool
    area2: int = 0  # twice the signed area enclosed by walks[0] (0 for the outer face)

    @property
    def length(self) -> int:
        return sum(len(w) for w in self.walks)

    @property
    def boundary_components(self) -> int:
        return len(self.walks) + len(self.isolated)

    @property
    def holes(self) -> int:
        return self.boundary_components - (0 if self.is_outer else 1)

    @property
    def degree(self) -> int:
        return self.length + 2 * (self.boundary_components - 1)

    def vertices(self) -> list[int]:
        vs = {v for w in self.walks for v in w}
        vs.update(self.isolated)
        return sorted(vs)


@dataclass
class FaceReport:
    xy: dict[int, tuple[int, int]]
    vertices: list[int]
    edges: list[tuple[int, int]]
    rotation: dict[int, list[int]]
    faces: list[Face]
    dart_face: dict[Dart, int]
    vertex_face: dict[int, int] = field(default_factory=dict)  # isolated vertex -> face
    n_components: int = 0

    @property
    def outer(self) -> Face:
        return next(f for f in self.faces if f.is_outer)

    def locate(self, q) -> int:
        """Face containing planar point q (not a vertex, not on an edge, y distinct from all vertices)."""
        best, best_area = self.outer.id, None
        for f in self.faces:
            if f.is_outer:
                continue
            if _crossings_right(self.xy, f.walks[0], q) % 2 == 1:
                if best_area is None or f.area2 < best_area:
                    best, best_area = f.id, f.area2
        return best

    def wedge_face(self, u: int, d) -> int | None:
        """Face entered when leaving vertex u in direction d; None if d runs along an edge."""
        rot = self.rotation.get(u, [])
        if not rot:
            return self.vertex_face[u]
        xu = self.xy[u]
        dirs = [(self.xy[w][0] - xu[0], self.xy[w][1] - xu[1]) for w in rot]
        for dw in dirs:
            if _angle_cmp(dw, d) == 0:
                return None
        # first neighbour strictly counter-clockwise of d
        i = 0
        while i < len(dirs) and _angle_cmp(dirs[i], d) < 0:
            i += 1
        w = rot[(i - 1) % len(rot)]
        return self.dart_face[(u, w)]

    def check_sum_identity(self) -> int:
        return sum(f.degree - 2 for f in self.faces)


def faces(
    xy: dict[int, tuple[int, int]] | Sequence[tuple[int, int]],
    edges: Iterable[tuple[int, int]],
    vertices: Iterable[int] | None = None,
    check: bool = True,
) -> FaceReport:
    """Faces of a plane straight-line graph by walking its rotation system.

    `xy` maps vertex -> integer planar coordinates.  Raises CrossingError if
    two edges intersect other than at a shared endpoint.
    """
    if not isinstance(xy, dict):
        xy = dict(enumerate(xy))
    edges = sorted({(min(u, v), max(u, v)) for u, v in edges})
    verts = sorted(set(xy) if vertices is None else set(vertices))
    if check:
        for i, (a, b) in enumerate(edges):
            for c, d in edges[i + 1:]:
                if segments_cross(xy[a], xy[b], xy[c], xy[d]):
                    raise CrossingError(f"edges {(a, b)} and {(c, d)} cross")
    nbrs: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation: dict[int, list[int]] = {}
    for u in verts:
        xu = xy[u]
        rotation[u] = sorted(
            nbrs[u],
            key=cmp_to_key(
                lambda a, b: _angle_cmp((xy[a][0] - xu[0], xy[a][1] - xu[1]), (xy[b][0] - xu[0], xy[b][1] - xu[1]))
            ),
        )
    pos = {u: {w: i for i, w in enumerate(rot)} for u, rot in rotation.items()}

    def nxt(d: Dart) -> Dart:
        u, v = d
        rot = rotation[v]
        return (v, rot[(pos[v][u] - 1) % len(rot)])

    walks: list[list[Dart]] = []
    dart_walk: dict[Dart, int] = {}
    for u, v in edges:
        for d in ((u, v), (v, u)):
            if d in dart_walk:
                continue
            w: list[Dart] = []
            cur = d
            while cur not in dart_walk:
                dart_walk[cur] = len(walks)
                w.append(cur)
                cur = nxt(cur)
            walks.append(w)

    adj = {v: set(nbrs[v]) for v in verts}
    idx = {v: i for i, v in enumerate(verts)}
    comps = components(len(verts), [[idx[w] for w in adj[v]] for v in verts])
    comps = [[verts[i] for i in c] for c in comps]
    comp_of = {v: ci for ci, c in enumerate(comps) for v in c}

    walk_vs = [[d[0] for d in w] for w in walks]
    areas = [_signed_area2(xy, wv) for wv in walk_vs]
    # each component with edges has exactly one outer walk: the one of least signed area
    outer_walk: dict[int, int] = {}
    for wi, wv in enumerate(walk_vs):
        ci = comp_of[wv[0]]
        if ci not in outer_walk or areas[wi] < areas[outer_walk[ci]]:
            outer_walk[ci] = wi

    face_list: list[Face] = [Face(0, [], [], [], True, 0)]
    walk_face: dict[int, int] = {}
    for wi, wv in enumerate(walk_vs):
        if outer_walk[comp_of[wv[0]]] != wi:
            f = Face(len(face_list), [wv], list(walks[wi]), [], False, areas[wi])
            walk_face[wi] = f.id
            face_list.append(f)

    def enclosing(q, skip_comp: int) -> int:
        best, best_area = 0, None
        for f in face_list[1:]:
            if comp_of[f.walks[0][0]] == skip_comp:
                continue
            if _crossings_right(xy, f.walks[0], q) % 2 == 1:
                if best_area is None or f.area2 < best_area:
                    best, best_area = f.id, f.area2
        return best

    vertex_face: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        fid = enclosing(xy[comp[0]], ci)
        f = face_list[fid]
        if ci in outer_walk:
            wi = outer_walk[ci]
            f.walks.append(walk_vs[wi])
            f.darts.extend(walks[wi])
            walk_face[wi] = fid
        else:
            f.isolated.append(comp[0])
            vertex_face[comp[0]] = fid

    dart_face = {d: walk_face[wi] for d, wi in dart_walk.items()}
    return FaceReport(xy, verts, edges, rotation, face_list, dart_face, vertex_face, len(comps))


def _inside_walk_faces(xy, edge_set, marked: set[Dart]):
    """Trace faces of the graph `edge_set` and return walks that use a marked dart."""
    rep = faces(xy, edge_set, check=False)
    inside = []
    for f in rep.faces:
        for w in f.walks:
            darts = [(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]
            if any(d in marked for d in darts):
                inside.append((w, _signed_area2(xy, w)))
    return inside


def triangulate_face(report: FaceReport, face_id: int, order: str = "short") -> tuple[list[tuple[int, int]], int]:
    """Insert a maximal set of non-crossing diagonals inside one face.

    Returns (diagonals, triangle count).  For the outer face the region
    beyond the convex hull cannot be covered by segments; it is counted as a
    fan over its remaining boundary walk.
    """
    f = report.faces[face_id]
    xy = report.xy
    vs = f.vertices()
    bedges = sorted({(min(u, v), max(u, v)) for u, v in f.darts})
    existing = set(bedges)
    pairs = [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:] if (u, v) not in existing]

    def sqlen(e):
        a, b = xy[e[0]], xy[e[1]]
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2

    if order == "short":
        pairs.sort(key=lambda e: (sqlen(e), e))
    elif order == "lex":
        pairs.sort(reverse=True)
    else:
        raise ValueError(f"bad order {order!r}")

    diagonals: list[tuple[int, int]] = []
    for u, v in pairs:
        a, b = xy[u], xy[v]
        if report.wedge_face(u, (b[0] - a[0], b[1] - a[1])) != face_id:
            continue
        if report.wedge_face(v, (a[0] - b[0], a[1] - b[1])) != face_id:
            continue
        blocked = False
        for w in vs:
            if w != u and w != v and orient(a, b, xy[w]) == 0:
                c = xy[w]
                if min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]):
                    blocked = True
                    break
        if blocked:
            continue
        for c, d in bedges + diagonals:
            if len({u, v, c, d}) == 4 and segments_cross(a, b, xy[c], xy[d]):
                blocked = True
                break
        if not blocked:
            diagonals.append((u, v))

    marked = set(f.darts) | {(u, v) for u, v in diagonals} | {(v, u) for u, v in diagonals}
    sub_xy = {v: xy[v] for v in vs}
    triangles = 0
    rest_len, rest_walks = 0, 0
    for w, area in _inside_walk_faces(sub_xy, bedges + diagonals, marked):
        if area > 0:
            if len(w) != 3:
                raise RuntimeError(f"face {face_id}: diagonal insertion left a {len(w)}-gon")
            triangles += 1
        else:
            if not f.is_outer:
                raise RuntimeError(f"face {face_id}: unexpected unbounded region")
            rest_len += len(w)
            rest_walks += 1
    if f.is_outer:
        if not f.walks and not f.isolated:
            return diagonals, 0
        if rest_walks == 0:
            # only isolated vertices: nothing was drawn
            rest_walks = len(vs)
        triangles += rest_len + 2 * (rest_walks - 1) - 2
    return diagonals, triangles


def face_degree(report: FaceReport, face_id: int, order: str = "short") -> int:
    return triangulate_face(report, face_id, order)[1] + 2


def degree_disagreements(report: FaceReport) -> list[int]:
    """Faces where the triangulation count disagrees with k + 2h or across diagonal orders."""
    bad = []
    for f in report.faces:
        if len(report.vertices) < 3 and f.is_outer:
            continue
        d1 = face_degree(report, f.id, "short")
        d2 = face_degree(report, f.id, "lex")
        if not (d1 == d2 == f.degree):
            bad.append(f.id)
    return bad


# --- induced faces around removed components ----------------------------


@dataclass
class FaceProfile:
    orientation: str
    f: dict[int, int]  # degree -> number of faces of that degree holding a representative
    rep_degree: dict[int, int]  # representative -> degree of its face
    rep_face: dict[int, int]
    face_components: dict[int, set[int]]  # face -> components with a vertex in it
    report: FaceReport
    hexagon: tuple[int, ...]

    @property
    def f3(self) -> int:
        return self.f.get(3, 0)

    @property
    def f4plus(self) -> int:
        return sum(c for d, c in self.f.items() if d >= 4)

    @property
    def f5plus(self) -> int:
        return sum(c for d, c in self.f.items() if d >= 5)

    def faces_with_several_components(self) -> list[int]:
        return [fid for fid, cs in self.face_components.items() if len(cs) > 1]


def induced_face_profile(
    points: Sequence[Point],
    S: Iterable[int],
    orientation: str,
    *,
    augmented: AugmentedSet | None = None,
    full: ProximityGraph | None = None,
    theta: ProximityGraph | None = None,
    method: str = "formula",
) -> FaceProfile:
    """Face degrees of G_A[S_A] around the components of G(P) minus S.

    The hexagon a1..a6 bounds the outer face; its exterior counts as four
    triangles and never holds a representative.  `method="triangulate"`
    recomputes each relevant degree by diagonal insertion and checks it
    against the closed form.
    """
    S = set(S)
    n = len(points)
    aug = augmented or augment(points)
    allp = aug.points
    if full is None:
        full = build_fast(allp, (orientation,))
    k = 0 if orientation == UP else 1
    SA = S | set(aug.surround_indices)
    sub_edges = [e for e, fl in full.edges.items() if fl[k] and e[0] in SA and e[1] in SA]
    xy = planar_coords(allp)
    report = faces({v: xy[v] for v in SA}, sub_edges, check=False)
    outer = report.outer
    hexagon = tuple(aug.surround_indices)
    if len(outer.walks) != 1 or outer.isolated or sorted(outer.walks[0]) != sorted(hexagon):
        raise RuntimeError("outer face of the induced graph is not the surrounding hexagon")

    if theta is None:
        theta = build_fast(points)
    adj = theta.adjacency()
    comps = components(n, adj, removed=S)
    comp_of = {v: ci for ci, c in enumerate(comps) for v in c}

    face_components: dict[int, set[int]] = {}
    vertex_face: dict[int, int] = {}
    for v in range(n):
        if v in S:
            continue
        fid = report.locate(xy[v])
        vertex_face[v] = fid
        face_components.setdefault(fid, set()).add(comp_of[v])

    counts: dict[int, int] = {}
    rep_degree: dict[int, int] = {}
    rep_face: dict[int, int] = {}
    seen_faces: set[int] = set()
    for comp in comps:
        r = comp[0]  # lowest index represents its component
        fid = vertex_face[r]
        face = report.faces[fid]
        if face.is_outer:
            raise RuntimeError("a point of P lies outside the surrounding hexagon")
        d = face.degree
        if method == "triangulate":
            dt = face_degree(report, fid)
            if dt != d:
                raise RuntimeError(f"face {fid}: triangulation gives degree {dt}, closed form {d}")
        elif method != "formula":
            raise ValueError(f"bad method {method!r}")
        rep_degree[r] = d
        rep_face[r] = fid
        if fid not in seen_faces:
            seen_faces.add(fid)
            counts[d] = counts.get(d, 0) + 1
    return FaceProfile(orientation, counts, rep_degree, rep_face, face_components, report, hexagon)


def completed_degree_sum(report: FaceReport, hexagon_outer: bool = True) -> int:
    """Sum of (degree - 2) with the outer hexagon face split into four triangles."""
    total = 0
    for f in report.faces:
        if f.is_outer and hexagon_outer:
            total += 4 * (3 - 2)
        else:
            total += f.degree - 2
    return total
