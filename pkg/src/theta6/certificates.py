"""Self-contained certificates and their standalone re-verification.

A certificate is a JSON object with a "kind", the point set, and whatever
witness the claim needs.  `check_certificate` recomputes everything from
the JSON alone and returns (ok, message).
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import Any

from .combinatorics import (
    comp_odd,
    family_is_valid,
    graph_matching,
    is_matching,
    min_blocking_set,
    verify_blocking,
)
from .faces import induced_face_profile
from .geom import DOWN, UP, Point, general_position
from .graph import (
    LemmaViolation,
    build_by_oracle,
    build_fast,
    degeneracy_order,
    greedy_color,
    greedy_independent,
    is_connected_edges,
    mst_td,
    path_in_triangle,
)
from .serialize import (
    InputError,
    graph_from_json,
    intro_from_json,
    point_from_json,
    points_from_json,
    points_to_json,
)


def certificate(kind: str, points: Sequence[Point], **payload) -> dict:
    return points_to_json(points, kind=kind, **payload)


def _ints(xs: Any) -> list[int]:
    if not isinstance(xs, list):
        raise InputError("expected a list of vertex indices")
    return [int(x) for x in xs]


def _graph_cert(pts, doc) -> tuple[bool, str]:
    claimed = graph_from_json(doc.get("graph", doc), pts)
    built = build_by_oracle(pts)
    if claimed.edges != built.edges:
        diff = set(claimed.edges.items()) ^ set(built.edges.items())
        return False, f"edge sets differ on {len(diff)} records"
    return True, f"{len(built.edges)} edges reproduced"


def _matching_cert(pts, doc) -> tuple[bool, str]:
    g = build_fast(pts)
    edges = [tuple(e) for e in doc["matching"]]
    if not is_matching(len(pts), g.edges, edges):
        return False, "edge list is not a matching of the graph"
    if "size" in doc and doc["size"] != len(edges):
        return False, "stated size does not match the edge list"
    best = graph_matching(g).size
    if doc.get("maximum", True) and len(edges) != best:
        return False, f"matching has {len(edges)} edges, maximum is {best}"
    return True, f"valid matching of size {len(edges)}"


def _blocking_cert(pts, doc) -> tuple[bool, str]:
    """Blockers that block (or, with expect_blocked false, fail to block) the set.

    Optional "minimum": true re-solves the exact blocking number; optional
    "mu" re-derives the matching number.
    """
    blockers = [point_from_json(r) for r in doc["blockers"]]
    res = verify_blocking(pts, blockers)
    if not doc.get("expect_blocked", True):
        if res.ok:
            return False, "blockers do block every edge"
        return True, f"unblocked: edge {res.surviving_edge}"
    if not res.ok:
        return False, f"unblocked: edge {res.surviving_edge}"
    if doc.get("minimum"):
        best = min_blocking_set(pts, "exact").size
        if best != len(blockers):
            return False, f"{len(blockers)} blockers, minimum is {best}"
    if "mu" in doc:
        mu = graph_matching(build_fast(pts)).size
        if mu != doc["mu"]:
            return False, f"matching number is {mu}, stated {doc['mu']}"
    return True, f"{len(blockers)} blockers block every edge"


def _family_cert(pts, doc) -> tuple[bool, str]:
    fam = [intro_from_json(d) for d in doc["family"]]
    mode = doc.get("mode", "interior")
    if mode not in ("interior", "closed"):
        return False, f"bad mode {mode!r}"
    g = build_fast(pts)
    for it in fam:
        if tuple(sorted(it.edge)) not in g.edges:
            return False, f"{it.edge} is not an edge"
    if not family_is_valid(pts, fam, mode):
        return False, "triangles are not empty, minimal and pairwise disjoint"
    if "at_least" in doc and len(fam) < doc["at_least"]:
        return False, f"family has {len(fam)} triangles, fewer than {doc['at_least']}"
    return True, f"{len(fam)} pairwise {mode}-disjoint empty triangles"


def _tutte_cert(pts, doc) -> tuple[bool, str]:
    """S with odd(G - S) - |S| = deficiency, so every matching misses that many vertices."""
    g = build_fast(pts)
    S = _ints(doc["S"])
    c, o = comp_odd(len(pts), g.adjacency(), S)
    d = o - len(S)
    if "deficiency" in doc and d != doc["deficiency"]:
        return False, f"odd components minus |S| is {d}, stated {doc['deficiency']}"
    if "matching_below" in doc:
        # every matching has at most (n - d) / 2 edges
        cap = (len(pts) - d) // 2
        if cap >= doc["matching_below"]:
            return False, f"S only caps the matching at {cap}"
    return True, f"odd(G-S) - |S| = {d}"


def _toughness_cert(pts, doc) -> tuple[bool, str]:
    g = build_fast(pts)
    S = _ints(doc["S"])
    c, _ = comp_odd(len(pts), g.adjacency(), S)
    excess = c - len(S)
    bound = Fraction(len(pts) + 16, 7)
    if doc.get("violates", False):
        return (excess > bound), f"comp(G-S) - |S| = {excess} against {bound}"
    return (excess <= bound), f"comp(G-S) - |S| = {excess} against {bound}"


def _faces_cert(pts, doc) -> tuple[bool, str]:
    S = _ints(doc["S"])
    up = induced_face_profile(pts, S, UP, method="triangulate")
    down = induced_face_profile(pts, S, DOWN, method="triangulate")
    stated = doc.get("profile", {})
    got = {
        "f3_up": up.f3, "f4plus_up": up.f4plus, "f5plus_up": up.f5plus,
        "f3_down": down.f3, "f4plus_down": down.f4plus, "f5plus_down": down.f5plus,
        "several_components": len(up.faces_with_several_components()) + len(down.faces_with_several_components()),
    }
    for k, v in stated.items():
        if got.get(k) != v:
            return False, f"{k} is {got.get(k)}, stated {v}"
    return True, f"face profile reproduced: {got}"


def _path_cert(pts, doc) -> tuple[bool, str]:
    g = build_fast(pts)
    p, q, orient = int(doc["p"]), int(doc["q"]), doc["orientation"]
    try:
        path = path_in_triangle(g, p, q, orient)
    except LemmaViolation as exc:
        return (doc.get("violates", False)), str(exc)
    return (not doc.get("violates", False)), f"path {path}"


def _structure_cert(pts, doc) -> tuple[bool, str]:
    """Recompute the counted quantities (edges, degeneracy, colours, independent set, MST)."""
    g = build_fast(pts)
    adj = g.adjacency()
    n = len(pts)
    got: dict[str, Any] = {
        "edges": len(g.edges),
        "degeneracy": degeneracy_order(adj)[1],
        "min_degree": min(g.degrees()) if n else 0,
        "colors": (max(greedy_color(adj)) + 1) if n else 0,
        "independent_set": len(greedy_independent(adj)),
    }
    if n >= 2:
        tree = mst_td(pts)
        both = {e for e, f in g.edges.items() if f[0] and f[1]}
        got["mst_outside_both"] = sum(1 for e in tree.edges if tuple(sorted(e)) not in both)
        got["intersection_connected"] = is_connected_edges(n, both)
    for k, v in doc.get("values", {}).items():
        if got.get(k) != v:
            return False, f"{k} is {got.get(k)}, stated {v}"
    return True, f"values reproduced: {got}"


def _reduction_cert(pts, doc) -> tuple[bool, str]:
    """Blocking set B plus a matching of G(P + B); P must be independent there."""
    blockers = [point_from_json(r) for r in doc["blockers"]]
    res = verify_blocking(pts, blockers)
    if not res.ok:
        return False, "B does not block P"
    allp = list(pts) + blockers
    g = build_fast(allp)
    M = [tuple(e) for e in doc["matching"]]
    if not is_matching(len(allp), g.edges, M):
        return False, "not a matching of G(P + B)"
    n = len(pts)
    if any(u < n and v < n for u, v in M):
        return False, "matching edge inside P"
    return True, f"|P| = {n} <= |M| + unmatched = {len(M) + len(allp) - 2 * len(M)}"


CHECKERS = {
    "graph": _graph_cert,
    "matching": _matching_cert,
    "blocking": _blocking_cert,
    "family": _family_cert,
    "tutte-berge": _tutte_cert,
    "toughness": _toughness_cert,
    "faces": _faces_cert,
    "path": _path_cert,
    "structure": _structure_cert,
    "reduction": _reduction_cert,
}


def check_certificate(doc: Any) -> tuple[bool, str]:
    """Re-verify a certificate from its JSON alone."""
    if not isinstance(doc, dict):
        raise InputError("certificate must be a JSON object")
    if "certificate" in doc and isinstance(doc["certificate"], dict):
        doc = doc["certificate"]
    kind = doc.get("kind")
    if kind not in CHECKERS:
        raise InputError(f"unknown certificate kind {kind!r}")
    pts = points_from_json(doc)
    err = general_position(pts)
    if err is not None:
        return False, str(err)
    try:
        return CHECKERS[kind](pts, doc)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed {kind} certificate: {exc}") from exc
