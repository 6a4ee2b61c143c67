"""Acceptance criteria, one marked group per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion along with the measured numbers.
"""
import math
import random
import time
from fractions import Fraction
from functools import cache

import pytest

from theta6.certificates import certificate, check_certificate
from theta6.combinatorics import (
    family_is_valid,
    graph_matching,
    max_disjoint_triangles,
    min_blocking_set,
    tutte_berge,
)
from theta6.faces import induced_face_profile
from theta6.generators import GENERATORS
from theta6.geom import DOWN, UP
from theta6.graph import (
    build_by_oracle,
    build_fast,
    build_half,
    degeneracy_order,
    greedy_color,
    greedy_independent,
    is_connected_edges,
    union,
)
from theta6.verify import (
    Budget,
    Context,
    claim_L1,
    claim_L2,
    claim_L4,
    claim_L5,
    search_counterexamples,
)


def crit(num, title):
    return pytest.mark.criterion(str(num), title)


# --- instance corpus --------------------------------------------------------------
# Every instance is named by (generator, params) so the structural checks can
# revisit the whole corpus without depending on test order.


def uniform_specs(count: int, n_lo: int, n_hi: int, salt: int) -> list[tuple]:
    rng = random.Random(salt)
    return [("uniform", (("n", rng.randint(n_lo, n_hi)), ("seed", salt + i))) for i in range(count)]


EQUIVALENCE = uniform_specs(500, 5, 60, 100_000)
MATCHING_BOUND = uniform_specs(1000, 3, 40, 200_000)
TOUGHNESS_EXHAUSTIVE = uniform_specs(50, 8, 14, 300_000)
TOUGHNESS_SAMPLED = uniform_specs(10, 15, 60, 310_000)
FACES = uniform_specs(300, 3, 30, 400_000)
PATHS = uniform_specs(200, 3, 30, 500_000)
DENSITY = [("uniform", (("n", 20_000), ("seed", s))) for s in range(5)]
EXTREMAL = (
    [("fig1", ()), ("fig3", ()), ("min-degree7", ())]
    + [("alpha-clusters", (("t", t),)) for t in (1, 2, 3)]
    + [("strong-clusters", (("t", t),)) for t in (1, 2)]
    + [("blocking-gadgets", (("t", t),)) for t in (0, 1, 2, 3)]
    + [("many-edges", (("n", 11),))]
    + [("vertical", (("n", n),)) for n in (2, 3, 5, 9, 14)]
)
SMALL = EQUIVALENCE + MATCHING_BOUND + TOUGHNESS_EXHAUSTIVE + TOUGHNESS_SAMPLED + FACES + PATHS + EXTREMAL
CORPUS = SMALL + DENSITY


@cache
def instance(spec):
    gen, params = spec
    return GENERATORS[gen](**dict(params))


def points(spec):
    return instance(spec).points


@cache
def graph(spec):
    return build_fast(points(spec))


def label(spec) -> str:
    gen, params = spec
    return f"{gen}(" + ",".join(f"{k}={v}" for k, v in params) + ")"


def context(spec, budget: Budget | None = None, seed: int = 0) -> Context:
    ctx = Context(points(spec), label(spec), seed, budget or Budget())
    ctx.__dict__["graph"] = graph(spec)  # reuse the cached build
    return ctx


def sized(specs, lo: int, hi: int) -> list:
    return sorted({s for s in specs if lo <= len(points(s)) <= hi})


# --- 1 ------------------------------------------------------------------------------


@crit(1, "three constructions agree on 500 random sets, n in 5..60, under 60 s")
def test_constructions_agree(record_property):
    t0 = time.perf_counter()
    mismatches = []
    for spec in EQUIVALENCE:
        pts = points(spec)
        fast = build_fast(pts)
        oracle = build_by_oracle(pts)
        halves = union(build_half(pts, UP), build_half(pts, DOWN))
        # edge dict values carry the (up, down) provenance flags
        if not (fast.edges == oracle.edges == halves.edges):
            mismatches.append(label(spec))
    elapsed = time.perf_counter() - t0
    record_property("sets", len(EQUIVALENCE))
    record_property("seconds", round(elapsed, 2))
    assert not mismatches
    assert elapsed < 60


# --- 2 ------------------------------------------------------------------------------


@crit(2, "matching size at least ceil((3n-8)/7) on 1000 instances, n in 3..40")
def test_matching_lower_bound(record_property):
    violations = []
    tight = 0
    for spec in MATCHING_BOUND:
        n = len(points(spec))
        bound = max(0, math.ceil(Fraction(3 * n - 8, 7)))
        mu = graph_matching(graph(spec)).size
        tight += mu == bound
        if mu < bound:
            violations.append((label(spec), mu, bound))
    record_property("instances", len(MATCHING_BOUND))
    record_property("tight", tight)
    assert violations == []


# --- 3 ------------------------------------------------------------------------------


@crit(3, "comp(G - S) - |S| <= (n+16)/7: every S for n <= 14, 10^4 sampled S for n <= 60")
def test_toughness_exhaustive(record_property):
    worst = Fraction(-100)
    for spec in TOUGHNESS_EXHAUSTIVE:
        r = claim_L5(context(spec))
        assert r.detail["mode"] == "exhaustive" and r.detail["subsets"] == 2 ** len(points(spec))
        assert r.status == "pass", (label(spec), r.detail)
        worst = max(worst, r.detail["max_excess"] - Fraction(r.detail["bound"]))
    record_property("exhaustive_instances", len(TOUGHNESS_EXHAUSTIVE))
    record_property("max_excess_minus_bound", str(worst))


@crit(3, "comp(G - S) - |S| <= (n+16)/7: every S for n <= 14, 10^4 sampled S for n <= 60")
def test_toughness_sampled(record_property):
    for i, spec in enumerate(TOUGHNESS_SAMPLED):
        r = claim_L5(context(spec, Budget(samples=10_000, exhaustive_limit=14), seed=i))
        assert r.detail["mode"] == "sampled" and r.detail["subsets"] >= 10_000
        assert r.status == "pass", (label(spec), r.detail)
    record_property("sampled_instances", len(TOUGHNESS_SAMPLED))


# --- 4 ------------------------------------------------------------------------------


@crit(4, "f3 of each half at most f4+ of the other on 300 (P, S); fig3 obstruction")
def test_face_inequality(record_property):
    for i, spec in enumerate(FACES):
        r = claim_L4(context(spec, Budget(face_subsets=1), seed=i))
        assert r.status == "pass", (label(spec), r.detail)
    record_property("pairs", len(FACES))


@crit(4, "f3 of each half at most f4+ of the other on 300 (P, S); fig3 obstruction")
def test_fig3_face_obstruction():
    inst = instance(("fig3", ()))
    S = inst.subset
    down = induced_face_profile(inst.points, S, DOWN, method="triangulate")
    up = induced_face_profile(inst.points, S, UP, method="triangulate")
    assert down.f3 == 1
    assert up.f == {4: 1} and up.f5plus == 0
    # so f3 of the down graph is not bounded by f5+ of the up graph
    assert down.f3 > up.f5plus


# --- 5 ------------------------------------------------------------------------------


@crit(5, "exhaustive Tutte-Berge deficiency equals n - 2 mu for every n <= 14 instance")
def test_tutte_berge_identity(record_property):
    specs = sized(SMALL, 1, 14)
    bad = []
    for spec in specs:
        n = len(points(spec))
        g = graph(spec)
        tb = tutte_berge(n, g.adjacency(), "exhaustive")
        if tb.deficiency != n - 2 * graph_matching(g).size:
            bad.append(label(spec))
    record_property("instances", len(specs))
    assert bad == []


# --- 6 ------------------------------------------------------------------------------

EXACT_BETA_MAX_N = 9


@cache
def exact_values(spec):
    pts = points(spec)
    g = graph(spec)
    beta = min_blocking_set(pts, "exact", graph=g).size
    alpha = max_disjoint_triangles(pts, "interior").size
    return beta, alpha, graph_matching(g).size


@crit(6, "exact blocking number: beta >= ceil((n-1)/2), alpha <= beta, mu >= beta/2; fig1 beta=5 mu=3")
def test_blocking_lower_bounds(record_property):
    specs = sized(SMALL, 2, EXACT_BETA_MAX_N)
    for spec in specs:
        n = len(points(spec))
        beta, alpha, _ = exact_values(spec)
        assert beta >= math.ceil(Fraction(n - 1, 2)), label(spec)
        assert alpha <= beta, label(spec)
    record_property("exact_instances", len(specs))


@crit(6, "exact blocking number: beta >= ceil((n-1)/2), alpha <= beta, mu >= beta/2; fig1 beta=5 mu=3")
def test_matching_at_least_half_blocking_number(record_property):
    specs = sized(SMALL, 2, EXACT_BETA_MAX_N)
    below = []
    for spec in specs:
        beta, _, mu = exact_values(spec)
        if 2 * mu < beta:
            below.append(f"{label(spec)}: mu={mu} beta={beta}")
    record_property("instances", len(specs))
    record_property("mu_below_half_beta", len(below))
    assert below == [], "\n".join(below)


@crit(6, "exact blocking number: beta >= ceil((n-1)/2), alpha <= beta, mu >= beta/2; fig1 beta=5 mu=3")
def test_fig1_blocking_and_matching():
    spec = ("fig1", ())
    beta, _, mu = exact_values(spec)
    assert (beta, mu) == (5, 3)


# --- 7 ------------------------------------------------------------------------------


@crit(7, "extremal generators hit their target values exactly")
@pytest.mark.parametrize("t", [1, 2, 3])
def test_alpha_clusters(t):
    pts = points(("alpha-clusters", (("t", t),)))
    assert 4 * max_disjoint_triangles(pts, "interior").size == 3 * len(pts)


@crit(7, "extremal generators hit their target values exactly")
@pytest.mark.parametrize("t", [1, 2])
def test_strong_clusters(t):
    pts = points(("strong-clusters", (("t", t),)))
    assert 5 * max_disjoint_triangles(pts, "closed").size == 2 * len(pts)


@crit(7, "extremal generators hit their target values exactly")
@pytest.mark.parametrize("t", [0, 1, 2, 3])
def test_blocking_gadgets(t):
    inst = instance(("blocking-gadgets", (("t", t),)))
    n, fam = inst.n, inst.family
    assert 4 * len(fam) == 5 * n - 6
    assert family_is_valid(inst.points, fam, "interior")
    doc = certificate("family", inst.points, mode="interior", family=[it.to_json() for it in fam], at_least=len(fam))
    assert check_certificate(doc)[0]


@crit(7, "extremal generators hit their target values exactly")
def test_many_edges_eleven():
    assert len(graph(("many-edges", (("n", 11),))).edges) == 38


@crit(7, "extremal generators hit their target values exactly")
def test_min_degree_seven():
    spec = ("min-degree7", ())
    assert len(points(spec)) == 26 and min(graph(spec).degrees()) == 7


# --- 8 ------------------------------------------------------------------------------


@crit(8, "edge density |E|/n in [4.0, 4.4] at n = 20000 over 5 seeds, each build under 10 s")
def test_edge_density(record_property):
    ratios, times = [], []
    for spec in DENSITY:
        pts = points(spec)
        t0 = time.perf_counter()
        g = build_fast(pts)
        times.append(time.perf_counter() - t0)
        ratios.append(len(g.edges) / len(pts))
    record_property("ratios", [round(r, 4) for r in ratios])
    record_property("max_seconds", round(max(times), 2))
    assert all(4.0 <= r <= 4.4 for r in ratios)
    assert max(times) < 10


# --- 9 ------------------------------------------------------------------------------


@crit(9, "n-1 <= |E| <= 5n-12, degeneracy <= 9, greedy colours <= 10, greedy independent >= n/10")
def test_structural_bounds(record_property):
    worst = {"degeneracy": 0, "colors": 0}
    for spec in CORPUS:
        g = graph(spec)
        n, m = len(points(spec)), len(g.edges)
        adj = g.adjacency()
        assert m >= n - 1, label(spec)
        if n >= 3:
            assert m <= 5 * n - 12, label(spec)
        k = degeneracy_order(adj)[1]
        colors = max(greedy_color(adj)) + 1
        assert k <= 9 and colors <= 10, label(spec)
        assert len(greedy_independent(adj)) >= math.ceil(n / 10), label(spec)
        worst["degeneracy"] = max(worst["degeneracy"], k)
        worst["colors"] = max(worst["colors"], colors)
    record_property("instances", len(CORPUS))
    record_property("max_degeneracy", worst["degeneracy"])
    record_property("max_colors", worst["colors"])


# --- 10 -----------------------------------------------------------------------------

MST_MAX_N = 100  # all-pairs Kruskal; the n = 20000 sets only get the connectivity check


@crit(10, "paths inside minimal triangles on 200 sets n <= 30; MST in both halves, intersection connected")
def test_paths_in_triangles(record_property):
    for spec in PATHS:
        r = claim_L1(context(spec))
        assert r.status == "pass", (label(spec), r.detail)
    record_property("instances", len(PATHS))


@crit(10, "paths inside minimal triangles on 200 sets n <= 30; MST in both halves, intersection connected")
def test_mst_and_intersection(record_property):
    checked_mst = 0
    for spec in CORPUS:
        n = len(points(spec))
        if n <= MST_MAX_N:
            r = claim_L2(context(spec))
            assert r.status == "pass", (label(spec), r.detail)
            checked_mst += 1
        else:
            both = [e for e, f in graph(spec).edges.items() if f[0] and f[1]]
            assert is_connected_edges(n, both), label(spec)
    record_property("mst_instances", checked_mst)
    record_property("connectivity_only", len(CORPUS) - checked_mst)


# --- findings channel -----------------------------------------------------------------


@crit("findings", "conjecture search over 10^4 instances, n <= 12: no counterexamples, every report reverifies")
def test_conjecture_search(record_property):
    res = search_counterexamples("conj1", budget=10_000, seed=2024, n_max=12)
    record_property("tried", res["tried"])
    record_property("counterexamples", len(res["findings"]))
    assert res["tried"] == 10_000
    assert all(f["reverified"] for f in res["findings"])
    assert res["findings"] == []
