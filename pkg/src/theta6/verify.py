"""Claim harness: run instance families through the solvers and check each proved property.

Per-instance properties are hard claims (pass/fail).  Statements about the
minimum over all point sets of a given size, and the open conjectures, are
findings channels: a hit is reported with a certificate, never as a failure.
"""

from __future__ import annotations

import math
import random
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

from .certificates import certificate, check_certificate
from .combinatorics import (
    SizeGuardError,
    _bit_components,
    extend_with_blocker,
    graph_matching,
    introducing_triangles,
    max_matching,
    min_blocking_set,
    trivial_blocking_set,
    tutte_berge,
    verify_blocking,
)
from .faces import induced_face_profile
from .generators import GENERATORS, Instance, gen_uniform
from .geom import DOWN, UP, Point, contains, general_position, smallest_triangle
from .graph import (
    LemmaViolation,
    augment,
    build_fast,
    components,
    degeneracy_order,
    greedy_color,
    greedy_independent,
    is_connected_edges,
    mst_td,
    path_in_triangle,
)
from .serialize import point_to_json

HARD_CLAIMS = ("T1", "L5", "L4", "L3", "L1", "L2", "T2a", "L6", "E1", "D1", "C1")
FINDING_CHANNELS = ("t2a-instance", "beta-3n/4", "conj1", "conj2", "lemma4-strong")


@dataclass
class Budget:
    samples: int = 200  # sampled subsets S per instance when exhaustive is out of reach
    face_subsets: int = 2  # random S per instance for the face claims
    exhaustive_limit: int = 14
    exact_triangles: int = 60  # exact blocking/triangle solvers up to this many triangles


@dataclass
class ClaimResult:
    claim: str
    instance: str
    status: str  # pass | fail | skipped-size | finding | none
    detail: dict = field(default_factory=dict)
    witness: dict | None = None

    def to_json(self) -> dict:
        d = {"claim": self.claim, "instance": self.instance, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class InstanceSpec:
    generator: str
    params: tuple[tuple[str, Any], ...] = ()

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.generator}({inner})"

    def build(self) -> Instance:
        return GENERATORS[self.generator](**dict(self.params))


def uniform_spec(seed: int, n_lo: int = 3, n_hi: int = 30) -> InstanceSpec:
    n = n_lo + seed % (n_hi - n_lo + 1)
    return InstanceSpec("uniform", (("n", n), ("seed", seed)))


def default_family(seeds: Iterable[int]) -> list[InstanceSpec]:
    return [uniform_spec(s) for s in seeds]


def extremal_family() -> list[InstanceSpec]:
    out = [InstanceSpec("fig1"), InstanceSpec("fig3"), InstanceSpec("min-degree7")]
    out += [InstanceSpec("many-edges", (("n", n),)) for n in (7, 11, 16)]
    out += [InstanceSpec("alpha-clusters", (("t", t),)) for t in (1, 2, 3)]
    out += [InstanceSpec("strong-clusters", (("t", t),)) for t in (1, 2)]
    out += [InstanceSpec("blocking-gadgets", (("t", t),)) for t in (1, 2, 3)]
    out += [InstanceSpec("vertical", (("n", n),)) for n in (3, 8, 20)]
    return out


# --- per-instance context ------------------------------------------------


class Context:
    """Lazily computed objects shared by all claims on one instance."""

    def __init__(self, points: Sequence[Point], label: str, seed: int, budget: Budget):
        self.points = list(points)
        self.label = label
        self.seed = seed
        self.budget = budget
        self.n = len(self.points)

    @cached_property
    def graph(self):
        return build_fast(self.points)

    @cached_property
    def adj(self):
        return self.graph.adjacency()

    @cached_property
    def matching(self):
        return graph_matching(self.graph)

    @cached_property
    def tutte(self):
        if self.n <= self.budget.exhaustive_limit:
            return tutte_berge(self.n, self.adj, "exhaustive")
        return tutte_berge(self.n, self.adj, "sampled", samples=self.budget.samples, seed=self.seed)

    @cached_property
    def triangles(self):
        return introducing_triangles(self.points, self.graph)

    @cached_property
    def exact_beta(self):
        if len(self.triangles) > self.budget.exact_triangles:
            return None
        try:
            return min_blocking_set(self.points, "exact", graph=self.graph, max_triangles=self.budget.exact_triangles)
        except SizeGuardError:
            return None

    @cached_property
    def face_subsets(self) -> list[list[int]]:
        rng = random.Random(self.seed * 7919 + 17)
        out = []
        for _ in range(self.budget.face_subsets):
            p = rng.uniform(0.2, 0.8)
            out.append([v for v in range(self.n) if rng.random() < p])
        return out

    def cert(self, kind: str, **payload) -> dict:
        return certificate(kind, self.points, instance=self.label, **payload)


def _result(ctx: Context, claim: str, ok: bool, detail: dict, witness: dict | None = None) -> ClaimResult:
    return ClaimResult(claim, ctx.label, "pass" if ok else "fail", detail, None if ok else witness)


# --- hard claims ----------------------------------------------------------


def claim_T1(ctx: Context) -> ClaimResult:
    n = ctx.n
    bound = max(0, math.ceil(Fraction(3 * n - 8, 7)))
    mu = ctx.matching.size
    ok = mu >= bound
    witness = None
    if not ok:
        tb = ctx.tutte
        witness = ctx.cert("tutte-berge", S=list(tb.S), deficiency=tb.deficiency, matching_below=bound)
    return _result(ctx, "T1", ok, {"mu": mu, "bound": bound}, witness)


def claim_L5(ctx: Context) -> ClaimResult:
    n = ctx.n
    bound = Fraction(n + 16, 7)
    adj_mask = [sum(1 << w for w in ctx.adj[v]) for v in range(n)]
    full = (1 << n) - 1
    worst, worst_S, tested = -(10**9), 0, 0
    if n <= ctx.budget.exhaustive_limit:
        masks: Iterable[int] = range(1 << n)
        mode = "exhaustive"
    else:
        rng = random.Random(ctx.seed)

        def sampled():
            yield 0
            for v in range(n):
                yield adj_mask[v]
            for _ in range(ctx.budget.samples):
                p = rng.random()
                yield sum(1 << v for v in range(n) if rng.random() < p)

        masks = sampled()
        mode = "sampled"
    for mask in masks:
        tested += 1
        c, _ = _bit_components(adj_mask, full & ~mask)
        ex = c - bin(mask).count("1")
        if ex > worst:
            worst, worst_S = ex, mask
    ok = worst <= bound
    S = [v for v in range(n) if worst_S >> v & 1]
    detail = {"mode": mode, "subsets": tested, "max_excess": worst, "bound": str(bound)}
    return _result(ctx, "L5", ok, detail, ctx.cert("toughness", S=S, violates=True))


def _profiles(ctx: Context, S: Sequence[int]):
    aug = augment(ctx.points)
    full_up = build_fast(aug.points, (UP,))
    full_down = build_fast(aug.points, (DOWN,))
    up = induced_face_profile(ctx.points, S, UP, augmented=aug, full=full_up, theta=ctx.graph)
    down = induced_face_profile(ctx.points, S, DOWN, augmented=aug, full=full_down, theta=ctx.graph)
    return up, down


def claim_L4(ctx: Context) -> ClaimResult:
    rows = []
    for S in ctx.face_subsets:
        up, down = _profiles(ctx, S)
        ncomp = len(components(ctx.n, ctx.adj, removed=set(S)))
        row = {
            "S": S,
            "f3_up": up.f3, "f4plus_up": up.f4plus, "f3_down": down.f3, "f4plus_down": down.f4plus,
            "components": ncomp,
        }
        rows.append(row)
        ok = (
            up.f3 <= down.f4plus
            and down.f3 <= up.f4plus
            and up.f3 + up.f4plus == ncomp
            and down.f3 + down.f4plus == ncomp
        )
        if not ok:
            prof = {k: row[k] for k in ("f3_up", "f4plus_up", "f3_down", "f4plus_down")}
            return _result(ctx, "L4", False, row, ctx.cert("faces", S=S, profile=prof))
    return _result(ctx, "L4", True, {"subsets": len(rows)})


def claim_L3(ctx: Context) -> ClaimResult:
    for S in ctx.face_subsets:
        up, down = _profiles(ctx, S)
        bad = up.faces_with_several_components() + down.faces_with_several_components()
        if bad:
            return _result(ctx, "L3", False, {"S": S, "faces": bad}, ctx.cert("faces", S=S, profile={"several_components": len(bad)}))
    return _result(ctx, "L3", True, {"subsets": len(ctx.face_subsets)})


def claim_L1(ctx: Context) -> ClaimResult:
    halves = {UP: ctx.graph.restrict(UP), DOWN: ctx.graph.restrict(DOWN)}
    pairs = 0
    for p in range(ctx.n):
        for q in range(p + 1, ctx.n):
            for o, g in halves.items():
                try:
                    path_in_triangle(g, p, q, o)
                except LemmaViolation as exc:
                    return _result(ctx, "L1", False, {"pair": [p, q], "orientation": o, "error": str(exc)},
                                   ctx.cert("path", p=p, q=q, orientation=o, violates=True))
                pairs += 1
    return _result(ctx, "L1", True, {"checked": pairs})


def claim_L2(ctx: Context) -> ClaimResult:
    if ctx.n < 2:
        return _result(ctx, "L2", True, {"trivial": True})
    tree = mst_td(ctx.points)
    both = {e for e, f in ctx.graph.edges.items() if f[0] and f[1]}
    outside = [list(e) for e in tree.edges if tuple(sorted(e)) not in both]
    connected = is_connected_edges(ctx.n, both)
    ok = not outside and connected
    detail = {"mst_edges": len(tree.edges), "outside": outside, "intersection_connected": connected}
    return _result(ctx, "L2", ok, detail,
                   ctx.cert("structure", values={"mst_outside_both": len(outside), "intersection_connected": connected}))


def claim_T2a(ctx: Context) -> ClaimResult:
    """For S from the Tutte-Berge search and sampled S: S blocks the graph of the component representatives."""
    subsets = [list(ctx.tutte.S), list(ctx.tutte.toughness_S)] + ctx.face_subsets
    checked = 0
    for S in subsets:
        comps = components(ctx.n, ctx.adj, removed=set(S))
        reps = [c[0] for c in comps]
        if len(reps) < 2:
            continue
        R = [ctx.points[r] for r in reps]
        B = [ctx.points[s] for s in S]
        res = verify_blocking(R, B)
        checked += 1
        if not res.ok:
            w = certificate("blocking", R, blockers=[point_to_json(b) for b in B], expect_blocked=False, instance=ctx.label)
            return _result(ctx, "T2a", False, {"S": S, "representatives": reps}, w)
    return _result(ctx, "T2a", True, {"subsets_checked": checked})


def claim_L6(ctx: Context) -> ClaimResult:
    bs = ctx.exact_beta
    B = list(bs.blockers) if bs is not None else trivial_blocking_set(ctx.points)
    P2, B2, a1 = extend_with_blocker(ctx.points, B)
    b = B2[-1]
    res = verify_blocking(P2, B2)
    hits = all(
        contains(smallest_triangle(a1, p, o), b, "open") for p in ctx.points for o in (UP, DOWN)
    )
    ok = res.ok and hits
    detail = {"blockers": len(B), "exact": bs is not None, "extended_blockers": len(B2), "b_in_all_new_triangles": hits}
    w = certificate("blocking", P2, blockers=[point_to_json(x) for x in B2], expect_blocked=res.ok, instance=ctx.label)
    return _result(ctx, "L6", ok, detail, w)


def claim_E1(ctx: Context) -> ClaimResult:
    n, m = ctx.n, len(ctx.graph.edges)
    ok = n < 3 or (n - 1 <= m <= 5 * n - 12)
    if n < 3:
        ok = m == n - 1 if n >= 1 else True
    return _result(ctx, "E1", ok, {"edges": m, "lower": n - 1, "upper": 5 * n - 12},
                   ctx.cert("structure", values={"edges": m}))


def claim_D1(ctx: Context) -> ClaimResult:
    deg = ctx.graph.degrees()
    k = degeneracy_order(ctx.adj)[1]
    md = min(deg) if deg else 0
    ok = md <= 9 and k <= 9
    return _result(ctx, "D1", ok, {"min_degree": md, "degeneracy": k},
                   ctx.cert("structure", values={"min_degree": md, "degeneracy": k}))


def claim_C1(ctx: Context) -> ClaimResult:
    colors = max(greedy_color(ctx.adj)) + 1 if ctx.n else 0
    ind = len(greedy_independent(ctx.adj))
    ok = colors <= 10 and ind >= math.ceil(ctx.n / 10)
    return _result(ctx, "C1", ok, {"colors": colors, "independent": ind},
                   ctx.cert("structure", values={"colors": colors, "independent_set": ind}))


# --- findings channels ----------------------------------------------------


def _finding(ctx: Context, channel: str, hit: bool, detail: dict, witness: dict | None) -> ClaimResult:
    return ClaimResult(channel, ctx.label, "finding" if hit else "none", detail, witness if hit else None)


def channel_t2a_instance(ctx: Context) -> ClaimResult:
    """mu(P) against half the blocking number of this very P."""
    bs = ctx.exact_beta
    if bs is None:
        return ClaimResult("t2a-instance", ctx.label, "skipped-size")
    mu = ctx.matching.size
    hit = 2 * mu < bs.size
    w = certificate("blocking", ctx.points, blockers=[point_to_json(b) for b in bs.blockers], minimum=True, mu=mu,
                    instance=ctx.label)
    return _finding(ctx, "t2a-instance", hit, {"mu": mu, "beta": bs.size}, w)


def channel_beta_linear(ctx: Context) -> ClaimResult:
    bs = ctx.exact_beta
    if bs is None:
        return ClaimResult("beta-3n/4", ctx.label, "skipped-size")
    bound = Fraction(3 * ctx.n, 4) - 2
    hit = bs.size < bound
    w = certificate("blocking", ctx.points, blockers=[point_to_json(b) for b in bs.blockers], minimum=True,
                    instance=ctx.label)
    return _finding(ctx, "beta-3n/4", hit, {"beta": bs.size, "bound": str(bound)}, w)


def channel_conj1(ctx: Context) -> ClaimResult:
    target = (ctx.n - 1 + 1) // 2  # ceil((n-1)/2)
    mu = ctx.matching.size
    hit = mu < target
    w = None
    if hit:
        tb = tutte_berge(ctx.n, ctx.adj, "exhaustive") if ctx.n <= 20 else ctx.tutte
        w = ctx.cert("tutte-berge", S=list(tb.S), deficiency=tb.deficiency, matching_below=target)
    return _finding(ctx, "conj1", hit, {"mu": mu, "target": target}, w)


def channel_conj2(ctx: Context) -> ClaimResult:
    bs = ctx.exact_beta
    if bs is None:
        return ClaimResult("conj2", ctx.label, "skipped-size")
    hit = bs.size < ctx.n - 1
    w = certificate("blocking", ctx.points, blockers=[point_to_json(b) for b in bs.blockers], instance=ctx.label)
    return _finding(ctx, "conj2", hit, {"beta": bs.size, "target": ctx.n - 1}, w)


def channel_lemma4_strong(ctx: Context) -> ClaimResult:
    # leaving a single point free is the typical shape of a hit; small sets try every point
    rng = random.Random(ctx.seed * 31 + 7)
    free = range(ctx.n) if ctx.n <= 12 else rng.sample(range(ctx.n), 3)
    subsets = ctx.face_subsets + [[v for v in range(ctx.n) if v != f] for f in free]
    for S in subsets:
        up, down = _profiles(ctx, S)
        if up.f3 > down.f5plus or down.f3 > up.f5plus:
            prof = {"f3_up": up.f3, "f5plus_up": up.f5plus, "f3_down": down.f3, "f5plus_down": down.f5plus}
            return _finding(ctx, "lemma4-strong", True, {"S": S, **prof}, ctx.cert("faces", S=S, profile=prof))
    return _finding(ctx, "lemma4-strong", False, {}, None)


CLAIMS: dict[str, Callable[[Context], ClaimResult]] = {
    "T1": claim_T1,
    "L5": claim_L5,
    "L4": claim_L4,
    "L3": claim_L3,
    "L1": claim_L1,
    "L2": claim_L2,
    "T2a": claim_T2a,
    "L6": claim_L6,
    "E1": claim_E1,
    "D1": claim_D1,
    "C1": claim_C1,
    "t2a-instance": channel_t2a_instance,
    "beta-3n/4": channel_beta_linear,
    "conj1": channel_conj1,
    "conj2": channel_conj2,
    "lemma4-strong": channel_lemma4_strong,
}


def check_points(points: Sequence[Point], claims: Sequence[str], label: str = "input",
                 seed: int = 0, budget: Budget | None = None) -> list[ClaimResult]:
    ctx = Context(points, label, seed, budget or Budget())
    out = []
    for c in claims:
        if c not in CLAIMS:
            raise ValueError(f"unknown claim {c!r}")
        out.append(CLAIMS[c](ctx))
    return out


def _run_one(job: tuple[InstanceSpec, tuple[str, ...], int, Budget]) -> list[ClaimResult]:
    spec, claims, seed, budget = job
    inst = spec.build()
    return check_points(inst.points, claims, spec.label, seed, budget)


def run_suite(
    family: Sequence[InstanceSpec],
    claims: Sequence[str] = HARD_CLAIMS,
    budget: Budget | None = None,
    jobs: int = 1,
) -> list[ClaimResult]:
    """Check every claim on every instance; results come back in family order."""
    budget = budget or Budget()
    work = [(spec, tuple(claims), i, budget) for i, spec in enumerate(family)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, work, chunksize=4))
    else:
        chunks = [_run_one(w) for w in work]
    return [r for chunk in chunks for r in chunk]


def summarize(results: Sequence[ClaimResult]) -> dict:
    by: dict[str, dict[str, int]] = {}
    for r in results:
        by.setdefault(r.claim, {}).setdefault(r.status, 0)
        by[r.claim][r.status] += 1
    return {
        "instances": len({r.instance for r in results}),
        "claims": by,
        "failures": sum(1 for r in results if r.status == "fail"),
        "findings": sum(1 for r in results if r.status == "finding"),
    }


def witnesses_reverify(results: Sequence[ClaimResult]) -> bool:
    """Every fail or finding carries a certificate that the standalone checker accepts."""
    for r in results:
        if r.status in ("fail", "finding"):
            if r.witness is None or not check_certificate(r.witness)[0]:
                return False
    return True


# --- matching-to-blocking counting check ---------------------------------


def check_reduction_2b(c: Fraction, d: Fraction, instances: Iterable[Sequence[Point]], max_triangles: int = 60) -> dict:
    """For each P with an exact blocking set B, inspect a maximum matching M of G(P + B).

    P is independent in G(P + B), so each edge of M has at most one endpoint
    in P and n <= |M| + (n + b - 2|M|).  Also reports whether beta(P) reaches
    (cn + d)/(1 - c); misses go to findings.
    """
    c, d = Fraction(c), Fraction(d)
    if c >= 1:
        raise ValueError("c must be below 1")
    rows = []
    for P in instances:
        P = list(P)
        n = len(P)
        threshold = (c * n + d) / (1 - c)
        if n < 2:
            rows.append({"n": n, "beta": 0, "counting_ok": True, "threshold": str(threshold), "meets_threshold": 0 >= threshold})
            continue
        try:
            bs = min_blocking_set(P, "exact", max_triangles=max_triangles)
        except SizeGuardError:
            rows.append({"n": n, "status": "skipped-size"})
            continue
        B = list(bs.blockers)
        allp = P + B
        g = build_fast(allp)
        independent = not any(v < n for (u, v) in g.edges)
        M = max_matching(len(allp), g.edges)
        in_p = [sum(1 for x in e if x < n) for e in M.edges]
        b = len(B)
        unmatched = n + b - 2 * M.size
        counting = independent and all(k <= 1 for k in in_p) and n <= M.size + unmatched
        rows.append({
            "n": n, "beta": b, "matching": M.size, "unmatched": unmatched,
            "p_independent": independent, "counting_ok": counting,
            "threshold": str(threshold), "meets_threshold": b >= threshold,
        })
    return {
        "c": str(c), "d": str(d),
        "threshold_formula": f"({c}n + {d})/(1 - {c})",
        "instances": rows,
        "counting_ok": all(r.get("counting_ok", True) for r in rows),
        "threshold_misses": sum(1 for r in rows if r.get("meets_threshold") is False),
    }


# --- counterexample search ------------------------------------------------

SEARCH_TARGETS = {"conj1": "conj1", "conj2": "conj2", "lemma4-strong": "lemma4-strong"}


def _perturb(points: Sequence[Point], rng: random.Random) -> list[Point]:
    pts = list(points)
    for _ in range(10):
        i = rng.randrange(len(pts))
        scale = Fraction(1, 1 << rng.randint(3, 10))
        dx = Fraction(rng.randint(-1000, 1000), 1000) * scale
        dy = Fraction(rng.randint(-1000, 1000), 1000) * scale
        q = pts[:]
        q[i] = pts[i] + Point(dy, (dx - dy) / 2, -dy - (dx - dy) / 2)
        if general_position(q) is None:
            return q
    return pts


def search_counterexamples(target: str, budget: int = 1000, seed: int = 0, n_max: int | None = None,
                           face_subsets: int = 4) -> dict:
    """Randomised search with local perturbation of the most promising instance so far.

    conj1: mu < ceil((n-1)/2); conj2: exact beta < n - 1; lemma4-strong:
    f3 of one half-graph exceeds f5+ of the other.
    """
    if target not in SEARCH_TARGETS:
        raise ValueError(f"unknown target {target!r}")
    n_max = n_max or (9 if target == "conj2" else 12)
    n_min = 3 if target != "lemma4-strong" else 4
    rng = random.Random(seed)
    bud = Budget(face_subsets=face_subsets)
    findings = []
    best: tuple[int, list[Point]] | None = None
    tried = 0
    for k in range(budget):
        if best is not None and rng.random() < 0.3:
            pts = _perturb(best[1], rng)
        else:
            n = rng.randint(n_min, n_max)
            pts = gen_uniform(n, rng.getrandbits(48)).points
        ctx = Context(pts, f"{target}#{k}", seed * 1_000_003 + k, bud)
        res = CLAIMS[target](ctx)
        tried += 1
        if res.status == "finding":
            ok, msg = check_certificate(res.witness)
            findings.append({"instance": res.instance, "detail": res.detail, "certificate": res.witness, "reverified": ok})
            continue
        # slack toward the target drives which instance gets perturbed
        if target == "conj1":
            slack = ctx.matching.size - res.detail["target"]
        elif target == "conj2" and res.status != "skipped-size":
            slack = res.detail["beta"] - res.detail["target"]
        else:
            slack = 0
        if best is None or slack < best[0]:
            best = (slack, pts)
    return {"target": target, "tried": tried, "seed": seed, "findings": findings}
