"""Command-line interface.

Exit codes: 0 success, 1 claim or certificate failure, 2 usage or I/O
error, 3 findings only.  Data goes to stdout (or --out), diagnostics to
stderr.  Every subcommand reads JSON from stdin when no input is given.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from collections.abc import Sequence
from fractions import Fraction

from . import __version__
from .certificates import certificate, check_certificate
from .combinatorics import (
    SizeGuardError,
    bound_report,
    graph_matching,
    introducing_triangles,
    max_disjoint_triangles,
    min_blocking_set,
)
from .faces import faces as face_report
from .faces import induced_face_profile, planar_coords
from .generators import GENERATORS, GeneratorValidationError, gen_uniform
from .geom import DOWN, UP, GeneralPositionError
from .graph import build_by_oracle, build_fast, build_half, mst_td
from .render import render_svg
from .serialize import (
    InputError,
    dump_json,
    graph_from_json,
    intro_from_json,
    load_json,
    point_from_json,
    point_to_json,
    points_from_json,
    points_to_json,
    rational_str,
)
from .verify import (
    FINDING_CHANNELS,
    HARD_CLAIMS,
    Budget,
    check_reduction_2b,
    default_family,
    extremal_family,
    run_suite,
    search_counterexamples,
    summarize,
    witnesses_reverify,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FINDINGS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def parse_seeds(spec: str) -> list[int]:
    """'0..99', '3', or '1,4,9'."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty seed range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError("no seeds given")
    return out


def _graph_doc(points, g) -> dict:
    return points_to_json(points, kind="graph", **g.to_json())


# --- subcommands ---------------------------------------------------------


def cmd_gen(a) -> int:
    name = a.name
    if name not in GENERATORS:
        raise UsageError(f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}")
    kwargs = {}
    if name in ("vertical", "many-edges", "uniform"):
        if a.n is None:
            raise UsageError(f"{name} needs --n")
        kwargs["n"] = a.n
    if name == "uniform":
        kwargs["seed"] = a.seed
        kwargs["precision"] = a.precision
    if name in ("alpha-clusters", "strong-clusters", "blocking-gadgets"):
        if a.t is None:
            raise UsageError(f"{name} needs --t")
        kwargs["t"] = a.t
    inst = GENERATORS[name](**kwargs)
    dump_json(inst.to_json(), a.out)
    return EXIT_OK


def cmd_build(a) -> int:
    pts = points_from_json(load_json(a.input))
    if a.half:
        g = build_half(pts, a.half)
    elif a.oracle:
        g = build_by_oracle(pts)
    else:
        g = build_fast(pts)
    dump_json(_graph_doc(pts, g), a.out)
    return EXIT_OK


def _jsonable(report: dict) -> dict:
    return {k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in report.items()}


def cmd_analyze(a) -> int:
    pts = points_from_json(load_json(a.input))
    dump_json(_jsonable(bound_report(pts, exact_tri_limit=a.exact_limit)), a.out)
    return EXIT_OK


def cmd_match(a) -> int:
    pts = points_from_json(load_json(a.input))
    m = graph_matching(build_fast(pts))
    doc = certificate("matching", pts, matching=[list(e) for e in m.edges], size=m.size, unmatched=list(m.unmatched))
    dump_json(doc, a.out)
    return EXIT_OK


def cmd_block(a) -> int:
    pts = points_from_json(load_json(a.input))
    bs = min_blocking_set(pts, a.mode, max_triangles=a.exact_limit)
    doc = certificate(
        "blocking", pts,
        blockers=[point_to_json(b) for b in bs.blockers],
        size=bs.size, exact=bs.exact, lower_bound=bs.lower_bound,
        covers=[list(c) for c in bs.covers],
    )
    dump_json(doc, a.out)
    return EXIT_OK


def _family(a, mode: str) -> int:
    pts = points_from_json(load_json(a.input))
    fam = max_disjoint_triangles(pts, mode, a.solver)
    doc = certificate("family", pts, mode=mode, exact=fam.exact, size=fam.size,
                      family=[it.to_json() for it in fam.triangles])
    dump_json(doc, a.out)
    return EXIT_OK


def cmd_alpha(a) -> int:
    return _family(a, "interior")


def cmd_strong(a) -> int:
    return _family(a, "closed")


def cmd_faces(a) -> int:
    doc = load_json(a.input)
    pts = points_from_json(doc)
    if a.subset is not None or "subset" in doc:
        S = [int(x) for x in a.subset.split(",") if x.strip()] if a.subset is not None else list(doc["subset"])
        out = {}
        for o in ((a.orientation,) if a.orientation else (UP, DOWN)):
            prof = induced_face_profile(pts, S, o, method="triangulate")
            out[o] = {
                "f": {str(d): c for d, c in sorted(prof.f.items())},
                "f3": prof.f3, "f4plus": prof.f4plus, "f5plus": prof.f5plus,
                "representative_degree": {str(r): d for r, d in sorted(prof.rep_degree.items())},
            }
        dump_json({"subset": S, "profiles": out}, a.out)
        return EXIT_OK
    o = a.orientation or UP
    g = build_fast(pts, (o,))
    xy = planar_coords(pts)
    rep = face_report({v: xy[v] for v in range(len(pts))}, list(g.edges))
    faces = [
        {"id": f.id, "outer": f.is_outer, "walks": [list(w) for w in f.walks], "isolated": list(f.isolated),
         "holes": f.holes, "degree": f.degree}
        for f in rep.faces
    ]
    dump_json({"orientation": o, "faces": faces, "components": rep.n_components}, a.out)
    return EXIT_OK


def cmd_mst(a) -> int:
    pts = points_from_json(load_json(a.input))
    t = mst_td(pts)
    dump_json({"edges": [list(e) for e in t.edges], "weight": rational_str(t.weight)}, a.out)
    return EXIT_OK


def cmd_verify(a) -> int:
    budget = Budget(samples=a.budget)
    if a.search:
        res = search_counterexamples(a.search, a.budget, a.seed, a.n_max)
        doc = {k: v for k, v in res.items()}
        if a.report == "json":
            dump_json(doc, a.out)
        else:
            print(f"search {res['target']}: {res['tried']} instances, {len(res['findings'])} findings")
        if a.witness_dir and res["findings"]:
            _write_witnesses(a.witness_dir, [(f"{res['target']}-{i}", f["certificate"]) for i, f in enumerate(res["findings"])])
        return EXIT_FINDINGS if res["findings"] else EXIT_OK
    if a.reduction:
        c, d = (Fraction(x) for x in a.reduction.split(","))
        seeds = parse_seeds(a.seeds)
        insts = [gen_uniform(3 + s % 7, s).points for s in seeds]
        rep = check_reduction_2b(c, d, insts)
        if a.report == "json":
            dump_json(rep, a.out)
        else:
            print(f"reduction c={c} d={d}: counting {'ok' if rep['counting_ok'] else 'FAILED'}, "
                  f"{rep['threshold_misses']} threshold misses (findings)")
        if not rep["counting_ok"]:
            return EXIT_FAIL
        return EXIT_FINDINGS if rep["threshold_misses"] else EXIT_OK

    seeds = parse_seeds(a.seeds)
    family = []
    if a.suite in ("default", "all", "findings"):
        family += default_family(seeds)
    if a.suite in ("extremal", "all"):
        family += extremal_family()
    if a.claims:
        claims = [c.strip() for c in a.claims.split(",") if c.strip()]
        unknown = [c for c in claims if c not in HARD_CLAIMS + FINDING_CHANNELS]
        if unknown:
            raise UsageError(f"unknown claims: {', '.join(unknown)}")
    elif a.suite == "findings":
        claims = list(FINDING_CHANNELS)
    elif a.suite == "all":
        claims = list(HARD_CLAIMS + FINDING_CHANNELS)
    else:
        claims = list(HARD_CLAIMS)
    results = run_suite(family, claims, budget, jobs=a.jobs)
    summary = summarize(results)
    summary["witnesses_reverify"] = witnesses_reverify(results)
    flagged = [r for r in results if r.status in ("fail", "finding")]
    if a.report == "json":
        dump_json({"summary": summary, "flagged": [r.to_json() for r in flagged]}, a.out)
    else:
        for claim, counts in sorted(summary["claims"].items()):
            print(f"{claim:14s} " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())))
        print(f"instances={summary['instances']} failures={summary['failures']} findings={summary['findings']}")
    if flagged:
        wdir = a.witness_dir or "witnesses"
        paths = _write_witnesses(wdir, [(f"{r.claim}-{i}".replace("/", "_"), r.witness) for i, r in enumerate(flagged) if r.witness])
        for r, p in zip([r for r in flagged if r.witness], paths):
            _err(f"{r.status}: {r.claim} on {r.instance}; witness {p}")
    if summary["failures"]:
        return EXIT_FAIL
    if summary["findings"]:
        return EXIT_FINDINGS
    return EXIT_OK


def _write_witnesses(directory: str, items) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, doc in items:
        p = os.path.join(directory, f"{name}.json")
        dump_json(doc, p)
        paths.append(p)
    return paths


def cmd_check(a) -> int:
    doc = load_json(a.input)
    if isinstance(doc, dict) and "kind" not in doc and "edges" in doc and "points" in doc:
        doc = dict(doc, kind="graph")
    ok, msg = check_certificate(doc)
    print(("ok: " if ok else "FAILED: ") + msg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_render(a) -> int:
    doc = load_json(a.input)
    pts = points_from_json(doc)
    overlays = {o.strip() for o in (a.overlay or "").split(",") if o.strip()}
    unknown = overlays - {"matching", "blockers", "triangles", "family"}
    if unknown:
        raise UsageError(f"unknown overlays: {', '.join(sorted(unknown))}")
    if "edges" in doc:
        g = graph_from_json(doc, pts)
    else:
        g = build_fast(pts) if pts else None
    matching = []
    if "matching" in overlays:
        matching = [tuple(e) for e in doc["matching"]] if "matching" in doc else list(graph_matching(build_fast(pts)).edges)
    blockers = []
    if "blockers" in overlays:
        if "blockers" in doc:
            blockers = [point_from_json(r) for r in doc["blockers"]]
        else:
            blockers = list(min_blocking_set(pts, "exact" if len(pts) <= 9 else "greedy").blockers)
    tris = []
    if "triangles" in overlays:
        tris = introducing_triangles(pts) if pts else []
    if "family" in overlays:
        tris = [intro_from_json(d) for d in doc["family"]] if "family" in doc else list(
            max_disjoint_triangles(pts, "interior", "exact" if len(pts) <= 12 else "greedy").triangles)
    svg = render_svg(pts, g, matching=matching, blockers=blockers, triangles=tris, labels=a.labels)
    if a.out in (None, "-"):
        sys.stdout.write(svg)
    else:
        try:
            with open(a.out, "w", encoding="utf-8") as fh:
                fh.write(svg)
        except OSError as exc:
            raise InputError(f"cannot write {a.out}: {exc}") from exc
    return EXIT_OK


def cmd_bench(a) -> int:
    rows = []
    for s in range(a.repeat):
        pts = gen_uniform(a.n, a.seed + s).points
        n = len(pts)
        t0 = time.perf_counter()
        fast = build_fast(pts)
        t_fast = time.perf_counter() - t0
        logn = max(1, math.ceil(math.log2(n + 1)))
        row = {
            "n": n, "seed": a.seed + s, "edges": len(fast.edges), "edges_per_point": round(len(fast.edges) / n, 4),
            "fast_seconds": round(t_fast, 4),
            # six sweeps, one Fenwick query and one update per point
            "fast_predicates_bound": 6 * n * 2 * logn,
        }
        if n <= a.oracle_limit:
            t0 = time.perf_counter()
            oracle = build_by_oracle(pts)
            row["oracle_seconds"] = round(time.perf_counter() - t0, 4)
            # two triangles per pair, each tested against every point (early exit on the first hit)
            row["oracle_predicates_bound"] = 2 * (n * (n - 1) // 2) * n
            row["identical"] = oracle.edges == fast.edges
        rows.append(row)
    dump_json({"runs": rows}, a.out)
    if any(r.get("identical") is False for r in rows):
        return EXIT_FAIL
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="theta6", description="Theta6-graphs, half-Theta6 graphs, matchings and blocking sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_, inp=True):
        sp = sub.add_parser(name, help=help_, description=help_)
        if inp:
            sp.add_argument("input", nargs="?", help="input JSON (default: stdin)")
        sp.add_argument("--out", "-o", help="output path (default: stdout)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("gen", cmd_gen, "generate a point set", inp=False)
    sp.add_argument("name", help=f"one of: {', '.join(sorted(GENERATORS))}")
    sp.add_argument("--n", type=int, help="number of points (vertical, uniform, many-edges)")
    sp.add_argument("--t", type=int, help="number of clusters or gadget copies")
    sp.add_argument("--seed", type=int, default=0, help="PRNG seed for uniform")
    sp.add_argument("--precision", type=int, default=30, help="decimal digits of sqrt(3) for uniform")

    sp = add("build", cmd_build, "build the Theta6-graph of a point set")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--fast", action="store_true", help="sweep construction (default)")
    g.add_argument("--oracle", action="store_true", help="cubic empty-triangle oracle")
    g.add_argument("--half", choices=[UP, DOWN], help="only one half-graph")

    sp = add("analyze", cmd_analyze, "report mu, beta, alpha, mu*, deficiency, edge and degree counts")
    sp.add_argument("--exact-limit", type=int, default=60, help="exact solvers up to this many triangles")

    add("match", cmd_match, "maximum matching certificate")

    sp = add("block", cmd_block, "minimum blocking set certificate")
    sp.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    sp.add_argument("--exact-limit", type=int, default=80, help="size guard on the number of triangles")

    for name, fn, what in (("alpha", cmd_alpha, "interior-disjoint"), ("strong", cmd_strong, "closed-disjoint")):
        sp = add(name, fn, f"largest family of {what} empty triangles")
        sp.add_argument("--solver", choices=["exact", "greedy"], default="exact")

    sp = add("faces", cmd_faces, "faces of a half-graph, or face profile around a removed subset")
    sp.add_argument("--orientation", choices=[UP, DOWN])
    sp.add_argument("--subset", help="comma-separated indices of S (default: the input's 'subset', if any)")

    add("mst", cmd_mst, "minimum spanning tree under triangle size")

    sp = add("verify", cmd_verify, "check claims on instance families, or search for counterexamples", inp=False)
    sp.add_argument("--suite", choices=["default", "extremal", "findings", "all"], default="default")
    sp.add_argument("--claims", help=f"comma-separated subset of {', '.join(HARD_CLAIMS + FINDING_CHANNELS)}")
    sp.add_argument("--seeds", default="0..99", help="seed list such as 0..99 or 1,5,7")
    sp.add_argument("--budget", type=int, default=200, help="sampled subsets per instance; instances for --search")
    sp.add_argument("--report", choices=["json", "text"], default="text")
    sp.add_argument("--jobs", type=int, default=1, help="instance-level worker processes")
    sp.add_argument("--witness-dir", help="where to write witness files (default: ./witnesses)")
    sp.add_argument("--search", choices=["conj1", "conj2", "lemma4-strong"], help="run a counterexample search")
    sp.add_argument("--seed", type=int, default=0, help="seed for --search")
    sp.add_argument("--n-max", type=int, help="largest n for --search")
    sp.add_argument("--reduction", metavar="C,D", help="check the matching-to-blocking counting step with mu >= cn + d")

    add("check", cmd_check, "re-verify a certificate or graph file from JSON alone")

    sp = add("render", cmd_render, "SVG drawing of a point set or certificate")
    sp.add_argument("--overlay", help="comma-separated: matching, blockers, triangles, family")
    sp.add_argument("--labels", action="store_true", help="print point indices")

    sp = add("bench", cmd_bench, "time the sweep construction against the oracle", inp=False)
    sp.add_argument("--n", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=1)
    sp.add_argument("--oracle-limit", type=int, default=300, help="run the oracle only up to this n")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if not getattr(a, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return a.func(a)
    except UsageError as exc:
        _err(f"usage error: {exc}")
        return EXIT_USAGE
    except (InputError, GeneralPositionError, SizeGuardError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    except GeneratorValidationError as exc:
        _err(f"generator validation failed: {exc}")
        return EXIT_FAIL
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
