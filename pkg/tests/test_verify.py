from fractions import Fraction

import pytest

from theta6.certificates import check_certificate
from theta6.generators import (
    gen_figure_examples,
    gen_many_edges,
    gen_min_degree7,
    gen_uniform,
)
from theta6.verify import (
    CLAIMS,
    FINDING_CHANNELS,
    HARD_CLAIMS,
    Budget,
    InstanceSpec,
    check_points,
    check_reduction_2b,
    default_family,
    extremal_family,
    run_suite,
    search_counterexamples,
    summarize,
    witnesses_reverify,
)


def test_every_claim_is_registered():
    assert set(CLAIMS) == set(HARD_CLAIMS) | set(FINDING_CHANNELS)


def test_default_suite_passes():
    results = run_suite(default_family(range(40)))
    s = summarize(results)
    assert s["failures"] == 0 and s["instances"] == 40
    assert all(r.status in ("pass", "skipped-size") for r in results)


def test_extremal_suite_passes():
    results = run_suite(extremal_family())
    assert summarize(results)["failures"] == 0


def test_suite_is_reproducible_and_parallel_safe():
    fam = default_family(range(6))
    a = [r.to_json() for r in run_suite(fam)]
    b = [r.to_json() for r in run_suite(fam, jobs=2)]
    assert a == b


def test_many_edges_edge_bound():
    (r,) = check_points(gen_many_edges(11).points, ["E1"])
    assert r.status == "pass" and r.detail["edges"] == 38 and r.detail["upper"] == 43


def test_min_degree_seven_through_d1():
    (r,) = check_points(gen_min_degree7().points, ["D1"])
    assert r.status == "pass" and r.detail["min_degree"] == 7


def test_unknown_claim():
    with pytest.raises(ValueError):
        check_points(gen_uniform(4, 0).points, ["T9"])


def test_instance_spec_label_and_build():
    spec = InstanceSpec("uniform", (("n", 5), ("seed", 2)))
    assert spec.label == "uniform(n=5,seed=2)"
    assert spec.build().points == gen_uniform(5, 2).points


def test_findings_carry_reverifiable_certificates():
    fam = default_family(range(3, 60, 2))
    results = run_suite(fam, claims=FINDING_CHANNELS, budget=Budget(face_subsets=3))
    statuses = {r.status for r in results}
    assert statuses <= {"finding", "none", "skipped-size"}
    assert witnesses_reverify(results)
    for r in results:
        if r.status == "finding":
            assert check_certificate(r.witness)[0]


def test_blocking_representatives_claim():
    (r,) = check_points(gen_figure_examples("fig1").points, ["T2a"])
    assert r.status == "pass"


def test_reduction_counting():
    insts = [gen_uniform(n, n).points for n in range(1, 9)]
    rep = check_reduction_2b(Fraction(3, 7), Fraction(-8, 7), insts)
    assert rep["counting_ok"]
    rows = [r for r in rep["instances"] if "threshold" in r]
    # threshold (3n/7 - 8/7) / (4/7) = 3n/4 - 2
    assert all(Fraction(r["threshold"]) == Fraction(3 * r["n"], 4) - 2 for r in rows)
    rep = check_reduction_2b(Fraction(1, 2), Fraction(-1, 2), insts[:1])
    assert rep["instances"][0]["counting_ok"] and Fraction(rep["instances"][0]["threshold"]) == 0
    with pytest.raises(ValueError):
        check_reduction_2b(Fraction(1), Fraction(0), [])


def test_lemma4_strong_search_finds_the_obstruction():
    res = search_counterexamples("lemma4-strong", budget=200, seed=0)
    assert res["findings"], "expected instances where f3 of one half exceeds f5+ of the other"
    assert all(f["reverified"] for f in res["findings"])


def test_fig3_is_a_lemma4_strong_hit():
    inst = gen_figure_examples("fig3")
    (r,) = check_points(inst.points, ["lemma4-strong"], label="fig3")
    assert r.status == "finding" and check_certificate(r.witness)[0]
    assert r.detail["f3_down"] > r.detail["f5plus_up"] or r.detail["f3_up"] > r.detail["f5plus_down"]


def test_conjecture_searches_come_back_empty():
    for target in ("conj1", "conj2"):
        res = search_counterexamples(target, budget=200, seed=1)
        assert res["tried"] == 200 and res["findings"] == []
    with pytest.raises(ValueError):
        search_counterexamples("riemann")
