import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from theta6.certificates import certificate, check_certificate
from theta6.combinatorics import (
    graph_matching,
    max_disjoint_triangles,
    min_blocking_set,
)
from theta6.generators import gen_figure_examples, gen_uniform
from theta6.geom import Point, from_cartesian
from theta6.graph import build_fast
from theta6.serialize import (
    InputError,
    graph_from_json,
    parse_rational,
    point_from_json,
    point_to_json,
    points_from_json,
    points_to_json,
    rational_str,
)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**12)


@given(fractions, fractions)
def test_rationals_round_trip_exactly(a, b):
    p = Point.tri(a, b)
    doc = json.loads(json.dumps(points_to_json([p])))
    assert points_from_json(doc) == [p]


def test_rational_strings():
    assert rational_str(Fraction(3)) == "3" and rational_str(Fraction(-1, 3)) == "-1/3"
    assert parse_rational("0.125") == Fraction(1, 8)
    assert parse_rational(" 7/9 ") == Fraction(7, 9)
    for bad in (0.5, True, None, "x", "1/0"):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_point_rows():
    assert point_from_json(["1", "2"]) == Point.tri(1, 2)
    assert point_to_json(Point.tri(1, 2)) == ["1", "2", "-3"]
    with pytest.raises(InputError):
        point_from_json(["1", "2", "3"])  # does not sum to zero
    with pytest.raises(InputError):
        point_from_json(["1"])


def test_xy_ingestion_uses_one_sqrt3():
    doc = {"coords": "xy", "precision": 12, "points": [["1", "0"], ["0", "2"]]}
    assert points_from_json(doc) == [from_cartesian(1, 0, 12), from_cartesian(0, 2, 12)]
    with pytest.raises(InputError):
        points_from_json({"coords": "xy", "precision": 0, "points": []})
    with pytest.raises(InputError):
        points_from_json({"coords": "polar", "points": []})
    with pytest.raises(InputError):
        points_from_json([1, 2])


def test_graph_json_round_trip():
    pts = gen_uniform(15, 3).points
    g = build_fast(pts)
    back = graph_from_json(json.loads(json.dumps(g.to_json())), pts)
    assert back.edges == g.edges
    with pytest.raises(InputError):
        graph_from_json({"n": 2, "edges": [{"u": 0, "v": 5, "up": True, "down": False}]})
    with pytest.raises(InputError):
        graph_from_json({"n": 2, "edges": [{"u": 0}]})


# --- certificates --------------------------------------------------------------


def test_graph_certificate_detects_tampering():
    pts = gen_uniform(12, 1).points
    doc = certificate("graph", pts, **build_fast(pts).to_json())
    assert check_certificate(doc)[0]
    doc["edges"] = doc["edges"][1:]
    assert not check_certificate(doc)[0]


def test_matching_certificate():
    pts = gen_figure_examples("fig1").points
    m = graph_matching(build_fast(pts))
    doc = certificate("matching", pts, matching=[list(e) for e in m.edges], size=m.size)
    assert check_certificate(doc)[0]
    doc["matching"] = doc["matching"][:-1]
    doc.pop("size")
    assert not check_certificate(doc)[0]


def test_blocking_certificate():
    pts = gen_figure_examples("fig1").points
    bs = min_blocking_set(pts)
    rows = [point_to_json(b) for b in bs.blockers]
    assert check_certificate(certificate("blocking", pts, blockers=rows, minimum=True, mu=3))[0]
    assert not check_certificate(certificate("blocking", pts, blockers=rows[:-1]))[0]
    assert check_certificate(certificate("blocking", pts, blockers=rows[:-1], expect_blocked=False))[0]
    assert not check_certificate(certificate("blocking", pts, blockers=rows, mu=2))[0]


def test_family_certificate():
    pts = gen_uniform(8, 2).points
    fam = max_disjoint_triangles(pts, "closed")
    doc = certificate("family", pts, mode="closed", family=[it.to_json() for it in fam.triangles], at_least=fam.size)
    assert check_certificate(doc)[0]
    doc["at_least"] = fam.size + 1
    assert not check_certificate(doc)[0]


def test_certificate_input_errors():
    with pytest.raises(InputError):
        check_certificate([])
    with pytest.raises(InputError):
        check_certificate({"kind": "poem", "points": []})
    with pytest.raises(InputError):
        check_certificate({"kind": "matching", "points": [["0", "0"]]})


def test_nested_certificate_key():
    pts = gen_uniform(5, 0).points
    inner = certificate("structure", pts, values={"edges": len(build_fast(pts).edges)})
    assert check_certificate({"certificate": inner})[0]


def test_certificate_with_bad_position_fails():
    doc = {"kind": "graph", "points": [["0", "0"], ["0", "4"]], "n": 2, "edges": []}
    ok, msg = check_certificate(doc)
    assert not ok and "share" in msg
