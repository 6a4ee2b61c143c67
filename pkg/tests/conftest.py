import random

import pytest

from theta6.geom import Point, general_position


def int_points(n: int, seed: int, span: int = 1000) -> list[Point]:
    """Random integer points in triangular coordinates, redrawn until in general position."""
    rng = random.Random(seed)
    while True:
        pts = [Point.tri(rng.randint(-span, span), rng.randint(-span, span)) for _ in range(n)]
        if general_position(pts) is None:
            return pts


@pytest.fixture
def rand_points():
    return int_points


# --- acceptance report ---------------------------------------------------------

_criteria: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _criteria.setdefault(num, {"title": title, "passed": [], "failed": [], "notes": []})
    if rep.when == "call" or rep.failed:
        (entry["passed"] if rep.passed else entry["failed"]).append(item.name)
    if rep.when == "call":
        entry["notes"] += [f"{k}={v}" for k, v in item.user_properties]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria, key=lambda k: (len(k), k)):
        e = _criteria[num]
        verdict = "FAIL" if e["failed"] else "PASS"
        line = f"[{verdict}] {num:>8}  {e['title']}"
        if e["failed"]:
            line += "  (failed: " + ", ".join(e["failed"]) + ")"
        tr.write_line(line)
        if e["notes"]:
            tr.write_line("           " + "; ".join(e["notes"]))
