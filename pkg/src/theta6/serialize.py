"""JSON interchange: point sets, graphs and certificates.

Rationals travel as strings ("num/den" or decimal) so nothing is lost.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

from .combinatorics import IntroTriangle, Matching
from .geom import Point, Triangle, from_cartesian
from .graph import ProximityGraph


class InputError(ValueError):
    """Malformed JSON input."""


def rational_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"not a number: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        raise InputError("floats are not accepted; quote coordinates as strings")
    if not isinstance(s, str):
        raise InputError(f"not a number: {s!r}")
    try:
        v = Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc
    return v


def point_to_json(p: Point) -> list[str]:
    return [rational_str(v) for v in p.coords]


def point_from_json(row: Sequence[Any]) -> Point:
    if not isinstance(row, (list, tuple)) or len(row) not in (2, 3):
        raise InputError(f"point must have 2 or 3 triangular coordinates: {row!r}")
    vals = [parse_rational(v) for v in row]
    try:
        return Point.tri(*vals)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def points_to_json(points: Sequence[Point], **extra) -> dict:
    doc = {"coords": "tri", "points": [point_to_json(p) for p in points]}
    doc.update(extra)
    return doc


def points_from_json(doc: Any) -> list[Point]:
    if not isinstance(doc, dict) or "points" not in doc:
        raise InputError("point-set JSON needs a 'points' list")
    kind = doc.get("coords", "tri")
    rows = doc["points"]
    if not isinstance(rows, list):
        raise InputError("'points' must be a list")
    if kind == "tri":
        return [point_from_json(r) for r in rows]
    if kind == "xy":
        precision = doc.get("precision", 30)
        if not isinstance(precision, int) or precision < 1:
            raise InputError("'precision' must be a positive integer")
        out = []
        for r in rows:
            if not isinstance(r, (list, tuple)) or len(r) != 2:
                raise InputError(f"xy point must have two entries: {r!r}")
            x, y = (parse_rational(v) for v in r)
            out.append(from_cartesian(x, y, precision))
        return out
    raise InputError(f"unknown coordinate kind {kind!r}")


def graph_from_json(doc: Any, points: Sequence[Point] = ()) -> ProximityGraph:
    if not isinstance(doc, dict) or "edges" not in doc:
        raise InputError("graph JSON needs an 'edges' list")
    n = doc.get("n", len(points))
    edges = {}
    for e in doc["edges"]:
        try:
            u, v = int(e["u"]), int(e["v"])
            flags = (bool(e["up"]), bool(e["down"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad edge record {e!r}") from exc
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InputError(f"edge endpoints out of range: {e!r}")
        edges[(min(u, v), max(u, v))] = flags
    pts = tuple(points) if points else tuple(Point.tri(0, 0) for _ in range(n))
    return ProximityGraph(pts, edges)


def triangle_from_json(d: Any) -> Triangle:
    try:
        return Triangle(d["orientation"], tuple(parse_rational(v) for v in d["t"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad triangle record {d!r}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def intro_from_json(d: Any) -> IntroTriangle:
    try:
        u, v = d["edge"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad triangle record {d!r}") from exc
    return IntroTriangle((int(u), int(v)), triangle_from_json(d))


def matching_to_json(m: Matching) -> dict:
    return {"size": m.size, "edges": [list(e) for e in m.edges], "unmatched": list(m.unmatched)}


def load_json(path: str | None) -> Any:
    """Read JSON from a path, or stdin when path is None or '-'."""
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def dump_json(doc: Any, path: str | None = None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc}") from exc
