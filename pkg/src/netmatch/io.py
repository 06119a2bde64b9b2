"""JSON instance and report files.

Instance document::

    {"edges": [[0, 1], [1, 2]], "n": 2, "preferences": [[2, 1], [1, 2]], "shape": "tree"}

``preferences[i - 1]`` ranks houses (written as owner ids) for agent ``i``,
favourite first. An optional ``"comment"`` string is carried along.

Report document (every key optional, omitted agents are truthful)::

    {"children": {"2": []}, "preferences": {"1": [1, 2]}}
"""

from __future__ import annotations

import json
import re
from collections import Counter
from pathlib import Path
from typing import Any

from .market import SHAPES, InvitationNetwork, MarketError, MarketInstance, ReportProfile

INSTANCE_KEYS = {"n", "shape", "edges", "preferences", "comment"}
REPORT_KEYS = {"children", "preferences", "comment"}


class ParseError(MarketError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _line_of(text: str, key: str) -> int | None:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None


def _int_list(value: Any, what: str, line: int | None) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError(f"{what} must be a list of integers", line)
    return value


def parse_instance(text: str) -> MarketInstance:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object", 1)
    unknown = set(doc) - INSTANCE_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", _line_of(text, sorted(unknown)[0]))
    for key in ("n", "shape", "edges", "preferences"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", 1)
    n, shape = doc["n"], doc["shape"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("n must be a positive integer", _line_of(text, "n"))
    if shape not in SHAPES:
        raise ParseError(f"shape must be one of {list(SHAPES)}", _line_of(text, "shape"))

    edge_line = _line_of(text, "edges")
    if not isinstance(doc["edges"], list):
        raise ParseError("edges must be a list of [parent, child] pairs", edge_line)
    edges = [tuple(_int_list(e, "edge", edge_line)) for e in doc["edges"]]
    if any(len(e) != 2 for e in edges):
        raise ParseError("each edge must be a [parent, child] pair", edge_line)
    dupes = [e for e, c in Counter(edges).items() if c > 1]
    if dupes:
        raise ParseError(f"duplicate edge {list(dupes[0])}", edge_line)

    pref_line = _line_of(text, "preferences")
    prefs = doc["preferences"]
    if not isinstance(prefs, list) or len(prefs) != n:
        raise ParseError(f"preferences must list exactly {n} rankings", pref_line)
    rankings = {}
    for i, p in enumerate(prefs, start=1):
        p = _int_list(p, f"preference of agent {i}", pref_line)
        if sorted(p) != list(range(1, n + 1)):
            raise ParseError(f"preference of agent {i} is not a permutation of 1..{n}", pref_line)
        rankings[i] = tuple(p)

    try:
        return MarketInstance(InvitationNetwork(n, frozenset(edges)), rankings, shape)
    except ParseError:
        raise
    except MarketError as exc:
        raise ParseError(str(exc), edge_line) from None


def instance_to_dict(instance: MarketInstance, comment: str | None = None) -> dict:
    doc = {
        "n": instance.n,
        "shape": instance.shape,
        "edges": [list(e) for e in sorted(instance.network.edges)],
        "preferences": [list(instance.preferences[i]) for i in instance.agents],
    }
    if comment:
        doc["comment"] = comment
    return doc


def dump_instance(instance: MarketInstance, comment: str | None = None) -> str:
    """Canonical form: sorted keys, no insignificant whitespace, trailing newline."""
    return json.dumps(instance_to_dict(instance, comment), sort_keys=True, separators=(",", ":")) + "\n"


def canonicalize(text: str) -> str:
    doc = _load(text)
    comment = doc.get("comment") if isinstance(doc, dict) else None
    return dump_instance(parse_instance(text), comment)


def read_instance(path: str | Path) -> MarketInstance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def parse_report(text: str, instance: MarketInstance) -> ReportProfile:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise ParseError("report must be a JSON object", 1)
    unknown = set(doc) - REPORT_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", _line_of(text, sorted(unknown)[0]))
    sections = {}
    for key in ("children", "preferences"):
        line = _line_of(text, key)
        section = doc.get(key, {})
        if not isinstance(section, dict):
            raise ParseError(f"{key} must map agent ids to lists", line)
        parsed = {}
        for agent, value in section.items():
            if not agent.isdigit():
                raise ParseError(f"{key}: {agent!r} is not an agent id", line)
            parsed[int(agent)] = _int_list(value, f"{key} of agent {agent}", line)
        sections[key] = (parsed, line)
    try:
        return ReportProfile.with_overrides(instance, sections["children"][0], sections["preferences"][0])
    except MarketError as exc:
        raise ParseError(str(exc), sections["children"][1] or sections["preferences"][1]) from None


def read_report(path: str | Path, instance: MarketInstance) -> ReportProfile:
    return parse_report(Path(path).read_text(encoding="utf-8"), instance)
