"""Graph JSON reading and writing.

Format: ``{"n": int, "edges": [[i, j], ...], "squares": [i, ...], "labels": [[l1, l2], ...]}``.
``squares`` and ``labels`` are optional. A tree scheme file adds ``"players": k``.
"""

from __future__ import annotations

import json
import sys
from typing import Any

from .errors import DomainError
from .graph_core import Graph, LabelVector


def graph_to_json(g: Graph, labels: LabelVector | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "squares": sorted(g.squares),
    }
    if labels is not None:
        out["labels"] = [list(p) for p in labels]
    return out


def graph_from_json(data: Any) -> tuple[Graph, LabelVector]:
    if not isinstance(data, dict) or "n" not in data:
        raise DomainError("graph JSON must be an object with an 'n' field")
    try:
        n = int(data["n"])
        edges = [tuple(int(v) for v in e) for e in data.get("edges", [])]
        squares = [int(v) for v in data.get("squares", [])]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed graph JSON: {exc}") from None
    for e in edges:
        if len(e) != 2:
            raise DomainError(f"edge {list(e)} must have two endpoints")
    seen = set()
    for i, j in edges:
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DomainError(f"duplicate edge {list(key)}")
        seen.add(key)
    g = Graph.from_edges(n, edges, squares)
    raw = data.get("labels")
    if raw is None:
        labels = LabelVector.zeros(n)
    else:
        if len(raw) != n or any(len(p) != 2 or any(b not in (0, 1) for b in p) for p in raw):
            raise DomainError("labels must be n pairs of bits")
        labels = LabelVector(tuple(tuple(p) for p in raw))
    return g, labels


def read_json(path: str) -> Any:
    """Parse JSON from ``path`` or from stdin when ``path`` is ``-``. I/O errors propagate as ``OSError``."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from None


def load_graph(path: str) -> tuple[Graph, LabelVector]:
    return graph_from_json(read_json(path))


def load_tree(path: str) -> tuple[Graph, int]:
    data = read_json(path)
    g, _ = graph_from_json(data)
    if "players" not in data:
        raise DomainError(f"{path}: tree file needs a 'players' field")
    return g, int(data["players"])


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
