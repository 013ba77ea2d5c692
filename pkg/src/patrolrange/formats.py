"""Reading graphs and walks from files, and DOT output."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

from .graph import Graph, GraphError


class InputError(ValueError):
    """Malformed input; the message names the offending line or field."""


def graph_from_json(data: Any, source: str = "<json>") -> Graph:
    """Graph from ``{"n": int, "edges": [[u, v], ...], "labels": [str]}``.

    A document of the form ``{"kind": ..., "params": {...}}`` is built as a
    family instead.
    """
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be a JSON object")
    if "kind" in data:
        from .families import build_family

        params = data.get("params", {})
        if not isinstance(params, dict):
            raise InputError(f"{source}: field 'params' must be an object")
        return build_family(str(data["kind"]), params)
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"{source}: field 'n' must be a positive integer, got {n!r}")
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise InputError(f"{source}: field 'edges' must be a list of [u, v] pairs")
    pairs = []
    for k, e in enumerate(edges):
        if (not isinstance(e, (list, tuple)) or len(e) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise InputError(f"{source}: field 'edges[{k}]' must be a pair of integers, got {e!r}")
        pairs.append((e[0], e[1]))
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise InputError(f"{source}: field 'labels' must be a list of {n} names")
    try:
        return Graph(n, pairs, labels)
    except GraphError as exc:
        raise InputError(f"{source}: {exc}") from None


def graph_from_edge_list(text: str, source: str = "<edges>") -> Graph:
    """Graph from ``u v`` lines; ``#`` starts a comment.

    Vertices are the names that appear. All-integer names keep their numeric
    order; otherwise names are numbered by first appearance.
    """
    names: list[str] = []
    index: dict[str, int] = {}
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise InputError(f"{source}:{lineno}: expected 'u v', got {raw.strip()!r}")
        for name in fields:
            if name not in index:
                index[name] = len(names)
                names.append(name)
        pairs.append(tuple(fields))
    if not names:
        raise InputError(f"{source}: no edges found")
    if all(name.lstrip("-").isdigit() for name in names):
        names.sort(key=int)
        index = {name: i for i, name in enumerate(names)}
    try:
        return Graph(len(names), [(index[u], index[v]) for u, v in pairs], names)
    except GraphError as exc:
        raise InputError(f"{source}: {exc}") from None


def load_graph(path: str | Path) -> Graph:
    """Read a graph file; ``.json`` files are JSON, anything else an edge list."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        return graph_from_json(data, str(path))
    return graph_from_edge_list(text, str(path))


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges], "labels": list(g.labels)}


def load_walk(path: str | Path, g: Graph | None = None) -> dict:
    """Read a walk file ``{"rho": int, "walk": [ints], "annotations": [...]}``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict) or not isinstance(data.get("walk"), list) or not data["walk"]:
        raise InputError(f"{path}: field 'walk' must be a non-empty list of vertices")
    for k, v in enumerate(data["walk"]):
        if not isinstance(v, int) or isinstance(v, bool) or (g is not None and not 0 <= v < g.n):
            raise InputError(f"{path}: field 'walk[{k}]' is not a vertex: {v!r}")
    if "rho" in data and (not isinstance(data["rho"], int) or data["rho"] < 0):
        raise InputError(f"{path}: field 'rho' must be a non-negative integer")
    return data


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(g: Graph, walk: Sequence[int] | None = None, name: str = "G",
           annotations: Sequence[str] | None = None) -> str:
    """DOT text for ``g``; a walk shows as the step numbers on each vertex it visits."""
    steps: dict[int, list[int]] = {}
    for t, v in enumerate(walk or []):
        steps.setdefault(v, []).append(t)
    lines = [f"graph {_quote(name)} {{"]
    for v in g.vertices:
        label = g.labels[v]
        attrs = []
        if v in steps:
            label += "\n" + ",".join(map(str, steps[v]))
            attrs.append("style=filled")
            attrs.append("fillcolor=lightblue")
            if annotations:
                notes = sorted({annotations[t] for t in steps[v] if annotations[t]})
                if notes:
                    attrs.append(f"tooltip={_quote('; '.join(notes))}")
        attrs.insert(0, f"label={_quote(label)}")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    used = {tuple(sorted(p)) for p in zip(walk or [], (walk or [])[1:]) if p[0] != p[1]}
    for u, v in g.edges:
        extra = " [penwidth=2.5, color=blue]" if (u, v) in used else ""
        lines.append(f"  {u} -- {v}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"
