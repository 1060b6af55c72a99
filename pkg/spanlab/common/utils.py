import hashlib
import json
import math
import random
from pathlib import Path
from typing import Any

from spanlab.common.classes import Edge, EdgeKey, Graph, edge_key
from spanlab.common.errors import InputError


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def iroot(x: int, k: int) -> int:
    """largest s with s**k <= x"""
    if x < 0 or k < 1:
        raise InputError(f"iroot needs x >= 0 and k >= 1, got ({x}, {k})")
    if k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    s = int(round(x ** (1.0 / k)))
    while s**k > x:
        s -= 1
    while (s + 1) ** k <= x:
        s += 1
    return s


def write_edge_list(g: Graph, path: Path) -> None:
    """
    header `n m directed weighted`, then `u v [w] [label]` per edge,
    in stored order so read_edge_list gives back the same Graph
    """
    weighted = g.weighted
    lines = [f"{g.vertex_count} {g.edge_count} {int(g.directed)} {int(weighted)}"]
    for e in g.edges:
        parts = [str(e.u), str(e.v)]
        if weighted:
            parts.append(str(e.weight))
        if e.label is not None:
            parts.append(str(e.label))
        lines.append(" ".join(parts))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def read_edge_list(path: Path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        rows = [line.split() for line in f if line.strip()]
    if not rows or len(rows[0]) != 4:
        raise InputError(f"{path}: expected header `n m directed weighted`")
    n, m, directed, weighted = (int(x) for x in rows[0])
    edges: list[Edge] = []
    for row in rows[1:]:
        values = [int(x) for x in row]
        u, v, rest = values[0], values[1], values[2:]
        weight = 1
        if weighted:
            if not rest:
                raise InputError(f"{path}: weighted edge list row {row} has no weight")
            weight, rest = rest[0], rest[1:]
        label = rest[0] if rest else None
        edges.append(Edge(u, v, weight, label))
    if len(edges) != m:
        raise InputError(f"{path}: header says {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges), bool(directed))


def path_edges(path: tuple[int, ...], directed: bool = False) -> list[EdgeKey]:
    return [edge_key(a, b, directed) for a, b in zip(path, path[1:])]


def dump_json(data: Any, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)


def load_json(path: Path) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()
