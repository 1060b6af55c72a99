"""
exact distance primitives everything else is built on.

unweighted/weighted distances go through networkx, hop-limited ones are
plain Bellman-Ford rounds over the adjacency lists (networkx has no notion of
a hop budget).
"""

from collections.abc import Iterable

import networkx as nx

from spanlab.common.classes import DistanceMode, DistanceVector, Graph, Vertex
from spanlab.common.constants import INFINITE, PATH_COUNT_CAP, UNREACHABLE
from spanlab.common.errors import InputError


def _check_vertex(g: Graph, v: Vertex) -> None:
    if not 0 <= v < g.vertex_count:
        raise InputError(f"vertex {v} out of range [0, {g.vertex_count})")


def _metric_mode(g: Graph) -> DistanceMode:
    return DistanceMode.WEIGHTED if g.weighted else DistanceMode.UNWEIGHTED


def hop_limited_distances(g: Graph, source: Vertex, beta: int) -> list[float]:
    """min weight over source paths using at most `beta` edges"""
    if beta < 1:
        raise InputError(f"beta must be >= 1, got {beta}")
    _check_vertex(g, source)
    adj = g.adjacency
    dist: list[float] = [UNREACHABLE] * g.vertex_count
    dist[source] = 0
    frontier = {source}
    for _ in range(beta):
        # staged so round t only ever extends paths of <= t-1 edges
        staged: dict[int, float] = {}
        for u in frontier:
            du = dist[u]
            for v, w in adj[u]:
                cand = du + w
                if cand < dist[v] and cand < staged.get(v, UNREACHABLE):
                    staged[v] = cand
        if not staged:
            break
        for v, d in staged.items():
            dist[v] = d
        frontier = set(staged)
    return dist


def distances(
    g: Graph,
    source: Vertex,
    mode: DistanceMode = DistanceMode.UNWEIGHTED,
    beta: int | None = None,
) -> DistanceVector:
    _check_vertex(g, source)
    if mode == DistanceMode.HOP_LIMITED:
        if beta is None:
            raise InputError("hop_limited mode needs beta")
        return DistanceVector(source, tuple(hop_limited_distances(g, source, beta)))

    if mode == DistanceMode.UNWEIGHTED:
        found = nx.single_source_shortest_path_length(g.nx_graph, source)
    else:
        found = nx.single_source_dijkstra_path_length(g.nx_graph, source, weight="weight")
    dist = [UNREACHABLE] * g.vertex_count
    for v, d in found.items():
        dist[v] = d
    return DistanceVector(source, tuple(dist))


def metric_distances(g: Graph, source: Vertex) -> DistanceVector:
    """weighted distances for weighted graphs, BFS otherwise"""
    return distances(g, source, _metric_mode(g))


def pair_distance(g: Graph, u: Vertex, v: Vertex) -> float:
    _check_vertex(g, u)
    _check_vertex(g, v)
    try:
        if g.weighted:
            return nx.bidirectional_dijkstra(g.nx_graph, u, v, weight="weight")[0]
        return len(nx.bidirectional_shortest_path(g.nx_graph, u, v)) - 1
    except nx.NetworkXNoPath:
        return UNREACHABLE


def shortest_path_dag(
    g: Graph, source: Vertex, cutoff: float | None = None
) -> tuple[dict[int, list[int]], dict[int, float]]:
    """predecessor lists and distances of every vertex within `cutoff`"""
    _check_vertex(g, source)
    if g.weighted:
        preds, dist = nx.dijkstra_predecessor_and_distance(
            g.nx_graph, source, cutoff=cutoff, weight="weight"
        )
        return preds, dict(dist)
    preds, seen = nx.predecessor(
        g.nx_graph,
        source,
        cutoff=None if cutoff is None else int(cutoff),
        return_seen=True,
    )
    return preds, dict(seen)


def count_shortest_paths(g: Graph, u: Vertex, v: Vertex) -> tuple[float, int]:
    """
    (distance, number of distinct shortest paths), counted over the
    shortest-path DAG. counts saturate at PATH_COUNT_CAP.
    unreachable pairs give (UNREACHABLE, 0).
    """
    d = pair_distance(g, u, v)
    if d == UNREACHABLE:
        return UNREACHABLE, 0
    if u == v:
        return 0, 1
    return d, _count_paths(g, u, v, d)


def _count_paths(g: Graph, u: Vertex, v: Vertex, d: float) -> int:
    preds, dist = shortest_path_dag(g, u, cutoff=d)

    ancestors = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in preds.get(x, []):
            if y not in ancestors:
                ancestors.add(y)
                stack.append(y)

    count: dict[int, int] = {u: 1}
    for x in sorted(ancestors, key=lambda y: dist[y]):
        if x == u:
            continue
        count[x] = min(sum(count[y] for y in preds[x]), PATH_COUNT_CAP)
    return count[v]


def canonical_path(g: Graph, u: Vertex, v: Vertex) -> tuple[Vertex, ...] | None:
    """
    the shortest u-v path that always steps back to the smallest-id predecessor,
    None if v is unreachable
    """
    d = pair_distance(g, u, v)
    if d == UNREACHABLE:
        return None
    preds, _ = shortest_path_dag(g, u, cutoff=d)
    return path_from_preds(preds, u, v)


def path_from_preds(
    preds: dict[int, list[int]], u: Vertex, v: Vertex
) -> tuple[Vertex, ...] | None:
    if v != u and not preds.get(v):
        return None
    path = [v]
    while path[-1] != u:
        path.append(min(preds[path[-1]]))
    return tuple(reversed(path))


def path_weight(g: Graph, path: Iterable[Vertex]) -> float:
    """total weight of a vertex path, UNREACHABLE if a hop is missing"""
    nodes = list(path)
    G = g.nx_graph
    total = 0
    for a, b in zip(nodes, nodes[1:]):
        if not G.has_edge(a, b):
            return UNREACHABLE
        total += G[a][b]["weight"]
    return total


def nearest_sources(
    g: Graph, sources: Iterable[Vertex], cutoff: int | None = None
) -> tuple[list[int], list[float], list[int]]:
    """
    multi-source BFS. returns (owner, dist, parent): owner[v] is the smallest-id
    source among the closest ones, parent[v] the smallest-id neighbour one step
    closer with the same owner. -1 / UNREACHABLE past `cutoff` or out of reach.
    """
    adj = g.adjacency
    n = g.vertex_count
    owner = [-1] * n
    parent = [-1] * n
    dist: list[float] = [UNREACHABLE] * n
    frontier = sorted(set(sources))
    for s in frontier:
        _check_vertex(g, s)
        owner[s], dist[s] = s, 0
    depth = 0
    while frontier and (cutoff is None or depth < cutoff):
        depth += 1
        reached: dict[int, tuple[int, int]] = {}
        for u in frontier:
            for v, _ in adj[u]:
                if dist[v] != UNREACHABLE:
                    continue
                best = reached.get(v)
                if best is None or (owner[u], u) < best:
                    reached[v] = (owner[u], u)
        for v, (o, u) in reached.items():
            owner[v], parent[v], dist[v] = o, u, depth
        frontier = sorted(reached)
    return owner, dist, parent


def diameter(g: Graph) -> int:
    """largest finite distance (ordered reachable pairs for digraphs), 0 if empty"""
    best = 0
    mode = _metric_mode(g)
    for s in range(g.vertex_count):
        dist = distances(g, s, mode).dist
        finite = [d for d in dist if d != UNREACHABLE]
        if finite:
            best = max(best, int(max(finite)))
    return best


def girth_of(g: Graph) -> float:
    """length of the shortest cycle, INFINITE for forests"""
    if g.directed:
        raise InputError("girth_of needs an undirected graph")
    girth = nx.girth(g.nx_graph)
    return INFINITE if girth == INFINITE else int(girth)
