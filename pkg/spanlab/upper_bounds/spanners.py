"""
Thorup-Zwick emulator, its spanner conversion S_TZ(k, r) and the sparser
S(k, r) that swaps level 1 for path buying.

V_0 = V contains V_1 contains ... V_k. p_i(u) is the closest V_i vertex
(smallest id on ties), B_i(u) the vertices strictly closer to u than p_i(u),
and B_{k+1}(u) is everything u reaches.
"""

import random
import warnings
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from loguru import logger

from spanlab.common.classes import Edge, EdgeKey, Graph, Pair, edge_key
from spanlab.common.constants import MAX_GENERATION_ATTEMPTS, UNCLUSTERED
from spanlab.common.errors import InputError
from spanlab.common.graph_core import nearest_sources, path_from_preds, shortest_path_dag
from spanlab.common.utils import path_edges
from spanlab.upper_bounds.exponents import Variant, sampling_exponents, sampling_probabilities
from spanlab.upper_bounds.path_buying import BuyLedger, buy_paths


@dataclass(frozen=True, eq=False)
class SampleHierarchy:
    levels: tuple[frozenset[int], ...]
    """V_0..V_k"""
    q: tuple[float, ...]
    pivots: tuple[tuple[int, ...], ...]
    """pivots[i][u] = p_i(u), UNCLUSTERED when V_i misses u's component"""
    ball_radius: tuple[tuple[float, ...], ...]
    """ball_radius[i][u] = dist(u, p_i(u))"""
    pivot_parent: tuple[tuple[int, ...], ...]
    """next vertex on the BFS-tree path from u towards p_i(u)"""
    seed: int
    """seed of the accepted draw"""

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    def ball(self, g: Graph, i: int, u: int) -> dict[int, int]:
        """B_i(u) with distances; i = k+1 gives u's whole component"""
        if i > self.k or self.pivots[i][u] == UNCLUSTERED:
            _, dist = shortest_path_dag(g, u)
        else:
            radius = int(self.ball_radius[i][u])
            if radius == 0:
                return {}
            _, dist = shortest_path_dag(g, u, cutoff=radius - 1)
        return {v: int(d) for v, d in dist.items()}

    def pivot_path(self, i: int, u: int) -> tuple[int, ...]:
        path = [u]
        while path[-1] != self.pivots[i][u]:
            path.append(self.pivot_parent[i][path[-1]])
        return tuple(path)


@dataclass(frozen=True, eq=False)
class SpannerResult:
    vertex_count: int
    edges: tuple[Edge, ...]
    provenance: tuple[str, ...]
    """one tag per edge, "E{i}" for emulator levels, "E{i}'" / "E~1" / "E0^gamma" for subgraphs"""
    is_emulator: bool
    variant: Variant
    k: int
    r: int | None
    hierarchy: SampleHierarchy
    gamma: int = 1
    ledger: BuyLedger | None = None

    @cached_property
    def graph(self) -> Graph:
        return Graph(self.vertex_count, self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    def counts(self) -> dict[str, int]:
        return dict(sorted(Counter(self.provenance).items()))


def require_simple_graph(g: Graph) -> None:
    if g.directed:
        raise InputError("spanners are built on undirected graphs")
    if g.weighted:
        raise InputError("spanners are built on unweighted graphs")


def sample_hierarchy(g: Graph, q: tuple[float, ...] | list[float], seed: int) -> SampleHierarchy:
    """
    V_{i+1} keeps each V_i vertex with probability q_{i+1}/q_i. draws with an
    empty V_k are retried on seed+1, seed+2, ...; the last one is kept if none
    succeeds, in which case B_k(u) is the whole graph.
    """
    if not q or q[0] != 1:
        raise InputError(f"q must start at 1, got {q}")
    if any(not 0 < x <= 1 for x in q):
        raise InputError(f"probabilities must lie in (0, 1], got {q}")
    if any(b > a for a, b in zip(q, q[1:])):
        raise InputError(f"q must be non-increasing, got {q}")
    n = g.vertex_count
    k = len(q) - 1

    levels: list[frozenset[int]] = []
    used = seed
    for attempt in range(MAX_GENERATION_ATTEMPTS):
        used = seed + attempt
        rng = random.Random(used)
        levels = [frozenset(range(n))]
        for i in range(1, k + 1):
            ratio = q[i] / q[i - 1]
            levels.append(frozenset(v for v in sorted(levels[-1]) if rng.random() < ratio))
        if k == 0 or levels[k] or n == 0:
            break
        logger.debug(f"seed {used} left V_{k} empty, retrying")
    else:
        warnings.warn(f"V_{k} stayed empty after {MAX_GENERATION_ATTEMPTS} draws")

    pivots, radii, parents = [], [], []
    for level in levels:
        owner, dist, parent = nearest_sources(g, level)
        pivots.append(tuple(o if o >= 0 else UNCLUSTERED for o in owner))
        radii.append(tuple(dist))
        parents.append(tuple(parent))
    logger.info(f"sampled hierarchy sizes {[len(level) for level in levels]}")
    return SampleHierarchy(
        tuple(levels), tuple(q), tuple(pivots), tuple(radii), tuple(parents), used
    )


def emulator_level(g: Graph, h: SampleHierarchy, i: int) -> list[Edge]:
    """E_i: V_i pairs inside B_{i+1}, plus (u, p_{i+1}(u)) for every u, weighted by distance"""
    out: dict[EdgeKey, Edge] = {}
    for u in sorted(h.levels[i]):
        for v, d in h.ball(g, i + 1, u).items():
            if v != u and v in h.levels[i]:
                key = edge_key(u, v)
                out.setdefault(key, Edge(key[0], key[1], d))
    if i < h.k:
        for u in range(g.vertex_count):
            p = h.pivots[i + 1][u]
            if p not in (UNCLUSTERED, u):
                key = edge_key(u, p)
                out.setdefault(key, Edge(key[0], key[1], int(h.ball_radius[i + 1][u])))
    return [out[key] for key in sorted(out)]


def spanner_level(
    g: Graph, h: SampleHierarchy, i: int, threshold: int
) -> list[tuple[int, ...]]:
    """E_i': one shortest path per E_i pair at distance <= threshold"""
    paths: dict[Pair, tuple[int, ...]] = {}
    for u in sorted(h.levels[i]):
        ball = h.ball(g, i + 1, u)
        near = [v for v in sorted(ball) if v != u and v in h.levels[i] and ball[v] <= threshold]
        if not near:
            continue
        preds, _ = shortest_path_dag(g, u, cutoff=threshold)
        for v in near:
            key = edge_key(u, v)
            if key not in paths:
                path = path_from_preds(preds, u, v)
                assert path is not None
                paths[key] = path
    if i < h.k:
        for u in range(g.vertex_count):
            p = h.pivots[i + 1][u]
            if p in (UNCLUSTERED, u) or h.ball_radius[i + 1][u] > threshold:
                continue
            key = edge_key(u, p)
            if key not in paths:
                paths[key] = h.pivot_path(i + 1, u)
    return [paths[key] for key in sorted(paths)]


def qualifying_balls(g: Graph, h: SampleHierarchy) -> dict[int, frozenset[int]]:
    """u in V_1 -> V_1 partners of u in E_1 (ball members and p_2(u))"""
    balls: dict[int, frozenset[int]] = {}
    for u in sorted(h.levels[1]):
        partners = {v for v in h.ball(g, 2, u) if v != u and v in h.levels[1]}
        if h.k >= 2 and h.pivots[2][u] not in (UNCLUSTERED, u):
            partners.add(h.pivots[2][u])
        balls[u] = frozenset(partners)
    return balls


def _radius_one_clusters(h: SampleHierarchy) -> tuple[int, ...]:
    """E0' joins u to p_1(u) exactly when they are adjacent"""
    return tuple(
        p if p != UNCLUSTERED and h.ball_radius[1][u] <= 1 else UNCLUSTERED
        for u, p in enumerate(h.pivots[1])
    )


class EdgeCollector:
    """keeps the first provenance seen for every edge"""

    def __init__(self):
        self.tags: dict[EdgeKey, str] = {}
        self.weights: dict[EdgeKey, int] = {}

    def add(self, key: EdgeKey, tag: str, weight: int = 1) -> None:
        if key not in self.tags:
            self.tags[key] = tag
            self.weights[key] = weight

    def add_path(self, path: tuple[int, ...], tag: str) -> None:
        for key in path_edges(path):
            self.add(key, tag)

    def edges(self) -> tuple[tuple[Edge, ...], tuple[str, ...]]:
        keys = sorted(self.tags)
        return (
            tuple(Edge(u, v, self.weights[(u, v)]) for u, v in keys),
            tuple(self.tags[key] for key in keys),
        )


def _hierarchy_for(g: Graph, k: int, r: int, variant: Variant, seed: int) -> SampleHierarchy:
    exps = sampling_exponents(k, variant)
    q = sampling_probabilities(max(g.vertex_count, 1), r, exps)
    logger.debug(f"{variant} sampling probabilities {q}")
    return sample_hierarchy(g, q, seed)


def emulator_from_hierarchy(g: Graph, h: SampleHierarchy) -> EdgeCollector:
    collector = EdgeCollector()
    for i in range(h.k + 1):
        for e in emulator_level(g, h, i):
            collector.add((e.u, e.v), f"E{i}", e.weight)
    return collector


def build_tz_emulator(g: Graph, k: int, seed: int, q: tuple[float, ...] | None = None) -> SpannerResult:
    require_simple_graph(g)
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    if q is not None:
        h = sample_hierarchy(g, q, seed)
    elif k == 0:
        h = sample_hierarchy(g, (1.0,), seed)
    else:
        h = _hierarchy_for(g, k, 1, Variant.TZ_EMULATOR, seed)
    edges, tags = emulator_from_hierarchy(g, h).edges()
    logger.info(f"tz emulator with {len(edges)} edges")
    return SpannerResult(g.vertex_count, edges, tags, True, Variant.TZ_EMULATOR, h.k, None, h)


def build_tz_spanner(g: Graph, k: int, r: int, seed: int) -> SpannerResult:
    require_simple_graph(g)
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if r < 2:
        raise InputError(f"r must be >= 2, got {r}")
    h = _hierarchy_for(g, k, r, Variant.TZ_SPANNER, seed)
    collector = EdgeCollector()
    for i in range(k + 1):
        for path in spanner_level(g, h, i, (r + 2) ** i):
            collector.add_path(path, f"E{i}'")
    edges, tags = collector.edges()
    logger.info(f"tz spanner with {len(edges)} edges")
    return SpannerResult(g.vertex_count, edges, tags, False, Variant.TZ_SPANNER, k, r, h)


def build_new_spanner(g: Graph, k: int, r: int, seed: int) -> SpannerResult:
    """E0' + path-bought E~1 + E2' .. Ek'"""
    require_simple_graph(g)
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if r < 2:
        raise InputError(f"r must be >= 2, got {r}")
    h = _hierarchy_for(g, k, r, Variant.NEW_SPANNER, seed)
    collector = EdgeCollector()
    for path in spanner_level(g, h, 0, 1):
        collector.add_path(path, "E0'")
    bought, ledger = buy_paths(
        g,
        set(collector.tags),
        h.levels[1],
        qualifying_balls(g, h),
        target_bound=2,
        cluster_of=_radius_one_clusters(h),
    )
    for key in sorted(bought):
        collector.add(key, "E~1")
    for i in range(2, k + 1):
        for path in spanner_level(g, h, i, (r + 2) ** i):
            collector.add_path(path, f"E{i}'")
    edges, tags = collector.edges()
    logger.info(f"new spanner with {len(edges)} edges, {len(bought)} bought")
    return SpannerResult(
        g.vertex_count, edges, tags, False, Variant.NEW_SPANNER, k, r, h, ledger=ledger
    )
