"""
high-girth upper bounds: radius-gamma clustering E0^gamma and the girth
emulator / spanner built on top of it.
"""

import random
from dataclasses import dataclass
from typing import Literal

from loguru import logger

from spanlab.common.classes import EdgeKey, Graph, edge_key
from spanlab.common.constants import UNCLUSTERED, UNREACHABLE
from spanlab.common.errors import InputError
from spanlab.common.graph_core import girth_of, nearest_sources
from spanlab.upper_bounds.exponents import Variant, sampling_exponents, sampling_probabilities
from spanlab.upper_bounds.path_buying import buy_paths
from spanlab.upper_bounds.spanners import (
    EdgeCollector,
    SampleHierarchy,
    SpannerResult,
    emulator_level,
    qualifying_balls,
    require_simple_graph,
    sample_hierarchy,
    spanner_level,
)


@dataclass(frozen=True, eq=False)
class GirthClustering:
    gamma: int
    centers: frozenset[int]
    cluster_of: tuple[int, ...]
    """vertex -> its center, UNCLUSTERED past distance gamma"""
    tree_edges: frozenset[EdgeKey]
    extra_edges: frozenset[EdgeKey]
    """every edge touching an unclustered vertex"""

    @property
    def edges(self) -> frozenset[EdgeKey]:
        """E0^gamma"""
        return self.tree_edges | self.extra_edges


def _check_girth(g: Graph, gamma: int) -> None:
    if gamma < 1:
        raise InputError(f"gamma must be >= 1, got {gamma}")
    require_simple_graph(g)
    girth = girth_of(g)
    if girth < 2 * gamma + 1:
        raise InputError(f"graph girth {girth} is below 2*gamma+1 = {2 * gamma + 1}")


def cluster_around(g: Graph, gamma: int, centers: frozenset[int]) -> GirthClustering:
    """clusters of radius gamma around given centers, smallest-id center on ties"""
    owner, dist, parent = nearest_sources(g, centers, cutoff=gamma)
    cluster_of = tuple(o if dist[v] != UNREACHABLE else UNCLUSTERED for v, o in enumerate(owner))
    tree = frozenset(
        edge_key(v, parent[v])
        for v in range(g.vertex_count)
        if cluster_of[v] != UNCLUSTERED and parent[v] >= 0
    )
    extra = frozenset(
        edge_key(e.u, e.v)
        for e in g.edges
        if cluster_of[e.u] == UNCLUSTERED or cluster_of[e.v] == UNCLUSTERED
    )
    return GirthClustering(gamma, frozenset(centers), cluster_of, tree, extra)


def girth_cluster(g: Graph, gamma: int, q1: float, seed: int) -> GirthClustering:
    """each vertex becomes a center with probability q1"""
    _check_girth(g, gamma)
    if not 0 <= q1 <= 1:
        raise InputError(f"q1 must lie in [0, 1], got {q1}")
    rng = random.Random(seed)
    centers = frozenset(v for v in range(g.vertex_count) if rng.random() < q1)
    clustering = cluster_around(g, gamma, centers)
    logger.info(f"{len(centers)} centers, |E0^gamma| = {len(clustering.edges)}")
    return clustering


def build_girth_spanner(
    g: Graph,
    gamma: int,
    k: int,
    r: int,
    mode: Literal["emulator", "spanner"],
    seed: int,
) -> SpannerResult:
    """
    emulator: E0^gamma + E_1 .. E_k.
    spanner: E0^gamma + E~1^gamma (path buying, +2gamma) + E_i' at threshold (r + 2gamma)^i.
    """
    _check_girth(g, gamma)
    if mode not in ("emulator", "spanner"):
        raise InputError(f"mode must be emulator or spanner, got {mode}")
    variant = Variant.GIRTH_EMULATOR if mode == "emulator" else Variant.GIRTH_SPANNER
    if k < (1 if mode == "emulator" else 2):
        raise InputError(f"k={k} is too small for girth {mode}")
    if mode == "spanner" and r < 2:
        raise InputError(f"r must be >= 2, got {r}")
    exps = sampling_exponents(k, variant, gamma)
    h: SampleHierarchy = sample_hierarchy(
        g, sampling_probabilities(max(g.vertex_count, 1), r, exps), seed
    )
    clustering = cluster_around(g, gamma, h.levels[1])

    collector = EdgeCollector()
    for key in sorted(clustering.edges):
        collector.add(key, "E0^gamma")
    ledger = None
    if mode == "emulator":
        for i in range(1, k + 1):
            for e in emulator_level(g, h, i):
                collector.add((e.u, e.v), f"E{i}", e.weight)
    else:
        bought, ledger = buy_paths(
            g,
            set(clustering.edges),
            h.levels[1],
            qualifying_balls(g, h),
            target_bound=2 * gamma,
            cluster_of=clustering.cluster_of,
        )
        for key in sorted(bought):
            collector.add(key, "E~1^gamma")
        for i in range(2, k + 1):
            for path in spanner_level(g, h, i, (r + 2 * gamma) ** i):
                collector.add_path(path, f"E{i}'")
    edges, tags = collector.edges()
    logger.info(f"girth {mode} (gamma={gamma}) with {len(edges)} edges")
    return SpannerResult(
        g.vertex_count,
        edges,
        tags,
        mode == "emulator",
        variant,
        k,
        r if mode == "spanner" else None,
        h,
        gamma,
        ledger,
    )
