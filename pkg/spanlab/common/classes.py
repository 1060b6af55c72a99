from dataclasses import dataclass, field
from enum import IntEnum, StrEnum
from functools import cached_property
from typing import Any, NamedTuple

import networkx as nx
from dataclasses_json import dataclass_json

from spanlab.common.errors import InputError

type Vertex = int
"""dense integer vertex id, 0 <= v < vertex_count"""

type Pair = tuple[int, int]
"""demand pair (source, target)"""

type EdgeKey = tuple[int, int]
"""endpoint pair identifying an edge, (min, max) for undirected graphs"""

type Token = tuple[int, ...]
"""one step of a copy-containment address, (layer, index) or (-1, connector, offset)"""

type Address = tuple[Token, ...]
"""outermost-first chain of tokens locating a vertex inside a hierarchy instance"""


class DistanceMode(IntEnum):
    UNWEIGHTED = 0
    """BFS metric"""
    WEIGHTED = 1
    """Dijkstra metric"""
    HOP_LIMITED = 2
    """min weight over paths with at most beta edges"""


class Flavor(StrEnum):
    SPANNER = "spanner"
    """biclique base, subdivided connector paths"""
    HOPSET = "hopset"
    """dot-B base, weighted connector edges"""
    GIRTH = "girth"
    """girth-conjecture host base, connector paths scaled by gamma"""


class EdgeKind(StrEnum):
    SHORT = "short"
    LONG = "long"


class Edge(NamedTuple):
    u: Vertex
    v: Vertex
    weight: int = 1
    label: int | None = None


def edge_key(u: Vertex, v: Vertex, directed: bool = False) -> EdgeKey:
    if directed:
        return (u, v)
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """
    immutable (multi-)edge list over dense vertex ids.
    duplicate edges are allowed in `edges`, the networkx view keeps the lightest.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    directed: bool = False
    layer_of: tuple[int, ...] | None = None
    """optional vertex -> layer index"""

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError(f"vertex_count must be non-negative, got {self.vertex_count}")
        if self.layer_of is not None and len(self.layer_of) != self.vertex_count:
            raise InputError("layer_of must have one entry per vertex")
        n = self.vertex_count
        for e in self.edges:
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise InputError(f"edge {e} has an endpoint outside [0, {n})")
            if e.u == e.v:
                raise InputError(f"self-loop at {e.u}")
            if e.weight < 1:
                raise InputError(f"edge {e} has weight < 1")
            if (
                self.directed
                and self.layer_of is not None
                and self.layer_of[e.v] != self.layer_of[e.u] + 1
            ):
                raise InputError(f"layered edge {e} does not go from layer i to i+1")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def weighted(self) -> bool:
        return any(e.weight != 1 for e in self.edges)

    @cached_property
    def nx_graph(self) -> "nx.Graph[int] | nx.DiGraph[int]":
        graph: nx.Graph[int] | nx.DiGraph[int] = (
            nx.DiGraph() if self.directed else nx.Graph()
        )
        graph.add_nodes_from(range(self.vertex_count))
        for e in self.edges:
            if graph.has_edge(e.u, e.v) and graph[e.u][e.v]["weight"] <= e.weight:
                continue
            graph.add_edge(e.u, e.v, weight=e.weight, label=e.label)
        return graph

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """vertex -> ((neighbor, lightest weight), ...) in increasing neighbor order"""
        best: list[dict[int, int]] = [{} for _ in range(self.vertex_count)]
        for e in self.edges:
            ends = [(e.u, e.v)] if self.directed else [(e.u, e.v), (e.v, e.u)]
            for a, b in ends:
                if b not in best[a] or best[a][b] > e.weight:
                    best[a][b] = e.weight
        return tuple(tuple(sorted(nbrs.items())) for nbrs in best)

    @cached_property
    def edge_keys(self) -> frozenset[EdgeKey]:
        return frozenset(edge_key(e.u, e.v, self.directed) for e in self.edges)

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return edge_key(u, v, self.directed) in self.edge_keys

    def without(self, removed: "set[EdgeKey] | frozenset[EdgeKey]") -> "Graph":
        """copy with every edge whose key is in `removed` dropped"""
        kept = tuple(
            e for e in self.edges if edge_key(e.u, e.v, self.directed) not in removed
        )
        return Graph(self.vertex_count, kept, self.directed, self.layer_of)

    def union(self, extra: "tuple[Edge, ...] | list[Edge]") -> "Graph":
        """overlay extra edges (hopsets, shortcuts) on the same vertex set"""
        return Graph(self.vertex_count, self.edges + tuple(extra), self.directed, None)


@dataclass(frozen=True)
class DistanceVector:
    source: Vertex
    dist: tuple[float, ...]
    """int distances, UNREACHABLE (inf) where nothing gets there"""

    def __getitem__(self, v: Vertex) -> float:
        return self.dist[v]

    def __len__(self) -> int:
        return len(self.dist)


@dataclass_json
@dataclass(frozen=True)
class DemandPair:
    """a demand pair together with its claimed-unique shortest path"""

    source: Vertex
    target: Vertex
    signature: tuple[int, ...]
    """label signature, (a,) for dot-B, (a, b) for the product, (a_0..a_{k-1}) for the k-fold"""
    path: tuple[Vertex, ...]

    @property
    def key(self) -> Pair:
        return (self.source, self.target)

    @property
    def length(self) -> int:
        return len(self.path) - 1


@dataclass(frozen=True, eq=False)
class LayeredInstance:
    """dot-B, double-dot-B, and k-fold products all share this shape"""

    graph: Graph
    layer_size: int
    layers: int
    ell: int
    factor_sizes: tuple[int, ...]
    label_sets: tuple[tuple[int, ...], ...]
    pairs: tuple[DemandPair, ...]

    @property
    def distance(self) -> int:
        return self.layers - 1


@dataclass_json
@dataclass(frozen=True)
class LevelSpec:
    """how one level of the hierarchy was put together"""

    level: int
    factor_sizes: tuple[int, ...]
    """(s0, s1) for product levels, (p,) for the base"""
    labels: tuple[tuple[int, ...], ...]
    """label sets actually used, after truncation to the inner port count"""
    permutations: tuple[tuple[int, ...], ...] = ()
    """label position -> inner port index, one map per factor (empty at the base)"""
    pair_count: int = 0
    expected_pairs: float = 0.0
    xi: float = 0.0
    """measured p/|L| of the untruncated label set"""


@dataclass_json
@dataclass(frozen=True)
class InstanceMetadata:
    vertex_count: int
    edge_count: int
    pair_count: int
    distance: int
    """d_k for the flavor"""
    penalty: int
    """calibrated removal penalty (0 where it does not apply)"""
    p: int
    attempts: int = 1
    level_pair_counts: tuple[int, ...] = ()
    level_expected: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class HierarchyInstance:
    k: int
    ell: int
    flavor: Flavor
    graph: Graph
    pairs: tuple[DemandPair, ...]
    critical_map: dict[Pair, tuple[EdgeKey, ...]]
    seed: int
    metadata: InstanceMetadata
    levels: tuple[LevelSpec, ...]
    """levels[j - 1] describes level j"""
    addresses: tuple[Address, ...]
    gamma: int = 1

    @property
    def port_permutations(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(level.permutations for level in self.levels)

    @property
    def distance(self) -> int:
        return self.metadata.distance

    @property
    def penalty(self) -> int:
        return self.metadata.penalty

    @cached_property
    def pair_index(self) -> dict[Pair, DemandPair]:
        return {pair.key: pair for pair in self.pairs}

    def pair(self, key: Pair) -> DemandPair:
        try:
            return self.pair_index[key]
        except KeyError:
            raise InputError(f"{key} is not a demand pair of this instance") from None


@dataclass_json
@dataclass
class ClaimResult:
    claim: str
    passed: bool
    checked: int = 0
    violations: int = 0
    witness: dict[str, Any] | None = None
    """first offending pair with its path and distance values"""


@dataclass_json
@dataclass
class AuditReport:
    subject: str
    claims: list[ClaimResult] = field(default_factory=list)
    exhaustive: bool = True
    """false when pairs or sources were sampled"""
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, name: str) -> ClaimResult:
        for c in self.claims:
            if c.claim == name:
                return c
        raise KeyError(name)

    def add(
        self,
        name: str,
        checked: int,
        violations: int,
        witness: dict[str, Any] | None = None,
    ) -> ClaimResult:
        result = ClaimResult(name, violations == 0, checked, violations, witness)
        self.claims.append(result)
        return result
