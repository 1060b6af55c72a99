"""
girth ingredients of the lower bound: explicit high-girth hosts, the hard
pair extraction P_1^gamma with its required edges phi, and H_k^gamma.

only explicitly constructible hosts are supported: bicliques (gamma = 1)
and projective-plane incidence graphs (girth 6, gamma = 2).
"""

import random
from collections import Counter
from dataclasses import dataclass

import networkx as nx
from loguru import logger

from spanlab.common.classes import (
    DemandPair,
    Edge,
    EdgeKey,
    Flavor,
    Graph,
    HierarchyInstance,
    LevelSpec,
    Pair,
    edge_key,
)
from spanlab.common.constants import MAX_GENERATION_ATTEMPTS, PROJECTIVE_PLANE_ORDERS
from spanlab.common.errors import GenerationDegenerate, InputError, InternalError
from spanlab.common.graph_core import count_shortest_paths, girth_of, path_from_preds
from spanlab.common.toy import complete_bipartite
from spanlab.common.utils import path_edges
from spanlab.lower_bounds.instances import BaseBuilder, Block, InnerPair, build_hierarchy

# irreducible polynomials for the two non-prime orders
_FIELD_MODULUS = {4: 0b111, 8: 0b1011}


def _field_tables(q: int) -> tuple[list[list[int]], list[list[int]]]:
    """addition and multiplication tables of GF(q)"""
    if q in _FIELD_MODULUS:
        modulus, bits = _FIELD_MODULUS[q], q.bit_length() - 1

        def mul(a: int, b: int) -> int:
            out = 0
            while b:
                if b & 1:
                    out ^= a
                b >>= 1
                a <<= 1
                if a >> bits:
                    a ^= modulus
            return out

        add = [[a ^ b for b in range(q)] for a in range(q)]
        return add, [[mul(a, b) for b in range(q)] for a in range(q)]
    add = [[(a + b) % q for b in range(q)] for a in range(q)]
    return add, [[(a * b) % q for b in range(q)] for a in range(q)]


def _normalized_vectors(q: int) -> list[tuple[int, int, int]]:
    """one representative per point of PG(2, q), first nonzero coordinate 1"""
    points = [(1, a, b) for a in range(q) for b in range(q)]
    points += [(0, 1, b) for b in range(q)]
    points.append((0, 0, 1))
    return points


def projective_plane_graph(q: int) -> Graph:
    """
    point-line incidence graph of PG(2, q). points are 0..N-1 and lines are
    N..2N-1 with N = q^2 + q + 1.
    """
    if q not in PROJECTIVE_PLANE_ORDERS:
        raise InputError(f"q must be one of {PROJECTIVE_PLANE_ORDERS}, got {q}")
    add, mul = _field_tables(q)
    vectors = _normalized_vectors(q)
    n = len(vectors)

    edges: list[Edge] = []
    for i, point in enumerate(vectors):
        for j, line in enumerate(vectors):
            dot = 0
            for x, y in zip(point, line):
                dot = add[dot][mul[x][y]]
            if dot == 0:
                edges.append(Edge(i, n + j))
    graph = Graph(2 * n, tuple(edges))
    if girth_of(graph) != 6:
        raise InternalError(f"PG(2, {q}) incidence graph does not have girth 6")
    return graph


@dataclass(frozen=True, eq=False)
class GirthHardPairs:
    host: Graph
    """host with the edges no distance-gamma S x T pair needs dropped"""
    gamma: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    pairs: tuple[DemandPair, ...]
    phi: dict[Pair, EdgeKey]
    requirement_mean: float
    """measured c, mean number of pairs requiring a surviving edge"""
    candidate_pairs: int
    """|P_F|, distance-gamma pairs touching a lightly required edge"""
    seed: int

    @property
    def estimate(self) -> float:
        """greedy floor |P_F| / (1 + gamma * floor(2c))"""
        return self.candidate_pairs / (1 + self.gamma * int(2 * self.requirement_mean))


def _pools(host: Graph, gamma: int) -> tuple[list[int], list[int]]:
    """
    same colour class for S and T when gamma is even, opposite classes when
    it is odd, everything when the host is not bipartite
    """
    G = host.nx_graph
    everyone = list(range(host.vertex_count))
    if host.vertex_count == 0 or not nx.is_bipartite(G):
        return everyone, everyone
    colour = nx.bipartite.color(G)
    side_a = [v for v in everyone if colour[v] == colour[0]]
    side_b = [v for v in everyone if colour[v] != colour[0]]
    return side_a, (side_a if gamma % 2 == 0 else side_b)


def _extract(
    host: Graph, gamma: int, S: list[int], T: list[int]
) -> tuple[Graph, list[DemandPair], dict[Pair, EdgeKey], float, int]:
    G = host.nx_graph
    targets = set(T)
    paths: dict[Pair, tuple[int, ...]] = {}
    for s in S:
        preds, seen = nx.predecessor(G, s, cutoff=gamma, return_seen=True)
        for t in sorted(targets):
            if t != s and seen.get(t) == gamma:
                path = path_from_preds(preds, s, t)
                assert path is not None
                paths[(s, t)] = path

    required: Counter[EdgeKey] = Counter()
    for path in paths.values():
        required.update(path_edges(path))
    pruned = Graph(
        host.vertex_count,
        tuple(e for e in host.edges if required[edge_key(e.u, e.v)] > 0),
    )
    if not required:
        return pruned, [], {}, 0.0, 0

    mean = sum(required.values()) / len(required)
    light = {e for e, c in required.items() if c <= 2 * mean}

    alive = dict.fromkeys(sorted(paths), True)
    users: dict[EdgeKey, list[Pair]] = {}
    for key, path in paths.items():
        for e in path_edges(path):
            users.setdefault(e, []).append(key)

    candidates = sum(
        1 for path in paths.values() if any(e in light for e in path_edges(path))
    )
    chosen: list[DemandPair] = []
    phi: dict[Pair, EdgeKey] = {}
    for key in sorted(paths):
        if not alive[key]:
            continue
        alive[key] = False
        hits = [e for e in path_edges(paths[key]) if e in light]
        if not hits:
            continue
        phi[key] = hits[0]
        chosen.append(DemandPair(key[0], key[1], (), paths[key]))
        for e in hits:
            for other in users[e]:
                alive[other] = False
    return pruned, chosen, phi, mean, candidates


def verify_hard_pairs(hard: GirthHardPairs) -> None:
    """raises InternalError unless every path is unique and phi is exclusive"""
    owner = {e: key for key, e in hard.phi.items()}
    for pair in hard.pairs:
        d, count = count_shortest_paths(hard.host, pair.source, pair.target)
        if d != hard.gamma or count != 1:
            raise InternalError(f"pair {pair.key} has distance {d} and {count} shortest paths")
        edges = path_edges(pair.path)
        if hard.phi[pair.key] not in edges:
            raise InternalError(f"pair {pair.key} does not use its own phi edge")
        for e in edges:
            if e in owner and owner[e] != pair.key:
                raise InternalError(f"pair {pair.key} uses phi edge of {owner[e]}")


def girth_hard_pairs(
    host: Graph,
    gamma: int,
    s_frac: float = 0.5,
    t_frac: float = 0.5,
    seed: int = 0,
    sizes: tuple[int, int] | None = None,
) -> GirthHardPairs:
    """
    sample S and T, keep the distance-gamma S x T pairs, prune the edges none
    of them needs, then greedily pick pairs that each own a lightly required
    edge phi no other picked pair touches.
    """
    if gamma < 1:
        raise InputError(f"gamma must be >= 1, got {gamma}")
    if host.directed:
        raise InputError("girth hosts are undirected")
    if girth_of(host) < 2 * gamma + 2:
        raise InputError(f"host girth {girth_of(host)} is below 2*gamma+2 = {2 * gamma + 2}")
    pool_s, pool_t = _pools(host, gamma)
    same_pool = pool_s is pool_t or pool_s == pool_t
    if sizes is None:
        s_size = max(1, round(s_frac * len(pool_s)))
        t_size = max(1, round(t_frac * len(pool_t)))
        if same_pool:
            t_size = min(t_size, len(pool_t) - s_size)
    else:
        s_size, t_size = sizes
    if s_size > len(pool_s) or t_size < 1 or (
        same_pool and s_size + t_size > len(pool_s)
    ) or t_size > len(pool_t):
        raise InputError(f"cannot fit |S|={s_size}, |T|={t_size} into the host")

    best: GirthHardPairs | None = None
    for attempt in range(MAX_GENERATION_ATTEMPTS):
        rng = random.Random(seed + attempt)
        S = sorted(rng.sample(pool_s, s_size))
        taken = set(S)
        T = sorted(rng.sample([v for v in pool_t if v not in taken], t_size))
        pruned, chosen, phi, mean, candidates = _extract(host, gamma, S, T)
        hard = GirthHardPairs(
            pruned, gamma, tuple(S), tuple(T), tuple(chosen), phi, mean, candidates, seed + attempt
        )
        if best is None or len(hard.pairs) > len(best.pairs):
            best = hard
        if hard.pairs and len(hard.pairs) >= hard.estimate / 2:
            verify_hard_pairs(hard)
            logger.info(f"{len(hard.pairs)} hard pairs at distance {gamma}")
            return hard
        logger.warning(f"seed {seed + attempt} gave {len(hard.pairs)} hard pairs, retrying")
    raise GenerationDegenerate("no hard girth pairs after all retries", best)


def smallest_projective_host(points_needed: int) -> Graph:
    for q in PROJECTIVE_PLANE_ORDERS:
        if q * q + q + 1 >= points_needed:
            return projective_plane_graph(q)
    raise InputError(
        f"no supported projective plane has {points_needed} points, lower p"
    )


def girth_block(gamma: int) -> BaseBuilder:
    """level-1 builder: S are the input ports, T the outputs, phi is critical"""

    def build(pin: int, pout: int, rng: random.Random) -> tuple[Block, LevelSpec]:
        if gamma == 1:
            host = complete_bipartite(pin, pout)
        else:
            host = smallest_projective_host(pin + pout)
        hard = girth_hard_pairs(host, gamma, sizes=(pin, pout), seed=rng.randrange(2**31))
        block = Block()
        for v in range(host.vertex_count):
            block.add_vertex(((0, v),))
        block.edges = list(hard.host.edges)
        block.inputs = list(hard.S)
        block.outputs = list(hard.T)
        s_index = {v: i for i, v in enumerate(hard.S)}
        t_index = {v: i for i, v in enumerate(hard.T)}
        for pair in hard.pairs:
            key = (s_index[pair.source], t_index[pair.target])
            block.pairs[key] = InnerPair(pair.path, (hard.phi[pair.key],), ())
        spec = LevelSpec(1, (pin, pout), (), (), len(block.pairs), float(len(block.pairs)))
        return block, spec

    return build


def build_Hk_gamma(
    p: int, ell: int, k: int, gamma: int, seed: int, strict: bool = True
) -> HierarchyInstance:
    """
    H_k with connector paths scaled by gamma. even gamma uses the imbalanced
    product at level 2, p0 = p^((gamma+2)/(2gamma+2)).
    """
    if gamma not in (1, 2):
        raise InputError(f"only gamma in (1, 2) has an explicit host, got {gamma}")
    return build_hierarchy(
        p,
        ell,
        k,
        Flavor.GIRTH,
        seed,
        girth_block(gamma),
        gamma=gamma,
        imbalanced_gamma=gamma if gamma % 2 == 0 else None,
        strict=strict,
    )
