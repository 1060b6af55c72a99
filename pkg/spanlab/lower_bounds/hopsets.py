"""
hopset side of the lower bound: checking (beta, eps) hopsets, classifying
hopset edges by the copy-containment structure of a hopset-flavor H_k,
expunging short edges, ownership and the non-ownership hop penalty.

an edge (u, v) has order i when u and v sit in one copy of H_i but not in one
copy of H_{i-1}. it is short when their H_{i-1} copies (or a port and a copy)
are adjacent in that level's product graph, long otherwise.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from dataclasses_json import dataclass_json
from loguru import logger

from spanlab.common.classes import (
    Address,
    AuditReport,
    Edge,
    EdgeKey,
    EdgeKind,
    Flavor,
    Graph,
    HierarchyInstance,
    Pair,
    Token,
    edge_key,
)
from spanlab.common.constants import AUDIT_SAMPLE_SIZE, AUDIT_SOURCE_LIMIT, UNREACHABLE
from spanlab.common.errors import InputError, InternalError
from spanlab.common.graph_core import (
    hop_limited_distances,
    metric_distances,
    pair_distance,
)


@dataclass(frozen=True, eq=False)
class Hopset:
    edges: tuple[Edge, ...]
    """weight is always dist_G(u, v)"""
    order_of: dict[EdgeKey, int]
    kind_of: dict[EdgeKey, EdgeKind]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def keys(self) -> list[EdgeKey]:
        return [edge_key(e.u, e.v) for e in self.edges]

    @property
    def long_only(self) -> bool:
        return all(kind == EdgeKind.LONG for kind in self.kind_of.values())


@dataclass_json
@dataclass(frozen=True)
class HopsetCheck:
    passed: bool
    worst_pair: Pair | None
    worst_ratio: float
    """dist^(beta) / dist over the checked pairs"""
    checked: int
    exhaustive: bool = True


@dataclass_json
@dataclass(frozen=True)
class HopsetBound:
    k: int
    eps: float
    ell: int | None
    """None when eps is too large for ell >= 2"""
    beta_bound: int | None

    @property
    def applicable(self) -> bool:
        return self.ell is not None


def _graph_of(target: HierarchyInstance | Graph) -> Graph:
    return target.graph if isinstance(target, HierarchyInstance) else target


def _require_hopset_flavor(inst: HierarchyInstance) -> None:
    if inst.flavor != Flavor.HOPSET:
        raise InputError(f"needs a hopset-flavor instance, got {inst.flavor}")


def _common_prefix(a: Address, b: Address) -> int:
    c = 0
    for x, y in zip(a, b):
        if x != y:
            break
        c += 1
    return c


def _adjacent(inst: HierarchyInstance, level: int, a: Token, b: Token) -> bool:
    """are two product (or dot-B) nodes of a level-`level` block joined by an edge"""
    (la, ia), (lb, ib) = a, b
    if abs(la - lb) != 1:
        return False
    if la > lb:
        la, ia, lb, ib = lb, ib, la, ia
    spec = inst.levels[level - 1]
    if level == 1:
        (p,) = spec.factor_sizes
        return (ib - ia) % p in spec.labels[0]
    s0, s1 = spec.factor_sizes
    f = la % 2
    xa, ya = divmod(ia, s1)
    xb, yb = divmod(ib, s1)
    if f == 0:
        return ya == yb and (xb - xa) % s0 in spec.labels[0]
    return xa == xb and (yb - ya) % s1 in spec.labels[1]


def classify_edge(inst: HierarchyInstance, u: int, v: int) -> tuple[int, EdgeKind]:
    """(order, short | long) of a would-be hopset edge"""
    _require_hopset_flavor(inst)
    if u == v:
        raise InputError("hopset edges need distinct endpoints")
    au, av = inst.addresses[u], inst.addresses[v]
    c = _common_prefix(au, av)
    order = inst.k - c
    kind = EdgeKind.SHORT if _adjacent(inst, order, au[c], av[c]) else EdgeKind.LONG
    return order, kind


def make_hopset(target: HierarchyInstance | Graph, pairs: list[Pair]) -> Hopset:
    """weights are recomputed from G, classification only for hopset instances"""
    graph = _graph_of(target)
    edges: list[Edge] = []
    order_of: dict[EdgeKey, int] = {}
    kind_of: dict[EdgeKey, EdgeKind] = {}
    seen: set[EdgeKey] = set()
    for u, v in pairs:
        key = edge_key(u, v)
        if key in seen:
            continue
        seen.add(key)
        d = pair_distance(graph, u, v)
        if d == UNREACHABLE:
            raise InputError(f"hopset edge {key} joins disconnected vertices")
        edges.append(Edge(key[0], key[1], int(d)))
        if isinstance(target, HierarchyInstance) and target.flavor == Flavor.HOPSET:
            order_of[key], kind_of[key] = classify_edge(target, u, v)
    return Hopset(tuple(edges), order_of, kind_of)


def random_hopset(inst: HierarchyInstance, size: int, seed: int) -> Hopset:
    rng = random.Random(seed)
    n = inst.graph.vertex_count
    pairs: set[Pair] = set()
    while len(pairs) < size:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            pairs.add(edge_key(u, v))
    return make_hopset(inst, sorted(pairs))


def check_hopset(
    target: HierarchyInstance | Graph,
    h: Hopset,
    beta: int,
    eps: float,
    pairs: list[Pair] | None = None,
    seed: int = 0,
) -> HopsetCheck:
    """
    exact beta-hop distances on G + H against dist_G. instances are checked on
    their demand pairs (dist_G = d_k), graphs on every pair, with sampled
    sources past AUDIT_SOURCE_LIMIT vertices.
    """
    if beta < 1:
        raise InputError(f"beta must be >= 1, got {beta}")
    if eps < 0:
        raise InputError(f"eps must be >= 0, got {eps}")
    graph = _graph_of(target)
    union = graph.union(h.edges)

    exhaustive = True
    by_source: dict[int, dict[int, float]] = {}
    if pairs is not None:
        for u, v in pairs:
            d = pair_distance(graph, u, v)
            if d != UNREACHABLE:
                by_source.setdefault(u, {})[v] = d
    elif isinstance(target, HierarchyInstance):
        for pair in target.pairs:
            by_source.setdefault(pair.source, {})[pair.target] = target.distance
    else:
        sources = list(range(graph.vertex_count))
        if graph.vertex_count > AUDIT_SOURCE_LIMIT:
            sources = sorted(random.Random(seed).sample(sources, AUDIT_SAMPLE_SIZE))
            exhaustive = False
        for s in sources:
            dist = metric_distances(graph, s).dist
            by_source[s] = {
                v: d for v, d in enumerate(dist) if v != s and d != UNREACHABLE
            }

    worst_pair: Pair | None = None
    worst = 0.0
    checked = 0
    for s in sorted(by_source):
        limited = hop_limited_distances(union, s, beta)
        for t, d in sorted(by_source[s].items()):
            checked += 1
            ratio = limited[t] / d if d > 0 else 1.0
            if worst_pair is None or ratio > worst:
                worst, worst_pair = ratio, (s, t)
    passed = worst <= 1 + eps
    logger.info(f"hopset check: worst ratio {worst} over {checked} pairs")
    return HopsetCheck(passed, worst_pair, worst, checked, exhaustive)


@cache
def _junctions(inst: HierarchyInstance) -> dict[tuple[Address, Token, Token], tuple[int, int]]:
    """(shared prefix, token a, token b) -> (port on a's side, port on b's side)"""
    out: dict[tuple[Address, Token, Token], tuple[int, int]] = {}
    for e in inst.graph.edges:
        ax, ay = inst.addresses[e.u], inst.addresses[e.v]
        c = _common_prefix(ax, ay)
        if inst.k - c >= 2:
            out[(ax[:c], ax[c], ay[c])] = (e.u, e.v)
            out[(ay[:c], ay[c], ax[c])] = (e.v, e.u)
    return out


def _replacement(
    inst: HierarchyInstance, u: int, v: int, kept: set[EdgeKey]
) -> list[int]:
    """
    vertex chain from u to v whose hops are graph edges or kept long edges.
    a short edge becomes (u, u-side port) + connector + (v-side port, v), recursively.
    """
    if u == v:
        return [u]
    order, kind = classify_edge(inst, u, v)
    if kind == EdgeKind.LONG:
        kept.add(edge_key(u, v))
        return [u, v]
    if order == 1:
        # already an edge of G
        return [u, v]
    au, av = inst.addresses[u], inst.addresses[v]
    c = inst.k - order
    x, y = _junctions(inst)[(au[:c], au[c], av[c])]
    left = _replacement(inst, u, x, kept)
    right = _replacement(inst, y, v, kept)
    return left + right


def expunge_short(inst: HierarchyInstance, h: Hopset) -> Hopset:
    """long-only hopset with |H'| <= 2|H|"""
    _require_hopset_flavor(inst)
    kept: set[EdgeKey] = set()
    for e in h.edges:
        _replacement(inst, e.u, e.v, kept)
    if len(kept) > 2 * len(h):
        raise InternalError(f"expunging grew {len(h)} edges into {len(kept)}")
    result = make_hopset(inst, sorted(kept))
    logger.info(f"expunged {len(h)} hopset edges into {len(result)} long ones")
    return result


def check_hop_expansion(inst: HierarchyInstance, h: Hopset, h_prime: Hopset) -> AuditReport:
    """
    every edge of H is realised in G + H' by a chain of at most 2k+1 hops.
    the chain weight over dist_G is reported, not asserted.
    """
    _require_hopset_flavor(inst)
    allowed = set(h_prime.keys)
    limit = 2 * inst.k + 1
    union = inst.graph.union(h_prime.edges)
    G = union.nx_graph
    report = AuditReport(subject="hop expansion")
    violations = 0
    witness = None
    worst_ratio = 1.0
    for e in h.edges:
        kept: set[EdgeKey] = set()
        chain = _replacement(inst, e.u, e.v, kept)
        hops = list(zip(chain, chain[1:]))
        realised = kept <= allowed and all(G.has_edge(a, b) for a, b in hops)
        if not realised or len(hops) > limit:
            violations += 1
            if witness is None:
                witness = {"edge": [e.u, e.v], "chain": chain, "hops": len(hops)}
            continue
        weight = sum(G[a][b]["weight"] for a, b in hops)
        worst_ratio = max(worst_ratio, weight / e.weight)
    report.add("chain of at most 2k+1 hops", len(h), violations, witness)
    report.details["hop_limit"] = limit
    report.details["worst_chain_ratio"] = worst_ratio
    return report


@cache
def _prefix_index(inst: HierarchyInstance) -> dict[Address, frozenset[int]]:
    """copy prefix -> indices of the pairs whose canonical path enters that copy"""
    index: dict[Address, set[int]] = {}
    for i, pair in enumerate(inst.pairs):
        for v in pair.path:
            address = inst.addresses[v]
            for t in range(1, len(address) + 1):
                index.setdefault(address[:t], set()).add(i)
    return {prefix: frozenset(ids) for prefix, ids in index.items()}


def owner_of(inst: HierarchyInstance, long_edge: Pair) -> Pair | None:
    """the unique pair whose path meets both H_{i-1} copies of the edge, or None"""
    u, v = long_edge
    order, kind = classify_edge(inst, u, v)
    if kind == EdgeKind.SHORT:
        raise InputError(f"{long_edge} is a short edge, expunge it first")
    c = inst.k - order
    index = _prefix_index(inst)
    both = index.get(inst.addresses[u][: c + 1], frozenset()) & index.get(
        inst.addresses[v][: c + 1], frozenset()
    )
    if len(both) > 1:
        raise InternalError(f"long edge {long_edge} is owned by {len(both)} pairs")
    if not both:
        return None
    return inst.pairs[next(iter(both))].key


def certify_unowned_penalty(inst: HierarchyInstance, h: Hopset) -> AuditReport:
    """
    every pair owning no edge of H stays at least d + 2(l+1)^{k-1} away
    with (l-1)^k hops in G + H
    """
    _require_hopset_flavor(inst)
    if not h.long_only:
        raise InputError("certify_unowned_penalty needs a long-only hopset, run expunge_short")
    beta = (inst.ell - 1) ** inst.k
    bound = inst.distance + inst.penalty
    owned = {owner for key in h.keys if (owner := owner_of(inst, key)) is not None}
    union = inst.graph.union(h.edges)

    report = AuditReport(subject=f"non-ownership penalty (beta={beta})")
    violations = 0
    witness = None
    checked = 0
    for pair in inst.pairs:
        if pair.key in owned:
            continue
        checked += 1
        limited = hop_limited_distances(union, pair.source, beta)[pair.target]
        if limited < bound:
            violations += 1
            if witness is None:
                witness = {"pair": list(pair.key), "limited_distance": limited, "bound": bound}
    report.add("unowned pairs keep the hop penalty", checked, violations, witness)
    report.details.update(
        {"beta": beta, "bound": bound, "owned_pairs": len(owned), "vacuous": checked == 0}
    )
    return report


def hopset_lb_params(k: int, eps: float) -> HopsetBound:
    """l = largest integer below 1 / (2^{k-2} (2k-1) eps), beta > (l-1)^k"""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if eps <= 0:
        raise InputError(f"eps must be > 0, got {eps}")
    ceiling = 1 / (Fraction(2) ** (k - 2) * (2 * k - 1) * Fraction(str(eps)))
    ell = -(-ceiling.numerator // ceiling.denominator) - 1
    if ell < 2:
        return HopsetBound(k, eps, None, None)
    return HopsetBound(k, eps, ell, (ell - 1) ** k)
