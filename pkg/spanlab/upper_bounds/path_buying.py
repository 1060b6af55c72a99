"""
path buying for E~1: walk the qualifying V_1 pairs in sorted order and buy a
pair's shortest path when the number of qualifying pairs it improves beats
the number of edges it adds. whatever is still out of bound afterwards is
bought unconditionally, so the additive target always holds.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx
from dataclasses_json import dataclass_json
from loguru import logger

from spanlab.common.classes import AuditReport, Edge, EdgeKey, Graph, Pair, edge_key
from spanlab.common.constants import UNCLUSTERED, UNREACHABLE
from spanlab.common.errors import InputError, InternalError
from spanlab.common.graph_core import pair_distance, path_from_preds, shortest_path_dag
from spanlab.common.utils import path_edges


@dataclass_json
@dataclass
class BuyDecision:
    pair: Pair
    path: list[int]
    cost: int
    """edges of the path missing from the spanner at decision time"""
    value: int
    """qualifying pairs whose spanner distance the path would strictly improve"""
    forced: bool = False


@dataclass_json
@dataclass
class BuyLedger:
    target_bound: int
    bought: list[BuyDecision] = field(default_factory=list)
    skipped: list[BuyDecision] = field(default_factory=list)

    @property
    def pairs(self) -> list[Pair]:
        return sorted(tuple(d.pair) for d in self.bought + self.skipped)

    @property
    def forced(self) -> int:
        return sum(1 for d in self.bought if d.forced)


def _spanner_distance(H: "nx.Graph[int]", u: int, v: int) -> float:
    try:
        return nx.shortest_path_length(H, u, v)
    except nx.NetworkXNoPath:
        return UNREACHABLE


def _attachments(path: tuple[int, ...], v1: frozenset[int], cluster_of: Sequence[int]) -> set[int]:
    """V_1 vertices on the path or centring a cluster the path passes through"""
    near = {x for x in path if x in v1}
    near |= {cluster_of[x] for x in path if cluster_of[x] != UNCLUSTERED}
    return near


def _value(
    H: "nx.Graph[int]",
    missing: list[EdgeKey],
    near: set[int],
    partners: Mapping[int, frozenset[int]],
) -> int:
    candidates = sorted(
        {edge_key(x, y) for x in near for y in partners.get(x, ()) if y in near}
    )
    if not candidates or not missing:
        return 0
    sources = sorted({x for x, _ in candidates})
    before = {x: nx.single_source_shortest_path_length(H, x) for x in sources}
    H.add_edges_from(missing)
    after = {x: nx.single_source_shortest_path_length(H, x) for x in sources}
    H.remove_edges_from(missing)
    return sum(
        1
        for x, y in candidates
        if after[x].get(y, UNREACHABLE) < before[x].get(y, UNREACHABLE)
    )


def buy_paths(
    g: Graph,
    base_edges: set[EdgeKey],
    v1: frozenset[int],
    v2_balls: Mapping[int, frozenset[int]],
    target_bound: int,
    cluster_of: Sequence[int] | None = None,
) -> tuple[set[EdgeKey], BuyLedger]:
    """
    `v2_balls` maps u in V_1 to its qualifying partners. returns the bought
    edges that were not already in `base_edges`, and the decision ledger.
    """
    if target_bound < 0:
        raise InputError(f"target_bound must be >= 0, got {target_bound}")
    if cluster_of is None:
        cluster_of = [UNCLUSTERED] * g.vertex_count
    partners: dict[int, set[int]] = {}
    for u, ball in v2_balls.items():
        if u not in v1:
            raise InputError(f"{u} is not in V_1")
        for v in ball:
            if v not in v1:
                raise InputError(f"partner {v} of {u} is not in V_1")
            partners.setdefault(u, set()).add(v)
            partners.setdefault(v, set()).add(u)
    frozen = {u: frozenset(vs) for u, vs in partners.items()}
    pairs = sorted({edge_key(u, v) for u, vs in frozen.items() for v in vs})

    H: nx.Graph[int] = nx.Graph()
    H.add_nodes_from(range(g.vertex_count))
    H.add_edges_from(base_edges)

    ledger = BuyLedger(target_bound)
    truth: dict[Pair, tuple[int, tuple[int, ...]]] = {}
    by_source: dict[int, list[int]] = {}
    for u, v in pairs:
        by_source.setdefault(u, []).append(v)
    for u, targets in by_source.items():
        preds, dist = shortest_path_dag(g, u)
        for v in targets:
            path = path_from_preds(preds, u, v)
            if path is None:
                raise InputError(f"qualifying pair {(u, v)} is disconnected in the graph")
            truth[(u, v)] = (int(dist[v]), path)

    skipped: dict[Pair, BuyDecision] = {}
    for key in pairs:
        d, path = truth[key]
        missing = [e for e in path_edges(path) if not H.has_edge(*e)]
        if _spanner_distance(H, *key) <= d + target_bound:
            skipped[key] = BuyDecision(key, list(path), len(missing), 0)
            continue
        value = _value(H, missing, _attachments(path, v1, cluster_of), frozen)
        decision = BuyDecision(key, list(path), len(missing), value)
        if value > len(missing):
            H.add_edges_from(missing)
            ledger.bought.append(decision)
        else:
            skipped[key] = decision

    for key in pairs:
        if key not in skipped:
            continue
        d, path = truth[key]
        if _spanner_distance(H, *key) > d + target_bound:
            decision = skipped.pop(key)
            missing = [e for e in path_edges(path) if not H.has_edge(*e)]
            decision.cost, decision.forced = len(missing), True
            H.add_edges_from(missing)
            ledger.bought.append(decision)
    ledger.skipped = [skipped[key] for key in sorted(skipped)]
    ledger.bought.sort(key=lambda decision: tuple(decision.pair))

    bought = {edge_key(a, b) for a, b in H.edges} - {edge_key(a, b) for a, b in base_edges}
    spanner = Graph(
        g.vertex_count, tuple(Edge(a, b) for a, b in sorted({edge_key(a, b) for a, b in H.edges}))
    )
    report = verify_path_buying(g, spanner, ledger)
    if not report.passed:
        raise InternalError(f"path buying left pairs out of bound: {report.claims}")
    logger.info(
        f"path buying: {len(ledger.bought)} bought ({ledger.forced} forced), "
        f"{len(ledger.skipped)} skipped, {len(bought)} new edges"
    )
    return bought, ledger


def verify_path_buying(g: Graph, spanner: Graph, ledger: BuyLedger) -> AuditReport:
    """re-checks the ledger's promises against a finished spanner"""
    report = AuditReport(subject=f"path buying (+{ledger.target_bound})")
    pairs = ledger.pairs
    report.add(
        "every qualifying pair decided once",
        len(pairs),
        len(pairs) - len(set(pairs)),
    )

    priced = [d for d in ledger.bought if not d.forced]
    cheap = [d for d in priced if d.value <= d.cost]
    report.add(
        "priced purchases had value above cost",
        len(priced),
        len(cheap),
        None if not cheap else {"pair": list(cheap[0].pair), "cost": cheap[0].cost, "value": cheap[0].value},
    )

    violations = 0
    witness = None
    for decision in ledger.bought + ledger.skipped:
        u, v = decision.pair
        d = pair_distance(g, u, v)
        got = _spanner_distance(spanner.nx_graph, u, v)
        if got > d + ledger.target_bound:
            violations += 1
            if witness is None:
                witness = {"pair": [u, v], "distance": d, "spanner_distance": got}
    report.add("qualifying pairs within the additive target", len(pairs), violations, witness)
    report.details.update(
        {"bought": len(ledger.bought), "forced": ledger.forced, "skipped": len(ledger.skipped)}
    )
    return report
