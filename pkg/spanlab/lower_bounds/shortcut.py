"""
k-fold product digraph and the shortcut-set certificate.

layer q = i*k + j advances factor j, so a demand path carries the periodic
label sequence a_0 .. a_{k-1} a_0 .. and any k consecutive edges pin down
every label, hence the whole path.
"""

from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from loguru import logger

from spanlab.common.classes import AuditReport, DemandPair, Edge, Graph, Pair
from spanlab.common.constants import UNREACHABLE
from spanlab.common.errors import InputError
from spanlab.common.graph_core import diameter, distances
from spanlab.common.utils import iroot
from spanlab.lower_bounds.avgfree import behrend_set
from spanlab.lower_bounds.instances import layered_product

type Window = tuple[int, tuple[int, ...]]
"""(first vertex, the k labels that follow it)"""


@dataclass(frozen=True, eq=False)
class KFoldInstance:
    graph: Graph
    pairs: tuple[DemandPair, ...]
    k: int
    ell: int
    p: int
    """adjusted to factor_size ** k"""
    requested_p: int
    factor_size: int
    labels: tuple[int, ...]

    @property
    def distance(self) -> int:
        return self.k * self.ell

    def path_labels(self, pair: DemandPair) -> tuple[int, ...]:
        return tuple(pair.signature[q % self.k] for q in range(self.k * self.ell))


def build_kfold(p: int, ell: int, k: int) -> KFoldInstance:
    """
    product of k copies of dot-B[p^(1/k)]. factors too small for an l-average-free
    set (p^(1/k) < l) fall back to the single label 1.
    """
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if ell < 1:
        raise InputError(f"ell must be >= 1, got {ell}")
    s = iroot(p, k)
    if s < 2:
        raise InputError(f"p={p} gives factor size {s} < 2 for k={k}")
    labels = behrend_set(s, ell).members if s >= ell and ell >= 2 else (1,)
    layered = layered_product(tuple([s] * k), tuple([labels] * k), ell, directed=True)
    if s**k != p:
        logger.info(f"p adjusted from {p} to {s ** k}")
    return KFoldInstance(
        layered.graph, layered.pairs, k, ell, s**k, p, s, labels
    )


def window_map(inst: KFoldInstance) -> dict[Window, set[Pair]]:
    """every length-k window of every canonical path -> the pairs containing it"""
    windows: dict[Window, set[Pair]] = {}
    for pair in inst.pairs:
        labels = inst.path_labels(pair)
        for start in range(len(pair.path) - inst.k):
            key = (pair.path[start], labels[start : start + inst.k])
            windows.setdefault(key, set()).add(pair.key)
    return windows


def pair_diameter(g: Graph, pairs: tuple[DemandPair, ...]) -> float:
    """max distance over the demand pairs only"""
    worst = 0.0
    by_source: dict[int, list[int]] = {}
    for pair in pairs:
        by_source.setdefault(pair.source, []).append(pair.target)
    for s, targets in by_source.items():
        dist = distances(g, s).dist
        worst = max(worst, max(dist[t] for t in targets))
    return worst


def certify_shortcut(inst: KFoldInstance, shortcuts: list[Pair]) -> AuditReport:
    """
    diameters of G + S, the window-uniqueness certificate, and the counting
    conclusion: pair diameter <= kl/(k-1) - 1 forces |S| >= |P|.
    """
    G = inst.graph.nx_graph
    reach: dict[int, set[int]] = {}
    n = inst.graph.vertex_count
    for u, v in shortcuts:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"shortcut ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise InputError(f"shortcut ({u}, {v}) is a self-loop")
        if u not in reach:
            reach[u] = nx.descendants(G, u)
        if v not in reach[u]:
            raise InputError(f"shortcut ({u}, {v}) is not in the transitive closure")

    union = inst.graph.union([Edge(u, v) for u, v in shortcuts])
    report = AuditReport(subject=f"shortcut set (k={inst.k}, ell={inst.ell})")

    windows = window_map(inst)
    collisions = [key for key, owners in windows.items() if len(owners) > 1]
    report.add(
        "length-k windows identify their pair",
        len(windows),
        len(collisions),
        None if not collisions else {"window": list(collisions[0][1]), "start": collisions[0][0]},
    )

    positions: dict[int, list[tuple[int, int]]] = {}
    for i, pair in enumerate(inst.pairs):
        for j, v in enumerate(pair.path):
            positions.setdefault(v, []).append((i, j))
    spanning = 0
    ambiguous = 0
    witness = None
    for u, v in shortcuts:
        at_v = {i: j for i, j in positions.get(v, [])}
        owners = {i for i, j in positions.get(u, []) if i in at_v and at_v[i] - j >= inst.k}
        if not owners:
            continue
        spanning += 1
        if len(owners) > 1:
            ambiguous += 1
            if witness is None:
                witness = {"shortcut": [u, v], "pairs": sorted(inst.pairs[i].key for i in owners)}
    report.add("long shortcuts serve exactly one pair", spanning, ambiguous, witness)

    pair_diam = pair_diameter(union, inst.pairs)
    threshold = Fraction(inst.k * inst.ell, inst.k - 1) - 1
    premise = pair_diam != UNREACHABLE and pair_diam <= threshold
    enough = len(shortcuts) >= len(inst.pairs)
    report.add(
        "small pair diameter needs |S| >= |P|",
        1,
        0 if (not premise or enough) else 1,
        None if (not premise or enough) else {"shortcuts": len(shortcuts), "pairs": len(inst.pairs)},
    )
    report.details.update(
        {
            "pair_diameter": pair_diam,
            "diameter": diameter(union),
            "threshold": float(threshold),
            "premise": premise,
            "shortcuts": len(shortcuts),
            "pairs": len(inst.pairs),
            "p": inst.p,
            "spanning_shortcuts": spanning,
        }
    )
    return report
