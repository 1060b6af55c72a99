"""
certification: stretch reports, structural checks on generated instances,
the incompressibility sweep, and the closed-form lower-bound calculators.
"""

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

import networkx as nx
import pandas as pd
from dataclasses_json import dataclass_json
from loguru import logger
from scipy import stats

from spanlab.common.classes import AuditReport, Flavor, Graph, HierarchyInstance, Pair
from spanlab.common.constants import (
    AUDIT_EXHAUSTIVE_LIMIT,
    AUDIT_SAMPLE_SIZE,
    AUDIT_SOURCE_LIMIT,
    INCOMPRESSIBILITY_MAX_BITS,
    UNREACHABLE,
)
from spanlab.common.errors import InputError
from spanlab.common.graph_core import count_shortest_paths, metric_distances, pair_distance, path_weight
from spanlab.lower_bounds.instances import family_member, hierarchy_distance, hierarchy_penalty
from spanlab.upper_bounds.exponents import predicted_stretch
from spanlab.upper_bounds.spanners import SpannerResult


@dataclass_json
@dataclass
class StretchRow:
    d: int
    count: int
    max_additive: float
    mean_additive: float
    bound: int | None = None
    """predicted_stretch(d, k), None outside the covered regime"""
    passed: bool = True


@dataclass_json
@dataclass
class StretchReport:
    rows: list[StretchRow] = field(default_factory=list)
    worst: dict[str, Any] | None = None
    """pair with the largest additive error"""
    exhaustive: bool = True
    sources: int = 0

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def max_additive(self) -> float:
        return max((row.max_additive for row in self.rows), default=0)

    def row(self, d: int) -> StretchRow:
        for row in self.rows:
            if row.d == d:
                return row
        raise KeyError(d)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [
                {
                    "d": row.d,
                    "count": row.count,
                    "max_additive": row.max_additive,
                    "mean_additive": row.mean_additive,
                    "bound": row.bound,
                    "pass": row.passed,
                }
                for row in self.rows
            ],
            columns=["d", "count", "max_additive", "mean_additive", "bound", "pass"],
        )
        return frame

    def to_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)


def _targets_by_source(
    n: int, pairs: Literal["all"] | int | list[Pair], seed: int
) -> tuple[dict[int, list[int] | None], bool]:
    """source -> targets (None for every vertex), and whether the sweep is exhaustive"""
    if isinstance(pairs, list):
        grouped: dict[int, list[int] | None] = {}
        for u, v in pairs:
            targets = grouped.setdefault(u, [])
            assert targets is not None
            targets.append(v)
        return grouped, True
    rng = random.Random(seed)
    if isinstance(pairs, int):
        grouped = {}
        for _ in range(pairs):
            u, v = rng.sample(range(n), 2)
            targets = grouped.setdefault(u, [])
            assert targets is not None
            targets.append(v)
        return grouped, False
    if pairs != "all":
        raise InputError(f"pairs must be 'all', a sample size or a pair list, got {pairs}")
    if n > AUDIT_SOURCE_LIMIT:
        return {s: None for s in sorted(rng.sample(range(n), AUDIT_SAMPLE_SIZE))}, False
    return {s: None for s in range(n)}, True


def stretch_report(
    base: Graph,
    candidate: SpannerResult | Graph,
    pairs: Literal["all"] | int | list[Pair] = "all",
    k: int | None = None,
    gamma: int = 1,
    seed: int = 0,
    max_distance: int | None = None,
) -> StretchReport:
    """
    exact additive error of `candidate` against `base` per distance class.
    with k given, every class with 2^k <= d (<= max_distance) is held to
    predicted_stretch(d, k).
    """
    cand = candidate.graph if isinstance(candidate, SpannerResult) else candidate
    if cand.vertex_count != base.vertex_count:
        raise InputError("candidate and base have different vertex counts")
    n = base.vertex_count
    grouped, exhaustive = _targets_by_source(n, pairs, seed)

    stats_by_d: dict[int, list[float]] = {}
    worst: dict[str, Any] | None = None
    worst_gap = -1.0
    for s, targets in sorted(grouped.items()):
        true = metric_distances(base, s).dist
        got = metric_distances(cand, s).dist
        if targets is None:
            targets = list(range(s + 1, n)) if exhaustive else [t for t in range(n) if t != s]
        for t in targets:
            d = true[t]
            if d == UNREACHABLE or t == s:
                continue
            if got[t] < d:
                raise InputError(f"candidate contracts ({s}, {t}): {got[t]} < {d}")
            gap = got[t] - d
            stats_by_d.setdefault(int(d), []).append(gap)
            if gap > worst_gap:
                worst_gap = gap
                worst = {"pair": [s, t], "distance": int(d), "candidate_distance": got[t]}

    rows: list[StretchRow] = []
    for d in sorted(stats_by_d):
        gaps = stats_by_d[d]
        bound = None
        if k is not None and d >= 2**k and (max_distance is None or d <= max_distance):
            bound = predicted_stretch(d, k, gamma)
        top = max(gaps)
        rows.append(
            StretchRow(d, len(gaps), top, sum(gaps) / len(gaps), bound, bound is None or top <= bound)
        )
    report = StretchReport(rows, worst, exhaustive, len(grouped))
    logger.info(f"stretch report over {len(grouped)} sources, max additive {report.max_additive}")
    return report


def _checked_pairs(inst: HierarchyInstance) -> tuple[list[int], bool]:
    indices = list(range(len(inst.pairs)))
    if len(indices) <= AUDIT_EXHAUSTIVE_LIMIT:
        return indices, True
    return sorted(random.Random(inst.seed).sample(indices, AUDIT_SAMPLE_SIZE)), False


def _distance_in_view(view: "nx.Graph[int]", u: int, v: int) -> float:
    try:
        return nx.shortest_path_length(view, u, v)
    except nx.NetworkXNoPath:
        return UNREACHABLE


def certify_instance(inst: HierarchyInstance) -> AuditReport:
    """
    exact per-pair checks: stored path validity, unique shortest path, d_k,
    and for spanner / girth instances critical-edge disjointness, the removal
    penalty and invariance under the other pairs' removals
    """
    g = inst.graph
    indices, exhaustive = _checked_pairs(inst)
    report = AuditReport(
        subject=f"{inst.flavor} H_{inst.k} (ell={inst.ell}, p={inst.metadata.p}, seed={inst.seed})",
        exhaustive=exhaustive,
    )

    bad_path = unique_fail = dist_fail = 0
    w_path = w_unique = w_dist = None
    for i in indices:
        pair = inst.pairs[i]
        path = pair.path
        weight = path_weight(g, path)
        if path[0] != pair.source or path[-1] != pair.target or weight != inst.distance:
            bad_path += 1
            w_path = w_path or {"pair": list(pair.key), "path": list(path), "weight": weight}
        d, count = count_shortest_paths(g, pair.source, pair.target)
        if count != 1:
            unique_fail += 1
            w_unique = w_unique or {"pair": list(pair.key), "distance": d, "count": count, "path": list(path)}
        if d != inst.distance:
            dist_fail += 1
            w_dist = w_dist or {"pair": list(pair.key), "distance": d, "expected": inst.distance}
    report.add("stored path is a d_k path of the graph", len(indices), bad_path, w_path)
    report.add("unique shortest path", len(indices), unique_fail, w_unique)
    report.add("distance equals d_k", len(indices), dist_fail, w_dist)

    if inst.flavor != Flavor.HOPSET:
        _certify_critical(inst, indices, report)

    report.details.update(
        {
            "flavor": str(inst.flavor),
            "k": inst.k,
            "ell": inst.ell,
            "gamma": inst.gamma,
            "pairs": len(inst.pairs),
            "checked": len(indices),
            "distance": inst.distance,
            "penalty": inst.penalty,
            "xi": [level.xi for level in inst.levels],
            "vertices": g.vertex_count,
            "edges": g.edge_count,
        }
    )
    logger.info(f"certified {report.subject}: {'pass' if report.passed else 'FAIL'}")
    return report


def _certify_critical(inst: HierarchyInstance, indices: list[int], report: AuditReport) -> None:
    G = inst.graph.nx_graph
    owner: dict[tuple[int, int], int] = {}
    shared = 0
    w_shared = None
    for i, pair in enumerate(inst.pairs):
        for e in inst.critical_map[pair.key]:
            if e in owner and owner[e] != i:
                shared += 1
                w_shared = w_shared or {
                    "edge": list(e),
                    "pairs": [list(inst.pairs[owner[e]].key), list(pair.key)],
                }
            owner.setdefault(e, i)
    report.add("critical edges pairwise disjoint", len(owner), shared, w_shared)

    everything = set(owner)
    penalty_fail = invariance_fail = 0
    w_penalty = w_invariance = None
    for i in indices:
        pair = inst.pairs[i]
        own = set(inst.critical_map[pair.key])
        removed = _distance_in_view(nx.restricted_view(G, [], own), pair.source, pair.target)
        if removed < inst.distance + inst.penalty:
            penalty_fail += 1
            w_penalty = w_penalty or {
                "pair": list(pair.key),
                "after_removal": removed,
                "required": inst.distance + inst.penalty,
            }
        others = _distance_in_view(
            nx.restricted_view(G, [], everything - own), pair.source, pair.target
        )
        if others != inst.distance:
            invariance_fail += 1
            w_invariance = w_invariance or {
                "pair": list(pair.key),
                "after_other_removals": others,
                "expected": inst.distance,
            }
    report.add("removing own critical edges costs the penalty", len(indices), penalty_fail, w_penalty)
    report.add("other pairs' removals leave the distance", len(indices), invariance_fail, w_invariance)


def incompressibility_check(
    inst: HierarchyInstance, max_bits: int = INCOMPRESSIBILITY_MAX_BITS
) -> AuditReport:
    """
    all 2^|P| family members have pairwise distinct distance profiles on P,
    and flipping one pair moves its own entry by at least the penalty
    """
    m = len(inst.pairs)
    if max_bits > INCOMPRESSIBILITY_MAX_BITS:
        raise InputError(f"max_bits is capped at {INCOMPRESSIBILITY_MAX_BITS}, got {max_bits}")
    if m > max_bits:
        raise InputError(f"{m} pairs is too many for an exhaustive sweep (max {max_bits})")
    keys = [pair.key for pair in inst.pairs]

    profiles: list[tuple[float, ...]] = []
    buckets: dict[str, list[int]] = {}
    duplicates = 0
    witness = None
    for mask in range(2**m):
        member = family_member(inst, [keys[j] for j in range(m) if mask >> j & 1])
        profile = tuple(pair_distance(member, u, v) for u, v in keys)
        profiles.append(profile)
        digest = hashlib.sha256(repr(profile).encode()).hexdigest()
        for other in buckets.get(digest, []):
            if profiles[other] == profile:
                duplicates += 1
                witness = witness or {"masks": [other, mask], "profile": list(profile)}
        buckets.setdefault(digest, []).append(mask)

    report = AuditReport(subject=f"incompressibility over {2**m} family members")
    report.add("distance profiles pairwise distinct", 2**m, duplicates, witness)

    short = 0
    w_short = None
    flips = 0
    for mask in range(2**m):
        for j in range(m):
            if not mask >> j & 1:
                continue
            flips += 1
            kept, dropped = profiles[mask][j], profiles[mask & ~(1 << j)][j]
            if dropped - kept < inst.penalty:
                short += 1
                w_short = w_short or {"mask": mask, "pair": list(keys[j]), "kept": kept, "dropped": dropped}
    report.add("one-pair flip moves that pair by the penalty", flips, short, w_short)
    report.details.update({"pairs": m, "members": 2**m, "penalty": inst.penalty})
    return report


@dataclass_json
@dataclass(frozen=True)
class SpannerBound:
    k: int
    eps: float
    ell: int
    beta_lower: int


def spanner_lb_beta(k: int, eps: float) -> SpannerBound:
    """l = max(2, ceil((1-eps) / (2 eps (k-1)))), beta >= (2l-1)^(k-1)"""
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    e = Fraction(str(eps))
    ratio = (1 - e) / (2 * e * (k - 1))
    ell = max(2, math.ceil(ratio))
    return SpannerBound(k, eps, ell, (2 * ell - 1) ** (k - 1))


@dataclass_json
@dataclass(frozen=True)
class SublinearBound:
    k: int
    ell: int
    d: int
    penalty: int
    c_k_threshold: float
    """penalty / d^(1 - 1/k)"""


def sublinear_lb_params(k: int, ell: int) -> SublinearBound:
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if ell < 2:
        raise InputError(f"ell must be >= 2, got {ell}")
    d = hierarchy_distance(k, ell, Flavor.SPANNER)
    penalty = hierarchy_penalty(k, ell, Flavor.SPANNER)
    return SublinearBound(k, ell, d, penalty, penalty / d ** (1 - 1 / k))


def fit_loglog_slope(xs: list[float], ys: list[float]) -> float:
    if len(xs) != len(ys) or len(xs) < 2:
        raise InputError("need at least two matching points to fit a slope")
    if any(x <= 0 for x in xs) or any(y <= 0 for y in ys):
        raise InputError("log-log fit needs positive values")
    fit = stats.linregress([math.log(x) for x in xs], [math.log(y) for y in ys])
    return float(fit.slope)
