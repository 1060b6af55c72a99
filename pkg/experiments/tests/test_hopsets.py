import math

import pytest

from spanlab.common.classes import EdgeKind, Flavor
from spanlab.common.errors import InputError
from spanlab.common.graph_core import hop_limited_distances
from spanlab.common.toy import path_graph
from spanlab.lower_bounds.hopsets import (
    check_hop_expansion,
    check_hopset,
    certify_unowned_penalty,
    classify_edge,
    expunge_short,
    hopset_lb_params,
    make_hopset,
    owner_of,
    random_hopset,
)
from spanlab.lower_bounds.instances import build_Hk


def test_lb_params():
    bound = hopset_lb_params(2, 0.01)
    assert bound.ell == 33
    assert bound.beta_bound == 1024
    assert not hopset_lb_params(2, 0.4).applicable


def test_instance_distance(hopset_16):
    assert hopset_16.distance == 18
    assert hopset_16.penalty == 6
    assert len(hopset_16.pairs) == 32


def test_empty_hopset_needs_every_hop(hopset_16):
    empty = make_hopset(hopset_16, [])
    enough = check_hopset(hopset_16, empty, beta=10, eps=0)
    assert enough.passed
    assert enough.worst_ratio == 1
    short = check_hopset(hopset_16, empty, beta=9, eps=0)
    assert not short.passed
    assert short.worst_ratio == math.inf


def test_graph_edges_are_short(hopset_16):
    for e in hopset_16.graph.edges[:200]:
        _, kind = classify_edge(hopset_16, e.u, e.v)
        assert kind == EdgeKind.SHORT


def test_pair_endpoints_form_an_owned_long_edge(hopset_16):
    pair = hopset_16.pairs[0]
    assert classify_edge(hopset_16, *pair.key) == (2, EdgeKind.LONG)
    assert owner_of(hopset_16, pair.key) == pair.key


def test_expunging_keeps_hop_expansion(hopset_16):
    h = random_hopset(hopset_16, 15, seed=2)
    assert len(h) == 15
    expunged = expunge_short(hopset_16, h)
    assert expunged.long_only
    assert len(expunged) <= 2 * len(h)
    report = check_hop_expansion(hopset_16, h, expunged)
    assert report.passed, report.claims
    assert report.details["hop_limit"] == 5


def test_unowned_penalty_needs_long_edges(hopset_16):
    empty = make_hopset(hopset_16, [])
    report = certify_unowned_penalty(hopset_16, empty)
    assert report.passed
    assert report.claims[0].checked == 32
    short = make_hopset(hopset_16, [(e.u, e.v) for e in hopset_16.graph.edges[:1]])
    with pytest.raises(InputError):
        certify_unowned_penalty(hopset_16, short)


def test_hopset_on_a_plain_graph():
    g = path_graph(5)
    direct = make_hopset(g, [(0, 4)])
    assert direct.edges[0].weight == 4
    assert check_hopset(g, direct, beta=4, eps=0).passed
    every = make_hopset(g, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    assert check_hopset(g, every, beta=1, eps=0).passed
    assert not check_hopset(g, make_hopset(g, []), beta=1, eps=0.5).passed


def test_spanner_instances_are_rejected(spanner_small):
    with pytest.raises(InputError):
        classify_edge(spanner_small, *spanner_small.pairs[0].key)


@pytest.mark.slow
def test_nine_hops_cost_the_penalty_at_ell_4():
    inst = build_Hk(784, 4, 2, Flavor.HOPSET, seed=1)
    assert (inst.distance, inst.penalty) == (84, 10)
    by_source: dict[int, list[int]] = {}
    for pair in inst.pairs:
        by_source.setdefault(pair.source, []).append(pair.target)
    for s, targets in by_source.items():
        limited = hop_limited_distances(inst.graph, s, 9)
        assert all(limited[t] >= 94 for t in targets), s
