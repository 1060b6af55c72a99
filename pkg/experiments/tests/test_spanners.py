import pytest

from spanlab.audit import stretch_report
from spanlab.common.classes import Edge, Graph
from spanlab.common.constants import UNCLUSTERED
from spanlab.common.errors import InputError
from spanlab.common.graph_core import diameter
from spanlab.common.toy import path_graph
from spanlab.upper_bounds.path_buying import verify_path_buying
from spanlab.upper_bounds.spanners import (
    build_new_spanner,
    build_tz_emulator,
    build_tz_spanner,
    sample_hierarchy,
    spanner_level,
)


def test_hierarchy_validation(er_64):
    with pytest.raises(InputError):
        sample_hierarchy(er_64, (0.5, 0.2), seed=0)
    with pytest.raises(InputError):
        sample_hierarchy(er_64, (1.0, 0.2, 0.4), seed=0)
    with pytest.raises(InputError):
        sample_hierarchy(er_64, (1.0, 0.0), seed=0)


def test_hierarchy_is_nested(er_64):
    h = sample_hierarchy(er_64, (1.0, 0.5, 0.1), seed=3)
    assert h.k == 2
    assert h.levels[0] == frozenset(range(64))
    assert h.levels[2] <= h.levels[1] <= h.levels[0]
    assert h.levels[2]
    for i in (1, 2):
        for v in h.levels[i]:
            assert h.pivots[i][v] == v
            assert h.ball(er_64, i, v) == {}


def test_pivot_paths_end_at_the_pivot():
    g = path_graph(6)
    h = sample_hierarchy(g, (1.0, 1.0), seed=0)
    assert h.pivot_path(1, 3) == (3,)
    one = sample_hierarchy(g, (1.0,), seed=0)
    assert one.k == 0
    assert one.ball(g, 1, 0) == {v: v for v in range(6)}


def test_spanner_level_zero_keeps_adjacent_pivots():
    g = path_graph(4)
    h = sample_hierarchy(g, (1.0, 1.0), seed=0)
    assert spanner_level(g, h, 0, 1) == []


def test_tz_emulator_never_contracts(er_64):
    result = build_tz_emulator(er_64, 2, seed=0)
    assert result.is_emulator
    report = stretch_report(er_64, result, k=2)
    assert report.passed
    assert set(result.counts()) <= {"E0", "E1", "E2"}


def test_k0_emulator_is_exact(er_64):
    result = build_tz_emulator(er_64, 0, seed=0)
    assert stretch_report(er_64, result).max_additive == 0


def test_tz_spanner_is_a_subgraph(er_64):
    r = max(2, diameter(er_64))
    result = build_tz_spanner(er_64, 2, r, seed=0)
    assert result.graph.edge_keys <= er_64.edge_keys
    assert stretch_report(er_64, result, k=2, max_distance=r**2).passed


def test_new_spanner_buys_paths(er_64):
    r = max(2, diameter(er_64))
    result = build_new_spanner(er_64, 2, r, seed=0)
    assert result.graph.edge_keys <= er_64.edge_keys
    assert result.ledger is not None
    assert verify_path_buying(er_64, result.graph, result.ledger).passed
    assert stretch_report(er_64, result, k=2, max_distance=r**2).passed
    assert all(tag in {"E0'", "E~1", "E2'"} for tag in result.provenance)


def test_builders_are_deterministic(er_64):
    a = build_new_spanner(er_64, 2, 4, seed=7)
    b = build_new_spanner(er_64, 2, 4, seed=7)
    assert a.edges == b.edges
    assert a.hierarchy.seed == b.hierarchy.seed


def test_builders_reject_bad_input(er_64):
    directed = Graph(3, (Edge(0, 1), Edge(1, 2)), directed=True)
    with pytest.raises(InputError):
        build_tz_emulator(directed, 2, seed=0)
    with pytest.raises(InputError):
        build_new_spanner(er_64, 1, 4, seed=0)
    with pytest.raises(InputError):
        build_tz_spanner(er_64, 2, 1, seed=0)


def test_unreached_vertices_have_no_pivot():
    g = Graph(4, (Edge(0, 1),))
    h = sample_hierarchy(g, (1.0, 0.5), seed=0)
    for u in range(4):
        if h.pivots[1][u] == UNCLUSTERED:
            assert h.ball(g, 1, u) == h.ball(g, 2, u)
