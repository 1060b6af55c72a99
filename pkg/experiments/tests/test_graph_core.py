import math

import pytest

from spanlab.common.classes import DistanceMode, Edge, Graph
from spanlab.common.errors import InputError
from spanlab.common.graph_core import (
    canonical_path,
    count_shortest_paths,
    diameter,
    distances,
    girth_of,
    hop_limited_distances,
    nearest_sources,
    pair_distance,
    path_weight,
)
from spanlab.common.toy import complete_graph, cycle_graph, path_graph, star_graph


def shortcut_path() -> Graph:
    """0-1-2-3 plus a heavy chord 0-3"""
    return Graph(4, (Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(0, 3, 5)))


def test_hop_limited_distances_respect_the_budget():
    g = shortcut_path()
    assert hop_limited_distances(g, 0, 1) == [0, 1, math.inf, 5]
    assert hop_limited_distances(g, 0, 2) == [0, 1, 2, 5]
    assert hop_limited_distances(g, 0, 3) == [0, 1, 2, 3]


def test_hop_limited_mode_needs_beta():
    with pytest.raises(InputError):
        distances(shortcut_path(), 0, DistanceMode.HOP_LIMITED)
    with pytest.raises(InputError):
        hop_limited_distances(shortcut_path(), 0, 0)


def test_weighted_distances_use_weights():
    g = shortcut_path()
    assert pair_distance(g, 0, 3) == 3
    assert distances(g, 0, DistanceMode.WEIGHTED).dist == (0, 1, 2, 3)


def test_count_shortest_paths():
    assert count_shortest_paths(cycle_graph(4), 0, 2) == (2, 2)
    assert count_shortest_paths(path_graph(5), 0, 4) == (4, 1)
    disconnected = Graph(3, (Edge(0, 1),))
    assert count_shortest_paths(disconnected, 0, 2) == (math.inf, 0)


def test_canonical_path_takes_smallest_predecessor():
    assert canonical_path(cycle_graph(4), 0, 2) == (0, 1, 2)
    assert canonical_path(Graph(3, (Edge(0, 1),)), 0, 2) is None


def test_path_weight():
    g = shortcut_path()
    assert path_weight(g, (0, 3)) == 5
    assert path_weight(g, (0, 1, 2, 3)) == 3
    assert path_weight(g, (0, 2)) == math.inf


def test_nearest_sources_breaks_ties_by_id():
    owner, dist, parent = nearest_sources(path_graph(5), {0, 4})
    assert owner == [0, 0, 0, 4, 4]
    assert dist == [0, 1, 2, 1, 0]
    assert parent == [-1, 0, 1, 4, -1]


def test_nearest_sources_cutoff():
    owner, dist, _ = nearest_sources(path_graph(5), {0, 4}, cutoff=1)
    assert owner[2] == -1
    assert dist[2] == math.inf


def test_diameter_and_girth():
    assert diameter(path_graph(5)) == 4
    assert girth_of(cycle_graph(5)) == 5
    assert girth_of(path_graph(3)) == math.inf
    assert diameter(star_graph(4)) == 2
    assert girth_of(complete_graph(4)) == 3
    assert girth_of(star_graph(3)) == math.inf


def test_graph_rejects_bad_edges():
    with pytest.raises(InputError):
        Graph(2, (Edge(1, 1),))
    with pytest.raises(InputError):
        Graph(2, (Edge(0, 2),))
    with pytest.raises(InputError):
        Graph(2, (Edge(0, 1, 0),))
    with pytest.raises(InputError):
        pair_distance(path_graph(3), 0, 7)
