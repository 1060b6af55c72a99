import pytest

from spanlab.common.classes import Flavor
from spanlab.common.errors import InputError
from spanlab.common.graph_core import count_shortest_paths
from spanlab.lower_bounds.instances import (
    build_ddotB,
    build_dotB,
    build_Hk,
    critical_edges,
    expected_pair_count,
    family_member,
    hierarchy_distance,
    hierarchy_penalty,
)


def test_dotb_shape_and_unique_paths():
    inst = build_dotB(6, 2)
    assert inst.label_sets == ((1, 2),)
    assert inst.graph.vertex_count == 18
    assert inst.graph.edge_count == 24
    assert len(inst.pairs) == 12
    assert inst.distance == 2
    for pair in inst.pairs:
        assert count_shortest_paths(inst.graph, pair.source, pair.target) == (2, 1)


def test_ddotb_alternates_factors():
    inst = build_ddotB(6, 6, 2)
    assert inst.graph.vertex_count == 5 * 36
    assert len(inst.pairs) == 36 * 4
    assert inst.distance == 4
    for pair in inst.pairs[:10]:
        assert pair.length == 4


def test_dotb_rejects_labels_out_of_range():
    with pytest.raises(InputError):
        build_dotB(6, 2, labels=[1, 4])


@pytest.mark.parametrize(
    "k, ell, flavor, gamma, expected",
    [
        (2, 2, Flavor.SPANNER, 1, 15),
        (2, 3, Flavor.SPANNER, 1, 35),
        (3, 2, Flavor.SPANNER, 1, 81),
        (2, 4, Flavor.HOPSET, 1, 84),
        (1, 4, Flavor.HOPSET, 1, 4),
        (2, 2, Flavor.GIRTH, 2, 30),
    ],
)
def test_hierarchy_distance(k, ell, flavor, gamma, expected):
    assert hierarchy_distance(k, ell, flavor, gamma) == expected


def test_hierarchy_penalty():
    assert hierarchy_penalty(2, 2, Flavor.SPANNER) == 6
    assert hierarchy_penalty(2, 4, Flavor.HOPSET) == 10
    assert hierarchy_penalty(3, 2, Flavor.GIRTH) == 18


def test_small_spanner_instance(spanner_small):
    assert len(spanner_small.pairs) == 9
    assert spanner_small.distance == 15
    assert spanner_small.penalty == 6
    assert all(pair.length == 15 for pair in spanner_small.pairs)


def test_pair_counts_per_level(spanner_36):
    assert spanner_36.metadata.level_pair_counts == (4, 144)
    assert spanner_36.metadata.pair_count == 144
    assert spanner_36.levels[1].labels == ((1, 2), (1, 2))
    assert spanner_36.port_permutations[0] == ()
    assert len(spanner_36.port_permutations[1]) == 2


def test_expected_pair_count_matches_shared_map():
    keys = [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert expected_pair_count(36, keys, 2, 2, 2, 2, shared=True) == 144
    assert expected_pair_count(36, keys, 2, 2, 2, 2, shared=False) == 144


def test_critical_edges_and_family(spanner_36, hopset_16):
    key = spanner_36.pairs[0].key
    assert len(critical_edges(spanner_36, key)) == 3
    everything = [pair.key for pair in spanner_36.pairs]
    assert family_member(spanner_36, everything) is spanner_36.graph
    assert family_member(spanner_36, []).edge_count == spanner_36.graph.edge_count - 3 * 144
    with pytest.raises(InputError):
        critical_edges(hopset_16, hopset_16.pairs[0].key)
    with pytest.raises(InputError):
        critical_edges(spanner_36, (0, 0))


def test_same_seed_same_instance():
    a = build_Hk(36, 2, 2, Flavor.SPANNER, seed=5)
    b = build_Hk(36, 2, 2, Flavor.SPANNER, seed=5)
    assert a.graph.edges == b.graph.edges
    assert [pair.key for pair in a.pairs] == [pair.key for pair in b.pairs]


def test_generator_rejects_bad_parameters():
    with pytest.raises(InputError):
        build_Hk(3, 2, 2, Flavor.SPANNER, seed=0)
    with pytest.raises(InputError):
        build_Hk(36, 1, 2, Flavor.SPANNER, seed=0)
    with pytest.raises(InputError):
        build_Hk(36, 2, 2, Flavor.GIRTH, seed=0)
