import pytest

from spanlab.audit import certify_instance
from spanlab.common.constants import UNCLUSTERED
from spanlab.common.errors import InputError
from spanlab.common.graph_core import girth_of, pair_distance
from spanlab.common.toy import cycle_graph, path_graph
from spanlab.lower_bounds.girth import (
    build_Hk_gamma,
    girth_hard_pairs,
    projective_plane_graph,
    verify_hard_pairs,
)
from spanlab.upper_bounds.girth import build_girth_spanner, cluster_around, girth_cluster
from spanlab.upper_bounds.path_buying import verify_path_buying


@pytest.mark.parametrize("q", [2, 3, 4])
def test_projective_planes_have_girth_six(q):
    g = projective_plane_graph(q)
    assert g.vertex_count == 2 * (q * q + q + 1)
    assert girth_of(g) == 6
    degrees = {len(nbrs) for nbrs in g.adjacency}
    assert degrees == {q + 1}


def test_unsupported_order():
    with pytest.raises(InputError):
        projective_plane_graph(6)


def test_hard_pairs_own_their_phi_edge():
    hard = girth_hard_pairs(projective_plane_graph(3), 2, seed=0)
    verify_hard_pairs(hard)
    assert hard.pairs
    assert len(set(hard.phi.values())) == len(hard.pairs)
    for pair in hard.pairs:
        assert pair_distance(hard.host, pair.source, pair.target) == 2


def test_hard_pairs_need_enough_girth():
    with pytest.raises(InputError):
        girth_hard_pairs(cycle_graph(4), 2)


def test_gamma_one_matches_the_spanner_distance(girth_gamma1):
    assert girth_gamma1.distance == 15
    assert len(girth_gamma1.pairs) == 144
    assert certify_instance(girth_gamma1).passed


def test_gamma_two_instance(girth_gamma2):
    assert girth_gamma2.distance == 30
    assert girth_gamma2.penalty == 6
    assert all(pair.length == 30 for pair in girth_gamma2.pairs)
    assert girth_gamma2.levels[1].factor_sizes == (16, 4)
    report = certify_instance(girth_gamma2)
    assert report.passed, report.claims


def test_gamma_without_host():
    with pytest.raises(InputError):
        build_Hk_gamma(64, 2, 2, 3, seed=0)


def test_cluster_around_a_path():
    clustering = cluster_around(path_graph(7), 1, frozenset({3}))
    assert clustering.cluster_of == (
        UNCLUSTERED, UNCLUSTERED, 3, 3, 3, UNCLUSTERED, UNCLUSTERED
    )
    assert clustering.tree_edges == {(2, 3), (3, 4)}
    assert clustering.extra_edges == {(0, 1), (1, 2), (4, 5), (5, 6)}
    assert clustering.edges == {(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)}


def test_clustering_needs_girth():
    with pytest.raises(InputError):
        girth_cluster(cycle_graph(4), 2, 0.5, seed=0)
    with pytest.raises(InputError):
        girth_cluster(path_graph(4), 1, 1.5, seed=0)


def test_girth_spanner_is_a_subgraph_within_target():
    host = projective_plane_graph(3)
    result = build_girth_spanner(host, 2, 2, 4, "spanner", seed=0)
    assert result.graph.edge_keys <= host.edge_keys
    assert result.ledger is not None
    assert result.ledger.target_bound == 4
    assert verify_path_buying(host, result.graph, result.ledger).passed
    assert "E0^gamma" in result.counts()


def test_girth_emulator_and_bad_modes(fano):
    emulator = build_girth_spanner(fano, 2, 1, 2, "emulator", seed=0)
    assert emulator.is_emulator
    assert emulator.r is None
    with pytest.raises(InputError):
        build_girth_spanner(fano, 2, 1, 2, "spanner", seed=0)
    with pytest.raises(InputError):
        build_girth_spanner(fano, 2, 2, 4, "oracle", seed=0)
