import pytest

from spanlab.audit import certify_instance
from spanlab.common.classes import Edge, Graph, edge_key
from spanlab.common.errors import InputError
from spanlab.common.utils import load_json, read_edge_list, write_edge_list
from spanlab.lower_bounds.instances import build_dotB
from spanlab.lower_bounds.io import (
    MANIFEST_FILE,
    PHI_FILE,
    load_instance,
    load_kfold,
    save_instance,
    save_kfold,
    save_layered,
)
from spanlab.lower_bounds.shortcut import build_kfold


def test_edge_list_keeps_weights_and_labels(tmp_path):
    g = Graph(3, (Edge(2, 0, 4, 7), Edge(0, 1, 1, None)), directed=True)
    write_edge_list(g, tmp_path / "g.el")
    back = read_edge_list(tmp_path / "g.el")
    assert back.edges == g.edges
    assert back.directed


def test_edge_list_header_is_checked(tmp_path):
    (tmp_path / "bad.el").write_text("3 2 0 0\n0 1\n")
    with pytest.raises(InputError):
        read_edge_list(tmp_path / "bad.el")


def test_hierarchy_directory(tmp_path, spanner_36):
    save_instance(spanner_36, tmp_path / "hk")
    loaded = load_instance(tmp_path / "hk")
    assert loaded.graph.edges == spanner_36.graph.edges
    assert loaded.pairs == spanner_36.pairs
    assert loaded.critical_map == spanner_36.critical_map
    assert loaded.levels == spanner_36.levels
    assert loaded.metadata == spanner_36.metadata
    manifest = load_json(tmp_path / "hk" / MANIFEST_FILE)
    assert manifest["d_k"] == 15
    assert not (tmp_path / "hk" / PHI_FILE).exists()


def test_loaded_instance_still_certifies(tmp_path, spanner_small):
    save_instance(spanner_small, tmp_path / "small")
    assert certify_instance(load_instance(tmp_path / "small")).passed


def test_girth_directory_has_phi(tmp_path, girth_gamma1):
    save_instance(girth_gamma1, tmp_path / "girth")
    phi = load_json(tmp_path / "girth" / PHI_FILE)
    assert len(phi) == len(girth_gamma1.pairs)


def test_kfold_directory(tmp_path):
    inst = build_kfold(27, 2, 3)
    save_kfold(inst, tmp_path / "kfold")
    assert load_kfold(tmp_path / "kfold").graph.edges == inst.graph.edges
    with pytest.raises(InputError):
        load_instance(tmp_path / "kfold")


def test_kfold_graph_must_match_manifest(tmp_path):
    inst = build_kfold(27, 2, 3)
    save_kfold(inst, tmp_path / "kfold")
    first = inst.graph.edges[0]
    tampered = inst.graph.without({edge_key(first.u, first.v, inst.graph.directed)})
    write_edge_list(tampered, tmp_path / "kfold" / "graph.el")
    with pytest.raises(InputError):
        load_kfold(tmp_path / "kfold")


def test_layered_manifest(tmp_path):
    save_layered(build_dotB(6, 2), tmp_path / "dotb", "dotb")
    manifest = load_json(tmp_path / "dotb" / MANIFEST_FILE)
    assert manifest["kind"] == "dotb"
    assert manifest["pair_count"] == 12
    assert manifest["xi"] == [3.0]
