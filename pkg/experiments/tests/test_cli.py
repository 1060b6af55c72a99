import json

import pytest

from spanlab.cli import MANIFEST_NAME, ExperimentConfig, ExperimentStep, main, run_experiment
from spanlab.common.classes import Edge, Graph
from spanlab.common.constants import AUDIT_SOURCE_LIMIT
from spanlab.common.toy import erdos_renyi
from spanlab.common.utils import load_json, read_edge_list, write_edge_list
from spanlab.lower_bounds.io import save_instance


def test_exponent_table_as_json(capsys):
    assert main(["table", "exponents", "--k", "2", "--variant", "tz_spanner", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["h"][1] == "4/7"


def test_generate_then_certify(tmp_path, capsys):
    inst = tmp_path / "hk9"
    assert main(["gen", "hk", "--k", "2", "--ell", "2", "--p", "9", "--seed", "1", "-o", str(inst)]) == 0
    assert (inst / "graph.el").exists()
    assert main(["audit", "certify", str(inst), "-o", str(tmp_path / "cert.json")]) == 0
    assert load_json(tmp_path / "cert.json")["claims"]
    assert capsys.readouterr().out.strip().endswith("pass")


def test_randomized_commands_need_a_seed(tmp_path):
    with pytest.raises(SystemExit):
        main(["gen", "er", "--n", "10", "--prob", "0.5", "-o", str(tmp_path / "g.el")])


def test_bad_input_exits_2(tmp_path):
    argv = ["gen", "hk", "--k", "2", "--ell", "2", "--p", "3", "--seed", "0", "-o", str(tmp_path / "x")]
    assert main(argv) == 2


def test_hopset_lower_bound(capsys):
    assert main(["hopset", "lb-params", "--k", "2", "--eps", "0.01", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert (payload["ell"], payload["beta_bound"]) == (33, 1024)


def _config() -> ExperimentConfig:
    return ExperimentConfig(
        steps=[
            ExperimentStep(["gen", "hk"], {"k": 2, "ell": 2, "p": 9, "seed": 1}, output="hk9"),
            ExperimentStep(["audit", "certify"], inputs=["hk9"], output="cert.json"),
        ],
        output_dir="out",
    )


def test_run_writes_a_reproducible_manifest(tmp_path):
    status, root = run_experiment(_config(), tmp_path)
    assert status == 0
    first = load_json(root / MANIFEST_NAME)
    assert first["halted_at"] is None
    assert [step["exit_code"] for step in first["steps"]] == [0, 0]
    assert "cert.json" in first["artifacts"]

    run_experiment(_config(), tmp_path)
    assert load_json(root / MANIFEST_NAME)["artifacts"] == first["artifacts"]


def test_run_halts_on_a_missing_input(tmp_path):
    config = ExperimentConfig(
        steps=[ExperimentStep(["audit", "certify"], inputs=["nowhere"])], output_dir="out"
    )
    status, root = run_experiment(config, tmp_path)
    assert status == 2
    assert load_json(root / MANIFEST_NAME)["halted_at"] == 0


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "experiments.json"
    path.write_text(json.dumps(_config().to_dict()))
    assert main(["run", str(path)]) == 0
    assert (tmp_path / "out" / MANIFEST_NAME).exists()


def test_generated_edge_list_is_left_intact(tmp_path, capsys):
    path = tmp_path / "g.el"
    assert main(["gen", "er", "--n", "30", "--prob", "0.2", "--seed", "4", "-o", str(path)]) == 0
    assert read_edge_list(path).edges == erdos_renyi(30, 0.2, 4).edges
    assert capsys.readouterr().out.strip() == f"vertices=30 edges={erdos_renyi(30, 0.2, 4).edge_count}"


def test_generated_instance_directory_keeps_its_manifest(tmp_path, capsys):
    inst = tmp_path / "hk9"
    argv = ["gen", "hk", "--k", "2", "--ell", "2", "--p", "9", "--seed", "1", "-o", str(inst), "--json"]
    assert main(argv) == 0
    assert json.loads(capsys.readouterr().out)["pair_count"] == 9
    assert load_json(inst / "manifest.json")["d_k"] == 15


def test_large_stretch_audit_needs_a_seed(tmp_path):
    path = tmp_path / "big.el"
    write_edge_list(Graph(AUDIT_SOURCE_LIMIT + 1, ()), path)
    assert main(["audit", "stretch", str(path), str(path)]) == 2


def test_hopset_file_may_be_positional(tmp_path, capsys, hopset_16):
    save_instance(hopset_16, tmp_path / "inst")
    pairs = [pair.key for pair in hopset_16.pairs[:3]]
    hs = tmp_path / "hopset.el"
    write_edge_list(Graph(hopset_16.graph.vertex_count, tuple(Edge(u, v) for u, v in pairs)), hs)
    check = ["hopset", "check", "--beta", "10", "--eps", "0.5", "--json", str(tmp_path / "inst")]
    first = main(check + [str(hs)])
    positional = capsys.readouterr().out
    assert main(check + ["--hopset", str(hs)]) == first
    assert capsys.readouterr().out == positional
