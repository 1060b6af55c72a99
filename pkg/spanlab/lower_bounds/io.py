"""
instance directories: graph.el + manifest.json (+ phi.json for girth).
nothing time-dependent goes into a manifest, so reruns hash identically.
"""

from pathlib import Path
from typing import Any

from spanlab.common.classes import (
    DemandPair,
    Flavor,
    HierarchyInstance,
    InstanceMetadata,
    LayeredInstance,
    LevelSpec,
)
from spanlab.common.errors import InputError
from spanlab.common.utils import dump_json, load_json, read_edge_list, write_edge_list
from spanlab.lower_bounds.shortcut import KFoldInstance, build_kfold

GRAPH_FILE = "graph.el"
MANIFEST_FILE = "manifest.json"
PHI_FILE = "phi.json"


def _pair_to_dict(pair: DemandPair) -> dict[str, Any]:
    return {
        "source": pair.source,
        "target": pair.target,
        "signature": list(pair.signature),
        "path": list(pair.path),
    }


def _pair_from_dict(data: dict[str, Any]) -> DemandPair:
    return DemandPair(
        data["source"], data["target"], tuple(data["signature"]), tuple(data["path"])
    )


def _level_from_dict(data: dict[str, Any]) -> LevelSpec:
    return LevelSpec(
        level=data["level"],
        factor_sizes=tuple(data["factor_sizes"]),
        labels=tuple(tuple(labels) for labels in data["labels"]),
        permutations=tuple(tuple(pi) for pi in data["permutations"]),
        pair_count=data["pair_count"],
        expected_pairs=data["expected_pairs"],
        xi=data["xi"],
    )


def _metadata_from_dict(data: dict[str, Any]) -> InstanceMetadata:
    return InstanceMetadata(
        vertex_count=data["vertex_count"],
        edge_count=data["edge_count"],
        pair_count=data["pair_count"],
        distance=data["distance"],
        penalty=data["penalty"],
        p=data["p"],
        attempts=data["attempts"],
        level_pair_counts=tuple(data["level_pair_counts"]),
        level_expected=tuple(data["level_expected"]),
    )


def save_instance(inst: HierarchyInstance, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    write_edge_list(inst.graph, directory / GRAPH_FILE)
    pairs = []
    for pair in inst.pairs:
        entry = _pair_to_dict(pair)
        entry["critical"] = [list(e) for e in inst.critical_map.get(pair.key, ())]
        pairs.append(entry)
    manifest = {
        "kind": "hierarchy",
        "k": inst.k,
        "ell": inst.ell,
        "p": inst.metadata.p,
        "flavor": str(inst.flavor),
        "gamma": inst.gamma,
        "seed": inst.seed,
        "d_k": inst.distance,
        "pair_count": len(inst.pairs),
        "xi": [level.xi for level in inst.levels],
        "metadata": inst.metadata.to_dict(),
        "levels": [level.to_dict() for level in inst.levels],
        "addresses": [[list(token) for token in address] for address in inst.addresses],
        "pairs": pairs,
    }
    dump_json(manifest, directory / MANIFEST_FILE)
    if inst.flavor == Flavor.GIRTH:
        phi = [
            {"pair": list(key), "phi": [list(e) for e in edges]}
            for key, edges in sorted(inst.critical_map.items())
        ]
        dump_json(phi, directory / PHI_FILE)
    return directory


def load_instance(directory: Path) -> HierarchyInstance:
    manifest = load_json(directory / MANIFEST_FILE)
    if manifest.get("kind") != "hierarchy":
        raise InputError(f"{directory} does not hold a hierarchy instance")
    graph = read_edge_list(directory / GRAPH_FILE)
    pairs = tuple(_pair_from_dict(entry) for entry in manifest["pairs"])
    critical = {
        (entry["source"], entry["target"]): tuple(tuple(e) for e in entry["critical"])
        for entry in manifest["pairs"]
    }
    return HierarchyInstance(
        k=manifest["k"],
        ell=manifest["ell"],
        flavor=Flavor(manifest["flavor"]),
        graph=graph,
        pairs=pairs,
        critical_map=critical,
        seed=manifest["seed"],
        metadata=_metadata_from_dict(manifest["metadata"]),
        levels=tuple(_level_from_dict(level) for level in manifest["levels"]),
        addresses=tuple(
            tuple(tuple(token) for token in address) for address in manifest["addresses"]
        ),
        gamma=manifest["gamma"],
    )


def save_layered(inst: LayeredInstance, directory: Path, kind: str) -> Path:
    """dot-B / double-dot-B products"""
    directory.mkdir(parents=True, exist_ok=True)
    write_edge_list(inst.graph, directory / GRAPH_FILE)
    dump_json(
        {
            "kind": kind,
            "ell": inst.ell,
            "factor_sizes": list(inst.factor_sizes),
            "labels": [list(labels) for labels in inst.label_sets],
            "xi": [size / len(labels) for size, labels in zip(inst.factor_sizes, inst.label_sets)],
            "distance": inst.distance,
            "pair_count": len(inst.pairs),
            "pairs": [_pair_to_dict(pair) for pair in inst.pairs],
        },
        directory / MANIFEST_FILE,
    )
    return directory


def save_kfold(inst: KFoldInstance, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    write_edge_list(inst.graph, directory / GRAPH_FILE)
    dump_json(
        {
            "kind": "kfold",
            "k": inst.k,
            "ell": inst.ell,
            "p": inst.p,
            "requested_p": inst.requested_p,
            "factor_size": inst.factor_size,
            "labels": list(inst.labels),
            "pair_count": len(inst.pairs),
            "pairs": [_pair_to_dict(pair) for pair in inst.pairs],
        },
        directory / MANIFEST_FILE,
    )
    return directory


def load_kfold(directory: Path) -> KFoldInstance:
    """rebuilds from the recorded parameters and checks it matches graph.el"""
    manifest = load_json(directory / MANIFEST_FILE)
    if manifest.get("kind") != "kfold":
        raise InputError(f"{directory} does not hold a k-fold instance")
    inst = build_kfold(manifest["p"], manifest["ell"], manifest["k"])
    stored = read_edge_list(directory / GRAPH_FILE)
    if stored.edges != inst.graph.edges:
        raise InputError(f"{directory / GRAPH_FILE} does not match its manifest")
    return inst
