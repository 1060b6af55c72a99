"""
spanlab command line. every report can be printed as JSON (--json) or
written to -o; failed checks exit 1, bad input exits 2.
"""

import argparse
import json
import shlex
import sys
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd
from dataclasses_json import dataclass_json
from loguru import logger

from spanlab import set_log_level
from spanlab.audit import (
    certify_instance,
    incompressibility_check,
    spanner_lb_beta,
    stretch_report,
    sublinear_lb_params,
)
from spanlab.common.classes import Flavor, Graph, HierarchyInstance
from spanlab.common.constants import AUDIT_SOURCE_LIMIT
from spanlab.common.errors import SpanlabError
from spanlab.common.graph_core import diameter
from spanlab.common.toy import erdos_renyi
from spanlab.common.utils import dump_json, file_digest, load_json, read_edge_list, write_edge_list
from spanlab.lower_bounds.girth import build_Hk_gamma, projective_plane_graph
from spanlab.lower_bounds.hopsets import (
    Hopset,
    check_hop_expansion,
    check_hopset,
    certify_unowned_penalty,
    expunge_short,
    hopset_lb_params,
    make_hopset,
    random_hopset,
)
from spanlab.lower_bounds.instances import build_ddotB, build_dotB, build_Hk
from spanlab.lower_bounds.io import load_instance, load_kfold, save_instance, save_kfold, save_layered
from spanlab.lower_bounds.shortcut import build_kfold, certify_shortcut
from spanlab.upper_bounds.exponents import Variant, sampling_exponents, size_exponent, succ_fail_table
from spanlab.upper_bounds.girth import build_girth_spanner
from spanlab.upper_bounds.spanners import (
    SpannerResult,
    build_new_spanner,
    build_tz_emulator,
    build_tz_spanner,
)

MANIFEST_NAME = "run_manifest.json"


@dataclass_json
@dataclass(frozen=True)
class ExperimentStep:
    command: list[str]
    """subcommand words, e.g. ["gen", "hk"]"""
    params: dict[str, Any] = field(default_factory=dict)
    """flag name -> value; True becomes a bare flag"""
    inputs: list[str] = field(default_factory=list)
    """positional paths, relative to the output directory"""
    output: str | None = None
    """-o path, relative to the output directory"""


@dataclass_json
@dataclass(frozen=True)
class ExperimentConfig:
    steps: list[ExperimentStep]
    output_dir: str = "outputs"


@dataclass_json
@dataclass
class StepRecord:
    index: int
    command: list[str]
    exit_code: int


@dataclass_json
@dataclass
class RunManifest:
    config: dict[str, Any]
    steps: list[StepRecord] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)
    """relative path -> sha256"""
    halted_at: int | None = None


def _emit(args: argparse.Namespace, payload: Any, passed: bool | None = None) -> int:
    if getattr(args, "output", None) is not None:
        dump_json(payload, Path(args.output))
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    elif passed is not None:
        print("pass" if passed else "FAIL")
    return 0 if passed is None or passed else 1


def _summary(args: argparse.Namespace, payload: dict[str, Any]) -> int:
    """generators: -o names the artifact, so the summary only goes to stdout"""
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(" ".join(f"{key}={value}" for key, value in payload.items()))
    return 0


def _sampling_seed(args: argparse.Namespace, g: Graph) -> int:
    """audits sample sources above AUDIT_SOURCE_LIMIT vertices and then need --seed"""
    if args.seed is None:
        if g.vertex_count > AUDIT_SOURCE_LIMIT:
            raise SpanlabError(
                f"{g.vertex_count} vertices is past the exhaustive limit {AUDIT_SOURCE_LIMIT}, pass --seed"
            )
        return 0
    return args.seed


def _out(args: argparse.Namespace) -> Path:
    if args.output is None:
        raise SpanlabError("this command needs -o")
    return Path(args.output)


# gen


def _gen_dotb(args: argparse.Namespace) -> int:
    inst = build_dotB(args.p, args.ell)
    save_layered(inst, _out(args), "dotb")
    return _summary(args, {"pairs": len(inst.pairs), "distance": inst.distance})


def _gen_ddotb(args: argparse.Namespace) -> int:
    inst = build_ddotB(args.p, args.p2 or args.p, args.ell)
    save_layered(inst, _out(args), "ddotb")
    return _summary(args, {"pairs": len(inst.pairs), "distance": inst.distance})


def _gen_hk(args: argparse.Namespace) -> int:
    inst = build_Hk(args.p, args.ell, args.k, args.flavor, args.seed)
    save_instance(inst, _out(args))
    return _summary(args, inst.metadata.to_dict())


def _gen_hk_girth(args: argparse.Namespace) -> int:
    inst = build_Hk_gamma(args.p, args.ell, args.k, args.gamma, args.seed)
    save_instance(inst, _out(args))
    return _summary(args, inst.metadata.to_dict())


def _gen_kfold(args: argparse.Namespace) -> int:
    inst = build_kfold(args.p, args.ell, args.k)
    save_kfold(inst, _out(args))
    return _summary(args, {"p": inst.p, "pairs": len(inst.pairs), "distance": inst.distance})


def _gen_er(args: argparse.Namespace) -> int:
    g = erdos_renyi(args.n, args.prob, args.seed)
    write_edge_list(g, _out(args))
    return _summary(args, {"vertices": g.vertex_count, "edges": g.edge_count})


def _gen_pg(args: argparse.Namespace) -> int:
    g = projective_plane_graph(args.q)
    write_edge_list(g, _out(args))
    return _summary(args, {"vertices": g.vertex_count, "edges": g.edge_count})


# spanner


def _spanner_summary(args: argparse.Namespace, g: Graph, result: SpannerResult) -> int:
    if args.output is not None:
        write_edge_list(result.graph, Path(args.output))
    if args.ledger is not None and result.ledger is not None:
        dump_json(result.ledger.to_dict(), Path(args.ledger))
    payload: dict[str, Any] = {
        "variant": str(result.variant),
        "k": result.k,
        "r": result.r,
        "edges": result.size,
        "by_level": result.counts(),
        "seed": result.hierarchy.seed,
    }
    passed = None
    if args.csv is not None or args.json:
        max_d = None if result.is_emulator or result.r is None else result.r**result.k
        report = stretch_report(g, result, k=result.k, gamma=result.gamma, seed=args.seed, max_distance=max_d)
        if args.csv is not None:
            report.to_csv(Path(args.csv))
        payload["stretch"] = report.to_dict()
        passed = report.passed
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(f"{result.variant}: {result.size} edges {result.counts()}")
    return 0 if passed is None or passed else 1


def _default_r(g: Graph, r: int | None) -> int:
    return r if r is not None else max(2, diameter(g))


def _spanner(args: argparse.Namespace) -> int:
    g = read_edge_list(Path(args.graph))
    match args.algo:
        case "tz-emul":
            result = build_tz_emulator(g, args.k, args.seed)
        case "tz":
            result = build_tz_spanner(g, args.k, _default_r(g, args.r), args.seed)
        case "new":
            result = build_new_spanner(g, args.k, _default_r(g, args.r), args.seed)
        case _:
            result = build_girth_spanner(
                g, args.gamma, args.k, _default_r(g, args.r), args.mode, args.seed
            )
    return _spanner_summary(args, g, result)


# hopset


def _load_hopset(args: argparse.Namespace, inst: HierarchyInstance) -> Hopset:
    path = args.hopset or args.hopset_file
    if path is not None:
        edges = read_edge_list(Path(path)).edges
        return make_hopset(inst, sorted({(e.u, e.v) for e in edges}))
    if args.size:
        if args.seed is None:
            raise SpanlabError("a random hopset needs --seed")
        return random_hopset(inst, args.size, args.seed)
    return make_hopset(inst, [])


def _hopset_check(args: argparse.Namespace) -> int:
    inst = load_instance(Path(args.instance))
    seed = _sampling_seed(args, inst.graph)
    h = _load_hopset(args, inst)
    result = check_hopset(inst, h, args.beta, args.eps, seed=seed)
    return _emit(args, result.to_dict(), result.passed)


def _hopset_expunge(args: argparse.Namespace) -> int:
    inst = load_instance(Path(args.instance))
    h = _load_hopset(args, inst)
    expunged = expunge_short(inst, h)
    if args.edges is not None:
        write_edge_list(Graph(inst.graph.vertex_count, expunged.edges), Path(args.edges))
    expansion = check_hop_expansion(inst, h, expunged)
    penalty = certify_unowned_penalty(inst, expunged)
    payload = {
        "hopset": len(h),
        "expunged": len(expunged),
        "expansion": expansion.to_dict(),
        "penalty": penalty.to_dict(),
    }
    return _emit(args, payload, expansion.passed and penalty.passed)


def _hopset_lb(args: argparse.Namespace) -> int:
    return _emit(args, hopset_lb_params(args.k, args.eps).to_dict())


# shortcut


def _shortcut_certify(args: argparse.Namespace) -> int:
    inst = load_kfold(Path(args.instance))
    shortcuts = []
    if args.shortcuts is not None:
        shortcuts = [(e.u, e.v) for e in read_edge_list(Path(args.shortcuts)).edges]
    report = certify_shortcut(inst, shortcuts)
    return _emit(args, report.to_dict(), report.passed)


# audit


def _audit_certify(args: argparse.Namespace) -> int:
    report = certify_instance(load_instance(Path(args.instance)))
    return _emit(args, report.to_dict(), report.passed)


def _audit_stretch(args: argparse.Namespace) -> int:
    base = read_edge_list(Path(args.base))
    cand = read_edge_list(Path(args.candidate))
    seed = _sampling_seed(args, base)
    report = stretch_report(base, cand, k=args.k, gamma=args.gamma, seed=seed)
    if args.csv is not None:
        report.to_csv(Path(args.csv))
    if not args.json and args.output is None:
        print(report.to_frame().to_string(index=False))
    return _emit(args, report.to_dict(), report.passed)


def _audit_incompress(args: argparse.Namespace) -> int:
    report = incompressibility_check(load_instance(Path(args.instance)))
    return _emit(args, report.to_dict(), report.passed)


def _audit_lb(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {}
    if args.eps is not None:
        payload["spanner"] = spanner_lb_beta(args.k, args.eps).to_dict()
    if args.ell is not None:
        payload["sublinear"] = sublinear_lb_params(args.k, args.ell).to_dict()
    if not payload:
        raise SpanlabError("audit lb-params needs --eps and/or --ell")
    return _emit(args, payload)


# table


def _table_succfail(args: argparse.Namespace) -> int:
    table = succ_fail_table(args.ell, args.i_max, args.gamma)
    frame = pd.DataFrame(
        {"i": range(table.i_max + 1), "succ": table.succ, "fail": table.fail}
    )
    if args.csv is not None:
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(args.csv, index=False)
    if not args.json:
        print(frame.to_string(index=False))
    return _emit(args, table.to_dict())


def _table_exponents(args: argparse.Namespace) -> int:
    exps = sampling_exponents(args.k, args.variant, args.gamma)
    payload = {
        "variant": str(exps.variant),
        "k": exps.k,
        "gamma": exps.gamma,
        "g": [str(x) for x in exps.g],
        "h": [str(x) for x in exps.h],
        "size_exponent": str(size_exponent(args.k, args.variant, args.gamma)),
    }
    if not args.json and args.output is None:
        for key in ("g", "h", "size_exponent"):
            print(f"{key}: {payload[key]}")
        return 0
    return _emit(args, payload)


# run


PATH_PARAMS = frozenset({"csv", "ledger", "hopset", "shortcuts", "edges"})
"""step params that name files, resolved against the output directory"""


def _step_argv(step: ExperimentStep, root: Path) -> list[str]:
    argv = list(step.command)
    for name, value in sorted(step.params.items()):
        flag = "--" + name.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif name in PATH_PARAMS:
            argv += [flag, str(root / value)]
        elif value is not False and value is not None:
            argv += [flag, str(value)]
    if step.output is not None:
        argv += ["-o", str(root / step.output)]
    argv += [str(root / path) for path in step.inputs]
    return argv


def run_experiment(config: ExperimentConfig, base_dir: Path | None = None) -> tuple[int, Path]:
    """
    runs the steps in order and writes run_manifest.json with a sha256 per
    artifact. stops at the first failing step.
    """
    root = (base_dir or Path.cwd()) / config.output_dir
    root.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config.to_dict())
    status = 0
    for index, step in enumerate(config.steps):
        missing = [path for path in step.inputs if not (root / path).exists()]
        if missing:
            logger.error(f"step {index} is missing inputs {missing}")
            manifest.halted_at, status = index, 2
            break
        argv = _step_argv(step, root)
        logger.info(f"step {index}: spanlab {shlex.join(argv)}")
        code = main(argv)
        manifest.steps.append(StepRecord(index, list(step.command), code))
        if code != 0:
            logger.error(f"step {index} ({' '.join(step.command)}) exited {code}")
            manifest.halted_at, status = index, code
            break
    manifest.artifacts = {
        str(path.relative_to(root)): file_digest(path)
        for path in sorted(root.rglob("*"))
        if path.is_file() and path.name != MANIFEST_NAME
    }
    dump_json(manifest.to_dict(), root / MANIFEST_NAME)
    return status, root


def _run(args: argparse.Namespace) -> int:
    path = Path(args.config)
    config = ExperimentConfig.from_dict(load_json(path))
    status, root = run_experiment(config, path.parent)
    print(f"artifacts in {root}")
    return status


# parser


def _add(
    sub: "argparse._SubParsersAction[argparse.ArgumentParser]",
    name: str,
    func: Callable[[argparse.Namespace], int],
    help_text: str,
) -> argparse.ArgumentParser:
    parser = sub.add_parser(name, help=help_text)
    parser.set_defaults(func=func)
    parser.add_argument("-o", "--output", default=None, help="artifact or report path")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanlab", description="sublinear additive spanners and their lower-bound instances"
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    groups = parser.add_subparsers(dest="group", required=True)

    gen = groups.add_parser("gen", help="generate graphs and instances").add_subparsers(
        dest="what", required=True
    )
    p = _add(gen, "dotb", _gen_dotb, "dot-B[p] with an average-free label set")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p = _add(gen, "ddotb", _gen_ddotb, "double-dot-B[p1, p2]")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--p2", type=int, default=None)
    p.add_argument("--ell", type=int, required=True)
    p = _add(gen, "hk", _gen_hk, "spanner or hopset flavor H_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--flavor", choices=[Flavor.SPANNER, Flavor.HOPSET], default=Flavor.SPANNER)
    p.add_argument("--seed", type=int, required=True)
    p = _add(gen, "hk-girth", _gen_hk_girth, "girth flavor H_k^gamma")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p = _add(gen, "kfold", _gen_kfold, "k-fold product digraph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p = _add(gen, "er", _gen_er, "Erdos-Renyi edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prob", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p = _add(gen, "pg", _gen_pg, "projective-plane incidence graph")
    p.add_argument("--q", type=int, required=True)

    spanner = groups.add_parser("spanner", help="build an emulator or spanner").add_subparsers(
        dest="algo", required=True
    )
    for algo, help_text in (
        ("tz-emul", "Thorup-Zwick emulator"),
        ("tz", "S_TZ(k, r)"),
        ("new", "S(k, r) with path buying"),
        ("girth", "girth emulator or spanner"),
    ):
        p = _add(spanner, algo, _spanner, help_text)
        p.add_argument("graph")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--r", type=int, default=None, help="defaults to max(2, diameter)")
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--csv", default=None, help="stretch report CSV")
        p.add_argument("--ledger", default=None, help="path-buying ledger JSON")
        if algo == "girth":
            p.add_argument("--gamma", type=int, required=True)
            p.add_argument("--mode", choices=["emulator", "spanner"], default="emulator")

    hopset = groups.add_parser("hopset", help="hopset checks").add_subparsers(
        dest="action", required=True
    )
    for action, func in (("check", _hopset_check), ("expunge", _hopset_expunge)):
        p = _add(hopset, action, func, f"hopset {action}")
        p.add_argument("instance")
        p.add_argument(
            "hopset_file", nargs="?", default=None, metavar="hopset", help="hopset edge list"
        )
        p.add_argument("--hopset", default=None, help="hopset edge list")
        p.add_argument("--size", type=int, default=0, help="random hopset size")
        p.add_argument("--seed", type=int, default=None)
        if action == "check":
            p.add_argument("--beta", type=int, required=True)
            p.add_argument("--eps", type=float, required=True)
        else:
            p.add_argument("--edges", default=None, help="write the expunged hopset here")
    p = _add(hopset, "lb-params", _hopset_lb, "beta lower bound for (k, eps)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)

    shortcut = groups.add_parser("shortcut", help="shortcut-set instances").add_subparsers(
        dest="action", required=True
    )
    p = _add(shortcut, "gen", _gen_kfold, "k-fold product digraph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p = _add(shortcut, "certify", _shortcut_certify, "certify a shortcut set")
    p.add_argument("instance")
    p.add_argument("--shortcuts", default=None, help="shortcut edge list")

    audit = groups.add_parser("audit", help="certifications").add_subparsers(
        dest="action", required=True
    )
    p = _add(audit, "certify", _audit_certify, "certify a hierarchy instance")
    p.add_argument("instance")
    p = _add(audit, "stretch", _audit_stretch, "stretch report of candidate vs base")
    p.add_argument("base")
    p.add_argument("candidate")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None)
    p = _add(audit, "incompress", _audit_incompress, "exhaustive family sweep")
    p.add_argument("instance")
    p = _add(audit, "lb-params", _audit_lb, "spanner lower-bound calculators")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--ell", type=int, default=None)

    table = groups.add_parser("table", help="closed-form tables").add_subparsers(
        dest="action", required=True
    )
    p = _add(table, "succfail", _table_succfail, "Succ/Fail table")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--i-max", type=int, default=8)
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--csv", default=None)
    p = _add(table, "exponents", _table_exponents, "sampling exponents")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.NEW_SPANNER.value)
    p.add_argument("--gamma", type=int, default=1)

    run = groups.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.set_defaults(func=_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_log_level("DEBUG" if args.verbose > 1 else "INFO")
    try:
        return args.func(args)
    except SpanlabError as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
