import json
import math
import os
from pathlib import Path
from statistics import mean

from loguru import logger

from spanlab.audit import fit_loglog_slope, stretch_report
from spanlab.cli import ExperimentConfig, run_experiment
from spanlab.common.graph_core import diameter
from spanlab.common.toy import erdos_renyi
from spanlab.upper_bounds.exponents import (
    closed_form_fail,
    size_exponent,
    succ_fail_table,
    succ_upper,
)
from spanlab.upper_bounds.spanners import build_new_spanner, build_tz_emulator, build_tz_spanner

CURRENT_FILE_DIR = Path(os.path.dirname(os.path.abspath(__file__)))

SEEDS = range(10)


def get_config_from_json(json_file: Path) -> ExperimentConfig:
    with open(json_file, "r", encoding="utf-8") as f:
        data = json.load(f)

    assert isinstance(data, dict), f"Expected a config object, got {type(data)}"
    assert "steps" in data, "The config must have a 'steps' field"
    assert isinstance(
        data["steps"], list
    ), f"Expected 'steps' to be a list, got {type(data['steps'])}"
    for item in data["steps"]:
        assert isinstance(item, dict), f"Expected each step to be a dict, got {type(item)}"
        assert "command" in item, "Each step must have a 'command' field"
        assert (
            len(item["command"]) >= 1
        ), f"Expected 'command' to name a subcommand, got {item['command']}"
        params = item.get("params", {})
        if item["command"][0] in ("spanner", "gen") and item["command"][-1] in (
            "hk",
            "hk-girth",
            "er",
            "tz-emul",
            "tz",
            "new",
            "girth",
        ):
            assert "seed" in params, f"Step {item['command']} draws randomness and needs a 'seed'"

    return ExperimentConfig.from_dict(data)


def upper_bound_stretch() -> dict:
    """TZ emulator, S_TZ(2, diam) and S(2, diam) on ER(256, 0.05)"""
    violations = {"tz-emul": 0, "tz": 0, "new": 0}
    for seed in SEEDS:
        g = erdos_renyi(256, 0.05, seed)
        r = max(2, diameter(g))
        for name, result in (
            ("tz-emul", build_tz_emulator(g, 2, seed)),
            ("tz", build_tz_spanner(g, 2, r, seed)),
            ("new", build_new_spanner(g, 2, r, seed)),
        ):
            report = stretch_report(g, result, k=2)
            violations[name] += sum(1 for row in report.rows if not row.passed)
    return {"violating_rows": violations, "passed": not any(violations.values())}


def path_buying_size() -> dict:
    """mean |E~1| against 8 n q1^2 / q2"""
    sizes, bounds = [], []
    for seed in SEEDS:
        g = erdos_renyi(256, 0.05, seed)
        result = build_new_spanner(g, 2, max(2, diameter(g)), seed)
        q = result.hierarchy.q
        sizes.append(result.counts().get("E~1", 0))
        bounds.append(8 * g.vertex_count * q[1] ** 2 / q[2])
    return {
        "mean_bought": mean(sizes),
        "mean_bound": mean(bounds),
        "passed": mean(sizes) <= mean(bounds),
    }


def succ_fail_closed_forms() -> dict:
    mismatches = []
    for ell in (2, 3, 4, 10):
        table = succ_fail_table(ell, 8)
        for i in range(9):
            if table.fail[i] != closed_form_fail(ell, i):
                mismatches.append({"ell": ell, "i": i, "what": "fail"})
            if table.succ[i] > succ_upper(ell, i):
                mismatches.append({"ell": ell, "i": i, "what": "succ"})
    return {"mismatches": mismatches, "passed": not mismatches}


def size_scaling() -> dict:
    """log-log slope of |TZ emulator| over n = 2^8 .. 2^12, mean over seeds"""
    ns = [2**e for e in range(8, 13)]
    sizes = []
    for n in ns:
        prob = min(1.0, 2 * math.log(n) / n)
        sizes.append(mean(build_tz_emulator(erdos_renyi(n, prob, seed), 2, seed).size for seed in SEEDS))
    slope = fit_loglog_slope([float(n) for n in ns], sizes)
    ceiling = float(size_exponent(2, "tz_emulator")) + 0.1
    return {"ns": ns, "mean_sizes": sizes, "slope": slope, "ceiling": ceiling, "passed": slope <= ceiling}


def main() -> None:
    json_file = CURRENT_FILE_DIR / "experiments.json"
    config = get_config_from_json(json_file)

    status, root = run_experiment(config, CURRENT_FILE_DIR)
    print(f"Config run finished with status {status}, artifacts in {root}")

    results = {"config_status": status}
    for name, row in (
        ("upper_bound_stretch", upper_bound_stretch),
        ("path_buying_size", path_buying_size),
        ("succ_fail_closed_forms", succ_fail_closed_forms),
        ("size_scaling", size_scaling),
    ):
        print(f"Running {name}")
        results[name] = row()
        logger.info(f"{name}: {'pass' if results[name]['passed'] else 'FAIL'}")

    results_file = root / "experiment_results.json"
    with open(results_file, "w+", encoding="utf-8") as f:
        json.dump(results, f, indent=4)


if __name__ == "__main__":
    main()
