import dataclasses
import os
import time

import numpy as np
import wandb

import constants
import visualization as vis
from engine import Engine


@dataclasses.dataclass(frozen=True)
class Benchmark:
    program: str
    goals: dict # equality mode -> goal template, {n} is the scaled size
    size: int
    # Modes expected to find a value, None compares search spaces instead
    succeeds: tuple = None

    def goal(self, mode, n):
        return self.goals[mode].format(n=n)


BENCHMARKS = {
    "last": Benchmark("last.fl", {
        "==": "lastNatEq (map (inc 0) (upTo {n}))",
        "=:=": "lastNat (map (inc 0) (upTo {n}))",
        "=:<=": "lastNat' (map (inc 0) (upTo {n}))",
    }, 100),
    "half": Benchmark("half.fl", {
        "==": "halfEq (add {n} {n})",
        "=:=": "half (add {n} {n})",
        "=:<=": "half' (add {n} {n})",
    }, 20),
    "palindrome": Benchmark("palindrome.fl", {
        "==": "palEq (mirrored {n})",
        "=:=": "pal (mirrored {n})",
        "=:<=": "pal' (mirrored {n})",
    }, 6),
    "fstdup": Benchmark("fstdup.fl", {
        "==": "fstDupEq (withDup {n} 1)",
        "=:=": "fstDup (withDup {n} 1)",
        "=:<=": "fstDup' (withDup {n} 1)",
    }, 8),
    "horseman": Benchmark("horseman.fl", {
        "==": "horsemenEq (add {n} {n}) (add {n} (add {n} (add {n} (add {n} (add {n} {n})))))",
        "=:=": "horsemen (add {n} {n}) (add {n} (add {n} (add {n} (add {n} (add {n} {n})))))",
    }, 4),
    "grep": Benchmark("grep.fl", {
        "==": "grepEq abc (text {n})",
        "=:=": "grep abc (text {n})",
    }, 3),
    "varinexp": Benchmark("varinexp.fl", {
        "==": "varInExpEq (expr {n})",
        "=:=": "varInExp (expr {n})",
        "=:<=": "varInExp' (expr {n})",
    }, 4),
    "simplify": Benchmark("simplify.fl", {
        "==": "simplifyEq (term {n})",
        "=:=": "simplify (term {n})",
        "=:<=": "simplify' (term {n})",
    }, 2),
    # A failing list element only matters when it is evaluated
    "failhead": Benchmark("last.fl", {
        "==": "lastEq [failed, True]",
        "=:=": "last [failed, True]",
        "=:<=": "last' [failed, True]",
    }, 1, succeeds=("=:<=",)),
}
assert all(name in BENCHMARKS for suite in constants.BENCH_SUITES.values() for name in suite)


def scaled_size(size, scale):
    return max(1, int(round(size*scale)))

def run_benchmark(name, mode, config):
    benchmark = BENCHMARKS[name]
    n = scaled_size(benchmark.size, config["scale"])
    engine = Engine.from_file(os.path.join(constants.PROGRAM_DIR, benchmark.program),
            step_limit=config["steps"])

    times = []
    for _ in range(config["repeat"]):
        start = time.perf_counter()
        outcome = engine.search(benchmark.goal(mode, n), strategy=config["strategy"])
        n_results = len(outcome.results())
        times.append(1000*(time.perf_counter() - start))

    stats = outcome.stats
    timed_out = outcome.status == "steps"
    return {
        "benchmark": name,
        "mode": mode,
        "time_ms": "timeout" if timed_out else f"{np.median(times):.1f}",
        "choices": stats.choices,
        "failures": stats.failures,
        "guards": stats.guards,
        "forces": stats.forces,
        "results": n_results,
        "status": outcome.status,
    }

def check_orderings(rows):
    """
    Search-space orderings between the equality modes of each benchmark:
    choices(==) > choices(=:=) >= choices(=:<=), on completed runs only.
    Benchmarks listing the modes that succeed are checked for those instead.
    """
    choices = {}
    checks = {}
    for row in rows:
        if row["status"] != "complete":
            continue
        benchmark = BENCHMARKS.get(row["benchmark"])
        if benchmark is not None and benchmark.succeeds is not None:
            check = f"{row['benchmark']}: results only for {', '.join(benchmark.succeeds)}"
            found = (row["results"] > 0) == (row["mode"] in benchmark.succeeds)
            checks[check] = checks.get(check, True) and found
        else:
            choices.setdefault(row["benchmark"], {})[row["mode"]] = row["choices"]

    for name, counts in choices.items():
        if "==" in counts and "=:=" in counts:
            checks[f"{name}: == > =:="] = counts["=="] > counts["=:="]
            checks[f"{name}: ratio ==/=:="] = counts["=="]/max(1, counts["=:="])
        if "=:=" in counts and "=:<=" in counts:
            checks[f"{name}: =:= >= =:<="] = counts["=:="] >= counts["=:<="]
    return checks

def run_bench(config, out=print):
    suite = config["suite"]
    assert suite in constants.BENCH_SUITES, f"Unknown benchmark suite: {suite}"
    assert config["scale"] >= 0, "Scale can not be negative"
    assert config["repeat"] > 0, "Need at least one repetition"

    wandb.init(project=constants.WANDB_PROJECT, config=config,
            mode=("online" if config["wandb"] else "disabled"))

    out("\t".join(constants.BENCH_HEADER))
    rows = []
    if config["scale"] > 0:
        for name in constants.BENCH_SUITES[suite]:
            for mode in constants.BENCH_SUITE_MODES[suite]:
                if mode not in BENCHMARKS[name].goals:
                    continue
                row = run_benchmark(name, mode, config)
                rows.append(row)
                out("\t".join(str(row[column]) for column in constants.BENCH_HEADER))
                wandb.log({key: val for key, val in row.items() if key != "time_ms"} |
                        {"time_ms": (np.nan if row["time_ms"] == "timeout"
                            else float(row["time_ms"]))})

    # Absolute timings are machine-bound, only orderings are checked
    checks = check_orderings(rows)
    for check, val in checks.items():
        out(f"# {check}: {val:.1f}" if isinstance(val, float) else f"# {check}: {val}")
        wandb.run.summary[check] = val

    if config["plot"]:
        fig = vis.plot_bench(rows, suite)
        fig.savefig(config["plot"])
        wandb.log({"choices": wandb.Image(fig)})

    wandb.finish()
    return rows, checks
