import argparse
import json
import os
import sys

import bench
import constants
import visualization as vis
from engine import Engine
from errors import LanguageError, StoreError
from runtime.search import Leaf, Branch, Failure, tree_to_graph

PROMPT = "> "
COMMANDS = ("run", "repl", "bench", "tree")


def get_config(argv=None):
    parser = argparse.ArgumentParser(
            description="Evaluate functional logic programs with equational constraints")
    parser.add_argument("command", type=str, choices=COMMANDS,
            help="What to do (run/repl/bench/tree)")
    parser.add_argument("program", type=str, nargs="?", default=None,
            help="Program file (also looked up in programs/), prelude only if not given")
    # If config file should be used
    parser.add_argument("--config", type=str, help="Config file to read run config from")

    # Queries
    parser.add_argument("-e", "--expr", type=str, default=None,
            help="Expression to evaluate (run/tree)")
    parser.add_argument("--free", type=str, action="append", default=[],
            help="Declare a free variable of the expression, as 'x::T' (repeatable)")
    parser.add_argument("--strategy", type=str, default="dfs",
            help="Search strategy (dfs/bfs/ids)")
    parser.add_argument("--first", type=int, default=None,
            help="Stop after this many results")
    parser.add_argument("--all", type=int, nargs="?", const=1, default=0,
            help="Print all results (overrides --first)")
    parser.add_argument("--set", type=int, nargs="?", const=1, default=0,
            help="Print every distinct result only once")
    parser.add_argument("--stats", type=int, nargs="?", const=1, default=0,
            help="Print search statistics after the results")

    # Evaluation
    parser.add_argument("--trace", type=int, nargs="?", const=1, default=0,
            help="Trace evaluation steps to standard error")
    parser.add_argument("--no-prelude", type=int, nargs="?", const=1, default=0,
            help="Do not load the prelude")
    parser.add_argument("--steps", type=int, default=constants.DEFAULT_STEP_LIMIT,
            help="Evaluation step budget of one search")
    parser.add_argument("--sharing", type=int, default=1,
            help="Memoize evaluated expressions (0 evaluates shared expressions again)")
    parser.add_argument("--supply", type=str, default="integer",
            help="Identifier supply implementation")

    # Search trees
    parser.add_argument("--depth", type=int, default=4,
            help="Depth to expand search trees to (tree)")

    # Benchmarks
    parser.add_argument("--suite", type=str, default="equations",
            help="Benchmark suite (equations/unify/funpat)")
    parser.add_argument("--scale", type=float, default=1.0,
            help="Factor applied to benchmark sizes, 0 gives an empty table")
    parser.add_argument("--repeat", type=int, default=1,
            help="Timed repetitions per benchmark (median is reported)")
    parser.add_argument("--wandb", type=int, nargs="?", const=1, default=0,
            help="Log benchmark runs to Weights & Biases")

    # Plotting
    parser.add_argument("--plot", type=str, default=None,
            help="Save a figure of the benchmark table or search tree to this file")

    args = parser.parse_args(argv)
    config = vars(args)

    # Read additional config from file
    if args.config:
        assert os.path.exists(args.config), "No config file: {}".format(args.config)
        with open(args.config) as json_file:
            config_from_file = json.load(json_file)

        # Make sure all options in config file also exist in argparse config.
        # Avoids choosing wrong parameters because of typos etc.
        unknown_options = set(config_from_file.keys()).difference(set(config.keys()))
        unknown_error = "\n".join(["Unknown option in config file: {}".format(opt)
            for opt in unknown_options])
        assert (not unknown_options), unknown_error

        config.update(config_from_file)

    # Some asserts
    assert config["strategy"] in constants.STRATEGIES, (
            f"Unknown strategy: {config['strategy']}")
    assert config["supply"] in constants.SUPPLY_MODELS, f"Unknown supply: {config['supply']}"
    assert config["suite"] in constants.BENCH_SUITES, f"Unknown suite: {config['suite']}"
    assert config["first"] is None or config["first"] >= 0, "--first can not be negative"
    assert config["steps"] > 0, "Need a positive step budget"
    assert config["depth"] >= 0, "Tree depth can not be negative"
    if config["command"] in ("run", "tree"):
        assert config["expr"] is not None, f"{config['command']} needs an expression (-e)"

    return config


def load_engine(config):
    options = dict(prelude=not config["no_prelude"], sharing=bool(config["sharing"]),
            step_limit=config["steps"], trace=bool(config["trace"]),
            supply_model=config["supply"])
    if config["program"] is None:
        return Engine("", **options)
    return Engine.from_file(config["program"], **options)

def print_results(outcome, config, out=print):
    seen = set()
    count = 0
    for record in outcome:
        text = str(record)
        if config["set"]:
            if text in seen:
                continue
            seen.add(text)
        out(text)
        count += 1

    if config["stats"]:
        out(outcome.stats.summary())
    if outcome.status == "steps":
        print(f"Search stopped: step budget of {config['steps']} exhausted", file=sys.stderr)
    return count

def result_limit(config):
    return None if config["all"] else config["first"]


def run(config):
    engine = load_engine(config)
    outcome = engine.search(config["expr"], strategy=config["strategy"],
            limit=result_limit(config), free=config["free"])
    n_results = print_results(outcome, config)
    return 0 if n_results > 0 else 1

def read_lines():
    if sys.stdin.isatty():
        while True:
            try:
                yield input(PROMPT)
            except EOFError:
                return
    else:
        yield from sys.stdin

def repl(config):
    engine = load_engine(config)
    strategy = config["strategy"]
    for line in read_lines():
        line = line.strip()
        if not line:
            continue
        if line in (":quit", ":q"):
            break
        if line.startswith(":set"):
            parts = line.split()
            if len(parts) == 3 and parts[1] == "strategy" and parts[2] in constants.STRATEGIES:
                strategy = parts[2]
            else:
                print(f"Usage: :set strategy {'|'.join(constants.STRATEGIES)}",
                        file=sys.stderr)
            continue
        if line == ":stats":
            config["stats"] = int(not config["stats"])
            print(f"Statistics {'on' if config['stats'] else 'off'}")
            continue

        try:
            outcome = engine.search(line, strategy=strategy, limit=result_limit(config),
                    free=config["free"])
            print_results(outcome, config)
        except LanguageError as e:
            print(f"Error: {e}", file=sys.stderr)
    return 0

def format_tree(tree, depth, out=print):
    stack = [(tree, 0, "")]
    while stack:
        node, level, edge = stack.pop()
        indent = "  "*level + edge
        if isinstance(node, Branch):
            out(f"{indent}Branch {node.id}")
            if level < depth:
                stack.append((node.right, level + 1, "R: "))
                stack.append((node.left, level + 1, "L: "))
        elif isinstance(node, Leaf):
            out(f"{indent}{node.record}")
        elif isinstance(node, Failure):
            out(f"{indent}Failure")
        else:
            out(f"{indent}…")

def tree(config):
    engine = load_engine(config)
    search_tree = engine.tree(config["expr"], depth_bound=config["depth"], free=config["free"])
    format_tree(search_tree, config["depth"])
    if config["plot"]:
        fig = vis.plot_search_tree(tree_to_graph(search_tree))
        fig.savefig(config["plot"])
    return 0

def bench_command(config):
    bench.run_bench(config)
    return 0


def main(argv=None):
    try:
        config = get_config(argv)
        command = {"run": run, "repl": repl, "bench": bench_command, "tree": tree}
        return command[config["command"]](config)
    except (LanguageError, StoreError, OSError, AssertionError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
