import os

from runtime import search
from runtime.supply import IntegerSupply

# Search strategies (name -> search function)
STRATEGIES = {
    "dfs": search.search_dfs,
    "bfs": search.search_bfs,
    "ids": search.search_ids,
}

# Supply implementations the engine can be instantiated with
SUPPLY_MODELS = {
    "integer": IntegerSupply,
}

# Benchmark suites, each a list of benchmark names (see bench.py)
BENCH_SUITES = {
    "equations": ("last", "half", "palindrome", "horseman", "grep", "varinexp",
        "simplify", "failhead"),
    "unify": ("last", "half", "palindrome", "horseman", "grep"),
    "funpat": ("last", "fstdup", "half", "palindrome", "varinexp", "simplify", "failhead"),
}
# Equality modes run by each suite
BENCH_SUITE_MODES = {
    "equations": ("==", "=:=", "=:<="),
    "unify": ("==", "=:="),
    "funpat": ("=:=", "=:<="),
}
BENCH_HEADER = ("benchmark", "mode", "time_ms", "choices", "failures", "guards",
        "forces", "results")

# Evaluation
DEFAULT_STEP_LIMIT = 10**6 # Reduction steps before a search gives up
RECURSION_LIMIT = 50000 # Forcing deep lists recurses once per cell

# WANDB
WANDB_PROJECT = "curry-equational-constraints"

# Paths
ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
PROGRAM_DIR = os.path.join(ROOT_DIR, "programs")
PRELUDE_FILE = os.path.join(ROOT_DIR, "lang", "prelude.fl")
GRAMMAR_FILE = os.path.join(ROOT_DIR, "lang", "grammar.lark")
