import collections
import dataclasses

import networkx as nx

from errors import EvalError, StepLimitExceeded
from runtime.values import (Ctor, Choice, FailValue, Guard, LazyBind, Constraint, CHOOSE_LEFT,
        CHOOSE_RIGHT, hnf, is_success, render_term, term_of)

# Goal kinds: the top-level value, a Success-typed obligation, the
# resolution of lazily bound variables inside a found value, and the
# resolution of query variables for display (never fails)
MAIN = "main"
SOLVE = "solve"
RESOLVE = "resolve"
SHOW = "show"

# Search outcome status
COMPLETE = "complete"
LIMIT = "limit"
STEPS = "steps"


@dataclasses.dataclass
class SearchStats:
    choices: int = 0
    failures: int = 0
    guards: int = 0
    forces: int = 0

    def copy(self):
        return dataclasses.replace(self)

    def summary(self):
        return (f"choices={self.choices} failures={self.failures} guards={self.guards} "
                f"forces={self.forces}")


@dataclasses.dataclass
class ResultRecord:
    value: str
    term: object
    bindings: dict
    stats: SearchStats
    depth: int = 0
    path: tuple = () # (identifier, decision) of every choice followed

    def __str__(self):
        if not self.bindings:
            return self.value
        shown = ", ".join(f"{name} = {text}" for name, text in self.bindings.items())
        return f"{{{shown}}} {self.value}"


def push_all(nodes, goals, kind=SOLVE):
    for node in reversed(nodes):
        goals = (kind, node, goals)
    return goals

def path_tuple(path):
    steps = []
    while path is not None:
        raw, decision, path = path
        steps.append((raw, decision))
    return tuple(reversed(steps))


class Searcher:
    """
    Extracts values from a choice structure under a decision store.
    Deterministic steps (guards, forced lazy bindings, decided choices) are
    taken in place, undecided choices are returned as branch points.
    """
    def __init__(self, store, bindings=None, tick=None):
        self.store = store
        self.bindings = dict(bindings or {})
        self.tick = tick # charges value walks to the evaluation step budget
        self.stats = SearchStats()
        self.cut = False

    def initial_goals(self, value):
        show_bindings = (SHOW, tuple(self.bindings.values()), None) if self.bindings else None
        return (MAIN, value, show_bindings)

    def charge(self, node):
        if self.tick is not None:
            name = node.id.raw if isinstance(node, Choice) else getattr(node, "name", "-")
            self.tick("resolve", name)

    def force(self, node, log, deterministic=False):
        raw = node.id.raw
        consistent = self.store.force_lazy(raw, deterministic)
        self.stats.forces = self.store.forces
        if log is not None and (consistent or not deterministic):
            log.append(("force", raw))
        return consistent

    def expand(self, goals, result, path, log=None):
        """
        Run goals until a result, a failure or an undecided choice.
        Returns ("result", leaf, path), ("fail",) or
        ("branch", node, kind, rest, result, path).
        """
        try:
            return self._expand(goals, result, path, log)
        finally:
            # Forcing also happens inside store operations
            self.stats.forces = self.store.forces

    def _expand(self, goals, result, path, log):
        store = self.store
        forced = None # re-examined after forcing, counted once
        while True:
            if goals is None:
                return ("result", result, path)
            kind, ref, rest = goals

            if kind == SHOW:
                # Lazy bindings that fail or branch when forced stay unevaluated
                pending = list(ref)
                while pending:
                    node = hnf(pending.pop())
                    self.charge(node)
                    if isinstance(node, Choice):
                        decision = store.lookup(node.id.raw)
                        if decision is CHOOSE_LEFT or decision is CHOOSE_RIGHT:
                            path = (node.id.raw, decision, path)
                            pending.append(node.left if decision is CHOOSE_LEFT else node.right)
                        elif isinstance(decision, LazyBind):
                            if self.force(node, log, deterministic=True):
                                pending.append(node)
                    elif isinstance(node, Ctor):
                        pending.extend(reversed(node.args))
                goals = rest
                continue

            if kind == RESOLVE:
                pending = list(ref)
                lazy = None
                while pending:
                    node = hnf(pending.pop())
                    self.charge(node)
                    if isinstance(node, Choice):
                        decision = store.lookup(node.id.raw)
                        if decision is CHOOSE_LEFT or decision is CHOOSE_RIGHT:
                            path = (node.id.raw, decision, path)
                            pending.append(node.left if decision is CHOOSE_LEFT else node.right)
                        elif isinstance(decision, LazyBind):
                            lazy = node
                            break
                        elif not node.id.is_free:
                            raise EvalError(f"Undecided choice {node.id.raw} inside a value")
                    elif isinstance(node, Ctor):
                        pending.extend(reversed(node.args))
                if lazy is None:
                    goals = rest
                    continue
                pending.append(lazy)
                if not self.force(lazy, log):
                    self.stats.failures += 1
                    return ("fail",)
                goals = push_all(store.take_obligations(), (RESOLVE, tuple(pending), rest))
                continue

            node = hnf(ref)
            if isinstance(node, FailValue):
                self.stats.failures += 1
                return ("fail",)

            if isinstance(node, Guard):
                self.stats.guards += 1
                if not store.apply(node.constraints):
                    self.stats.failures += 1
                    return ("fail",)
                if log is not None:
                    log.append(("apply", node.constraints))
                goals = push_all(store.take_obligations(), (kind, node.inner, rest))
                continue

            if isinstance(node, Choice):
                if node is forced:
                    forced = None
                else:
                    self.stats.choices += 1
                decision = store.lookup(node.id.raw)
                if decision is CHOOSE_LEFT or decision is CHOOSE_RIGHT:
                    path = (node.id.raw, decision, path)
                    goals = (kind, node.left if decision is CHOOSE_LEFT else node.right, rest)
                    continue
                if isinstance(decision, LazyBind):
                    if not self.force(node, log):
                        self.stats.failures += 1
                        return ("fail",)
                    forced = node
                    goals = push_all(store.take_obligations(), (kind, node, rest))
                    continue
                if not node.id.is_free:
                    return ("branch", node, kind, rest, result, path)
                # Unbound free variable: a residual leaf

            if kind == MAIN:
                result = node
                goals = (RESOLVE, (node,), rest)
            elif is_success(node):
                goals = rest
            else:
                self.stats.failures += 1
                return ("fail",)

    def alternatives(self, outcome):
        _, node, kind, rest, result, path = outcome
        raw = node.id.raw
        return [(Constraint(raw, decision), (kind, branch, rest), result,
                (raw, decision, path))
            for decision, branch in ((CHOOSE_LEFT, node.left), (CHOOSE_RIGHT, node.right))]

    def record(self, result, depth, path):
        store = self.store
        return ResultRecord(render_term(result, store=store), term_of(result, store),
                {name: render_term(ref, store=store) for name, ref in self.bindings.items()},
                self.stats.copy(), depth, path_tuple(path))

    # Strategies
    def depth_first(self, value, max_depth=None):
        store = self.store
        start = store.mark()
        stack = [(start, None, self.initial_goals(value), None, 0, None)]
        try:
            while stack:
                mark, constraint, goals, result, depth, path = stack.pop()
                store.undo_to(mark)
                if constraint is not None:
                    if not store.apply([constraint]):
                        self.stats.failures += 1
                        continue
                    goals = push_all(store.take_obligations(), goals)

                outcome = self.expand(goals, result, path)
                if outcome[0] == "result":
                    yield self.record(outcome[1], depth, outcome[2])
                elif outcome[0] == "branch":
                    if max_depth is not None and depth >= max_depth:
                        self.cut = True
                        continue
                    branch_mark = store.mark()
                    for constraint, goals, result, path in reversed(self.alternatives(outcome)):
                        stack.append((branch_mark, constraint, goals, result, depth + 1, path))
        finally:
            self.stats.forces = store.forces
            store.undo_to(start)
            store.take_obligations()

    def replay(self, log):
        for op, arg in log:
            consistent = self.store.apply(arg) if op == "apply" else self.store.force_lazy(arg)
            if not consistent:
                return False
        self.store.take_obligations()
        return True

    def breadth_first(self, value):
        store = self.store
        start = store.mark()
        queue = collections.deque([((), self.initial_goals(value), None, 0, None)])
        try:
            while queue:
                log, goals, result, depth, path = queue.popleft()
                store.undo_to(start)
                if not self.replay(log):
                    raise EvalError("Replaying a search path became inconsistent")

                log = list(log)
                outcome = self.expand(goals, result, path, log)
                if outcome[0] == "result":
                    yield self.record(outcome[1], depth, outcome[2])
                elif outcome[0] == "branch":
                    for constraint, goals, result, path in self.alternatives(outcome):
                        mark = store.mark()
                        if store.apply([constraint]):
                            goals = push_all(store.take_obligations(), goals)
                            queue.append((tuple(log) + (("apply", (constraint,)),), goals,
                                result, depth + 1, path))
                        else:
                            self.stats.failures += 1
                        store.undo_to(mark)
        finally:
            self.stats.forces = store.forces
            store.undo_to(start)
            store.take_obligations()

    def iterative_deepening(self, value, initial_depth=1):
        assert initial_depth >= 0, "Initial depth must be nonnegative"
        bound, previous = initial_depth, -1
        while True:
            self.cut = False
            for record in self.depth_first(value, max_depth=bound):
                if record.depth > previous:
                    yield record
            if not self.cut:
                return
            previous, bound = bound, max(1, 2*bound)


class SearchOutcome:
    """
    Stream of results of one search. status is set once the stream ends:
    complete (space exhausted), limit (result limit reached) or steps
    (evaluation step budget exhausted).
    """
    def __init__(self, results, stats, limit=None):
        self._results = results
        self.stats = stats
        self.limit = limit
        self.status = None

    def __iter__(self):
        count = 0
        try:
            if self.limit is not None and self.limit <= 0:
                self.status = LIMIT
                return
            for record in self._results:
                count += 1
                yield record
                if self.limit is not None and count >= self.limit:
                    self.status = LIMIT
                    return
            self.status = COMPLETE
        except StepLimitExceeded:
            self.status = STEPS
        finally:
            self._results.close()

    def results(self):
        return list(self)


def search_dfs(value, store, limit=None, bindings=None, tick=None):
    searcher = Searcher(store, bindings, tick)
    return SearchOutcome(searcher.depth_first(value), searcher.stats, limit)

def search_bfs(value, store, limit=None, bindings=None, tick=None):
    searcher = Searcher(store, bindings, tick)
    return SearchOutcome(searcher.breadth_first(value), searcher.stats, limit)

def search_ids(value, store, limit=None, bindings=None, initial_depth=1, tick=None):
    searcher = Searcher(store, bindings, tick)
    return SearchOutcome(searcher.iterative_deepening(value, initial_depth), searcher.stats,
            limit)


# Search trees
class Leaf:
    def __init__(self, record):
        self.record = record

    def __repr__(self):
        return f"Leaf {self.record}"

class Failure:
    def __repr__(self):
        return "Failure"

class Pending:
    # Subtree below the depth bound
    def __repr__(self):
        return "…"

class Branch:
    """Choice point whose subtrees are computed on first access"""
    def __init__(self, builder, id, children, depth):
        self.builder = builder
        self.id = id
        self._children = children # per side: (log, goals, result, path), replaced by the subtree
        self.depth = depth

    def _child(self, side):
        child = self._children[side]
        if isinstance(child, tuple):
            child = self.builder.subtree(*child, self.depth + 1)
            self._children[side] = child
        return child

    @property
    def left(self):
        return self._child(0)

    @property
    def right(self):
        return self._child(1)

    def __repr__(self):
        return f"Branch {self.id}"


class TreeBuilder:
    def __init__(self, store, bindings=None, depth_bound=None, tick=None):
        self.searcher = Searcher(store, bindings, tick)
        self.store = store
        self.depth_bound = depth_bound
        self.start = store.mark()

    def subtree(self, log, goals, result, path, depth):
        if self.depth_bound is not None and depth > self.depth_bound:
            return Pending()
        store = self.store
        try:
            if not self.searcher.replay(log):
                return Failure()
            log = list(log)
            outcome = self.searcher.expand(goals, result, path, log)
            if outcome[0] == "fail":
                return Failure()
            if outcome[0] == "result":
                return Leaf(self.searcher.record(outcome[1], depth, outcome[2]))

            children = []
            for constraint, goals, result, path in self.searcher.alternatives(outcome):
                mark = store.mark()
                if store.apply([constraint]):
                    goals = push_all(store.take_obligations(), goals)
                    children.append((tuple(log) + (("apply", (constraint,)),), goals, result,
                        path))
                else:
                    children.append(Failure())
                store.undo_to(mark)
            return Branch(self, outcome[1].id.raw, children, depth)
        finally:
            store.undo_to(self.start)
            store.take_obligations()


def collect_tree(value, store, depth_bound=None, bindings=None, tick=None):
    """Search tree of value; subtrees deeper than depth_bound are Pending"""
    builder = TreeBuilder(store, bindings, depth_bound, tick)
    return builder.subtree((), builder.searcher.initial_goals(value), None, None, 0)

def tree_results(tree):
    # Depth-first enumeration of the leaves of a search tree
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            yield node.record
        elif isinstance(node, Branch):
            stack.append(node.right)
            stack.append(node.left)

def tree_to_graph(tree, max_nodes=1000):
    graph = nx.DiGraph()
    counter = 0
    stack = [(tree, None, None)]
    while stack and counter < max_nodes:
        node, parent, label = stack.pop()
        name = counter
        counter += 1
        if isinstance(node, Branch):
            graph.add_node(name, kind="branch", label=str(node.id))
            stack.append((node.right, name, "R"))
            stack.append((node.left, name, "L"))
        elif isinstance(node, Leaf):
            graph.add_node(name, kind="leaf", label=str(node.record))
        else:
            graph.add_node(name, kind="failure" if isinstance(node, Failure) else "pending",
                    label=repr(node))
        if parent is not None:
            graph.add_edge(parent, name, label=label)
    return graph
