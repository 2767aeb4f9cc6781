import sys

import networkx as nx

from errors import EvalError, StepLimitExceeded
from lang.core import (Var, CtorApp, FunCall, Apply, Case, ChoiceExpr, Unify, Conj, Cond, Free,
        Failed, BUILTINS, subexpressions, called_functions)
from lang.syntax import TCon
from runtime import unify
from runtime.supply import left_supply, right_supply, spread, split_args
from runtime.values import (Ctor, Choice, FailValue, FAIL, Guard, PartialApp, Suspension,
        Delayed, hnf, is_success, narrow, choice_id)


def call_graph(program):
    graph = nx.DiGraph()
    graph.add_nodes_from(program.funcs)
    for func in program.funcs.values():
        for callee in called_functions(func.body):
            graph.add_edge(func.name, callee)
    return graph

def creates_ids_locally(e):
    # Choices, free variables and higher-order applications consume identifiers
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, (ChoiceExpr, Free, Apply)):
            return True
        stack.extend(subexpressions(node))
    return False

def id_creating_functions(program):
    """Operations whose evaluation may take identifiers from their supply"""
    graph = call_graph(program)
    direct = {name for name, func in program.funcs.items() if creates_ids_locally(func.body)}
    creating = set(direct)
    for name in direct:
        creating |= nx.ancestors(graph, name)
    return creating


class Evaluator:
    """
    Lazy evaluator of core expressions to head normal form.

    The value graph does not depend on decisions: choices, failures and
    constrained values are propagated through pattern matching and left for
    the search to resolve.
    """
    def __init__(self, program, generators, sharing=True, step_limit=None, trace=False,
            trace_stream=None):
        self.program = program
        self.funcs = program.funcs
        self.ctors = program.ctors
        self.generators = generators
        self.sharing = sharing
        self.step_limit = step_limit
        self.steps = 0
        self.trace = trace
        self.trace_stream = trace_stream or sys.stderr

        self.id_creating = id_creating_functions(program)
        self._creates_ids = {}
        self.builtins = {
            "==": self.equal,
            "=:=": lambda x, y, s: unify.strict_unify(self, x, y),
            "=:<=": lambda x, y, s: unify.lazy_unify(self, x, y),
        }
        assert set(self.builtins) == set(BUILTINS)

    def tick(self, kind, name):
        self.steps += 1
        if self.step_limit is not None and self.steps > self.step_limit:
            raise StepLimitExceeded(f"Evaluation exceeded {self.step_limit} steps")
        if self.trace:
            print(f"[step {self.steps}] {kind} {name}", file=self.trace_stream)

    def delay(self, fn, *args):
        return Delayed(fn, *args, sharing=self.sharing)

    def suspend(self, e, env, s):
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, CtorApp) and not e.args and self.ctors[e.name].arity == 0:
            return Ctor(e.name)
        if isinstance(e, Failed):
            return FAIL
        return Suspension(self, e, env, s)

    # Head normal form
    def eval_hnf(self, e, env, s):
        while True:
            if isinstance(e, Var):
                return hnf(env[e.name])

            if isinstance(e, Case):
                self.tick("case", e.var)
                node = hnf(env[e.var])
                if isinstance(node, Ctor):
                    branch = e.branches.get(node.name)
                    if branch is None:
                        return FAIL
                    env = dict(env)
                    env.update(zip(branch.vars, node.args))
                    e = branch.body
                    continue
                if isinstance(node, Choice):
                    return Choice(narrow(node.id),
                            Suspension(self, e, {**env, e.var: node.left}, s),
                            Suspension(self, e, {**env, e.var: node.right}, s))
                if isinstance(node, Guard):
                    return Guard(node.constraints,
                            Suspension(self, e, {**env, e.var: node.inner}, s))
                return FAIL

            if isinstance(e, FunCall):
                arity = self.arity(e.name)
                if not e.args and arity == 0:
                    func = self.funcs[e.name]
                    self.tick("call", e.name)
                    env, e = {}, func.body
                    continue
                supplies, call_s = split_args(s, len(e.args))
                refs = tuple(self.suspend(a, env, sk) for a, sk in zip(e.args, supplies))
                kind = "builtin" if e.name in self.builtins else "func"
                if len(refs) < arity:
                    return PartialApp(e.name, arity, refs, kind)
                if len(refs) > arity:
                    result = self.call(e.name, refs[:arity], left_supply(call_s))
                    return self.apply_all(result, refs[arity:], right_supply(call_s))
                if kind == "builtin":
                    return self.call(e.name, refs, call_s)
                func = self.funcs[e.name]
                self.tick("call", e.name)
                env, e, s = dict(zip(func.params, refs)), func.body, call_s
                continue

            if isinstance(e, CtorApp):
                info = self.ctors[e.name]
                refs = tuple(self.suspend(a, env, sk)
                        for a, sk in zip(e.args, spread(s, len(e.args))))
                if len(refs) < info.arity:
                    return PartialApp(e.name, info.arity, refs, "ctor")
                return Ctor(e.name, refs)

            if isinstance(e, ChoiceExpr):
                self.tick("choice", s.this_id())
                return Choice(choice_id(s.this_id()), self.suspend(e.left, env, left_supply(s)),
                        self.suspend(e.right, env, right_supply(s)))

            if isinstance(e, Cond):
                (guard_s, body_s), _ = split_args(s, 2)
                guard = self.eval_hnf(e.guard, env, guard_s)
                if is_success(guard):
                    e, s = e.body, body_s
                    continue
                return self.cond(guard, self.suspend(e.body, env, body_s))

            if isinstance(e, Free):
                env, s = self.bind_free(e.vars, e.body, env, s)
                e = e.body
                continue

            if isinstance(e, Unify):
                (left_s, right_s), _ = split_args(s, 2)
                x, y = self.suspend(e.left, env, left_s), self.suspend(e.right, env, right_s)
                if e.lazy:
                    self.tick("lazy-unify", "=:<=")
                    return unify.lazy_unify(self, x, y)
                self.tick("unify", "=:=")
                return unify.strict_unify(self, x, y)

            if isinstance(e, Conj):
                (left_s, right_s), _ = split_args(s, 2)
                return unify.conj(self, self.suspend(e.left, env, left_s),
                        self.suspend(e.right, env, right_s))

            if isinstance(e, Apply):
                supplies, call_s = split_args(s, len(e.args) + 1)
                fn = self.suspend(e.fn, env, supplies[0])
                refs = tuple(self.suspend(a, env, sk) for a, sk in zip(e.args, supplies[1:]))
                self.tick("apply", len(refs))
                return self.apply_all(fn, refs, call_s)

            if isinstance(e, Failed):
                return FAIL

            raise EvalError(f"Unknown core expression {e!r}")

    def arity(self, name):
        if name in self.funcs:
            return self.funcs[name].arity
        if name in self.builtins:
            return BUILTINS[name]
        raise EvalError(f"Unknown function {name}")

    def call(self, name, refs, s):
        self.tick("call", name)
        if name in self.builtins:
            return self.builtins[name](*refs, s)
        func = self.funcs[name]
        if len(refs) != func.arity:
            raise EvalError(f"{name} expects {func.arity} arguments, got {len(refs)}")
        return self.eval_hnf(func.body, dict(zip(func.params, refs)), s)

    def cond(self, guard, body):
        # Constrained value: body if guard reduces to Success
        guard = hnf(guard)
        if is_success(guard):
            return hnf(body)
        if isinstance(guard, Choice):
            return Choice(guard.id, self.delay(self.cond, guard.left, body),
                    self.delay(self.cond, guard.right, body))
        if isinstance(guard, Guard):
            return Guard(guard.constraints, self.delay(self.cond, guard.inner, body))
        return FAIL

    # Higher-order application
    def apply_all(self, fn, refs, s):
        for ref in refs:
            fn = self.apply_partial(fn, ref, left_supply(s))
            s = right_supply(s)
        return hnf(fn)

    def apply_partial(self, fn, arg, s):
        fn = hnf(fn)
        if isinstance(fn, FailValue):
            return FAIL
        if isinstance(fn, Choice):
            return Choice(fn.id, self.delay(self.apply_partial, fn.left, arg, s),
                    self.delay(self.apply_partial, fn.right, arg, s))
        if isinstance(fn, Guard):
            return Guard(fn.constraints, self.delay(self.apply_partial, fn.inner, arg, s))
        if isinstance(fn, Ctor):
            raise EvalError(f"Constructor {fn.name} applied to too many arguments")
        if not isinstance(fn, PartialApp):
            raise EvalError(f"Cannot apply {fn!r}")

        if len(fn.args) == fn.arity:
            # Nothing left to supply: saturate first, then apply the result
            result = self.saturate(fn.name, fn.kind, fn.args, left_supply(s))
            return self.apply_partial(result, arg, right_supply(s))
        args = fn.args + (arg,)
        if len(args) < fn.arity:
            return PartialApp(fn.name, fn.arity, args, fn.kind)
        return self.saturate(fn.name, fn.kind, args, s)

    def saturate(self, name, kind, args, s):
        if kind == "ctor":
            return Ctor(name, args)
        return self.call(name, args, s)

    # Free variables
    def creates_ids(self, e):
        key = id(e)
        if key not in self._creates_ids:
            found = creates_ids_locally(e) or bool(called_functions(e) & self.id_creating)
            self._creates_ids[key] = (e, found)
        return self._creates_ids[key][1]

    def bind_free(self, variables, body, env, s):
        """
        Instantiate free variables with generators. If the body never takes
        identifiers from its supply, the variables share it, otherwise they
        take the argument positions in front of the body.
        """
        if self.creates_ids(body):
            supplies, body_s = split_args(s, len(variables))
        else:
            supplies, body_s = spread(s, len(variables)), s
        env = dict(env)
        for (name, t), sk in zip(variables, supplies):
            self.tick("free", name)
            env[name] = self.generate(t, sk)
        return env, body_s

    def generate(self, t, s):
        if not isinstance(t, TCon) or t.name not in self.generators:
            raise EvalError(f"No generator for type {t}")
        return self.generators[t.name].generate(self, t.args, s)

    # Derived equality
    def equal(self, x, y, s):
        x = hnf(x)
        propagated = self._propagate(x, lambda v: self.equal(v, y, s))
        if propagated is not None:
            return propagated
        y = hnf(y)
        propagated = self._propagate(y, lambda v: self.equal(x, v, s))
        if propagated is not None:
            return propagated
        if isinstance(x, PartialApp) or isinstance(y, PartialApp):
            raise EvalError("Functions cannot be compared with ==")
        type_name = self.ctors[x.name].type_name
        eq_name = f"==.{type_name}"
        if eq_name not in self.funcs:
            raise EvalError(f"No equality for type {type_name}")
        return self.call(eq_name, (x, y), s)

    def _propagate(self, node, continue_with):
        # Choice/Fail/Guard propagation of a demanded argument, None for constructors
        if isinstance(node, FailValue):
            return FAIL
        if isinstance(node, Choice):
            return Choice(narrow(node.id), self.delay(continue_with, node.left),
                    self.delay(continue_with, node.right))
        if isinstance(node, Guard):
            return Guard(node.constraints, self.delay(continue_with, node.inner))
        return None

    # Normal form
    def eval_nf(self, ref):
        """
        Normalize constructor arguments, pulling choices, failures and guards
        above constructors. Free variables stay in place.
        """
        node = hnf(ref)
        if isinstance(node, Choice):
            if node.id.is_free:
                return node
            return Choice(node.id, self.delay(self.eval_nf, node.left),
                    self.delay(self.eval_nf, node.right))
        if isinstance(node, Guard):
            return Guard(node.constraints, self.delay(self.eval_nf, node.inner))
        if isinstance(node, Ctor) and node.args:
            return self._nf_ctor(node.name, node.args)
        return node

    def _nf_ctor(self, name, args):
        normal = []
        for k, arg in enumerate(args):
            value = self.eval_nf(arg)
            rest = tuple(args[k+1:])
            if isinstance(value, FailValue):
                return FAIL
            if isinstance(value, Choice) and not value.id.is_free:
                return Choice(value.id,
                        self.delay(self._nf_ctor, name, tuple(normal) + (value.left,) + rest),
                        self.delay(self._nf_ctor, name, tuple(normal) + (value.right,) + rest))
            if isinstance(value, Guard):
                return Guard(value.constraints,
                        self.delay(self._nf_ctor, name, tuple(normal) + (value.inner,) + rest))
            normal.append(value)
        return Ctor(name, normal)
