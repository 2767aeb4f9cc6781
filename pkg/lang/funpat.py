import dataclasses
import itertools

from errors import FunctionalPatternError, ResolveError
from lang.core import BUILTINS, FAILED, constructor_table, constructor_type, is_constructor_pattern
from lang.syntax import (TVar, TCon, TFun, SVar, SCon, SWildcard, SApp, FreeVar, Rule,
        FuncDef, SurfaceProgram, split_fun_type, subst_type, type_vars, expr_vars)

BOOL = TCon("Bool")
SUCCESS = TCon("Success")
BUILTIN_TYPES = {
    "==": TFun(TVar("a"), TFun(TVar("a"), BOOL)),
    "=:=": TFun(TVar("a"), TFun(TVar("a"), SUCCESS)),
    "=:<=": TFun(TVar("a"), TFun(TVar("a"), SUCCESS)),
    FAILED: TVar("a"),
}
assert set(BUILTINS) <= set(BUILTIN_TYPES)


class TypeMismatch(Exception):
    pass


class RuleTyping:
    """
    Infers the types of the variables of one rule by unification against
    the type signatures of operations and the types of constructors.
    Operations without a signature get an unconstrained type.
    """
    def __init__(self, signatures, ctor_types, functions):
        self.signatures = signatures
        self.ctor_types = ctor_types
        self.functions = functions
        self.counter = itertools.count(1)
        self.sub = {}
        self.var_types = {}

    def fresh(self):
        return TVar(f"_t{next(self.counter)}")

    def instantiate(self, t):
        return subst_type(t, {name: self.fresh() for name in type_vars(t)})

    def resolve(self, t):
        if isinstance(t, TVar):
            if t.name in self.sub:
                resolved = self.resolve(self.sub[t.name])
                self.sub[t.name] = resolved
                return resolved
            return t
        if isinstance(t, TFun):
            return TFun(self.resolve(t.arg), self.resolve(t.res))
        return TCon(t.name, tuple(self.resolve(a) for a in t.args))

    def unify(self, a, b):
        a, b = self.resolve(a), self.resolve(b)
        if isinstance(b, TVar) and not isinstance(a, TVar):
            a, b = b, a
        if isinstance(a, TVar):
            if a != b:
                if a.name in type_vars(b):
                    raise TypeMismatch(f"infinite type {a.name} = {b}")
                self.sub[a.name] = b
        elif isinstance(a, TFun) and isinstance(b, TFun):
            self.unify(a.arg, b.arg)
            self.unify(a.res, b.res)
        elif (isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name and
                len(a.args) == len(b.args)):
            for x, y in zip(a.args, b.args):
                self.unify(x, y)
        else:
            raise TypeMismatch(f"{a} vs {b}")

    def infer(self, e, local):
        if isinstance(e, SWildcard):
            return self.fresh()
        if isinstance(e, SVar):
            if e.name in local:
                if e.name not in self.var_types:
                    self.var_types[e.name] = self.fresh()
                return self.var_types[e.name]
            if e.name in self.signatures:
                return self.instantiate(self.signatures[e.name])
            if e.name in BUILTIN_TYPES:
                return self.instantiate(BUILTIN_TYPES[e.name])
            return self.fresh()
        if isinstance(e, SCon):
            if e.name not in self.ctor_types:
                raise ResolveError(f"Unknown constructor {e.name}")
            return self.instantiate(self.ctor_types[e.name])
        fn_type = self.infer(e.fn, local)
        for arg in e.args:
            result = self.fresh()
            self.unify(fn_type, TFun(self.infer(arg, local), result))
            fn_type = result
        return fn_type

    def rule(self, rule):
        local = {v.name for v in rule.free_vars}
        for p in rule.patterns:
            local.update(pattern_variables(p, self.functions))

        for v in rule.free_vars:
            if v.type is not None:
                self.var_types[v.name] = v.type

        if rule.name in self.signatures:
            arg_types, result_type = split_fun_type(self.instantiate(self.signatures[rule.name]))
        else:
            arg_types, result_type = [], self.fresh()
        arg_types = arg_types + [self.fresh() for _ in range(rule.arity - len(arg_types))]
        if len(arg_types) > rule.arity:
            result_type = rule_result_type(arg_types[rule.arity:], result_type)
            arg_types = arg_types[:rule.arity]

        for p, t in zip(rule.patterns, arg_types):
            self.unify(self.infer(p, local), t)
        if rule.guard is not None:
            self.unify(self.infer(rule.guard, local), SUCCESS)
        self.unify(self.infer(rule.rhs, local), result_type)

    def type_of(self, name):
        if name not in self.var_types:
            return None
        t = self.resolve(self.var_types[name])
        return None if type_vars(t) else t

def rule_result_type(extra_args, result):
    for arg in reversed(extra_args):
        result = TFun(arg, result)
    return result


def is_functional_pattern(p):
    return not is_constructor_pattern(p)

def pattern_variables(p, functions):
    # Variables of a (possibly functional) pattern, operation names excluded
    found = []
    def visit(node, head=False):
        if isinstance(node, SVar):
            if not (head and node.name in functions) and node.name not in found:
                found.append(node.name)
        elif isinstance(node, SApp):
            visit(node.fn, head=True)
            for a in node.args:
                visit(a)
    visit(p)
    return found

def fresh_name(taken):
    for k in itertools.count(1):
        name = f"fp{k}"
        if name not in taken:
            return name


def name_wildcards(p, taken):
    # Wildcards inside a functional pattern become fresh variables
    if isinstance(p, SWildcard):
        name = fresh_name(taken)
        taken.add(name)
        return SVar(name)
    if isinstance(p, SApp):
        return SApp(name_wildcards(p.fn, taken), tuple(name_wildcards(a, taken) for a in p.args))
    return p


def transform_rule(rule, signatures, ctor_types, functions):
    for v in rule.free_vars:
        if v.type is None:
            raise ResolveError(f"Free variable {v.name} of {rule.name} needs a type annotation")
    if not any(is_functional_pattern(p) for p in rule.patterns):
        return rule

    taken = {v.name for v in rule.free_vars}
    for p in rule.patterns:
        taken.update(pattern_variables(p, functions))
    rule = dataclasses.replace(rule, patterns=tuple(
        name_wildcards(p, taken) if is_functional_pattern(p) else p for p in rule.patterns))

    typing = RuleTyping(signatures, ctor_types, functions)
    try:
        typing.rule(rule)
    except TypeMismatch as e:
        raise FunctionalPatternError(f"Type mismatch in a rule of {rule.name}: {e}") from None

    plain_vars = set()
    for p in rule.patterns:
        if not is_functional_pattern(p):
            plain_vars.update(expr_vars(p))

    taken = set(plain_vars)
    for p in rule.patterns:
        taken.update(pattern_variables(p, functions))
    taken.update(v.name for v in rule.free_vars)

    patterns = []
    unifications = []
    for p in rule.patterns:
        if is_functional_pattern(p):
            name = fresh_name(taken)
            taken.add(name)
            patterns.append(SVar(name))
            unifications.append(SApp(SVar("=:<="), (p, SVar(name))))
        else:
            patterns.append(p)

    guard = rule.guard
    for unification in reversed(unifications):
        guard = unification if guard is None else SApp(SVar("&"), (unification, guard))

    free_vars = []
    declared = {v.name for v in rule.free_vars}
    new_vars = []
    for p in rule.patterns:
        if is_functional_pattern(p):
            new_vars.extend(v for v in pattern_variables(p, functions)
                if v not in plain_vars and v not in declared and v not in new_vars)
    for v in list(rule.free_vars) + [FreeVar(name) for name in new_vars]:
        t = v.type if v.type is not None else typing.type_of(v.name)
        if t is None:
            raise FunctionalPatternError(
                f"Cannot determine the type of {v.name} in a functional pattern of {rule.name}")
        free_vars.append(FreeVar(v.name, t))

    return Rule(rule.name, tuple(patterns), guard, rule.rhs, tuple(free_vars), rule.line)


def transform_functional_patterns(program):
    """
    Replace every functional pattern by a fresh variable y and put the guard
    'pattern =:<= y' in front of the rule's guard. Variables of functional
    patterns become free variables of the rule with inferred types. Free
    variables of a where clause must carry a type annotation.
    """
    ctor_types = {name: constructor_type(info)
            for name, info in constructor_table(program.data_decls).items()}
    functions = {f.name for f in program.func_defs} | set(BUILTIN_TYPES)
    func_defs = [FuncDef(f.name, [transform_rule(r, program.signatures, ctor_types, functions)
        for r in f.rules]) for f in program.func_defs]
    return SurfaceProgram(list(program.data_decls), dict(program.signatures), func_defs)
