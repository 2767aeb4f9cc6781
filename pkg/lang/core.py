import itertools
from dataclasses import dataclass, field

from errors import ResolveError, UnsupportedPatternError
from lang.syntax import SVar, SCon, SWildcard, SApp, TCon, TVar, fun_type, expr_vars

# Core expressions
@dataclass(frozen=True)
class Var:
    name: str

@dataclass(frozen=True)
class CtorApp:
    name: str
    args: tuple = ()

@dataclass(frozen=True)
class FunCall:
    name: str
    args: tuple = ()

@dataclass(frozen=True)
class Apply:
    fn: object
    args: tuple

@dataclass(frozen=True)
class Branch:
    vars: tuple
    body: object

@dataclass(frozen=True, eq=True)
class Case:
    var: str
    branches: dict # constructor name -> Branch, in declaration order of the rules

@dataclass(frozen=True)
class ChoiceExpr:
    left: object
    right: object

@dataclass(frozen=True)
class Unify:
    left: object
    right: object
    lazy: bool = False

@dataclass(frozen=True)
class Conj:
    left: object
    right: object

@dataclass(frozen=True)
class Cond:
    guard: object
    body: object

@dataclass(frozen=True)
class Free:
    vars: tuple # (name, type) pairs
    body: object

@dataclass(frozen=True)
class Failed:
    pass

def subexpressions(e):
    if isinstance(e, (CtorApp, FunCall)):
        return e.args
    if isinstance(e, Apply):
        return (e.fn,) + e.args
    if isinstance(e, Case):
        return tuple(b.body for b in e.branches.values())
    if isinstance(e, (ChoiceExpr, Unify, Conj)):
        return (e.left, e.right)
    if isinstance(e, Cond):
        return (e.guard, e.body)
    if isinstance(e, Free):
        return (e.body,)
    return ()

def called_functions(e):
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, FunCall):
            found.add(node.name)
        stack.extend(subexpressions(node))
    return found


# Programs
@dataclass(frozen=True)
class CtorInfo:
    name: str
    type_name: str
    index: int
    arg_types: tuple
    params: tuple

    @property
    def arity(self):
        return len(self.arg_types)

@dataclass
class CoreFunction:
    name: str
    params: tuple
    body: object

    @property
    def arity(self):
        return len(self.params)

@dataclass
class CoreProgram:
    data_decls: dict = field(default_factory=dict)
    ctors: dict = field(default_factory=dict)
    funcs: dict = field(default_factory=dict)
    signatures: dict = field(default_factory=dict)

    def add_function(self, func):
        self.funcs[func.name] = func

def constructor_table(data_decls):
    ctors = {}
    for decl in data_decls:
        for index, ctor in enumerate(decl.constructors):
            ctors[ctor.name] = CtorInfo(ctor.name, decl.name, index, ctor.arg_types,
                    decl.params)
    return ctors

def constructor_type(info):
    result = TCon(info.type_name, tuple(TVar(p) for p in info.params))
    return fun_type(info.arg_types, result)


# Surface to core
BUILTINS = {"==": 2, "=:=": 2, "=:<=": 2} # name -> arity, implemented by the evaluator
FAILED = "failed"

def is_constructor_pattern(p):
    if isinstance(p, (SVar, SWildcard, SCon)):
        return True
    return (isinstance(p, SApp) and isinstance(p.fn, SCon) and
            all(is_constructor_pattern(a) for a in p.args))

def pattern_head(p):
    # (constructor name, sub-patterns) of a constructor pattern, None for variables
    if isinstance(p, SCon):
        return p.name, ()
    if isinstance(p, SApp):
        return p.fn.name, p.args
    return None


class Translator:
    """Compiles the rules of a resolved program into uniform case trees"""
    def __init__(self, ctors, arities):
        self.ctors = ctors
        self.arities = arities
        self.counter = itertools.count(1)

    def fresh(self, prefix):
        return f"_{prefix}{next(self.counter)}"

    # Expressions
    def expr(self, e, env):
        if isinstance(e, SVar):
            if e.name in env:
                return Var(env[e.name])
            if e.name == FAILED:
                return Failed()
            if e.name in self.arities or e.name in BUILTINS:
                return FunCall(e.name)
            raise ResolveError(f"Unknown name {e.name}")
        if isinstance(e, SCon):
            self.check_ctor(e.name, 0)
            return CtorApp(e.name)
        if isinstance(e, SWildcard):
            raise ResolveError("Wildcard '_' used as an expression")

        args = tuple(self.expr(a, env) for a in e.args)
        fn = e.fn
        if isinstance(fn, SCon):
            self.check_ctor(fn.name, len(args))
            return CtorApp(fn.name, args)
        if isinstance(fn, SVar) and fn.name not in env:
            special = self.special_form(fn.name, args)
            if special is not None:
                return special
            if fn.name in self.arities or fn.name in BUILTINS:
                return FunCall(fn.name, args)
        return Apply(self.expr(fn, env), args)

    def special_form(self, name, args):
        if name == FAILED:
            return Failed()
        if len(args) < 2:
            return None
        first, second, rest = args[0], args[1], args[2:]
        if name == "?":
            core = ChoiceExpr(first, second)
        elif name == "&":
            core = Conj(first, second)
        elif name == "=:=":
            core = Unify(first, second)
        elif name == "=:<=":
            core = Unify(first, second, lazy=True)
        elif name == "cond":
            core = Cond(first, second)
        else:
            return None
        return Apply(core, rest) if rest else core

    def check_ctor(self, name, n_args):
        if name not in self.ctors:
            raise ResolveError(f"Unknown constructor {name}")
        if n_args > self.ctors[name].arity:
            raise ResolveError(
                f"Constructor {name} has arity {self.ctors[name].arity}, applied to {n_args}")

    # Rules
    def function(self, func):
        params = tuple(self.fresh("a") for _ in range(func.arity))
        rows = []
        for rule in func.rules:
            self.check_linear(rule)
            rows.append((list(rule.patterns), rule))
        body = self.match(list(params), rows)
        return CoreFunction(func.name, params, body)

    def check_linear(self, rule):
        seen = set()
        for p in rule.patterns:
            for name in expr_vars(p):
                if name in seen:
                    raise UnsupportedPatternError(
                        f"Non-linear pattern variable {name} in a rule of {rule.name}")
                seen.add(name)

    def match(self, scrutinees, rows):
        if not rows:
            return Failed()

        column = next((c for c in range(len(scrutinees))
            if any(pattern_head(row[0][c]) is not None for row in rows)), None)
        if column is None:
            return self.alternatives([self.rule_body(scrutinees, row) for row in rows])

        # Maximal runs of rows that agree on variable/constructor in this column
        runs = [list(group) for _, group in itertools.groupby(rows,
            key=lambda row: pattern_head(row[0][column]) is None)]
        if len(runs) > 1:
            return self.alternatives([self.match(scrutinees, run) for run in runs])

        branches = {}
        for patterns, rule in rows:
            name, subpatterns = pattern_head(patterns[column])
            self.check_ctor(name, len(subpatterns))
            if len(subpatterns) != self.ctors[name].arity:
                raise ResolveError(f"Constructor {name} has arity {self.ctors[name].arity}, "
                        f"pattern gives {len(subpatterns)} (rule of {rule.name})")
            if name not in branches:
                branches[name] = (tuple(self.fresh("v") for _ in subpatterns), [])
            branches[name][1].append((patterns[:column] + list(subpatterns) +
                patterns[column+1:], rule))

        compiled = {}
        for name, (arg_vars, sub_rows) in branches.items():
            sub_scrutinees = scrutinees[:column] + list(arg_vars) + scrutinees[column+1:]
            compiled[name] = Branch(arg_vars, self.match(sub_scrutinees, sub_rows))
        return Case(scrutinees[column], compiled)

    def alternatives(self, bodies):
        body = bodies[-1]
        for other in reversed(bodies[:-1]):
            body = ChoiceExpr(other, body)
        return body

    def rule_body(self, scrutinees, row):
        patterns, rule = row
        env = {}
        for scrutinee, pattern in zip(scrutinees, patterns):
            if isinstance(pattern, SVar):
                env[pattern.name] = scrutinee

        free = []
        for free_var in rule.free_vars:
            if free_var.type is None:
                raise ResolveError(
                    f"Free variable {free_var.name} of {rule.name} needs a type annotation")
            core_name = self.fresh("f")
            env[free_var.name] = core_name
            free.append((core_name, free_var.type))

        body = self.expr(rule.rhs, env)
        if rule.guard is not None:
            body = Cond(self.expr(rule.guard, env), body)
        if free:
            body = Free(tuple(free), body)
        return body


def to_core(program):
    """Translate a resolved program without functional patterns into a CoreProgram"""
    ctors = constructor_table(program.data_decls)
    arities = {f.name: f.arity for f in program.func_defs}
    for name in arities:
        if name in BUILTINS or name == FAILED:
            raise ResolveError(f"{name} is predefined and cannot be redefined")

    translator = Translator(ctors, arities)
    core = CoreProgram({d.name: d for d in program.data_decls}, ctors, {},
            dict(program.signatures))
    for func in program.func_defs:
        core.add_function(translator.function(func))
    return core

def query_to_core(program, query, extra_free=()):
    """Free variables and core body of a query"""
    arities = {name: f.arity for name, f in program.funcs.items()}
    translator = Translator(program.ctors, arities)
    env = {}
    free = []
    for free_var in tuple(query.free_vars) + tuple(extra_free):
        if free_var.type is None:
            raise ResolveError(f"Free variable {free_var.name} needs a type annotation")
        if free_var.name in env:
            raise ResolveError(f"Free variable {free_var.name} declared twice")
        env[free_var.name] = free_var.name
        free.append((free_var.name, free_var.type))
    body = translator.expr(query.expr, env)
    return tuple(free), body
