from dataclasses import dataclass, field
from typing import Optional

# Surface syntax tree. Expressions are used for patterns as well: a pattern is
# an expression built from variables, wildcards and constructor applications,
# a functional pattern additionally applies defined operations.

# Types
@dataclass(frozen=True)
class TVar:
    name: str

@dataclass(frozen=True)
class TCon:
    name: str
    args: tuple = ()

@dataclass(frozen=True)
class TFun:
    arg: object
    res: object

def list_type(elem):
    return TCon("List", (elem,))

def fun_type(arg_types, res):
    for arg in reversed(arg_types):
        res = TFun(arg, res)
    return res

def split_fun_type(t):
    args = []
    while isinstance(t, TFun):
        args.append(t.arg)
        t = t.res
    return args, t

def type_vars(t):
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, TFun):
        return type_vars(t.arg) | type_vars(t.res)
    return set().union(*(type_vars(a) for a in t.args)) if t.args else set()

def subst_type(t, sub):
    if isinstance(t, TVar):
        return sub.get(t.name, t)
    if isinstance(t, TFun):
        return TFun(subst_type(t.arg, sub), subst_type(t.res, sub))
    return TCon(t.name, tuple(subst_type(a, sub) for a in t.args))


# Expressions
@dataclass(frozen=True)
class SVar:
    name: str

@dataclass(frozen=True)
class SCon:
    name: str

@dataclass(frozen=True)
class SWildcard:
    pass

@dataclass(frozen=True)
class SApp:
    fn: object
    args: tuple

def apply(fn, *args):
    if not args:
        return fn
    if isinstance(fn, SApp):
        return SApp(fn.fn, fn.args + tuple(args))
    return SApp(fn, tuple(args))

def nil():
    return SCon("Nil")

def cons(head, tail):
    return SApp(SCon("Cons"), (head, tail))

def peano(n):
    term = SCon("Z")
    for _ in range(n):
        term = SApp(SCon("S"), (term,))
    return term

def expr_vars(e):
    # Variable names occurring in e, in order of first occurrence
    found = []
    def visit(node):
        if isinstance(node, SVar):
            if node.name not in found:
                found.append(node.name)
        elif isinstance(node, SApp):
            visit(node.fn)
            for a in node.args:
                visit(a)
    visit(e)
    return found


# Declarations
@dataclass(frozen=True)
class CtorDecl:
    name: str
    arg_types: tuple = ()

    @property
    def arity(self):
        return len(self.arg_types)

@dataclass(frozen=True)
class DataDecl:
    name: str
    params: tuple
    constructors: tuple

    def result_type(self):
        return TCon(self.name, tuple(TVar(p) for p in self.params))

@dataclass(frozen=True)
class Signature:
    name: str
    type: object

@dataclass(frozen=True)
class FreeVar:
    name: str
    type: Optional[object] = None

@dataclass(frozen=True)
class Rule:
    name: str
    patterns: tuple
    guard: Optional[object]
    rhs: object
    free_vars: tuple = ()
    line: Optional[int] = field(default=None, compare=False)

    @property
    def arity(self):
        return len(self.patterns)

@dataclass
class FuncDef:
    name: str
    rules: list

    @property
    def arity(self):
        return self.rules[0].arity

@dataclass
class SurfaceProgram:
    data_decls: list = field(default_factory=list)
    signatures: dict = field(default_factory=dict)
    func_defs: list = field(default_factory=list)

    def function(self, name):
        for f in self.func_defs:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class Query:
    expr: object
    free_vars: tuple = ()
