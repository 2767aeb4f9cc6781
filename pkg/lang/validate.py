from lang.core import Var, CtorApp, FunCall, Case, Free, BUILTINS, subexpressions
from lang.syntax import TCon, split_fun_type


def check_type(t, data_decls):
    # Free variable types must be ground data types
    if not isinstance(t, TCon):
        return f"type {t} is not a ground data type"
    if t.name not in data_decls:
        return f"unknown type {t.name}"
    if len(t.args) != len(data_decls[t.name].params):
        return f"type {t.name} expects {len(data_decls[t.name].params)} arguments"
    for arg in t.args:
        problem = check_type(arg, data_decls)
        if problem:
            return problem
    return None


def known_types(typings):
    # Data type names of variables whose declared type is a type constructor
    return {name: t.name for name, t in typings if isinstance(t, TCon)}


def validate(program, functions=None):
    """
    Check the invariants of a CoreProgram, returning a list of diagnostics.
    functions restricts the check to the given core functions.
    """
    diagnostics = []

    def check(func_name, e, bound, typed):
        report = lambda message: diagnostics.append(f"{func_name}: {message}")
        if isinstance(e, Var):
            if e.name not in bound:
                report(f"unbound variable {e.name}")
            return
        if isinstance(e, CtorApp):
            info = program.ctors.get(e.name)
            if info is None:
                report(f"unknown constructor {e.name}")
            elif len(e.args) > info.arity:
                report(f"constructor {e.name} applied to {len(e.args)} arguments")
        elif isinstance(e, FunCall):
            if e.name not in program.funcs and e.name not in BUILTINS:
                report(f"unknown function {e.name}")
        elif isinstance(e, Case):
            if e.var not in bound:
                report(f"case on unbound variable {e.var}")
            types = set()
            for name, branch in e.branches.items():
                info = program.ctors.get(name)
                if info is None:
                    report(f"case branch for unknown constructor {name}")
                    continue
                types.add(info.type_name)
                if len(branch.vars) != info.arity:
                    report(f"case branch {name} binds {len(branch.vars)} variables, "
                            f"constructor has arity {info.arity}")
                check(func_name, branch.body, bound | set(branch.vars),
                        typed | known_types(zip(branch.vars, info.arg_types)))
            if len(types) > 1:
                report(f"case on {e.var} mixes constructors of types {sorted(types)}")
            elif e.var in typed and types and types != {typed[e.var]}:
                report(f"case on {e.var} of type {typed[e.var]} has branches for type "
                        f"{types.pop()}")
            return
        elif isinstance(e, Free):
            names = set()
            for name, t in e.vars:
                problem = check_type(t, program.data_decls)
                if problem:
                    report(f"free variable {name}: {problem}")
                names.add(name)
            check(func_name, e.body, bound | names, typed | known_types(e.vars))
            return
        for sub in subexpressions(e):
            check(func_name, sub, bound, typed)

    for func in (program.funcs.values() if functions is None else functions):
        arg_types, _ = split_fun_type(program.signatures.get(func.name))
        check(func.name, func.body, set(func.params),
                known_types(zip(func.params, arg_types)))
    return diagnostics
