import functools

import constants
from errors import ResolveError
from lang.core import Var, CtorApp, FunCall, Branch, Case, CoreFunction
from lang.parser import parse_program
from lang.syntax import SurfaceProgram, subst_type
from runtime.supply import left_supply, right_supply, spread
from runtime.values import Ctor, Choice, free_id


@functools.lru_cache(maxsize=1)
def prelude_program():
    with open(constants.PRELUDE_FILE, encoding="utf-8") as prelude_file:
        return parse_program(prelude_file.read())

def with_prelude(program):
    """
    Prelude followed by program. Functions of program shadow prelude functions,
    data declarations identical to a prelude declaration are shared.
    """
    prelude = prelude_program()
    defined = {f.name for f in program.func_defs}
    shared = set(prelude.data_decls) & set(program.data_decls)
    return SurfaceProgram(
            prelude.data_decls + [d for d in program.data_decls if d not in shared],
            {**{name: t for name, t in prelude.signatures.items() if name not in defined},
                **program.signatures},
            [f for f in prelude.func_defs if f.name not in defined] + list(program.func_defs))


# Generators
def generator_name(type_name):
    return f"gen.{type_name}"

def constructor_supplies(s, n_args, chosen):
    # A single argument of a choice alternative cannot take s itself
    if n_args == 1 and chosen:
        return [left_supply(s)]
    return spread(s, n_args)


class GeneratorFunction:
    """
    Free variable of a data type: a right-nested choice over the constructors
    in declaration order, all choices flavored as free variables.
    """
    def __init__(self, decl):
        if not decl.constructors:
            raise ResolveError(f"Type {decl.name} has no constructors")
        self.decl = decl
        self.name = generator_name(decl.name)

    def generate(self, ev, type_args, s):
        sub = dict(zip(self.decl.params, type_args))
        return self._constructors(ev, self.decl.constructors, sub, s)

    def _constructors(self, ev, ctors, sub, s):
        if len(ctors) == 1:
            return self._build(ev, ctors[0], sub, s, chosen=False)
        if len(ctors) == 2:
            return Choice(free_id(s.this_id()), self._build(ev, ctors[0], sub, s),
                    self._build(ev, ctors[1], sub, s))
        return Choice(free_id(s.this_id()),
                self._build(ev, ctors[0], sub, left_supply(s), chosen=False),
                ev.delay(self._constructors, ev, ctors[1:], sub, right_supply(s)))

    def _build(self, ev, ctor, sub, s, chosen=True):
        supplies = constructor_supplies(s, ctor.arity, chosen)
        return Ctor(ctor.name, [ev.delay(ev.generate, subst_type(t, sub), sk)
            for t, sk in zip(ctor.arg_types, supplies)])

def derive_generator(decl):
    return GeneratorFunction(decl)


# Equality
def eq_name(type_name):
    return f"==.{type_name}"

def _all_equal(xs, ys):
    if not xs:
        return CtorApp("True", ())
    test = FunCall("==", (Var(xs[0]), Var(ys[0])))
    if len(xs) == 1:
        return test
    return FunCall("&&", (test, _all_equal(xs[1:], ys[1:])))

def derive_eq(decl):
    """Structural Boolean equality: a case on both arguments per constructor pair"""
    outer = {}
    for ctor in decl.constructors:
        xs = tuple(f"_x{k}" for k in range(ctor.arity))
        inner = {}
        for other in decl.constructors:
            ys = tuple(f"_y{k}" for k in range(other.arity))
            inner[other.name] = Branch(ys, _all_equal(xs, ys) if other.name == ctor.name
                    else CtorApp("False", ()))
        outer[ctor.name] = Branch(xs, Case("_r", inner))
    return CoreFunction(eq_name(decl.name), ("_l", "_r"), Case("_l", outer))

def add_derived_equalities(core):
    # Needs Bool and && from the prelude
    if "Bool" not in core.data_decls or "&&" not in core.funcs:
        return core
    for decl in core.data_decls.values():
        core.add_function(derive_eq(decl))
    return core
