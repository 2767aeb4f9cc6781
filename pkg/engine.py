import os
import sys

import constants
from errors import ParseError, ValidationError
from lang.core import CoreFunction, Free, to_core, query_to_core
from lang.funpat import transform_functional_patterns
from lang.parser import parse_program, parse_query, parse_type, check_declarations
from lang.prelude import with_prelude, derive_generator, add_derived_equalities
from lang.syntax import FreeVar
from lang.validate import validate
from runtime.eval import Evaluator
from runtime.search import collect_tree
from runtime.store import DecisionStore
from runtime.supply import init_supply
from runtime.values import Delayed, Suspension, show_structure

QUERY_NAME = "<query>"


def resolve_program_path(path):
    # Program files are looked up as given, then in the bundled program directory
    if os.path.exists(path):
        return path
    if os.path.basename(path) == os.path.basename(constants.PRELUDE_FILE):
        return constants.PRELUDE_FILE
    bundled = os.path.join(constants.PROGRAM_DIR, path)
    if os.path.exists(bundled):
        return bundled
    bundled_fl = bundled + ".fl"
    assert os.path.exists(bundled_fl), f"No program file: {path}"
    return bundled_fl

def parse_free_declaration(text):
    """'x::T' as given to --free"""
    name, sep, type_text = text.partition("::")
    if not sep or not name.strip().isidentifier():
        raise ParseError(f"Expected a declaration 'x::T', got '{text}'")
    return FreeVar(name.strip(), parse_type(type_text.strip()))


class Engine:
    """
    A loaded program: parsed, merged with the prelude, functional patterns
    transformed, compiled to core and validated.
    """
    def __init__(self, program_text="", prelude=True, sharing=True,
            step_limit=constants.DEFAULT_STEP_LIMIT, trace=False, supply_model="integer",
            trace_stream=None):
        sys.setrecursionlimit(max(sys.getrecursionlimit(), constants.RECURSION_LIMIT))
        assert supply_model in constants.SUPPLY_MODELS, f"Unknown supply model: {supply_model}"
        self.supply_model = constants.SUPPLY_MODELS[supply_model]

        surface = parse_program(program_text)
        if prelude:
            surface = with_prelude(surface)
            check_declarations(surface)
        self.surface = transform_functional_patterns(surface)
        self.core = add_derived_equalities(to_core(self.surface))
        diagnostics = validate(self.core)
        if diagnostics:
            raise ValidationError(diagnostics)

        generators = {name: derive_generator(decl) for name, decl in self.core.data_decls.items()}
        self.evaluator = Evaluator(self.core, generators, sharing=sharing,
                step_limit=step_limit, trace=trace, trace_stream=trace_stream)

    @classmethod
    def from_file(cls, path, **kwargs):
        path = resolve_program_path(path)
        if os.path.abspath(path) == os.path.abspath(constants.PRELUDE_FILE):
            kwargs["prelude"] = False
        with open(path, encoding="utf-8") as program_file:
            return cls(program_file.read(), **kwargs)

    def prepare(self, text, free=()):
        """
        Top-level value of a query at the initial supply, together with the
        values of its declared free variables (name -> generator value).
        """
        query = parse_query(text)
        extra = [parse_free_declaration(d) if isinstance(d, str) else d for d in free]
        variables, body = query_to_core(self.core, query, extra)
        diagnostics = validate(self.core,
                [CoreFunction(QUERY_NAME, (), Free(variables, body) if variables else body)])
        if diagnostics:
            raise ValidationError(diagnostics)

        ev = self.evaluator
        ev.steps = 0
        s = init_supply(self.supply_model)
        env = {}
        if variables:
            env, s = ev.bind_free(variables, body, env, s)
        return Suspension(ev, body, env, s), {name: env[name] for name, _ in variables}

    def structure(self, text, free=(), depth=64):
        """Choice structure of a query's head normal form (without search)"""
        value, _ = self.prepare(text, free)
        return show_structure(value, depth)

    def search(self, text, strategy="dfs", limit=None, free=(), store=None):
        assert strategy in constants.STRATEGIES, f"Unknown strategy: {strategy}"
        value, bindings = self.prepare(text, free)
        store = store if store is not None else DecisionStore(self.supply_model)
        normal = Delayed(self.evaluator.eval_nf, value)
        return constants.STRATEGIES[strategy](normal, store, limit=limit, bindings=bindings,
                tick=self.evaluator.tick)

    def results(self, text, strategy="dfs", limit=None, free=()):
        return [str(record) for record in self.search(text, strategy, limit, free)]

    def tree(self, text, depth_bound=None, free=(), store=None):
        value, bindings = self.prepare(text, free)
        store = store if store is not None else DecisionStore(self.supply_model)
        return collect_tree(Delayed(self.evaluator.eval_nf, value), store, depth_bound, bindings,
                tick=self.evaluator.tick)
