import os

import pytest

import constants
from errors import FunctionalPatternError, ResolveError
from lang.funpat import transform_functional_patterns, is_functional_pattern
from lang.parser import parse_program, parse_query
from lang.prelude import with_prelude
from lang.syntax import SVar, SCon, SApp, SWildcard, FreeVar, TCon, list_type, nil, cons

BOOL = TCon("Bool")
NAT = TCon("Nat")


def load(name):
    with open(os.path.join(constants.PROGRAM_DIR, name), encoding="utf-8") as program_file:
        return transform_functional_patterns(with_prelude(parse_program(program_file.read())))

def transform(text):
    return transform_functional_patterns(with_prelude(parse_program(text)))


def test_functional_pattern_detection():
    assert not is_functional_pattern(parse_query("(x : _)").expr)
    assert not is_functional_pattern(parse_query("Just [x, y]").expr)
    assert is_functional_pattern(parse_query("xs ++ [e]").expr)
    assert is_functional_pattern(parse_query("Just (add x x)").expr)


def test_wildcards_become_variables():
    rule = load("last.fl").function("last'").rules[0]
    assert rule.patterns == (SVar("fp2"),)
    assert rule.guard == SApp(SVar("=:<="), (SApp(SVar("++"),
        (SVar("fp1"), cons(SVar("e"), nil()))), SVar("fp2")))
    assert rule.free_vars == (FreeVar("fp1", list_type(BOOL)), FreeVar("e", BOOL))
    assert rule.rhs == SVar("e")


def test_pattern_variables_are_typed():
    rule = load("half.fl").function("half'").rules[0]
    assert rule.patterns == (SVar("fp1"),)
    assert rule.guard == SApp(SVar("=:<="), (SApp(SVar("add"), (SVar("x"), SVar("x"))),
        SVar("fp1")))
    assert rule.free_vars == (FreeVar("x", NAT),)


def test_unification_precedes_guard():
    rule = load("fstdup.fl").function("fstDup'").rules[0]
    assert rule.guard.fn == SVar("&")
    unification, original = rule.guard.args
    assert unification.fn == SVar("=:<=")
    assert original.fn == SVar("&")
    assert {v.name for v in rule.free_vars} == {"ys", "e", "zs"}
    assert all(v.type == list_type(NAT) for v in rule.free_vars if v.name != "e")


def test_declared_free_variables_keep_their_types():
    rule = load("last.fl").function("last").rules[0]
    assert rule.free_vars == (FreeVar("ys", list_type(BOOL)), FreeVar("e", BOOL))


@pytest.mark.parametrize("source", [
    "f :: [Bool] -> Bool\nf xs | ys ++ [e] =:= xs = e where ys, e::Bool free\n",
    "f :: [Bool] -> Bool\nf (ys ++ [e]) | z =:= e = e where z free\n",
])
def test_free_variables_are_not_inferred(source):
    with pytest.raises(ResolveError):
        transform(source)


def test_constructor_rules_unchanged():
    program = with_prelude(parse_program(""))
    transformed = transform_functional_patterns(program)
    assert transformed.function("head").rules == program.function("head").rules
    assert transformed.function("?").rules[0].patterns == (SVar("x"), SWildcard())


def test_mixed_patterns():
    program = transform("""
pick :: Bool -> [Bool] -> Bool
pick True (xs ++ [x]) = x
pick False (x : _) = x
""")
    first, second = program.function("pick").rules
    assert first.patterns == (SCon("True"), SVar("fp1"))
    assert first.free_vars == (FreeVar("xs", list_type(BOOL)), FreeVar("x", BOOL))
    assert second.guard is None


def test_transformation_is_idempotent():
    program = load("palindrome.fl")
    assert transform_functional_patterns(program) == program


def test_polymorphic_pattern_variable_rejected():
    with pytest.raises(FunctionalPatternError):
        transform_functional_patterns(parse_program("g :: a -> a\ng x = x\nf (g x) = x\n"))


def test_ill_typed_pattern_rejected():
    with pytest.raises(FunctionalPatternError):
        transform("f :: Bool -> Bool\nf (not 1) = True\n")


def test_untyped_free_variable_rejected():
    with pytest.raises(ResolveError):
        transform_functional_patterns(parse_program("data B = T\nf = x where x free\n"))
