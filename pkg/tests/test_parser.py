import glob
import os

import pytest

import constants
from errors import ParseError, ResolveError
from lang.parser import parse_program, parse_query, parse_type, pretty_program, pretty_expr
from lang.syntax import (TVar, TCon, TFun, SVar, SCon, SApp, FreeVar, list_type, nil, cons,
        peano)

PROGRAM_FILES = sorted(glob.glob(os.path.join(constants.PROGRAM_DIR, "*.fl")))


def read(path):
    with open(path, encoding="utf-8") as program_file:
        return program_file.read()

def expr(text):
    return parse_query(text).expr


def test_types():
    assert parse_type("Bool") == TCon("Bool")
    assert parse_type("[a]") == list_type(TVar("a"))
    assert parse_type("List Nat") == TCon("List", (TCon("Nat"),))
    assert parse_type("(a -> b) -> [a] -> [b]") == TFun(TFun(TVar("a"), TVar("b")),
            TFun(list_type(TVar("a")), list_type(TVar("b"))))


def test_sugar():
    assert expr("3") == peano(3)
    assert expr("[]") == nil()
    assert expr("[True, False]") == cons(SCon("True"), cons(SCon("False"), nil()))
    assert expr("x : xs") == cons(SVar("x"), SVar("xs"))
    assert expr("(:)") == SCon("Cons")
    assert expr("(++)") == SVar("++")


def test_application():
    assert expr("f x y") == SApp(SVar("f"), (SVar("x"), SVar("y")))
    assert expr("(f x) y") == expr("f x y")
    assert expr("S (S Z)") == peano(2)


def test_precedence():
    assert expr("a ? b & c") == SApp(SVar("?"), (SVar("a"),
        SApp(SVar("&"), (SVar("b"), SVar("c")))))
    assert expr("x == y || z") == expr("(x == y) || z")
    assert expr("a || b && c") == expr("a || (b && c)")
    assert expr("x =:= y & z =:<= w") == expr("(x =:= y) & (z =:<= w)")
    assert expr("f x : xs") == expr("(f x) : xs")
    assert expr("xs ++ [e] == ys") == expr("(xs ++ [e]) == ys")
    assert expr("a ? b ? c") == expr("a ? (b ? c)")
    assert expr("a ++ b ++ c") == expr("a ++ (b ++ c)")
    assert expr("x : y : zs") == cons(SVar("x"), cons(SVar("y"), SVar("zs")))


def test_equations_do_not_chain():
    with pytest.raises(ParseError):
        parse_query("a == b == c")


def test_query_free_variables():
    query = parse_query("head xs where xs::[Bool], e :: Nat free")
    assert query.expr == SApp(SVar("head"), (SVar("xs"),))
    assert query.free_vars == (FreeVar("xs", list_type(TCon("Bool"))),
            FreeVar("e", TCon("Nat")))


def test_program_items():
    program = parse_program("""
data Maybe a = Nothing | Just a
fromJust :: Maybe a -> a
fromJust (Just x) = x
-- a comment
both x y | x =:= y
  = x
one = 1 ; two = 2
""")
    assert [d.name for d in program.data_decls] == ["Maybe"]
    assert program.data_decls[0].params == ("a",)
    assert [c.arity for c in program.data_decls[0].constructors] == [0, 1]
    assert [f.name for f in program.func_defs] == ["fromJust", "both", "one", "two"]
    both = program.function("both").rules[0]
    assert both.guard == SApp(SVar("=:="), (SVar("x"), SVar("y")))
    assert both.line == 6
    assert program.function("two").rules[0].rhs == peano(2)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_program("f x = x\ng y = = y\n")
    assert info.value.line == 2
    assert "line 2" in str(info.value)

    with pytest.raises(ParseError):
        parse_query("True ?")
    with pytest.raises(ParseError):
        parse_query("   ")
    with pytest.raises(ParseError):
        parse_program("  f = True\n")


def test_resolve_errors():
    with pytest.raises(ResolveError):
        parse_program("f = True\ng = False\nf = False\n")
    with pytest.raises(ResolveError):
        parse_program("f x = x\nf = True\n")
    with pytest.raises(ResolveError):
        parse_program("f :: Bool\nf :: Bool\n")
    with pytest.raises(ResolveError):
        parse_program("data T = A\ndata U = A\n")
    with pytest.raises(ParseError):
        parse_program("True = False\n")


@pytest.mark.parametrize("path", [constants.PRELUDE_FILE] + PROGRAM_FILES,
        ids=os.path.basename)
def test_pretty_round_trip(path):
    program = parse_program(read(path))
    assert parse_program(pretty_program(program)) == program


def test_pretty_expr():
    assert pretty_expr(expr("[x, y]")) == "(x : (y : []))"
    assert pretty_expr(expr("f (g x) ? y")) == "((f (g x)) ? y)"
    assert pretty_expr(expr("(?)")) == "(?)"
