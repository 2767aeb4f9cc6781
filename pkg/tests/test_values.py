import pytest

from errors import EvalError
from runtime.store import DecisionStore
from runtime.values import (ID, Ctor, Choice, Guard, Constraint, Delayed, FAIL, SUCCESS,
        CHOOSE_LEFT, CHOOSE_RIGHT, NO_DECISION, BindTo, narrow, free_id, choice_id, hnf,
        is_success, render_term, show_structure, split_guards, term_of)


def nat(n):
    value = Ctor("Z")
    for _ in range(n):
        value = Ctor("S", [value])
    return value

def bool_list(bs):
    value = Ctor("Nil")
    for b in reversed(bs):
        value = Ctor("Cons", [Ctor("True" if b else "False"), value])
    return value


def test_identifier_flavors():
    assert free_id(4).is_free
    assert not choice_id(4).is_free
    assert narrow(free_id(4)) == choice_id(4)
    assert narrow(choice_id(4)) == choice_id(4)
    assert ID(4) == choice_id(4)
    assert repr(free_id(4)) == "Free 4"


def test_constraint_requires_decision():
    with pytest.raises(AssertionError):
        Constraint(3, NO_DECISION)
    assert Constraint(3, BindTo(5)) == Constraint(3, BindTo(5))
    assert repr(Constraint(3, CHOOSE_LEFT)) == "3 :=: ChooseLeft"


def test_thunks_are_memoized():
    calls = []

    def compute():
        calls.append(1)
        return Ctor("True")

    shared = Delayed(compute)
    assert hnf(shared).name == "True"
    assert hnf(shared).name == "True"
    assert len(calls) == 1

    unshared = Delayed(compute, sharing=False)
    hnf(unshared)
    hnf(unshared)
    assert len(calls) == 3


def test_render_terms():
    assert render_term(nat(3)) == "3"
    assert render_term(bool_list([True, False])) == "[True,False]"
    assert render_term(Ctor("Nil")) == "[]"
    assert render_term(Ctor("Just", [Ctor("S", [Ctor("Z")])])) == "Just 1"
    assert render_term(Ctor("Just", [Ctor("Just", [Ctor("True")])])) == "Just (Just True)"


def test_render_residual_list():
    tail = Choice(free_id(3), Ctor("Nil"), Ctor("Cons", [Ctor("True"), Ctor("Nil")]))
    value = Ctor("Cons", [Choice(free_id(2), Ctor("True"), Ctor("False")), tail])
    assert render_term(value) == "(_x2:_x3)"
    assert render_term(value, names={2: "x"}) == "(x:_x3)"


def test_render_follows_store():
    value = Choice(free_id(2), Ctor("True"), Ctor("False"))
    store = DecisionStore()
    store.add_constraints([Constraint(2, CHOOSE_RIGHT)])
    assert render_term(value, store=store) == "False"
    assert term_of(value, store) == ("False",)

    store = DecisionStore()
    store.add_constraints([Constraint(2, BindTo(7))])
    assert render_term(value, store=store) == "_x7"
    assert term_of(value, store) == ("_x", 7)


def test_render_rejects_unresolved():
    with pytest.raises(EvalError):
        render_term(Choice(choice_id(2), Ctor("True"), Ctor("False")))
    with pytest.raises(EvalError):
        term_of(FAIL)


def test_show_structure():
    value = Choice(choice_id(2), Ctor("True"), Choice(free_id(3), nat(0), nat(1)))
    assert show_structure(value) == "Choice 2 True (Choice 3 Z (S Z))"
    assert show_structure(value, depth=1) == "Choice 2 … …"


def test_split_guards():
    c1, c2 = Constraint(2, CHOOSE_LEFT), Constraint(3, CHOOSE_RIGHT)
    constraints, rest = split_guards(Guard([c1], Guard([c2], SUCCESS)))
    assert constraints == [c1, c2] and rest is None

    _, rest = split_guards(Guard([c1], FAIL))
    assert rest is FAIL

    choice = Choice(choice_id(4), SUCCESS, FAIL)
    _, rest = split_guards(Guard([c1], choice))
    assert rest is choice
    assert is_success(SUCCESS) and not is_success(Ctor("True"))
