from engine import Engine
from lang.syntax import TCon
from runtime.supply import IntegerSupply
from runtime.unify import (strict_unify, lazy_unify, conj, generator_path, lazy_bind_value,
        lazy_bind_constraints)
from runtime.values import (Ctor, Choice, Guard, Constraint, BindTo, LazyBind, Delayed, FAIL,
        SUCCESS, CHOOSE_LEFT, CHOOSE_RIGHT, choice_id, hnf, is_success)

PRELUDE = Engine("")
EV = PRELUDE.evaluator
TRUE, FALSE = Ctor("True"), Ctor("False")


def free_bool(raw):
    return hnf(EV.generate(TCon("Bool"), IntegerSupply(raw)))

def free_list(raw):
    return hnf(EV.generate(TCon("List", (TCon("Bool"),)), IntegerSupply(raw)))

def bool_list(*bools):
    value = Ctor("Nil")
    for b in reversed(bools):
        value = Ctor("Cons", [b, value])
    return value

def boom():
    raise AssertionError("evaluated")


def walk(ref, decisions):
    """Guards met on the path given by decisions (raw -> "L"/"R") and the final node"""
    constraints = []
    node = hnf(ref)
    while True:
        if isinstance(node, Guard):
            constraints.extend(node.constraints)
            node = hnf(node.inner)
        elif isinstance(node, Choice):
            node = hnf(node.left if decisions[node.id.raw] == "L" else node.right)
        else:
            return constraints, node


def test_equal_constructors():
    assert is_success(hnf(strict_unify(EV, TRUE, TRUE)))
    assert is_success(hnf(strict_unify(EV, bool_list(TRUE, FALSE), bool_list(TRUE, FALSE))))


def test_constructor_clash():
    assert hnf(strict_unify(EV, TRUE, FALSE)) is FAIL
    assert hnf(strict_unify(EV, bool_list(TRUE), bool_list(TRUE, TRUE))) is FAIL


def test_free_variable_against_constructor():
    result = strict_unify(EV, free_bool(4), TRUE)
    assert isinstance(result, Guard)
    assert result.constraints == (Constraint(4, CHOOSE_LEFT),)
    assert is_success(hnf(result.inner))

    result = strict_unify(EV, FALSE, free_bool(4))
    assert result.constraints == (Constraint(4, CHOOSE_RIGHT),)


def test_free_variables_bind():
    result = strict_unify(EV, free_bool(4), free_bool(5))
    assert isinstance(result, Guard)
    assert result.constraints == (Constraint(4, BindTo(5)),)
    assert is_success(hnf(result.inner))
    assert is_success(strict_unify(EV, free_bool(4), free_bool(4)))


def test_free_list_against_constructor_term():
    result = strict_unify(EV, free_list(2), bool_list(TRUE))
    constraints, node = walk(result, {})
    assert constraints == [Constraint(2, CHOOSE_RIGHT), Constraint(4, CHOOSE_LEFT),
            Constraint(5, CHOOSE_LEFT)]
    assert is_success(node)


def test_choice_propagates():
    result = hnf(strict_unify(EV, Choice(choice_id(7), TRUE, FALSE), TRUE))
    assert isinstance(result, Choice) and result.id == choice_id(7)
    assert is_success(hnf(result.left))
    assert hnf(result.right) is FAIL

    result = hnf(strict_unify(EV, TRUE, Choice(choice_id(7), TRUE, FALSE)))
    assert result.id == choice_id(7)


def test_failure_propagates():
    assert hnf(strict_unify(EV, FAIL, TRUE)) is FAIL
    assert hnf(strict_unify(EV, TRUE, FAIL)) is FAIL
    assert hnf(lazy_unify(EV, TRUE, FAIL)) is FAIL


def test_guard_propagates():
    guarded = Guard([Constraint(9, CHOOSE_LEFT)], TRUE)
    result = hnf(strict_unify(EV, guarded, TRUE))
    assert result.constraints == (Constraint(9, CHOOSE_LEFT),)
    assert is_success(hnf(result.inner))


def test_lazy_binding_does_not_evaluate():
    result = lazy_unify(EV, free_bool(4), Delayed(boom))
    assert isinstance(result, Guard)
    (constraint,) = result.constraints
    assert constraint.id == 4
    assert isinstance(constraint.decision, LazyBind)


def test_lazy_unification_decomposes():
    result = lazy_unify(EV, Ctor("Cons", [free_bool(4), Ctor("Nil")]), bool_list(Delayed(boom)))
    constraints, node = walk(result, {})
    assert [(c.id, type(c.decision)) for c in constraints] == [(4, LazyBind)]
    assert is_success(node)


def test_lazy_binding_value():
    var = free_bool(4)
    constraints, node = walk(lazy_bind_value(EV, var, FALSE), {})
    assert constraints == [Constraint(4, CHOOSE_RIGHT)]
    assert is_success(node)

    constraints, _ = walk(lazy_bind_value(EV, var, free_bool(6)), {})
    assert constraints == [Constraint(4, BindTo(6))]


def test_lazy_binding_constraints():
    assert lazy_bind_constraints(EV, free_bool(4), TRUE) == ([Constraint(4, CHOOSE_LEFT)], None)
    assert lazy_bind_constraints(EV, free_bool(4), FAIL) == ([], FAIL)

    constraints, rest = lazy_bind_constraints(EV, free_list(2), bool_list(TRUE))
    assert constraints[0] == Constraint(2, CHOOSE_RIGHT)
    assert [(c.id, type(c.decision)) for c in constraints[1:]] == [(4, LazyBind), (5, LazyBind)]
    assert rest is None

    # Non-deterministic values are left to the search
    constraints, rest = lazy_bind_constraints(EV, free_bool(4),
            Choice(choice_id(9), TRUE, FALSE))
    assert constraints == []
    assert isinstance(rest, Choice) and rest.id.raw == 9


def test_lazy_trace_of_last():
    # xs at 2, its head at 4 and tail at 5, e at 3
    value, _ = PRELUDE.prepare("(xs ++ [e]) =:<= [failed, True] where xs::[Bool], e::Bool free")
    constraints, node = walk(value, {2: "R", 5: "L"})
    assert [(c.id, type(c.decision)) for c in constraints] == [(4, LazyBind), (3, LazyBind)]
    assert is_success(node)

    _, node = walk(value, {2: "L"})
    assert node is FAIL


def test_conjunction():
    assert is_success(conj(EV, SUCCESS, SUCCESS))
    assert conj(EV, FAIL, Delayed(boom)) is FAIL
    guarded = conj(EV, Guard([Constraint(3, CHOOSE_LEFT)], SUCCESS), SUCCESS)
    assert guarded.constraints == (Constraint(3, CHOOSE_LEFT),)


def test_generator_path():
    path, node = generator_path(free_list(2), "Cons")
    assert path == [Constraint(2, CHOOSE_RIGHT)]
    assert node.name == "Cons"
    path, node = generator_path(free_bool(4), "Nil")
    assert node is None
