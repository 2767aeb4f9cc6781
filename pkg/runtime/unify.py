from runtime.values import (Ctor, Choice, FailValue, FAIL, Guard, SUCCESS, Constraint, BindTo,
        LazyBind, CHOOSE_LEFT, CHOOSE_RIGHT, Delayed, hnf, is_success, split_guards)

# Equational constraints over the value graph. All functions return
# Success-typed values: Success, Fail, Choice or Guard nodes.


def conj(ev, a, b):
    a = hnf(a)
    if is_success(a):
        return hnf(b)
    if isinstance(a, Choice):
        return Choice(a.id, ev.delay(conj, ev, a.left, b), ev.delay(conj, ev, a.right, b))
    if isinstance(a, Guard):
        return Guard(a.constraints, ev.delay(conj, ev, a.inner, b))
    return FAIL


def generator_path(var, name):
    """
    Decisions selecting constructor name in the generator structure of a free
    variable, together with the selected constructor node (None if absent).
    """
    path = []
    node = var
    while isinstance(node, Choice) and node.id.is_free:
        left = hnf(node.left)
        if isinstance(left, Ctor) and left.name == name:
            path.append(Constraint(node.id.raw, CHOOSE_LEFT))
            return path, left
        path.append(Constraint(node.id.raw, CHOOSE_RIGHT))
        node = hnf(node.right)
    if isinstance(node, Ctor) and node.name == name:
        return path, node
    return path, None


def unify_args(ev, xs, ys, unify):
    # Left-to-right conjunction of argument constraints
    if not xs:
        return SUCCESS
    if len(xs) == 1:
        return unify(ev, xs[0], ys[0])
    return conj(ev, ev.delay(unify, ev, xs[0], ys[0]),
            ev.delay(unify_args, ev, xs[1:], ys[1:], unify))


def bind_constructor(ev, var, term, unify, flipped=False):
    path, node = generator_path(var, term.name)
    if node is None:
        return FAIL
    if flipped:
        args = ev.delay(unify_args, ev, term.args, node.args, unify)
    else:
        args = ev.delay(unify_args, ev, node.args, term.args, unify)
    if not path:
        return hnf(args)
    return Guard(path, args)


def _propagate(ev, node, continue_with):
    # Fail, choice-flavored choices and guards on a demanded side
    if isinstance(node, FailValue):
        return FAIL
    if isinstance(node, Choice) and not node.id.is_free:
        return Choice(node.id, ev.delay(continue_with, node.left),
                ev.delay(continue_with, node.right))
    if isinstance(node, Guard):
        return Guard(node.constraints, ev.delay(continue_with, node.inner))
    return None


def _bind_variables(x, y):
    if x.id.raw == y.id.raw:
        return SUCCESS
    return Guard([Constraint(x.id.raw, BindTo(y.id.raw))], SUCCESS)


def strict_unify(ev, x, y):
    """x =:= y: both sides must reduce to unifiable constructor terms"""
    x = hnf(x)
    propagated = _propagate(ev, x, lambda v: strict_unify(ev, v, y))
    if propagated is not None:
        return propagated
    y = hnf(y)
    propagated = _propagate(ev, y, lambda v: strict_unify(ev, x, v))
    if propagated is not None:
        return propagated

    x_free, y_free = isinstance(x, Choice), isinstance(y, Choice)
    if x_free and y_free:
        return _bind_variables(x, y)
    if x_free:
        return _constructor_side(ev, x, y, strict_unify)
    if y_free:
        return _constructor_side(ev, y, x, strict_unify, flipped=True)
    return _decompose(ev, x, y, strict_unify)


def _constructor_side(ev, var, term, unify, flipped=False):
    if not isinstance(term, Ctor):
        return FAIL
    return bind_constructor(ev, var, term, unify, flipped)


def _decompose(ev, x, y, unify):
    if not (isinstance(x, Ctor) and isinstance(y, Ctor)):
        return FAIL
    if x.name != y.name or len(x.args) != len(y.args):
        return FAIL
    return unify_args(ev, x.args, y.args, unify)


def lazy_unify(ev, x, y):
    """
    x =:<= y with x the functional-pattern side: a free variable of x is
    bound lazily to the unevaluated y, which is only evaluated when the
    variable's value is demanded.
    """
    x = hnf(x)
    if isinstance(x, Choice) and x.id.is_free:
        pending = Delayed(lazy_bind_value, ev, x, y)
        return Guard([Constraint(x.id.raw, LazyBind(pending))], SUCCESS)
    propagated = _propagate(ev, x, lambda v: lazy_unify(ev, v, y))
    if propagated is not None:
        return propagated
    y = hnf(y)
    propagated = _propagate(ev, y, lambda v: lazy_unify(ev, x, v))
    if propagated is not None:
        return propagated
    if isinstance(y, Choice):
        return _constructor_side(ev, y, x, lazy_unify, flipped=True)
    return _decompose(ev, x, y, lazy_unify)


def lazy_bind_value(ev, var, value):
    """
    Success-typed value binding the free variable var to value: the decisions
    selecting value's constructor in var's generator, with lazy bindings of
    the generator arguments to value's arguments.
    """
    value = hnf(value)
    propagated = _propagate(ev, value, lambda v: lazy_bind_value(ev, var, v))
    if propagated is not None:
        return propagated
    if isinstance(value, Choice):
        return _bind_variables(var, value)
    if not isinstance(value, Ctor):
        return FAIL
    return bind_constructor(ev, var, value, lazy_unify)


def lazy_bind_constraints(ev, var, value):
    """
    Constraints binding var to value and the remainder: None if they are
    all, FAIL if the binding is inconsistent, else the choice to resolve.
    """
    return split_guards(lazy_bind_value(ev, var, value))
