from dataclasses import dataclass

from errors import EvalError

# Identifier flavors
CHOICE_FLAVOR = "choice"
FREE_FLAVOR = "free"


@dataclass(frozen=True)
class ID:
    raw: int
    flavor: str = CHOICE_FLAVOR

    @property
    def is_free(self):
        return self.flavor == FREE_FLAVOR

    def __repr__(self):
        return f"Free {self.raw}" if self.is_free else str(self.raw)

def narrow(i):
    if i.is_free:
        return ID(i.raw, CHOICE_FLAVOR)
    return i

def free_id(raw):
    return ID(raw, FREE_FLAVOR)

def choice_id(raw):
    return ID(raw, CHOICE_FLAVOR)


# Decisions
class Decision:
    concrete = False

class _Named(Decision):
    def __init__(self, name, concrete):
        self.name = name
        self.concrete = concrete

    def __repr__(self):
        return self.name

NO_DECISION = _Named("NoDecision", False)
CHOOSE_LEFT = _Named("ChooseLeft", True)
CHOOSE_RIGHT = _Named("ChooseRight", True)


@dataclass(frozen=True)
class BindTo(Decision):
    target: int

    def __repr__(self):
        return f"BindTo {self.target}"


class LazyBind(Decision):
    # pending: a thunk of a Success-typed value carrying the binding constraints
    def __init__(self, pending):
        self.pending = pending

    def __repr__(self):
        return "LazyBind …"


@dataclass(frozen=True)
class Constraint:
    id: int
    decision: Decision

    def __post_init__(self):
        assert self.decision is not NO_DECISION, "Constraint without decision"

    def __repr__(self):
        return f"{self.id} :=: {self.decision!r}"


# Head-normal value nodes
class Value:
    pass


class Ctor(Value):
    __slots__ = ("name", "args")

    def __init__(self, name, args=()):
        self.name = name
        self.args = tuple(args)

    def __repr__(self):
        if not self.args:
            return self.name
        return "(" + " ".join([self.name] + [repr(a) for a in self.args]) + ")"


class Choice(Value):
    __slots__ = ("id", "left", "right")

    def __init__(self, id, left, right):
        self.id = id
        self.left = left
        self.right = right

    def __repr__(self):
        return f"(Choice {self.id!r} {self.left!r} {self.right!r})"


class FailValue(Value):
    def __repr__(self):
        return "Fail"

FAIL = FailValue()


class Guard(Value):
    __slots__ = ("constraints", "inner")

    def __init__(self, constraints, inner):
        assert constraints, "Guard with empty constraint list"
        self.constraints = tuple(constraints)
        self.inner = inner

    def __repr__(self):
        return f"(Guard {list(self.constraints)!r} {self.inner!r})"


SUCCESS = Ctor("Success")

def is_success(v):
    return isinstance(v, Ctor) and v.name == "Success"


class PartialApp(Value):
    # kind is "func", "ctor" or "builtin"
    __slots__ = ("name", "arity", "args", "kind")

    def __init__(self, name, arity, args=(), kind="func"):
        self.name = name
        self.arity = arity
        self.args = tuple(args)
        self.kind = kind

    def __repr__(self):
        return "(" + " ".join([self.name] + [repr(a) for a in self.args]) + ")"


# Suspended values
class Thunk:
    __slots__ = ("memo", "sharing")

    def __init__(self, sharing=True):
        self.memo = None
        self.sharing = sharing

    def compute(self):
        raise NotImplementedError()

    def force(self):
        if self.memo is not None:
            return self.memo
        result = hnf(self.compute())
        if self.sharing:
            self.memo = result
        return result

    @property
    def forced(self):
        return self.memo is not None

    def __repr__(self):
        if self.memo is not None:
            return repr(self.memo)
        return "<suspension>"


class Suspension(Thunk):
    """Unevaluated core expression with its environment and identifier supply."""
    __slots__ = ("evaluator", "expr", "env", "supply")

    def __init__(self, evaluator, expr, env, supply):
        super(Suspension, self).__init__(evaluator.sharing)
        self.evaluator = evaluator
        self.expr = expr
        self.env = env
        self.supply = supply

    def compute(self):
        return self.evaluator.eval_hnf(self.expr, self.env, self.supply)


class Delayed(Thunk):
    # Runtime-built suspension (generator arguments, lazy bindings, propagation)
    __slots__ = ("fn", "args")

    def __init__(self, fn, *args, sharing=True):
        super(Delayed, self).__init__(sharing)
        self.fn = fn
        self.args = args

    def compute(self):
        return self.fn(*self.args)


def hnf(ref):
    while isinstance(ref, Thunk):
        ref = ref.force()
    return ref


# Rendering
def follow(ref, store=None):
    # Head-normalize, following choices whose decision is known in store
    node = hnf(ref)
    while isinstance(node, Choice) and store is not None:
        decision = store.lookup(node.id.raw)
        if decision is CHOOSE_LEFT:
            node = hnf(node.left)
        elif decision is CHOOSE_RIGHT:
            node = hnf(node.right)
        else:
            break
    return node

def is_lazy(node, store):
    # Variable whose lazy binding was never forced
    return store is not None and isinstance(store.lookup(node.id.raw), LazyBind)

def variable_name(raw, store=None, names=None):
    if store is not None:
        raw = store.find(raw)
    if names and raw in names:
        return names[raw]
    return f"_x{raw}"

def render_term(ref, names=None, store=None):
    text, _ = _render(ref, names, store)
    return text

def _render(ref, names, store):
    # Returns (text, is_atomic)
    node = follow(ref, store)
    if isinstance(node, Choice):
        if node.id.is_free:
            if is_lazy(node, store):
                return "_", True
            return variable_name(node.id.raw, store, names), True
        raise EvalError(f"Unresolved choice {node.id.raw} in result")
    if isinstance(node, (Guard, FailValue)):
        raise EvalError(f"Unresolved {node!r} in result")
    if isinstance(node, PartialApp):
        if not node.args:
            return node.name, True
        parts = [node.name] + [_render_arg(a, names, store) for a in node.args]
        return " ".join(parts), False

    if node.name in ("Nil", "Cons"):
        return _render_list(node, names, store), True
    if node.name in ("Z", "S"):
        numeral = _peano_value(node, store)
        if numeral is not None:
            return str(numeral), True
    if not node.args:
        return node.name, True
    parts = [node.name] + [_render_arg(a, names, store) for a in node.args]
    return " ".join(parts), False

def _render_arg(ref, names, store):
    text, atomic = _render(ref, names, store)
    return text if atomic else f"({text})"

def _render_list(node, names, store):
    items = []
    while isinstance(node, Ctor) and node.name == "Cons":
        items.append(_render(node.args[0], names, store)[0])
        node = follow(node.args[1], store)
    if isinstance(node, Ctor) and node.name == "Nil":
        return "[" + ",".join(items) + "]"
    tail, _ = _render(node, names, store)
    return "(" + ":".join(items + [tail]) + ")"

def _peano_value(node, store):
    count = 0
    while isinstance(node, Ctor) and node.name == "S":
        count += 1
        node = follow(node.args[0], store)
    if isinstance(node, Ctor) and node.name == "Z":
        return count
    return None

def show_structure(ref, depth=64):
    """Debug rendering of a value graph with choice identifiers (e.g. golden traces)."""
    node = hnf(ref)
    if depth == 0:
        return "…"
    if isinstance(node, Choice):
        return (f"Choice {node.id.raw} {_paren(show_structure(node.left, depth-1))} "
                f"{_paren(show_structure(node.right, depth-1))}")
    if isinstance(node, Guard):
        return f"Guard {list(node.constraints)!r} {_paren(show_structure(node.inner, depth-1))}"
    if isinstance(node, FailValue):
        return "Fail"
    if isinstance(node, PartialApp):
        return repr(node)
    if not node.args:
        return node.name
    return " ".join([node.name] + [_paren(show_structure(a, depth-1)) for a in node.args])

def _paren(text):
    return f"({text})" if " " in text else text


def split_guards(ref):
    """
    Split a Success-typed value into the constraints of its leading guards and
    the remainder: None for Success, FAIL for failure, else the first
    non-deterministic node.
    """
    constraints = []
    node = hnf(ref)
    while isinstance(node, Guard):
        constraints.extend(node.constraints)
        node = hnf(node.inner)
    if is_success(node):
        return constraints, None
    if isinstance(node, Choice):
        return constraints, node
    return constraints, FAIL


def term_of(ref, store=None):
    """
    Structured form of a resolved value: (constructor, arg, ...) tuples,
    with ("_x", identifier) for unbound free variables and ("_",) for
    unevaluated lazy bindings.
    """
    node = follow(ref, store)
    if isinstance(node, Choice):
        if node.id.is_free:
            if is_lazy(node, store):
                return ("_",)
            return ("_x", store.find(node.id.raw) if store is not None else node.id.raw)
        raise EvalError(f"Unresolved choice {node.id.raw} in result")
    if isinstance(node, (Guard, FailValue)):
        raise EvalError(f"Unresolved {node!r} in result")
    return (node.name,) + tuple(term_of(a, store) for a in node.args)
