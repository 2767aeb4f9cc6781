import functools

import lark

import constants
from errors import ParseError, ResolveError
from lang.syntax import (TVar, TCon, TFun, list_type, SVar, SCon, SWildcard, SApp, apply,
        nil, cons, peano, CtorDecl, DataDecl, Signature, FreeVar, Rule, FuncDef,
        SurfaceProgram, Query)

OPERATORS = ("?", "&", "=:=", "=:<=", "==", "||", "&&", "++")


@functools.lru_cache(maxsize=None)
def get_parser():
    with open(constants.GRAMMAR_FILE) as grammar_file:
        grammar = grammar_file.read()
    return lark.Lark(grammar, start=["item", "query", "type"], parser="earley",
            lexer="basic", ambiguity="resolve")


class ToSyntax(lark.Transformer):
    """Builds the surface syntax tree, expanding list and numeral sugar"""
    def __init__(self, line=None):
        super(ToSyntax, self).__init__()
        self.line = line

    # Types
    def tcon(self, children):
        return TCon(str(children[0]))

    def tvar(self, children):
        return TVar(str(children[0]))

    def tlist(self, children):
        return list_type(children[0])

    def tapp(self, children):
        return TCon(str(children[0]), tuple(children[1:]))

    def tfun(self, children):
        return TFun(children[0], children[1])

    # Expressions
    def var(self, children):
        return SVar(str(children[0]))

    def con(self, children):
        return SCon(str(children[0]))

    def int(self, children):
        return peano(int(children[0]))

    def wildcard(self, children):
        return SWildcard()

    def op(self, children):
        return str(children[0])

    def op_ref(self, children):
        name = children[0]
        return SCon("Cons") if name == ":" else SVar(name)

    def list(self, children):
        items = [c for c in children if c is not None]
        term = nil()
        for item in reversed(items):
            term = cons(item, term)
        return term

    def application(self, children):
        return apply(children[0], children[1])

    def _binary(self, name, left, right):
        return SApp(SVar(name), (left, right))

    def choice_op(self, children):
        return self._binary("?", *children)

    def conj_op(self, children):
        return self._binary("&", *children)

    def or_op(self, children):
        return self._binary("||", *children)

    def and_op(self, children):
        return self._binary("&&", *children)

    def eq_op(self, children):
        left, op, right = children
        return self._binary(str(op), left, right)

    def cons_op(self, children):
        left, op, right = children
        if str(op) == ":":
            return cons(left, right)
        return self._binary(str(op), left, right)

    # Items
    def constr(self, children):
        return CtorDecl(str(children[0]), tuple(children[1:]))

    def data_decl(self, children):
        name = str(children[0])
        params = tuple(str(c) for c in children[1:] if isinstance(c, lark.Token))
        ctors = tuple(c for c in children[1:] if isinstance(c, CtorDecl))
        return DataDecl(name, params, ctors)

    def fname_var(self, children):
        return str(children[0])

    def fname_op(self, children):
        return children[0]

    def signature(self, children):
        return Signature(children[0], children[1])

    def free_var(self, children):
        return FreeVar(str(children[0]), children[1] if len(children) > 1 else None)

    def where_clause(self, children):
        return ("where", tuple(children))

    def guard(self, children):
        return ("guard", children[0])

    def rule(self, children):
        lhs, rest = children[0], children[1:]
        guard = None
        free_vars = ()
        rhs = None
        for child in rest:
            if isinstance(child, tuple) and child[0] == "guard":
                guard = child[1]
            elif isinstance(child, tuple) and child[0] == "where":
                free_vars = child[1]
            else:
                rhs = child

        if isinstance(lhs, SVar):
            name, patterns = lhs.name, ()
        elif isinstance(lhs, SApp) and isinstance(lhs.fn, SVar):
            name, patterns = lhs.fn.name, lhs.args
        else:
            raise ParseError("Left-hand side does not define a function", self.line, 1)
        return Rule(name, tuple(patterns), guard, rhs, tuple(free_vars), self.line)

    def query(self, children):
        free_vars = children[1][1] if len(children) > 1 else ()
        return Query(children[0], tuple(free_vars))

    def item(self, children):
        return children[0]


def _parse(text, start, line=1, column=1):
    try:
        tree = get_parser().parse(text, start=start)
    except lark.exceptions.UnexpectedInput as e:
        err_line = getattr(e, "line", -1)
        err_column = getattr(e, "column", -1)
        if err_line is None or err_line < 1:
            err_line, err_column = line, column
        else:
            err_column = err_column + column - 1 if err_line == 1 else err_column
            err_line = err_line + line - 1
        raise ParseError("Syntax error", err_line, err_column) from None
    try:
        return ToSyntax(line).transform(tree)
    except lark.exceptions.VisitError as e:
        raise e.orig_exc from None


def split_items(text):
    """
    Split source text into top-level items.
    An item starts at a line beginning in column 0, indented lines continue it
    and ';' separates items written on one line.
    Returns list of (line, column, item text).
    """
    items = []
    current = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        code = line.split("--", 1)[0].rstrip()
        if not code.strip():
            continue
        if not code[0].isspace():
            if current:
                items.append(current)
            current = [line_no, [code]]
        elif current is None:
            raise ParseError("Indented line outside of a definition", line_no,
                    len(code) - len(code.lstrip()) + 1)
        else:
            current[1].append(code)
    if current:
        items.append(current)

    split = []
    for line_no, lines in items:
        item_text = "\n".join(lines)
        column = 1
        for part in item_text.split(";"):
            if part.strip():
                split.append((line_no, column, part))
            line_no += part.count("\n")
            column = (len(part) - part.rfind("\n") + 1) if "\n" in part else column + len(part) + 1
    return split


def parse_program(text):
    program = SurfaceProgram()
    defined = {} # function name -> FuncDef
    last_name = None
    for line, column, item_text in split_items(text):
        item = _parse(item_text, "item", line, column)
        if isinstance(item, DataDecl):
            program.data_decls.append(item)
        elif isinstance(item, Signature):
            if item.name in program.signatures:
                raise ResolveError(f"Duplicate type signature for {item.name} (line {line})")
            program.signatures[item.name] = item.type
        else:
            if item.name in defined and item.name != last_name:
                raise ResolveError(f"Duplicate definition of {item.name} (line {line})")
            if item.name not in defined:
                defined[item.name] = FuncDef(item.name, [])
                program.func_defs.append(defined[item.name])
            func = defined[item.name]
            if func.rules and func.rules[0].arity != item.arity:
                raise ResolveError(f"Rules of {item.name} have different arities (line {line})")
            func.rules.append(item)
        last_name = item.name if isinstance(item, Rule) else None

    check_declarations(program)
    return program

def parse_query(text):
    if not text.strip():
        raise ParseError("Empty expression", 1, 1)
    return _parse(text, "query")

def parse_type(text):
    return _parse(text, "type")


def check_declarations(program):
    type_names = set()
    ctor_names = set()
    for decl in program.data_decls:
        if decl.name in type_names:
            raise ResolveError(f"Duplicate definition of type {decl.name}")
        type_names.add(decl.name)
        for ctor in decl.constructors:
            if ctor.name in ctor_names:
                raise ResolveError(f"Duplicate definition of constructor {ctor.name}")
            ctor_names.add(ctor.name)


# Pretty printing
def pretty_type(t, atomic=False):
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TFun):
        text = f"{pretty_type(t.arg, True)} -> {pretty_type(t.res)}"
        return f"({text})" if atomic else text
    if t.name == "List" and len(t.args) == 1:
        return f"[{pretty_type(t.args[0])}]"
    if not t.args:
        return t.name
    text = " ".join([t.name] + [pretty_type(a, True) for a in t.args])
    return f"({text})" if atomic else text

def pretty_expr(e, atomic=False):
    if isinstance(e, SVar):
        return f"({e.name})" if e.name in OPERATORS else e.name
    if isinstance(e, SCon):
        return "[]" if e.name == "Nil" else e.name
    if isinstance(e, SWildcard):
        return "_"
    fn, args = e.fn, e.args
    if isinstance(fn, SCon) and fn.name == "Cons" and len(args) == 2:
        text = f"{pretty_expr(args[0], True)} : {pretty_expr(args[1], True)}"
        return f"({text})"
    if isinstance(fn, SVar) and fn.name in OPERATORS and len(args) == 2:
        text = f"{pretty_expr(args[0], True)} {fn.name} {pretty_expr(args[1], True)}"
        return f"({text})"
    text = " ".join([pretty_expr(fn, True)] + [pretty_expr(a, True) for a in args])
    return f"({text})" if atomic else text

def pretty_rule(rule):
    if rule.name in OPERATORS and rule.arity == 2:
        lhs = " ".join([pretty_expr(rule.patterns[0], True), rule.name,
            pretty_expr(rule.patterns[1], True)])
    else:
        name = f"({rule.name})" if rule.name in OPERATORS else rule.name
        lhs = " ".join([name] + [pretty_expr(p, True) for p in rule.patterns])
    text = lhs
    if rule.guard is not None:
        text += f" | {pretty_expr(rule.guard)}"
    text += f" = {pretty_expr(rule.rhs)}"
    if rule.free_vars:
        decls = [v.name if v.type is None else f"{v.name} :: {pretty_type(v.type)}"
                for v in rule.free_vars]
        text += " where " + ", ".join(decls) + " free"
    return text

def pretty_program(program):
    lines = []
    for decl in program.data_decls:
        ctors = [" ".join([c.name] + [pretty_type(t, True) for t in c.arg_types])
                for c in decl.constructors]
        lines.append(" ".join(["data", decl.name, *decl.params, "="]) + " " +
                " | ".join(ctors))
    for name, t in program.signatures.items():
        name = f"({name})" if name in OPERATORS else name
        lines.append(f"{name} :: {pretty_type(t)}")
    for func in program.func_defs:
        lines.extend(pretty_rule(rule) for rule in func.rules)
    return "\n".join(lines) + "\n"
