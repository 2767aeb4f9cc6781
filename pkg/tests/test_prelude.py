import itertools

import pytest

from engine import Engine
from errors import EvalError, ResolveError
from lang.prelude import prelude_program, with_prelude, constructor_supplies
from lang.parser import parse_program
from lang.syntax import TCon
from runtime.supply import IntegerSupply, this_id
from runtime.values import Ctor, Choice, hnf

PRELUDE = Engine("")

ENUMERATE = """
data Chr = A | B | C
data U = U
data Maybe a = Nothing | Just a

ground :: [Bool] -> [Bool]
ground [] = []
ground (x:xs) = gb x : ground xs

gb :: Bool -> Bool
gb True = True
gb False = False

leq :: Nat -> Nat -> Bool
leq Z _ = True
leq (S _) Z = False
leq (S x) (S y) = leq x y
"""
ENGINE = Engine(ENUMERATE)


def generate(type_name, *args, supply=1):
    return hnf(ENGINE.evaluator.generate(TCon(type_name, args), IntegerSupply(supply)))

def show(bools):
    return "[" + ",".join(str(b) for b in bools) + "]"

def values(engine, query, **kwargs):
    return [record.value for record in engine.search(query, **kwargs)]


def test_prelude_functions():
    cases = {
        "True ? False": ["True", "False"],
        "Success & Success": ["Success"],
        "cond Success 1": ["1"],
        "not True && True": ["False"],
        "False || True": ["True"],
        "fromBool True": ["1"],
        "add 2 3": ["5"],
        "inc 0 3": ["3"],
        "upTo 3": ["[1,2,3]"],
        "[True] ++ [False]": ["[True,False]"],
        "head []": [],
        "tail [True]": ["[]"],
        "length [True, True]": ["2"],
        "reverse [1, 2, 3]": ["[3,2,1]"],
        "map not [True, False]": ["[False,True]"],
        "elem 2 [1, 2]": ["True"],
        "nub [True, False, True]": ["[True,False]"],
        "solve (1 == 1)": ["Success"],
        "solve (1 == 2)": [],
        "failed": [],
    }
    for query, expected in cases.items():
        assert PRELUDE.results(query) == expected, query


def test_supply_of_constructor_arguments():
    s = IntegerSupply(1)
    assert [this_id(x) for x in constructor_supplies(s, 1, chosen=True)] == [2]
    assert [this_id(x) for x in constructor_supplies(s, 1, chosen=False)] == [1]
    assert [this_id(x) for x in constructor_supplies(s, 2, chosen=True)] == [2, 3]


def test_bool_generator():
    value = generate("Bool")
    assert isinstance(value, Choice) and value.id.is_free and value.id.raw == 1
    assert hnf(value.left).name == "True"
    assert hnf(value.right).name == "False"


def test_list_generator():
    value = generate("List", TCon("Bool"), supply=5)
    assert value.id.is_free and value.id.raw == 5
    assert hnf(value.left).name == "Nil"
    cell = hnf(value.right)
    assert cell.name == "Cons"
    assert hnf(cell.args[0]).id.raw == 10
    assert hnf(cell.args[1]).id.raw == 11


def test_nat_generator():
    value = generate("Nat")
    assert hnf(value.left).name == "Z"
    succ = hnf(value.right)
    assert hnf(succ.args[0]).id.raw == 2


def test_generator_of_three_constructors():
    value = generate("Chr")
    assert value.id.raw == 1
    assert hnf(value.left).name == "A"
    rest = hnf(value.right)
    assert rest.id.is_free and rest.id.raw == 3
    assert [hnf(rest.left).name, hnf(rest.right).name] == ["B", "C"]


def test_single_constructor_generator():
    value = generate("U")
    assert isinstance(value, Ctor) and value.name == "U"


def test_parameterized_generator():
    value = generate("Maybe", TCon("Bool"))
    just = hnf(value.right)
    assert just.name == "Just"
    element = hnf(just.args[0])
    assert element.id.raw == 2
    assert hnf(element.left).name == "True"


def test_missing_generator():
    with pytest.raises(EvalError):
        ENGINE.evaluator.generate(TCon("Nope"), IntegerSupply(1))


@pytest.mark.parametrize("length", [0, 1, 2, 3])
def test_list_generator_complete(length):
    found = values(ENGINE, f"cond (solve (length xs == {length})) (ground xs) "
            "where xs::[Bool] free")
    expected = [show(bools) for bools in itertools.product([True, False], repeat=length)]
    assert found == expected


def test_nat_generator_complete():
    assert values(ENGINE, "cond (solve (leq n 4)) n where n::Nat free") == \
            ["0", "1", "2", "3", "4"]


def test_derived_equality_exhaustive():
    lists = [bools for n in range(3) for bools in itertools.product([True, False], repeat=n)]
    for xs, ys in itertools.product(lists, lists):
        assert PRELUDE.results(f"{show(xs)} == {show(ys)}") == [str(xs == ys)]


def test_derived_equality():
    assert PRELUDE.results("3 == 3") == ["True"]
    assert PRELUDE.results("2 == 3") == ["False"]
    assert ENGINE.results("Just A == Just A") == ["True"]
    assert ENGINE.results("Just A == Nothing") == ["False"]
    assert PRELUDE.results("x == True where x::Bool free") == \
            ["{x = True} True", "{x = False} False"]
    assert PRELUDE.results("failed == True") == []


def test_functions_are_not_comparable():
    with pytest.raises(EvalError):
        PRELUDE.results("not == not")


def test_program_shadows_prelude():
    engine = Engine("not :: Bool -> Bool\nnot x = x\n")
    assert engine.results("not True") == ["True"]
    assert engine.results("xor True False") == ["False"]


def test_identical_data_declarations_shared():
    program = with_prelude(parse_program("data Bool = True | False\n"))
    assert [d.name for d in program.data_decls].count("Bool") == 1
    with pytest.raises(ResolveError):
        Engine("data Bool = Yes | No\n")


def test_without_prelude():
    engine = Engine("data B = T | F\nf = T ? F\n", prelude=False)
    assert engine.results("f") == ["T", "F"]
    assert "==.B" not in engine.core.funcs
    assert "not" in prelude_program().signatures
