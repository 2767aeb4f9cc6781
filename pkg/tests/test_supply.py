import numpy as np

from runtime.supply import (IntegerSupply, init_supply, this_id, left_supply, right_supply,
        right_n, spread, split_args)


def ids(supplies):
    return [this_id(s) for s in supplies]


def test_integer_supply_layout():
    s = init_supply()
    assert this_id(s) == 1
    assert this_id(left_supply(s)) == 2
    assert this_id(right_supply(s)) == 3
    assert this_id(right_supply(left_supply(s))) == 5
    assert this_id(right_n(s, 3)) == 15


def test_supply_equality():
    assert IntegerSupply(6) == left_supply(IntegerSupply(3))
    assert len({IntegerSupply(6), left_supply(IntegerSupply(3))}) == 1
    assert IntegerSupply(6) != IntegerSupply(7)


def test_spread():
    s = init_supply()
    assert ids(spread(s, 0)) == []
    assert ids(spread(s, 1)) == [1]
    assert ids(spread(s, 2)) == [2, 3]
    assert ids(spread(s, 3)) == [2, 6, 7]


def test_split_args():
    supplies, call = split_args(init_supply(), 2)
    assert ids(supplies) == [2, 6]
    assert this_id(call) == 7

    supplies, call = split_args(init_supply(), 0)
    assert supplies == [] and this_id(call) == 1


def test_spread_identifiers_disjoint():
    # Every identifier reachable from distinct spread supplies is distinct
    def reachable(s, depth):
        if depth == 0:
            return {this_id(s)}
        return ({this_id(s)} | reachable(left_supply(s), depth - 1)
                | reachable(right_supply(s), depth - 1))

    for n in range(1, 6):
        sets = [reachable(s, 4) for s in spread(init_supply(), n)]
        union = set().union(*sets)
        assert len(union) == sum(len(ids) for ids in sets)


def test_geometry():
    assert list(IntegerSupply.ancestors(6)) == [6, 3, 1]
    assert IntegerSupply.is_below(13, 3)
    assert IntegerSupply.is_below(3, 3)
    assert not IntegerSupply.is_below(2, 3)
    assert not IntegerSupply.is_below(1, 3)
    assert IntegerSupply.rebase(10, 5, 6) == 12
    assert IntegerSupply.rebase(5, 5, 6) == 6


def test_random_supplies_disjoint():
    rng = np.random.default_rng(3)

    def reachable(s, depth):
        found, frontier = {this_id(s)}, [s]
        for _ in range(depth):
            frontier = [c for x in frontier for c in (left_supply(x), right_supply(x))]
            found.update(this_id(x) for x in frontier)
        return found

    for _ in range(1000):
        s = IntegerSupply(int(rng.integers(1, 2**20)))
        left, right = reachable(left_supply(s), 6), reachable(right_supply(s), 6)
        assert not left & right
        assert this_id(s) not in left | right


def test_paths_from_root_are_injective():
    seen = set()
    frontier = [init_supply()]
    for _ in range(13):
        for s in frontier:
            assert this_id(s) not in seen
            seen.add(this_id(s))
        frontier = [c for s in frontier for c in (left_supply(s), right_supply(s))]
    assert len(seen) == 2**13 - 1
