import itertools

import pytest

import oracles
from dburnside.burnside_ring import burnside_mul, ghost, mark, marks_table
from dburnside.cyclic_group import CyclicPGroup
from dburnside.ring import iota


@pytest.mark.parametrize("p, n", [(2, 1), (3, 2), (2, 3)])
def test_product_of_transitive_sets(p, n):
    G = CyclicPGroup(p, n)
    for r, s in itertools.product(range(n + 1), repeat=2):
        a = [int(k == r) for k in range(n + 1)]
        b = [int(k == s) for k in range(n + 1)]
        orbits = oracles.burnside_orbits(p, n, r, s)
        assert burnside_mul(G, a, b) == [orbits.get(k, 0) for k in range(n + 1)]


def test_marks():
    G = CyclicPGroup(3, 2)
    assert marks_table(G) == [[9, 0, 0], [3, 3, 0], [1, 1, 1]]
    assert mark(G, 1, 2) == 0
    assert ghost(G, [0, 0, 1]) == [1, 1, 1]


@pytest.mark.parametrize("p, n", [(2, 2), (3, 2), (5, 1)])
def test_ghost_is_multiplicative(p, n):
    G = CyclicPGroup(p, n)
    basis = [[int(k == r) for k in range(n + 1)] for r in range(n + 1)]
    for a, b in itertools.product(basis, repeat=2):
        ga, gb = ghost(G, a), ghost(G, b)
        assert ghost(G, burnside_mul(G, a, b)) == [x * y for x, y in zip(ga, gb)]


@pytest.mark.parametrize("p, n", [(2, 2), (3, 2), (2, 3)])
def test_iota_is_ring_map(p, n):
    G = CyclicPGroup(p, n)
    basis = [[int(k == r) for k in range(n + 1)] for r in range(n + 1)]
    for a, b in itertools.product(basis, repeat=2):
        assert iota(G, burnside_mul(G, a, b)) == iota(G, a) * iota(G, b)


def test_wrong_length():
    with pytest.raises(ValueError):
        ghost(CyclicPGroup(2, 1), [1, 2, 3])
