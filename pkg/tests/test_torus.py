from __future__ import annotations

import itertools

import pytest

from sl2cq import Lattice, ScalarConfig, TorusElement, center_split, epsilon, torus_multiply
from sl2cq.lattice import box_vectors


def t(L, a, c=1):
    return TorusElement.monomial(L, tuple(a), c)


def test_multiply_examples(cyc4):
    G = Lattice(ScalarConfig.generic(2))
    b = (2, -1)
    assert torus_multiply(t(G, (0, 0)), t(G, b)) == t(G, b)
    prod = torus_multiply(t(G, (0, 1)), t(G, (1, 0)))
    assert prod == t(G, (1, 1), G.ring.monomial({(1, 2): -1}))
    # t_1 t_2 = q_12 t_2 t_1
    lhs = torus_multiply(t(G, (1, 0)), t(G, (0, 1)))
    rhs = torus_multiply(t(G, (0, 1)), t(G, (1, 0))).scale(G.ring.monomial({(1, 2): 1}))
    assert lhs == rhs
    L4 = Lattice(cyc4)
    assert torus_multiply(t(L4, (1, 0)), t(L4, (0, 1))) == t(L4, (1, 1))


def test_epsilon_examples(cyc3):
    L = Lattice(cyc3)
    assert epsilon(t(L, (0, 0))) == 1
    assert epsilon(t(L, (1, 0))) == 0
    assert epsilon(t(L, (0, 0), 3) + t(L, (0, 1), 5)) == 3


def test_center_split_examples(cyc3):
    L = Lattice(cyc3)
    z, c = center_split(t(L, (0, 0)))
    assert z == t(L, (0, 0)) and not c
    z, c = center_split(t(L, (3, 0)) + t(L, (1, 0)))
    assert z == t(L, (3, 0)) and c == t(L, (1, 0))
    G = Lattice(ScalarConfig.generic(2))
    z, c = center_split(t(G, (1, 1)))
    assert not z and c == t(G, (1, 1))


@pytest.mark.parametrize("config", [
    ScalarConfig.generic(2), ScalarConfig.cyclotomic_upper(2, 4, {(1, 2): 1}),
    ScalarConfig.cyclotomic_upper(2, 6, {(1, 2): 2}),
])
def test_center_is_the_radical(config):
    L = Lattice(config)
    for a in box_vectors(2, 3):
        central = all(torus_multiply(t(L, a), t(L, b)) == torus_multiply(t(L, b), t(L, a))
                      for b in box_vectors(2, 2))
        assert central == L.in_radical(a)


def test_bilinear_and_serialised_in_lex_order(cyc3):
    L = Lattice(cyc3)
    u = t(L, (1, 0), 2) + t(L, (0, -1), -1)
    v = t(L, (0, 1)) + t(L, (-1, 0), 3)
    expanded = TorusElement(L)
    for (a, x), (b, y) in itertools.product(u, v):
        expanded = expanded + torus_multiply(t(L, a, x), t(L, b, y))
    assert torus_multiply(u, v) == expanded
    exps = [term["exponent"] for term in u.to_json()]
    # (0,-1) < (1,0): the last coordinate decides
    assert exps == [[0, -1], [1, 0]]
