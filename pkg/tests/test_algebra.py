from __future__ import annotations

import random

import pytest

from oracles import random_key
from sl2cq import Root, ScalarConfig, Sl2Cq, Kind
from sl2cq import _kernel
from sl2cq.algebra import CARTAN, BasisKey, InvalidKey, NotARoot, UnsupportedKeys


def test_bracket_examples(alg3):
    for A in (alg3, Sl2Cq(ScalarConfig.generic(2)), Sl2Cq(ScalarConfig.rational(2))):
        assert A.bracket(A.X((1, 0)), A.Y((-1, 0))) == A.h() + A.C(1)
        assert A.bracket_oracle(A.X((1, 0)), A.Y((-1, 0))) == A.h() + A.C(1)
    c4 = ScalarConfig.cyclotomic_upper(2, 4, {(1, 2): 1})
    A4 = Sl2Cq(c4)
    i = c4.root_of_unity(1)
    assert A4.bracket(A4.U((1, 1)), A4.U((-1, -1))) == (A4.C(1) + A4.C(2)) * (2 * i)
    assert not alg3.bracket(alg3.C(1), alg3.X((2, -1)))
    assert not alg3.bracket_oracle(alg3.X((1, 0)), alg3.X((0, 1)))


def test_u_w_bracket_matches_table_formula(alg3, cyc3):
    L = alg3.lattice
    a, b = (1, 0), (0, 1)
    coeff = L.sigma(b, a) * (L.f_map(a, b) - 1)
    expected = alg3.U((1, 1), coeff)
    assert alg3.bracket(alg3.U(a), alg3.W(b)) == expected
    assert alg3.bracket_oracle(alg3.U(a), alg3.W(b)) == expected
    # zeta^-1 (zeta - 1) = 1 - zeta^2 = 2 + zeta
    assert coeff == 2 + cyc3.root_of_unity(1)


def test_derivations_and_cartan(alg3):
    A = alg3
    assert A.bracket(A.D(1), A.X((2, 1))) == A.X((2, 1), 2)
    assert A.bracket(A.D(2), A.W((1, -1))) == A.W((1, -1), -1)
    assert not A.bracket(A.D(1), A.D(2))
    for a in [(0, 0), (1, 2), (-2, 1)]:
        assert A.bracket(A.h(), A.X(a)) == A.X(a, 2)
        assert A.bracket(A.h(), A.Y(a)) == A.Y(a, -2)


def test_keys():
    A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
    with pytest.raises(InvalidKey):
        A.key("W", (0, 0))
    with pytest.raises(InvalidKey):
        A.key("W", (3, -3))
    assert A.key("U", (0, 0)) == BasisKey(Kind.U, (0, 0))
    assert BasisKey.parse("X:(1,0)") == BasisKey(Kind.X, (1, 0))
    assert BasisKey.parse("C:2") == BasisKey(Kind.C, 2)


def test_invariant_form(alg3):
    A, L = alg3, alg3.lattice
    a = (1, 1)
    neg = (-1, -1)
    assert A.invariant_form(A.X(a), A.Y(neg)) == L.sigma(a, neg)
    assert A.invariant_form(A.X(a), A.X((0, 1))) == 0
    assert A.invariant_form(A.U(a), A.U(neg)) == 2 * L.sigma(a, neg)
    with pytest.raises(UnsupportedKeys):
        A.invariant_form(A.C(1), A.X(a))


def test_roots(alg3):
    A = alg3
    assert A.root_of(A.key("X", (2, 1))) == Root(1, (2, 1))
    assert A.root_of(A.key("U", (0, 0))) is CARTAN
    assert A.root_of(A.key("W", (1, 0))) == Root(0, (1, 0))
    assert A.root_space_basis(Root(1, (0, 0))) == [BasisKey(Kind.X, (0, 0))]
    assert A.root_space_basis(Root(0, (3, 0))) == [BasisKey(Kind.U, (3, 0))]
    assert A.root_space_basis(Root(0, (1, 0))) == [BasisKey(Kind.U, (1, 0)), BasisKey(Kind.W, (1, 0))]
    with pytest.raises(NotARoot):
        A.root_space_basis(Root(0, (0, 0)))


def _weight(A, key):
    r = A.root_of(key)
    return (0, (0,) * A.n) if r is CARTAN else (r.alpha, tuple(r.lattice))


@pytest.mark.parametrize("config", [
    ScalarConfig.cyclotomic_upper(2, 6, {(1, 2): 1}),
    ScalarConfig.generic(3),
])
def test_grading_and_python_jacobi(config):
    """Bracket terms live in the sum of the root spaces, and Jacobi holds through the Python path too."""
    A = Sl2Cq(config)
    rng = random.Random(11)
    for _ in range(300):
        k1, k2, k3 = (random_key(A, 2, rng) for _ in range(3))
        x, y, z = A.basis(k1), A.basis(k2), A.basis(k3)
        w1, w2 = _weight(A, k1), _weight(A, k2)
        target = (w1[0] + w2[0], tuple(p + q for p, q in zip(w1[1], w2[1])))
        for k, _c in A.bracket(x, y):
            if k.kind not in (Kind.C, Kind.D):
                assert _weight(A, k) == target
        jac = A.bracket(x, A.bracket(y, z)) + A.bracket(y, A.bracket(z, x)) + A.bracket(z, A.bracket(x, y))
        assert not jac
        assert A.bracket(x, y) == -A.bracket(y, x)
        assert A.bracket(x, y) == A.bracket_oracle(x, y)


def test_vanishing_w_coefficient_on_radical():
    A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
    L = A.lattice
    for a in [(1, 0), (2, 1), (1, 2)]:
        for c in [(3, 0), (0, 3), (3, 3)]:
            b = tuple(x - y for x, y in zip(c, a))
            assert L.f_map(a, b) == 1
            for k, _v in A.bracket(A.X(a), A.Y(b)):
                assert k.kind is not Kind.W


def test_jacobi_checker_detects_a_corrupted_table(monkeypatch):
    """Scaling one [X, Y] entry must make the bulk Jacobi check fail."""
    A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
    keys = A.basis_keys(1)
    kinds, vecs, idxs = A._key_arrays(keys)
    args = (kinds, vecs, idxs, A.K, A.modulus, A.phi, 0, len(keys))
    clean = _kernel.jacobi_check.py_func(*args)
    assert clean[1] == 0
    orig = _kernel.structure

    def broken(k1, a, i1, k2, b, i2, K, mod, out_kind, out_num, out_code, cen):
        nt, hc, st = orig(k1, a, i1, k2, b, i2, K, mod, out_kind, out_num, out_code, cen)
        if k1 == int(Kind.X) and k2 == int(Kind.Y) and nt:
            out_num[0, 0] *= 3
        return nt, hc, st

    monkeypatch.setattr(_kernel, "structure", broken)
    checked, failures, *_ = _kernel.jacobi_check.py_func(*args)
    assert checked == clean[0]
    assert failures > 0


def test_compiled_oracle_agrees_with_python_oracle():
    A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 6, {(1, 2): 1}))
    keys = A.basis_keys(1)
    rep = A.check_oracle(keys)
    assert rep["checked"] == len(keys) ** 2 and rep["failures"] == 0
    for k1 in keys:
        for k2 in keys:
            x, y = A.basis(k1), A.basis(k2)
            assert A.bracket(x, y) == A.bracket_oracle(x, y)


def test_oracle_checker_detects_a_corrupted_table(monkeypatch):
    A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
    kinds, vecs, idxs = A._key_arrays(A.basis_keys(1))
    args = (kinds, vecs, idxs, A.K, A.modulus, A.phi)
    orig = _kernel.structure

    def broken(k1, a, i1, k2, b, i2, K, mod, out_kind, out_num, out_code, cen):
        nt, hc, st = orig(k1, a, i1, k2, b, i2, K, mod, out_kind, out_num, out_code, cen)
        if k1 == int(Kind.U) and k2 == int(Kind.W) and nt:
            out_num[0, 1] = 0
        return nt, hc, st

    # run the interpreted bracket helper so the patched table is picked up
    monkeypatch.setattr(_kernel, "_bracket_into", _kernel._bracket_into.py_func)
    assert _kernel.oracle_check.py_func(*args)[1] == 0
    monkeypatch.setattr(_kernel, "structure", broken)
    assert _kernel.oracle_check.py_func(*args)[1] > 0
