"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines bypass output capture)
or directly as ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracles import brute_counts, brute_radical, random_key, span_membership  # noqa: E402
from sl2cq import (  # noqa: E402
    HeisenbergModule,
    ImaginaryModule,
    Lattice,
    ScalarConfig,
    Sl2Cq,
    SupportBox,
    TorusElement,
    enumerate_basis,
    torus_multiply,
)
from sl2cq.algebra import Kind  # noqa: E402
from sl2cq.heisenberg import product_formula_counts  # noqa: E402
from sl2cq.lattice import box_vectors  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = ROOT / "src" / "sl2cq" / "configs"
ORDERS = (2, 3, 4, 6)


def _emit(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)


def _random_skew(n: int, N: int, rng: random.Random) -> ScalarConfig:
    upper = {(i, j): rng.randrange(N) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    if n >= 2:
        upper[(1, 2)] = rng.randrange(1, N)
    return ScalarConfig.cyclotomic_upper(n, N, upper)


def _axiom_configs(ns=(1, 2, 3)) -> list[ScalarConfig]:
    rng = random.Random(2024)
    out = []
    for n in ns:
        out.append(ScalarConfig.generic(n))
        out.extend(_random_skew(n, N, rng) for N in ORDERS)
    return out


def _label(cfg: ScalarConfig) -> str:
    if cfg.backend.value == "cyclotomic":
        return f"n={cfg.n} N={cfg.N}"
    return f"n={cfg.n} {cfg.backend.value}"


# ------------------------------------------------------------------ criteria


def criterion_1():
    t0 = time.time()
    ok = True
    bad = []
    triples = pairs = 0
    for cfg in _axiom_configs():
        A = Sl2Cq(cfg)
        keys = A.basis_keys(2)
        jac = A.check_jacobi(keys)
        anti = A.check_antisymmetry(keys)
        triples += jac["checked"]
        pairs += anti["checked"]
        if jac["failures"] or anti["failures"]:
            ok = False
            bad.append(_label(cfg))
    elapsed = time.time() - t0
    ok = ok and elapsed < 60
    return ok, f"Jacobi on {triples} triples, antisymmetry on {pairs} pairs, 15 configs, {elapsed:.1f}s" + (
        f" failures in {bad}" if bad else "")


def criterion_2():
    t0 = time.time()
    ok = True
    checked = 0
    rng = random.Random(7)
    for cfg in _axiom_configs():
        A = Sl2Cq(cfg)
        keys = A.basis_keys(2)
        rep = A.check_oracle(keys)
        checked += rep["checked"]
        ok = ok and rep["failures"] == 0 and rep["checked"] == len(keys) ** 2
        # the interpreted matrix oracle on a sample, as a cross-check of the compiled one
        for _ in range(150):
            x, y = A.basis(rng.choice(keys)), A.basis(rng.choice(keys))
            ok = ok and A.bracket(x, y) == A.bracket_oracle(x, y)
    elapsed = time.time() - t0
    ok = ok and elapsed < 30
    return ok, f"bracket = matrix oracle on {checked} ordered pairs (+2250 interpreted), {elapsed:.1f}s"


def criterion_3():
    rng = random.Random(3)
    ok = True
    configs = _axiom_configs()
    for cfg in configs:
        L = Lattice(cfg)
        n = cfg.n
        f = L._f_map  # uncached, so 10^4 fresh evaluations
        one = cfg.ring.one

        def vec():
            return tuple(rng.randint(-9, 9) for _ in range(n))

        for _ in range(10_000):
            a, a2, b = vec(), vec(), vec()
            s = tuple(x + y for x, y in zip(a, a2))
            na = tuple(-x for x in a)
            fab = f(a, b)
            ok = ok and (
                f(s, b) == fab * f(a2, b)
                and f(b, s) == f(b, a) * f(b, a2)
                and f(b, a) * fab == one
                and f(a, a) == one
                and f(a, na) == one
            )
        if not ok:
            return False, f"first failure in {_label(cfg)}"
    return ok, f"bimultiplicativity, inversion, f(a,a)=f(a,-a)=1 on 10^4 pairs x {len(configs)} configs"


def criterion_4():
    rng = random.Random(2024)
    ok = True
    count = 0
    for n in (2, 3):
        for N in ORDERS:
            cfg = _random_skew(n, N, rng)
            L = Lattice(cfg)
            for r in range(1, n + 1):
                brute = brute_radical(cfg, r, N)
                basis = [v[:r] for v in L.radical_basis(r)]
                member = span_membership(basis)
                for p in itertools.product(range(-N, N + 1), repeat=r):
                    lib = L.in_radical(tuple(p) + (0,) * (n - r), r)
                    ok = ok and lib == (p in brute) == member(p)
                    count += 1
    L = Lattice(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
    special = L.radical_basis(2) == [(3, 0), (0, 3)]
    return ok and special, f"{count} box points agree with brute force; n=2 N=3 m12=1 gives R = 3Z^2: {special}"


def criterion_5():
    ok = True
    triples = 0
    cases = [(ScalarConfig.generic(2), 2), (ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}), 2),
             (ScalarConfig.cyclotomic_upper(2, 4, {(1, 2): 3}), 2),
             (ScalarConfig.cyclotomic_upper(3, 6, {(1, 2): 1, (1, 3): 2, (2, 3): 5}), 1)]
    for cfg, B in cases:
        L = Lattice(cfg)
        pts = list(box_vectors(cfg.n, B))
        t = {a: TorusElement.monomial(L, a) for a in pts}
        prods = {(a, b): torus_multiply(t[a], t[b]) for a in pts for b in pts}
        for (a, b), ab in prods.items():
            comm = ab - prods[(b, a)]
            s = tuple(x + y for x, y in zip(a, b))
            ok = ok and comm == TorusElement.monomial(L, s, L.sigma(b, a) * (L.f_map(a, b) - 1))
            for c in pts:
                ok = ok and torus_multiply(ab, t[c]) == torus_multiply(t[a], prods[(b, c)])
                triples += 1
    return ok, f"associativity on {triples} monomial triples and the commutator identity on all pairs"


def criterion_6():
    ok = True
    degrees = 0
    box = SupportBox(2, 4)
    for cfg in (ScalarConfig.rational(1), ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}), ScalarConfig.generic(2)):
        L = Lattice(cfg)
        formula = product_formula_counts(L, box)
        brute = brute_counts(L, box.B, box.L)
        for beta in set(formula) | set(brute):
            ok = ok and len(enumerate_basis(L, beta, box)) == formula.get(beta, 0) == brute[beta]
            degrees += 1
    L1 = Lattice(ScalarConfig.rational(1))
    p3 = len(enumerate_basis(L1, (-3,), SupportBox(3, 4)))
    ok = ok and p3 == 3
    return ok, f"enumerate = product formula = brute force on {degrees} degrees; n=1 degree (-3) count {p3}"


def criterion_7():
    ok = True
    pairs = 0
    rng = random.Random(9)
    cases = [(ScalarConfig.rational(1), [1]), (ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}), [1, -1]),
             (ScalarConfig.generic(2), [1, 2])]
    for cfg, c in cases:
        A = Sl2Cq(cfg)
        H = HeisenbergModule(A, c)
        gens = H.negative_factors(SupportBox(2, 3))
        tkinds = (Kind.U, Kind.W, Kind.C, Kind.D)
        for _ in range(150):
            g1, g2 = (random_key(A, 2, rng, tkinds) for _ in range(2))
            if any(g.kind in (Kind.U, Kind.W) and not any(g.data) for g in (g1, g2)):
                continue
            v = H.straighten([rng.choice(gens) for _ in range(rng.randint(0, 3))])
            ok = ok and H.act(g2, H.act(g1, v)) - H.act(g1, H.act(g2, v)) == H.act(A.bracket(A.basis(g2), A.basis(g1)), v)
            pairs += 1
        M = ImaginaryModule.from_values(A, 2, c, [1] * A.n)
        for _ in range(100):
            g1, g2 = (random_key(A, 1, rng) for _ in range(2))
            word = [random_key(A, 1, rng, (Kind.Y, Kind.U, Kind.W)) for _ in range(rng.randint(0, 3))]
            v = M.from_word([k for k in word if k.kind is Kind.Y or any(k.data)])
            ok = ok and M.act(g2, M.act(g1, v)) - M.act(g1, M.act(g2, v)) == M.act(A.bracket(A.basis(g2), A.basis(g1)), v)
            pairs += 1
    return ok, f"[g2,g1] acts as the commutator on {pairs} sampled pairs (H(lambda) and M(lambda), 3 configs)"


def criterion_8():
    t0 = time.time()
    H = HeisenbergModule(Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1})), [1, -1])
    comps = H.tilde_h_components(SupportBox(3, 3))
    zero_dim = len(comps.get((0, 0), []))
    elapsed = time.time() - t0
    ok = zero_dim == 0 and bool(comps) and elapsed < 120
    return ok, f"degree-0 part of H~ has dim {zero_dim}, {len(comps)} nonzero components, {elapsed:.1f}s"


def criterion_9():
    box = SupportBox(3, 3)
    found = {}
    for label, cfg, c in [("n=1 c=1", ScalarConfig.rational(1), [1]),
                          ("n=2 N=3 c=(1,0)", ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}), [1, 0]),
                          ("n=2 N=3 c=(1,-1)", ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}), [1, -1])]:
        H = HeisenbergModule(Sl2Cq(cfg), c)
        sv = H.singular_vectors(box, raise_bound=3, quotient=H.tilde_closure(box))
        found[label] = sum(len(vs) for beta, vs in sv.items() if any(beta))
    Z = HeisenbergModule(Sl2Cq(ScalarConfig.rational(1)), [0])
    control = Z.singular_vectors(box, raise_bound=3)
    expected = [Z.vector({(Z.factor("U", (-1,)),): 1})]
    control_ok = control.get((-1,)) == expected
    ok = not any(found.values()) and control_ok
    return ok, f"nonzero-degree singular vectors mod H~: {found}; control lambda(c)=0 reports U(-1)v: {control_ok}"


def criterion_10():
    rng = random.Random(10)
    vbox, sbox = SupportBox(2, 2, 3), SupportBox(3, 1)
    mods = [ImaginaryModule.from_values(Sl2Cq(ScalarConfig.rational(1)), 3, [1]),
            ImaginaryModule.from_values(Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1})), 2, [1, -1])]
    ok = True
    done = 0
    while done < 100:
        M = mods[done % 2]
        m = rng.randint(1, 3)
        v = M.random_weight_vector(m, vbox, rng)
        if not v:
            continue
        x = M.prop3_probe(v, sbox)
        w = M.act(x, v)
        ok = ok and bool(w) and M.y_length(w) == M.y_length(v) - 1
        done += 1
    return ok, f"X(A) found and y-length drops by exactly 1 on {done} random weight vectors (m in 1..3, n=1 and n=2)"


def criterion_11():
    t0 = time.time()
    box = SupportBox(2, 2, 2)
    A1 = Sl2Cq(ScalarConfig.rational(1))
    M1 = ImaginaryModule.from_values(A1, 0, [1])
    A2 = Sl2Cq(ScalarConfig.cyclotomic(2, [[0, 1], [1, 0]]))
    M2 = ImaginaryModule.from_values(A2, 0, [1, -1])
    cases = [("n=1 v", M1, M1.vacuum), ("n=1 U(-1)v", M1, M1.act(A1.U((-1,)), M1.vacuum)),
             ("n=2 N=2 U(-2,-2)v", M2, M2.act(A2.U((-2, -2)), M2.vacuum))]
    results = {}
    for label, M, gen in cases:
        rep = M.theorem2_check(gen, box, strict=True)
        results[label] = rep["pass"] and any(r["interior"] for r in rep["slots"])
    elapsed = time.time() - t0
    ok = all(results.values()) and elapsed < 300
    return ok, f"interior slots agree: {results}, {elapsed:.1f}s"


def criterion_12():
    cases = [("n=1 c=1", ImaginaryModule.from_values(Sl2Cq(ScalarConfig.rational(1)), 0, [1]), SupportBox(3, 3, 2)),
             ("n=2 N=3 c=(1,-1)", ImaginaryModule.from_values(
                 Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1})), 0, [1, -1]), SupportBox(3, 3, 1))]
    ok = True
    parts = []
    for label, M, box in cases:
        dims = M.l_lambda_dims(box)
        top = dims.get((0, (0,) * M.n), 0)
        over = [slot for slot, d in dims.items() if d > M.weight_dimension(slot[0], slot[1], box)]
        ok = ok and top == 1 and not over
        parts.append(f"{label}: top={top}, {len(dims)} slots, exceeding={len(over)}")
    return ok, "; ".join(parts)


def _cli_commands(rank_one: bool) -> list[list[str]]:
    if rank_one:
        V, B, W1, RB, BD, Y, U, X, R, UP = "(1)", "(-1)", "(2)", "(0)", "()", "Y:(1)", "U:(-1)", "X:(0)", "1", "U:(2)"
    else:
        V, B, W1, RB, BD, Y, U, X, R, UP = ("(1,1)", "(-1,-1)", "(1,0)", "(0,1)", "(1)", "Y:(1,0)", "U:(-1,0)",
                                            "X:(1,0)", "2", "U:(1,1)")
    return [["bracket", X, "Y:" + RB], ["torus-mul", V, W1], ["radical", R], ["lambda-lattice", V],
            ["witness", W1, BD], ["hdim", B], ["hact", UP, U, U], ["tilde-h"], ["singular"],
            ["singular", "--quotient"], ["mdim", "1", RB], ["mact", X, Y, U], ["prop3", Y, U],
            ["theorem2", U], ["ldims"], ["axioms", "--box", "1"]]


def criterion_13():
    configs = sorted(CONFIG_DIR.glob("*.json"))
    runs = 0
    mismatched = []
    for cfg in configs:
        for cmd in _cli_commands(cfg.stem.startswith("n1")):
            outs = []
            for seed in ("1", "2"):
                env = dict(os.environ, PYTHONHASHSEED=seed)
                r = subprocess.run([sys.executable, "-m", "sl2cq", *cmd, "--config", str(cfg)],
                                   capture_output=True, env=env)
                outs.append((r.returncode, r.stdout, r.stderr))
                runs += 1
            if outs[0] != outs[1]:
                mismatched.append(f"{cfg.stem}:{cmd[0]}")
    ok = not mismatched
    return ok, f"{runs} runs over {len(configs)} shipped configs, byte-identical pairs" + (
        f"; differing: {mismatched}" if mismatched else "")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13]


@pytest.mark.parametrize("num", range(1, len(CRITERIA) + 1))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num - 1]()
    with capsys.disabled():
        _emit(num, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        _emit(i, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
