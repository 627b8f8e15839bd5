"""Imaginary Verma modules M(lambda) for the non-standard Borel h + q_+.

Here ``q_+`` is spanned by every ``X(a)`` and by ``U(a), W(a)`` with ``a > 0``;
the lowering part ``q_-`` by every ``Y(a)`` and by ``U(a), W(a)`` with ``a < 0``.
The Y-span is an abelian ideal of ``q_-``, so ordered monomials

    Y(a_1) ... Y(a_m) * z_{b_1} ... z_{b_s} v,    a_1 <= ... <= a_m (lex order)

form a basis, the second half being a basis monomial of H(lambda).  A
monomial of M(lambda) is the pair ``(ys, heis)``; its weight is
``lambda - m*alpha + (sum of all exponents)*delta`` so the pair
``(m, degree)`` (the *slot*) determines the weight.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import LATTICE_KINDS, AlgebraElement, BasisKey, Kind, Sl2Cq
from .closure import GradedClosure
from .heisenberg import (
    HeisenbergModule,
    ModuleError,
    ModuleVector,
    SupportBox,
    central_values,
    degree_of,
    enumerate_basis,
    format_monomial,
    monomial_key,
)
from .lattice import SearchBudgetExceeded, Vec, add, box_vectors, is_negative, lex_key, zero
from .linalg import Echelon, axpy


class NotWeightVector(ModuleError, ValueError):
    pass


class CentralChargeZero(ModuleError):
    """Every lambda(c_i) vanishes, so the structure theorem does not apply."""


class HypothesisUnmet(ModuleError):
    pass


class NoYFactors(ModuleError, ValueError):
    pass


# ------------------------------------------------------------- weights


@dataclass(frozen=True)
class Weight:
    """Values of a weight on ``h``, the ``c_i`` and the ``d_i``."""

    h: object
    c: tuple
    d: tuple = field(default=())

    @classmethod
    def make(cls, ring, h, c: Sequence, d: Sequence | None = None) -> Weight:
        c = central_values(ring, c)
        d = central_values(ring, d) if d else tuple(ring.zero for _ in c)
        if len(d) != len(c):
            raise ValueError("c and d values must have the same length")
        h = ring.parse(h) if isinstance(h, str) else ring(h)
        return cls(h, c, d)

    def shift(self, m: int, beta: Sequence[int]) -> Weight:
        """``self - m*alpha + beta*delta``."""
        return Weight(self.h - 2 * m, self.c, tuple(x + b for x, b in zip(self.d, beta)))

    def to_json(self) -> dict:
        return {"h": str(self.h), "c": [str(x) for x in self.c], "d": [str(x) for x in self.d]}


# ------------------------------------------------------------- monomials


def insert_y(ys: tuple, a: Vec) -> tuple:
    key = lex_key(a)
    pos = len(ys)
    for i, y in enumerate(ys):
        if lex_key(y) > key:
            pos = i
            break
    return ys[:pos] + (a,) + ys[pos:]


def mmonomial_key(mono) -> tuple:
    ys, heis = mono
    return (len(ys), tuple(lex_key(y) for y in ys), monomial_key(heis))


def slot_of(mono, n: int) -> tuple:
    """``(number of Y-factors, total degree)``."""
    ys, heis = mono
    deg = degree_of(heis, n)
    for y in ys:
        deg = add(deg, y)
    return (len(ys), deg)


def format_mmonomial(mono) -> str:
    ys, heis = mono
    head = " ".join(f"Y:({','.join(map(str, y))})" for y in ys)
    tail = format_monomial(heis)
    return f"{head} {tail}" if head else tail


class MVector(ModuleVector):
    __slots__ = ()

    def __init__(self, ring, terms: Mapping | Iterable = ()):
        super().__init__(ring, terms, mmonomial_key)

    @staticmethod
    def format(mono) -> str:
        return format_mmonomial(mono)

    def to_json(self) -> list:
        out = []
        for (ys, heis), c in self.terms.items():
            letters = [["Y", *y] for y in ys] + [[f.kind.name, *f.data] for f in heis]
            out.append({"monomial": letters, "coeff": str(c)})
        return out


@functools.lru_cache(maxsize=256)
def y_counts(n: int, m: int, bound: int) -> dict:
    """``{degree: number of multisets of m vectors in [-bound, bound]^n with that sum}``."""
    pts = list(box_vectors(n, bound))
    # dp over the points: counts[(size, degree)]
    counts: dict = {(0, zero(n)): 1}
    for p in pts:
        new = dict(counts)
        for (size, deg), c in counts.items():
            d = deg
            for k in range(1, m - size + 1):
                d = add(d, p)
                key = (size + k, d)
                new[key] = new.get(key, 0) + c
        counts = new
    return {deg: c for (size, deg), c in counts.items() if size == m}


def _target_slot(key: BasisKey, slot):
    m, beta = slot
    step = {Kind.X: -1, Kind.Y: 1}.get(key.kind, 0)
    return (m + step, add(beta, key.data))


# ------------------------------------------------------------- the module


class ImaginaryModule:
    """M(lambda) with the action of the whole algebra on ordered monomials."""

    def __init__(self, algebra: Sl2Cq, weight: Weight):
        self.algebra = algebra
        self.ring = algebra.ring
        self.n = algebra.n
        if len(weight.c) != self.n:
            raise ValueError(f"the weight needs {self.n} central values")
        self.weight = weight
        self.heis = HeisenbergModule(algebra, weight.c)
        self._memo: dict = {}
        self._heis_bases: dict = {}

    @classmethod
    def from_values(cls, algebra: Sl2Cq, h, c, d=None) -> ImaginaryModule:
        return cls(algebra, Weight.make(algebra.ring, h, c, d))

    def __repr__(self):
        return f"ImaginaryModule({self.algebra.config}, {self.weight.to_json()})"

    @property
    def vacuum(self) -> MVector:
        return MVector(self.ring, {((), ()): 1})

    def vector(self, terms) -> MVector:
        return MVector(self.ring, terms)

    def monomial(self, ys: Iterable = (), heis: Iterable = ()) -> tuple:
        """Build an ordered monomial; ``heis`` must already be ordered."""
        out: tuple = ()
        for y in ys:
            out = insert_y(out, tuple(y))
        return (out, tuple(heis))

    def from_heis(self, v) -> MVector:
        return MVector(self.ring, {((), m): c for m, c in v.terms.items()})

    def from_word(self, word: Iterable[BasisKey]) -> MVector:
        """``g_1 g_2 ... g_k v`` for a word of basis keys, expanded in the basis."""
        vec = self.vacuum
        for key in reversed(list(word)):
            vec = self.act(key, vec)
        return vec

    # -- action ----------------------------------------------------------------

    def act_monomial(self, g: BasisKey, mono) -> dict:
        hit = self._memo.get((g, mono))
        if hit is not None:
            return hit
        out = self._act_monomial(g, mono)
        self._memo[(g, mono)] = out
        return out

    def _act_monomial(self, g: BasisKey, mono) -> dict:
        ys, heis = mono
        ring = self.ring
        kind = g.kind
        if kind is Kind.Y:
            return {(insert_y(ys, g.data), heis): ring.one}
        if kind is Kind.C:
            c = self.weight.c[g.data - 1]
            return {mono: c} if c else {}
        if kind is Kind.D:
            i = g.data - 1
            deg = sum(y[i] for y in ys) + sum(f.data[i] for f in heis)
            val = self.weight.d[i] + deg
            return {mono: val} if val else {}
        if kind is Kind.U and not any(g.data):
            val = self.weight.h - 2 * len(ys)
            return {mono: val} if val else {}
        out: dict = {}
        if ys:
            # g Y(y) rest = Y(y) (g rest) + [g, Y(y)] rest
            y, rest = ys[0], (ys[1:], heis)
            for (ys2, h2), c in self.act_monomial(g, rest).items():
                axpy(out, c, {(insert_y(ys2, y), h2): ring.one})
            for k, c in self.algebra.basis_bracket(g, BasisKey(Kind.Y, y)):
                axpy(out, c, self.act_monomial(k, rest))
            return out
        if kind is Kind.X:
            # X commutes into X's through t^- and kills v
            return out
        return {((), m): c for m, c in self.heis.act_monomial(g, heis).items()}

    def act_dict(self, g, vec: Mapping) -> dict:
        if isinstance(g, BasisKey):
            g = {g: self.ring.one}
        elif isinstance(g, AlgebraElement):
            g = g.terms
        out: dict = {}
        for key, a in g.items():
            for mono, c in vec.items():
                axpy(out, a * c, self.act_monomial(key, mono))
        return out

    def act(self, g, v) -> MVector:
        terms = v.terms if isinstance(v, ModuleVector) else v
        return MVector(self.ring, self.act_dict(g, terms))

    # -- weights ---------------------------------------------------------------

    def slot(self, mono) -> tuple:
        return slot_of(mono, self.n)

    def weight_of(self, mono) -> Weight:
        m, beta = self.slot(mono)
        return self.weight.shift(m, beta)

    def vector_slot(self, v: MVector) -> tuple:
        if not v:
            raise NotWeightVector("the zero vector has no weight")
        slots = {self.slot(m) for m in v.terms}
        if len(slots) != 1:
            raise NotWeightVector(f"monomials lie in {len(slots)} different weight spaces")
        return slots.pop()

    def y_length(self, v: MVector) -> int:
        return self.vector_slot(v)[0]

    # -- counting ----------------------------------------------------------------

    def slot_monomials(self, m: int, beta: Sequence[int], box: SupportBox) -> list:
        """In-box monomials with ``m`` Y-factors and total degree ``beta``."""
        beta = tuple(beta)
        out = []
        for ys in itertools.combinations_with_replacement(list(box_vectors(self.n, box.B)), m):
            gamma = beta
            for y in ys:
                gamma = tuple(g - x for g, x in zip(gamma, y))
            if any(gamma) and not is_negative(gamma):
                continue
            for heis in self._heis_basis(gamma, box):
                out.append((tuple(ys), heis))
        out.sort(key=mmonomial_key)
        return out

    def weight_dimension(self, m: int, beta: Sequence[int], box: SupportBox) -> int:
        """Number of in-box monomials in slot ``(m, beta)``: Y-counts convolved with H(lambda) counts."""
        if m < 0:
            raise ValueError("m must be nonnegative")
        beta = tuple(beta)
        total = 0
        for ydeg, cnt in y_counts(self.n, m, box.B).items():
            gamma = tuple(b - y for b, y in zip(beta, ydeg))
            if any(gamma) and not is_negative(gamma):
                continue
            total += cnt * self._heis_count(gamma, box)
        return total

    def _heis_basis(self, gamma: Vec, box: SupportBox) -> list:
        key = (gamma, box)
        hit = self._heis_bases.get(key)
        if hit is None:
            hit = self._heis_bases[key] = enumerate_basis(self.algebra.lattice, gamma, box)
        return hit

    def _heis_count(self, gamma: Vec, box: SupportBox) -> int:
        return len(self._heis_basis(gamma, box))

    def box_slots(self, box: SupportBox) -> list[tuple]:
        """Slots ``(m, beta)`` with ``m <= M`` and ``|beta_i| <= B``, in a fixed order."""
        out = []
        for m in range(box.M + 1):
            for beta in box_vectors(self.n, box.B):
                out.append((m, beta))
        return out

    # -- projections and probes -----------------------------------------------------

    def hat_projection(self, vs: Iterable[MVector]) -> list[MVector]:
        """Basis of ``span(vs)`` intersected with the Y-free subspace."""

        def order(mono):
            return (0 if mono[0] else 1, mmonomial_key(mono))

        ech = Echelon(self.ring, order)
        ech.extend(v.terms for v in vs)
        return [MVector(self.ring, row) for row in ech.basis(lambda p: not p[0])]

    def prop3_probe(self, v: MVector, search_box: SupportBox) -> AlgebraElement:
        """First ``X(A)`` with ``|A_i| <= B`` and ``X(A) v != 0``; it always has one Y-factor fewer."""
        m = self.y_length(v)
        if m < 1:
            raise NoYFactors("the vector has no Y-factors")
        for a in sorted(box_vectors(self.n, search_box.B), key=lambda a: (max(map(abs, a)), lex_key(a))):
            key = BasisKey(Kind.X, a)
            w = self.act(key, v)
            if w:
                if self.y_length(w) != m - 1:
                    raise AssertionError("X lowered the y-length by more than one")
                return self.algebra.basis(key)
        raise SearchBudgetExceeded(f"no X(A) with |A_i| <= {search_box.B} acts nontrivially")

    # -- submodules -------------------------------------------------------------------

    def in_box(self, box: SupportBox):
        def ok(mono) -> bool:
            ys, heis = mono
            return len(ys) <= box.M and all(box.factor_ok(y) for y in ys) and box.monomial_ok(heis)

        return ok

    def operators(self, box: SupportBox) -> list[BasisKey]:
        """Root vectors with exponents in the box (the diagonal part preserves slots)."""
        out = []
        for key in self.algebra.basis_keys(box.B, LATTICE_KINDS):
            if key.kind in (Kind.U, Kind.W) and not any(key.data):
                continue
            out.append(key)
        return out

    def submodule_closure(self, generators: Iterable[MVector], box: SupportBox,
                          stop_at_top: bool = False, max_vectors: int | None = None) -> GradedClosure:
        """In-box closure of the span of ``generators`` under the root vectors.

        With ``stop_at_top`` the loop ends as soon as ``v`` itself has been
        generated (the submodule is then the whole module).
        """
        n = self.n
        clo = GradedClosure(
            self.ring,
            slot_of=lambda mono: slot_of(mono, n),
            in_box=self.in_box(box),
            slot_ok=lambda s: 0 <= s[0] <= box.M,
            sort_key=mmonomial_key,
            target_slot=_target_slot,
            capacity=lambda s: self.weight_dimension(s[0], s[1], box),
            max_vectors=max_vectors,
        )
        for g in generators:
            clo.add(g.terms)
        top = (0, zero(n))
        stop = (lambda: clo.in_box_dim(top) > 0) if stop_at_top else None
        clo.run(self.operators(box), self.act_dict, stop=stop)
        return clo

    def interior(self, slot, box: SupportBox) -> bool:
        """Slots whose in-box dimension is not cut by the box edge (see the decisions notes)."""
        m, beta = slot
        return m < box.M and all(abs(b) <= box.B - 1 for b in beta)

    def theorem2_check(self, generator: MVector, box: SupportBox, strict: bool = False,
                       max_vectors: int | None = None) -> dict:
        """Compare ``dim N`` with ``U(Y-span) (x) N^`` slot by slot for ``N = U(q) generator``.

        ``N^`` is the Y-free part of ``N``.  PASS iff the two agree on every
        interior slot.  When the closure reaches ``v`` the submodule is all
        of M(lambda) and the in-box dimensions are counted directly
        (``"whole_module": true`` in the report).  The report carries
        ``central_charge_zero`` when all ``lambda(c_i)`` vanish (the theorem
        does not apply then); with ``strict`` that case raises
        :class:`CentralChargeZero` instead.
        """
        flag = not any(self.weight.c)
        if flag and strict:
            raise CentralChargeZero("lambda(c_i) = 0 for every i")
        self.vector_slot(generator)
        clo = self.submodule_closure([generator], box, stop_at_top=True, max_vectors=max_vectors)
        whole = clo.in_box_dim((0, zero(self.n))) > 0
        if whole:
            def dim_of(slot):
                return self.weight_dimension(slot[0], slot[1], box)
        else:
            dim_of = clo.in_box_dim
        hat: dict = {}
        rows = []
        ok = True
        for slot in self.box_slots(box):
            m, beta = slot
            dim_n = dim_of(slot)
            conv = 0
            for ydeg, cnt in y_counts(self.n, m, box.B).items():
                gamma = tuple(b - y for b, y in zip(beta, ydeg))
                if gamma not in hat:
                    hat[gamma] = dim_of((0, gamma))
                conv += cnt * hat[gamma]
            if dim_n == 0 and conv == 0:
                continue
            interior = self.interior(slot, box)
            good = dim_n == conv
            if interior and not good:
                ok = False
            rows.append({"slot": {"m": m, "degree": list(beta)}, "dim_N": dim_n, "dim_convolution": conv,
                         "interior": interior, "pass": good})
        return {"pass": ok, "central_charge_zero": flag, "whole_module": whole, "box": box.to_json(),
                "slots": rows}

    def l_lambda_dims(self, box: SupportBox, max_vectors: int | None = None) -> dict:
        """``{(m, beta): dim}`` of the irreducible quotient, in-box, via the H(lambda)/H~ dims."""
        if not self.weight.c[0]:
            raise HypothesisUnmet("lambda(c_1) = 0")
        tilde = self.heis.tilde_closure(box, max_vectors)
        lattice = self.algebra.lattice
        quot: dict = {}

        def qdim(gamma):
            if gamma not in quot:
                if any(gamma) and not is_negative(gamma):
                    quot[gamma] = 0
                else:
                    quot[gamma] = len(enumerate_basis(lattice, gamma, box)) - tilde.in_box_dim(gamma)
            return quot[gamma]

        out = {}
        for m, beta in self.box_slots(box):
            total = 0
            for ydeg, cnt in y_counts(self.n, m, box.B).items():
                total += cnt * qdim(tuple(b - y for b, y in zip(beta, ydeg)))
            if total:
                out[(m, beta)] = total
        return out

    # -- sampling ---------------------------------------------------------------------

    def random_weight_vector(self, m: int, box: SupportBox, rng: random.Random, terms: int = 3) -> MVector:
        """A random combination of up to ``terms`` monomials sharing one slot."""
        pts = list(box_vectors(self.n, box.B))
        negs = [a for a in pts if is_negative(a)]
        ys = tuple(rng.choice(pts) for _ in range(m))
        heis_deg = rng.choice(negs + [zero(self.n)])
        beta = heis_deg
        for y in ys:
            beta = add(beta, y)
        mons = self.slot_monomials(m, beta, box)
        picked = rng.sample(mons, min(terms, len(mons)))
        vals = [x for x in range(-3, 4) if x]
        return MVector(self.ring, {mono: rng.choice(vals) for mono in picked})


__all__ = [
    "Weight", "MVector", "ImaginaryModule", "NotWeightVector", "CentralChargeZero", "HypothesisUnmet",
    "NoYFactors", "y_counts", "mmonomial_key", "slot_of",
]
