"""The Verma-type module H(lambda) over the generalized Heisenberg subalgebra t.

A basis of H(lambda) is given by ordered monomials ``z_{a_1} ... z_{a_s} v``
with every ``a_i`` in the negative cone, ``z`` one of ``U``/``W``, factors
weakly increasing for the order ``W(a) < U(a)`` and ``z_a < z_b`` iff
``a`` precedes ``b`` in :func:`~sl2cq.lattice.neg_order_key`.  A monomial is
a tuple of :class:`~sl2cq.algebra.BasisKey` factors; the empty tuple is the
generator ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraElement, BasisKey, Kind, Sl2Cq
from .closure import GradedClosure
from .lattice import (
    Lattice,
    NotNegative,
    Vec,
    add,
    box_vectors,
    in_lambda_lattice,
    is_negative,
    is_positive,
    neg_order_key,
)
from .linalg import Echelon, axpy, is_field, kernel

Monomial = tuple


class ModuleError(Exception):
    pass


class KindViolation(ModuleError, ValueError):
    pass


class ZeroExponent(ModuleError, ValueError):
    pass


class NonDecidableLambda(ModuleError, ValueError):
    pass


# ------------------------------------------------------------- the box


@dataclass(frozen=True)
class SupportBox:
    """Truncation: factor exponents satisfy ``|a_i| <= B``, at most ``L`` factors.

    Graded slots are kept when every degree coordinate satisfies
    ``|beta_i| <= B`` as well.  ``M`` caps the number of Y-factors of
    monomials of M(lambda) and is ignored by H(lambda).
    """

    B: int
    L: int
    M: int = 2

    def __post_init__(self):
        if self.B < 1 or self.L < 1 or self.M < 0:
            raise ValueError("box bounds must be positive")

    def factor_ok(self, a: Sequence[int]) -> bool:
        return all(abs(x) <= self.B for x in a)

    def monomial_ok(self, mono: Monomial) -> bool:
        return len(mono) <= self.L and all(self.factor_ok(f.data) for f in mono)

    def degree_ok(self, beta: Sequence[int]) -> bool:
        return all(abs(x) <= self.B for x in beta)

    def to_json(self) -> dict:
        return {"B": self.B, "L": self.L, "M": self.M}


# ------------------------------------------------------------- ordering


def factor_key(f: BasisKey) -> tuple:
    return (neg_order_key(f.data), 0 if f.kind is Kind.W else 1)


def monomial_key(mono: Monomial) -> tuple:
    return (len(mono), tuple(factor_key(f) for f in mono))


def degree_of(mono: Monomial, n: int | None = None) -> Vec:
    if not mono:
        if n is None:
            raise ValueError("degree of the empty monomial needs n")
        return (0,) * n
    out = mono[0].data
    for f in mono[1:]:
        out = add(out, f.data)
    return out


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "v"
    return " ".join(str(f) for f in mono) + " v"


# ------------------------------------------------------------- vectors


class ModuleVector:
    """Finite linear combination of module monomials with scalar coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: Mapping | Iterable = (), key=monomial_key):
        self.ring = ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict = {}
        for m, c in items:
            c = ring(c)
            if c:
                clean[m] = clean[m] + c if m in clean else c
        self.terms = dict(sorted(((m, c) for m, c in clean.items() if c), key=lambda kv: key(kv[0])))

    def _new(self, terms):
        return type(self)(self.ring, terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other):
        acc = dict(self.terms)
        axpy(acc, self.ring.one, other.terms)
        return self._new(acc)

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return self._new({m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def coefficient(self, mono):
        return self.terms.get(mono, self.ring.zero)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) {self.format(m)}" for m, c in self.terms.items())

    __repr__ = __str__

    @staticmethod
    def format(mono) -> str:
        return format_monomial(mono)


class HeisVector(ModuleVector):
    __slots__ = ()

    def __init__(self, ring, terms: Mapping | Iterable = ()):
        super().__init__(ring, terms, monomial_key)

    def to_json(self) -> list:
        return [{"monomial": [[f.kind.name, *f.data] for f in m], "coeff": str(c)} for m, c in self.terms.items()]


# ------------------------------------------------------------- the module


def central_values(config_ring, values: Sequence) -> tuple:
    return tuple(config_ring(v) if not isinstance(v, str) else config_ring.parse(v) for v in values)


class HeisenbergModule:
    """H(lambda) for a fixed central character ``lambda(c_1), ..., lambda(c_n)``."""

    def __init__(self, algebra: Sl2Cq, lambda_c: Sequence):
        self.algebra = algebra
        self.lattice: Lattice = algebra.lattice
        self.ring = algebra.ring
        self.n = algebra.n
        if len(lambda_c) != self.n:
            raise ValueError(f"lambda needs {self.n} central values")
        self.lam = central_values(self.ring, lambda_c)
        self._left: dict = {}
        self._raise: dict = {}
        self._br: dict = {}

    def __repr__(self):
        return f"HeisenbergModule({self.algebra.config}, lambda={[str(x) for x in self.lam]})"

    @property
    def vacuum(self) -> HeisVector:
        return HeisVector(self.ring, {(): 1})

    def vector(self, terms) -> HeisVector:
        return HeisVector(self.ring, terms)

    # -- keys --------------------------------------------------------------

    def factor(self, letter, a) -> BasisKey:
        key = letter if isinstance(letter, BasisKey) else self.algebra.key(letter, a)
        if key.kind not in (Kind.U, Kind.W):
            raise KindViolation(f"{key} is not a generator of t")
        if not any(key.data):
            raise ZeroExponent(f"{key} has zero exponent")
        return key

    def _bracket(self, k1: BasisKey, k2: BasisKey):
        """Noncentral part of [k1, k2] as a dict and its central part evaluated at lambda."""
        hit = self._br.get((k1, k2))
        if hit is not None:
            return hit
        terms = {}
        central = self.ring.zero
        for k, c in self.algebra.basis_bracket(k1, k2):
            if k.kind is Kind.C:
                central = central + c * self.lam[k.data - 1]
            else:
                terms[k] = c
        hit = (terms, central)
        self._br[(k1, k2)] = hit
        return hit

    # -- products -------------------------------------------------------------

    def left_mul(self, f: BasisKey, mono: Monomial) -> dict:
        """``f * mono`` expanded in the ordered basis (``f`` in t^-)."""
        memo_key = (f, mono)
        hit = self._left.get(memo_key)
        if hit is not None:
            return hit
        one = self.ring.one
        if not mono or factor_key(f) <= factor_key(mono[0]):
            out = {(f,) + mono: one}
        else:
            first, rest = mono[0], mono[1:]
            out: dict = {}
            for t, c in self.left_mul(f, rest).items():
                axpy(out, c, self.left_mul(first, t))
            terms, _ = self._bracket(f, first)
            for g, c in terms.items():
                axpy(out, c, self.left_mul(g, rest))
        self._left[memo_key] = out
        return out

    def raise_mul(self, z: BasisKey, mono: Monomial) -> dict:
        """``z * mono`` for ``z`` in t^+: commute to the right, where z kills v."""
        memo_key = (z, mono)
        hit = self._raise.get(memo_key)
        if hit is not None:
            return hit
        out: dict = {}
        if mono:
            first, rest = mono[0], mono[1:]
            for t, c in self.raise_mul(z, rest).items():
                axpy(out, c, self.left_mul(first, t))
            terms, central = self._bracket(z, first)
            if central:
                axpy(out, central, {rest: self.ring.one})
            for g, c in terms.items():
                if is_negative(g.data):
                    axpy(out, c, self.left_mul(g, rest))
                else:
                    axpy(out, c, self.raise_mul(g, rest))
        self._raise[memo_key] = out
        return out

    def act_monomial(self, key: BasisKey, mono: Monomial) -> dict:
        kind = key.kind
        if kind is Kind.C:
            return {mono: self.lam[key.data - 1]}
        if kind is Kind.D:
            deg = sum(f.data[key.data - 1] for f in mono)
            return {mono: self.ring(deg)} if deg else {}
        if kind not in (Kind.U, Kind.W):
            raise KindViolation(f"{key} does not act on H(lambda)")
        if not any(key.data):
            raise ZeroExponent(f"{key} is not in t")
        if is_negative(key.data):
            return self.left_mul(key, mono)
        return self.raise_mul(key, mono)

    def act_dict(self, g, vec: Mapping) -> dict:
        """Action on plain ``{monomial: coeff}`` dicts (used by the closure engine)."""
        if isinstance(g, BasisKey):
            g = {g: self.ring.one}
        elif isinstance(g, AlgebraElement):
            g = g.terms
        out: dict = {}
        for key, a in g.items():
            for mono, c in vec.items():
                axpy(out, a * c, self.act_monomial(key, mono))
        return out

    def act(self, g, v) -> HeisVector:
        terms = v.terms if isinstance(v, ModuleVector) else v
        return HeisVector(self.ring, self.act_dict(g, terms))

    def straighten(self, word: Iterable) -> HeisVector:
        """Expand a word of t^- generators (applied to v) in the ordered basis."""
        keys = []
        for item in word:
            key = item if isinstance(item, BasisKey) else self.factor(item[0], item[1])
            if not is_negative(key.data):
                raise NotNegative(f"{key} is not in t^-")
            keys.append(self.factor(key, None))
        vec: dict = {(): self.ring.one}
        for key in reversed(keys):
            out: dict = {}
            for mono, c in vec.items():
                axpy(out, c, self.left_mul(key, mono))
            vec = out
        return HeisVector(self.ring, vec)

    # -- generators -------------------------------------------------------------

    def negative_factors(self, box: SupportBox) -> list[BasisKey]:
        return negative_factors(self.lattice, box)

    def t_generators(self, bound: int, sign: int = 0) -> list[BasisKey]:
        """U/W keys with nonzero exponent in ``[-bound, bound]^n``; ``sign`` filters by the cone."""
        out = []
        for a in box_vectors(self.n, bound):
            if not any(a):
                continue
            if sign > 0 and not is_positive(a):
                continue
            if sign < 0 and not is_negative(a):
                continue
            out.append(BasisKey(Kind.U, a))
            if not self.lattice.in_radical(a):
                out.append(BasisKey(Kind.W, a))
        return out

    # -- the submodule H~ ---------------------------------------------------------

    def tilde_generators(self, box: SupportBox) -> list[Vec]:
        """Negative degrees ``b`` in the box with ``b`` in Lambda_lambda and in some R_r."""
        out = []
        for b in box_vectors(self.n, box.B):
            if is_negative(b) and in_lambda_lattice(self.lam, b) and self.lattice.in_union_radical(b):
                out.append(b)
        return sorted(out, key=neg_order_key)

    def new_closure(self, box: SupportBox, max_vectors: int | None = None) -> GradedClosure:
        n = self.n
        return GradedClosure(
            self.ring,
            slot_of=lambda m: degree_of(m, n),
            in_box=box.monomial_ok,
            slot_ok=box.degree_ok,
            sort_key=monomial_key,
            target_slot=lambda key, slot: add(slot, key.data),
            capacity=lambda slot: len(enumerate_basis(self.lattice, slot, box)),
            max_vectors=max_vectors,
        )

    def tilde_closure(self, box: SupportBox, max_vectors: int | None = None) -> GradedClosure:
        """Closure engine holding the in-box approximation of H~.

        H~_(a) is generated over U(t) by the single-factor vectors z_{la} v
        with la < 0, so those are the seeds.
        """
        clo = self.new_closure(box, max_vectors)
        one = self.ring.one
        for b in self.tilde_generators(box):
            clo.add({(BasisKey(Kind.U, b),): one})
            if not self.lattice.in_radical(b):
                clo.add({(BasisKey(Kind.W, b),): one})
        clo.run(self.t_generators(box.B), self.act_dict)
        return clo

    def tilde_h_components(self, box: SupportBox, max_vectors: int | None = None) -> dict:
        """``{degree: [HeisVector, ...]}``: in-box basis of the approximation of H~."""
        clo = self.tilde_closure(box, max_vectors)
        out = {}
        for slot in sorted(clo.slots(), key=lambda s: tuple(reversed(s))):
            basis = clo.in_box_basis(slot)
            if basis:
                out[slot] = [HeisVector(self.ring, v) for v in basis]
        return out

    # -- singular vectors ----------------------------------------------------------

    def singular_vectors(self, box: SupportBox, raise_bound: int, quotient: GradedClosure | None = None) -> dict:
        """Per degree, in-box vectors killed (modulo ``quotient``) by every z_b, b > 0, |b_i| <= raise_bound.

        The degree-0 slot reports the generator line.  With a quotient, the
        candidates run over monomials that are not pivots of the in-box part
        of the quotient, i.e. a basis of the in-box part of H / H~.
        """
        if quotient is not None and not is_field(self.ring):
            raise NonDecidableLambda("quotients need a field backend (rational or cyclotomic)")
        raisers = self.t_generators(raise_bound, sign=1)
        out: dict = {(0,) * self.n: [self.vacuum]}
        for beta in box_vectors(self.n, box.B):
            if not is_negative(beta):
                continue
            basis = enumerate_basis(self.lattice, beta, box)
            if quotient is not None:
                pool = quotient.pools.get(beta)
                if pool is not None:
                    piv = set(pool.rows)
                    basis = [m for m in basis if m not in piv]
            if not basis:
                out[beta] = []
                continue
            # shrink the candidate space one raising operator at a time; the
            # cheap low-degree raisers usually cut it down to nothing early
            one = self.ring.one
            cand = [{m: one} for m in basis]
            for z in raisers:
                target = None
                if quotient is not None:
                    target = quotient.pools.get(add(beta, z.data))
                images = []
                for vec in cand:
                    w: dict = {}
                    for m, c in vec.items():
                        axpy(w, c, self.raise_mul(z, m))
                    if target is not None and w:
                        w = target.reduce(w)
                    images.append(w)
                if not any(images):
                    continue
                ker = kernel(self.ring, images, order=monomial_key)
                new = []
                for kv in ker:
                    acc: dict = {}
                    for j, c in kv.items():
                        axpy(acc, c, cand[j])
                    new.append(acc)
                cand = new
                if not cand:
                    break
            ker = cand
            out[beta] = [HeisVector(self.ring, vec) for vec in _echelon_basis(self.ring, ker)]
        return out


def _echelon_basis(ring, vecs: list[dict]) -> list[dict]:
    """Canonical (reduced echelon) basis of a span, so reports do not depend on the solve path."""
    ech = Echelon(ring, monomial_key)
    ech.extend(vecs)
    return ech.basis()


# ------------------------------------------------------------- enumeration


def negative_factors(lattice: Lattice, box: SupportBox) -> list[BasisKey]:
    """All t^- generators with exponents in the box, in basis order."""
    out = []
    for a in box_vectors(lattice.n, box.B):
        if not is_negative(a):
            continue
        out.append(BasisKey(Kind.U, a))
        if not lattice.in_radical(a):
            out.append(BasisKey(Kind.W, a))
    out.sort(key=factor_key)
    return out


def enumerate_basis(lattice: Lattice, beta: Sequence[int], box: SupportBox) -> list[Monomial]:
    """Ordered monomials of degree ``beta`` whose factors lie in the box."""
    n = lattice.n
    beta = tuple(beta)
    if not any(beta):
        return [()]
    if not is_negative(beta):
        return []
    factors = negative_factors(lattice, box)
    B, L = box.B, box.L
    out: list = []

    def dfs(start: int, remaining: tuple, chosen: list):
        if not any(remaining):
            out.append(tuple(chosen))
        left = L - len(chosen)
        if left == 0:
            return
        for idx in range(start, len(factors)):
            f = factors[idx]
            rem = tuple(r - x for r, x in zip(remaining, f.data))
            # the last coordinate of every factor is <= 0, so it can only rise
            if rem[n - 1] > 0:
                continue
            if any(abs(r) > (left - 1) * B for r in rem):
                continue
            chosen.append(f)
            dfs(idx, rem, chosen)
            chosen.pop()

    dfs(0, beta, [])
    out.sort(key=monomial_key)
    return out


def product_formula_counts(lattice: Lattice, box: SupportBox) -> dict:
    """Coefficients of ``prod_a (1 - t x^a)^(-mult(a))`` up to ``t^L``, summed over the t-degree.

    ``a`` runs over the negative cone inside the box and ``mult(a)`` is 1 on
    the radical and 2 off it.  Returns ``{degree: count}``.
    """
    n = lattice.n
    L = box.L
    series: dict = {((0,) * n, 0): 1}
    for a in box_vectors(n, box.B):
        if not is_negative(a):
            continue
        mult = 1 if lattice.in_radical(a) else 2
        for _ in range(mult):
            # multiply by the geometric series 1 + t x^a + t^2 x^2a + ...
            new: dict = {}
            for (d, ell), c in series.items():
                deg = d
                for k in range(0, L - ell + 1):
                    key = (deg, ell + k)
                    new[key] = new.get(key, 0) + c
                    deg = add(deg, a)
            series = new
    counts: dict = {}
    for (d, _ell), c in series.items():
        counts[d] = counts.get(d, 0) + c
    return counts


def weak_monomials(n: int, size: int, bound: int) -> list[tuple]:
    """Sorted multisets of ``size`` lattice vectors in ``[-bound, bound]^n`` (the Y-part of M(lambda))."""
    pts = list(box_vectors(n, bound))
    return [tuple(c) for c in itertools.combinations_with_replacement(pts, size)]


__all__ = [
    "SupportBox", "HeisenbergModule", "HeisVector", "ModuleVector", "enumerate_basis",
    "product_formula_counts", "degree_of", "factor_key", "monomial_key", "negative_factors",
    "KindViolation", "ZeroExponent", "NonDecidableLambda",
]
