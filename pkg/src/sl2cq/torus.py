"""The quantum torus C_q: finite sums of monomials t^a with t^a t^b = sigma(a, b) t^(a+b)."""

from __future__ import annotations

from typing import Iterable, Mapping

from .lattice import Lattice, Vec, add, lex_key


class TorusElement:
    """Immutable finite sum ``sum_a c_a t^a`` over a fixed :class:`Lattice`."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: Lattice, terms: Mapping[Vec, object] | Iterable = ()):
        self.lattice = lattice
        items = terms.items() if isinstance(terms, Mapping) else terms
        ring = lattice.ring
        clean = {}
        for a, c in items:
            c = ring(c)
            if c:
                clean[tuple(a)] = c
        self.terms = dict(sorted(clean.items(), key=lambda kv: lex_key(kv[0])))

    @classmethod
    def monomial(cls, lattice: Lattice, a: Vec, coeff=1) -> TorusElement:
        return cls(lattice, {tuple(a): coeff})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, TorusElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other: TorusElement) -> TorusElement:
        acc = dict(self.terms)
        for a, c in other.terms.items():
            acc[a] = acc[a] + c if a in acc else c
        return TorusElement(self.lattice, acc)

    def __neg__(self) -> TorusElement:
        return TorusElement(self.lattice, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: TorusElement) -> TorusElement:
        return self + (-other)

    def scale(self, s) -> TorusElement:
        return TorusElement(self.lattice, {a: c * s for a, c in self.terms.items()})

    def __mul__(self, other: TorusElement) -> TorusElement:
        return torus_multiply(self, other)

    def coefficient(self, a: Vec):
        return self.terms.get(tuple(a), self.lattice.ring.zero)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*t^{a}" for a, c in self.terms.items())

    def to_json(self) -> list:
        return [{"exponent": list(a), "coeff": str(c)} for a, c in self.terms.items()]


def torus_multiply(u: TorusElement, v: TorusElement) -> TorusElement:
    sigma = u.lattice.sigma
    acc: dict = {}
    for a, c in u.terms.items():
        for b, d in v.terms.items():
            s = add(a, b)
            val = c * d * sigma(a, b)
            acc[s] = acc[s] + val if s in acc else val
    return TorusElement(u.lattice, acc)


def epsilon(u: TorusElement):
    """Coefficient of t^0."""
    return u.coefficient((0,) * u.lattice.n)


def center_split(u: TorusElement) -> tuple[TorusElement, TorusElement]:
    """Split ``u`` into its central part (support in R) and its commutator part."""
    rad = u.lattice.in_radical
    z = {a: c for a, c in u.terms.items() if rad(a)}
    rest = {a: c for a, c in u.terms.items() if not rad(a)}
    return TorusElement(u.lattice, z), TorusElement(u.lattice, rest)
