"""Exact scalars: rationals, cyclotomic fields Q(zeta_N) and Laurent rings Q[q_ij^{+-1}].

Every ring hands out immutable, hashable elements in a canonical form, so
``x == y`` is a decidable exact test.  Python ints and ``Fraction`` values
coerce into any ring; mixing elements of two different rings raises
:class:`BackendMismatch`.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence


class ScalarError(Exception):
    pass


class BackendMismatch(ScalarError, TypeError):
    pass


class NonInvertible(ScalarError, ArithmeticError):
    pass


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class Backend(str, enum.Enum):
    RATIONAL = "rational"
    CYCLOTOMIC = "cyclotomic"
    GENERIC = "generic"


_Number = (int, Fraction)


class Scalar:
    """Common arithmetic plumbing; subclasses supply the payload operations."""

    __slots__ = ("ring",)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise BackendMismatch(f"cannot combine {self.ring} and {other.ring}")
            return other
        if isinstance(other, _Number):
            return self.ring(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other._neg())

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._add(self._neg())

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self._neg()

    def __pos__(self):
        return self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._mul(self.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = self.ring.one
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except BackendMismatch:
            return False
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.ring, self._key()))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _join_terms(parts: list[tuple[Fraction, str]]) -> str:
    """Render ``[(coeff, monomial_text)]`` as ``a*m1 + b*m2 - ...``."""
    if not parts:
        return "0"
    out = []
    for idx, (c, mono) in enumerate(parts):
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if not mono:
            body = _fmt_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rational(mag)}*{mono}"
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# ---------------------------------------------------------------- rationals


class RationalNumber(Scalar):
    __slots__ = ("value",)

    def __init__(self, ring, value):
        self.ring = ring
        self.value = Fraction(value)

    def _key(self):
        return self.value

    def _add(self, other):
        return RationalNumber(self.ring, self.value + other.value)

    def _mul(self, other):
        return RationalNumber(self.ring, self.value * other.value)

    def _neg(self):
        return RationalNumber(self.ring, -self.value)

    def is_zero(self):
        return self.value == 0

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero("inverse of zero")
        return RationalNumber(self.ring, 1 / self.value)

    def __str__(self):
        return _fmt_rational(self.value)


class RationalField:
    backend = Backend.RATIONAL
    is_field = True

    def __call__(self, x) -> RationalNumber:
        if isinstance(x, RationalNumber):
            return x
        if isinstance(x, str):
            return self.parse(x)
        return RationalNumber(self, x)

    @cached_property
    def zero(self):
        return RationalNumber(self, 0)

    @cached_property
    def one(self):
        return RationalNumber(self, 1)

    def parse(self, text: str) -> RationalNumber:
        return _parse(self, text)

    def __repr__(self):
        return "RationalField()"


# --------------------------------------------------------------- cyclotomic


def _cyclotomic_coeffs(N: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the N-th cyclotomic polynomial."""
    import sympy

    return tuple(int(c) for c in reversed(sympy.cyclotomic_poly(N, polys=True).all_coeffs()))


def _normalize(nums: list, den: int) -> tuple[tuple, int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    if den != 1:
        g = math.gcd(den, *nums)
        if g != 1:
            nums = [x // g for x in nums]
            den //= g
    return tuple(nums), den


class CyclotomicNumber(Scalar):
    """Element of Q(zeta_N) on the basis 1, zeta, ..., zeta^(phi-1).

    Stored as integer numerators over one positive common denominator in
    lowest terms, which keeps the representation canonical.
    """

    __slots__ = ("nums", "den")

    def __init__(self, ring, nums: tuple, den: int = 1):
        self.ring = ring
        self.nums = nums
        self.den = den

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def _key(self):
        return (self.nums, self.den)

    def _add(self, other):
        d1, d2 = self.den, other.den
        if d1 == d2:
            if d1 == 1:
                return CyclotomicNumber(self.ring, tuple(x + y for x, y in zip(self.nums, other.nums)), 1)
            nums, den = _normalize([x + y for x, y in zip(self.nums, other.nums)], d1)
        else:
            nums, den = _normalize([x * d2 + y * d1 for x, y in zip(self.nums, other.nums)], d1 * d2)
        return CyclotomicNumber(self.ring, nums, den)

    def _mul(self, other):
        return self.ring._product(self, other)

    def _neg(self):
        return CyclotomicNumber(self.ring, tuple(-x for x in self.nums), self.den)

    def is_zero(self):
        return not any(self.nums)

    def inverse(self):
        return self.ring._inverse(self)

    def __str__(self):
        return _join_terms([(c, "" if k == 0 else f"z^{k}") for k, c in enumerate(self.coeffs) if c])


class CyclotomicField:
    """Q(zeta_N) with the power basis reduced modulo the N-th cyclotomic polynomial."""

    backend = Backend.CYCLOTOMIC
    is_field = True

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = N
        self.phi_poly = _cyclotomic_coeffs(N)
        self.degree = len(self.phi_poly) - 1
        d = self.degree
        # zeta^k in the power basis, for every k the schoolbook product can reach
        top = max(N, 2 * d - 1)
        table = []
        for k in range(top):
            poly = [0] * (k + 1)
            poly[k] = 1
            table.append(tuple(self._reduce_int(poly)))
        self._pow_table = table
        self._roots = [CyclotomicNumber(self, table[k], 1) for k in range(N)]
        self._inverses: dict = {}

    def _reduce_int(self, poly: list) -> list:
        d = self.degree
        phi = self.phi_poly
        poly = list(poly) + [0] * max(0, d - len(poly))
        for k in range(len(poly) - 1, d - 1, -1):
            c = poly[k]
            if c:
                for j in range(d + 1):
                    poly[k - d + j] -= c * phi[j]
        return poly[:d]

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("cyclotomic", self.N))

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def __call__(self, x) -> CyclotomicNumber:
        if isinstance(x, CyclotomicNumber):
            if x.ring != self:
                raise BackendMismatch(f"{x.ring} element given to {self}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Scalar):
            raise BackendMismatch(f"{x.ring} element given to {self}")
        x = Fraction(x)
        nums = [0] * self.degree
        nums[0] = x.numerator
        return CyclotomicNumber(self, tuple(nums), x.denominator)

    @cached_property
    def zero(self):
        return self(0)

    @cached_property
    def one(self):
        return self(1)

    def root_of_unity(self, k: int) -> CyclotomicNumber:
        return self._roots[k % self.N]

    def from_coeffs(self, coeffs) -> CyclotomicNumber:
        """Element with the given (rational) coordinates on the power basis."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        nums, den = _normalize([c.numerator * (den // c.denominator) for c in fr], den)
        return CyclotomicNumber(self, nums, den)

    def from_group_ring(self, coeffs: Mapping[int, Fraction | int]) -> CyclotomicNumber:
        """Evaluate sum c_k zeta^k given as ``{k: c_k}``."""
        acc = [Fraction(0)] * self.degree
        for k, c in coeffs.items():
            if c:
                for j, t in enumerate(self._pow_table[k % self.N]):
                    if t:
                        acc[j] += c * t
        return self.from_coeffs(acc)

    def _product(self, x: CyclotomicNumber, y: CyclotomicNumber) -> CyclotomicNumber:
        d = self.degree
        xs, ys = x.nums, y.nums
        acc = [0] * d
        table = self._pow_table
        for i, a in enumerate(xs):
            if not a:
                continue
            for j, b in enumerate(ys):
                if not b:
                    continue
                c = a * b
                if i + j < d:
                    acc[i + j] += c
                else:
                    for k, t in enumerate(table[i + j]):
                        if t:
                            acc[k] += c * t
        den = x.den * y.den
        if den == 1:
            return CyclotomicNumber(self, tuple(acc), 1)
        nums, den = _normalize(acc, den)
        return CyclotomicNumber(self, nums, den)

    def _inverse(self, x: CyclotomicNumber) -> CyclotomicNumber:
        if x.is_zero():
            raise DivisionByZero("inverse of zero")
        d = self.degree
        if not any(x.nums[1:]):
            # a rational number
            a = x.nums[0]
            sign = -1 if a < 0 else 1
            return CyclotomicNumber(self, (sign * x.den,) + (0,) * (d - 1), abs(a))
        hit = self._inverses.get(x._key)
        if hit is not None:
            return hit
        out = self._inverse_solve(x)
        if len(self._inverses) < 100_000:
            self._inverses[x._key] = out
        return out

    def _inverse_solve(self, x: CyclotomicNumber) -> CyclotomicNumber:
        d = self.degree
        # column j = x * zeta^j; solve A y = e_0
        cols = [self._product(x, self.root_of_unity(j)).coeffs for j in range(d)]
        rows = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [v * inv for v in rows[c]]
            for r in range(d):
                if r != c and rows[r][c] != 0:
                    m = rows[r][c]
                    rows[r] = [a - m * b for a, b in zip(rows[r], rows[c])]
        return self.from_coeffs(rows[i][d] for i in range(d))

    def parse(self, text: str) -> CyclotomicNumber:
        return _parse(self, text)


# ------------------------------------------------------------------ Laurent


class LaurentPolynomial(Scalar):
    """Element of Q[q_ij^{+-1} : i<j]; terms are ``(exponent_tuple, coeff)`` sorted by exponent."""

    __slots__ = ("terms",)

    def __init__(self, ring, terms: tuple):
        self.ring = ring
        self.terms = terms

    @classmethod
    def _from_dict(cls, ring, acc: dict):
        return cls(ring, tuple(sorted((e, c) for e, c in acc.items() if c)))

    def _key(self):
        return self.terms

    def _add(self, other):
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial._from_dict(self.ring, acc)

    def _mul(self, other):
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPolynomial._from_dict(self.ring, acc)

    def _neg(self):
        return LaurentPolynomial(self.ring, tuple((e, -c) for e, c in self.terms))

    def is_zero(self):
        return not self.terms

    def inverse(self):
        if not self.terms:
            raise DivisionByZero("inverse of zero")
        if len(self.terms) > 1:
            raise NonInvertible("only monomials are invertible in the Laurent ring")
        (e, c), = self.terms
        return LaurentPolynomial(self.ring, ((tuple(-x for x in e), 1 / c),))

    def __str__(self):
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                f"q{i}{j}" if k == 1 else f"q{i}{j}^{k}"
                for (i, j), k in zip(self.ring.pairs, e)
                if k
            )
            parts.append((c, mono))
        return _join_terms(parts)


class LaurentRing:
    """Laurent polynomials in formal parameters q_ij (i<j); q_ji is q_ij^-1."""

    backend = Backend.GENERIC
    is_field = False

    def __init__(self, n: int):
        self.n = n
        self.pairs = tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
        self._pair_index = {p: k for k, p in enumerate(self.pairs)}

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.n == self.n

    def __hash__(self):
        return hash(("laurent", self.n))

    def __repr__(self):
        return f"LaurentRing({self.n})"

    def __call__(self, x) -> LaurentPolynomial:
        if isinstance(x, LaurentPolynomial):
            if x.ring != self:
                raise BackendMismatch(f"{x.ring} element given to {self}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Scalar):
            raise BackendMismatch(f"{x.ring} element given to {self}")
        x = Fraction(x)
        if x == 0:
            return LaurentPolynomial(self, ())
        return LaurentPolynomial(self, (((0,) * len(self.pairs), x),))

    @cached_property
    def zero(self):
        return self(0)

    @cached_property
    def one(self):
        return self(1)

    def monomial(self, exponents: Mapping[tuple[int, int], int], coeff=1) -> LaurentPolynomial:
        """``coeff * prod q_ij^e``; a pair with i > j contributes q_ji^-e."""
        e = [0] * len(self.pairs)
        for (i, j), k in exponents.items():
            if i == j:
                continue
            if i < j:
                e[self._pair_index[(i, j)]] += k
            else:
                e[self._pair_index[(j, i)]] -= k
        return LaurentPolynomial._from_dict(self, {tuple(e): Fraction(coeff)})

    def from_exponent_vector(self, e: Sequence[int], coeff=1) -> LaurentPolynomial:
        return LaurentPolynomial._from_dict(self, {tuple(e): Fraction(coeff)})

    def parse(self, text: str) -> LaurentPolynomial:
        return _parse(self, text)


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<z>z)|(?P<q>q(?:\d_\d+|\d+_\d+|\d\d))|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar literal {text!r} at position {pos}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


def _parse(ring, text: str):
    """Parse literals such as ``3/4``, ``1/2*z^1 + z^2`` or ``q12^3*q13^-1``."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def signed_int():
        sign = 1
        while peek() in ("-", "+"):
            if take() == "-":
                sign = -sign
        tok = take()
        if not tok.isdigit():
            raise ValueError(f"expected integer exponent in {text!r}")
        return sign * int(tok)

    def atom():
        tok = take()
        if tok.isdigit():
            return ring(int(tok))
        if tok == "(":
            val = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return val
        if tok == "z":
            if not isinstance(ring, CyclotomicField):
                raise BackendMismatch(f"'z' literal needs the cyclotomic backend, got {ring}")
            k = 1
            if peek() == "^":
                take()
                k = signed_int()
            return ring.root_of_unity(k)
        if tok.startswith("q"):
            if not isinstance(ring, LaurentRing):
                raise BackendMismatch(f"'q' literal needs the generic backend, got {ring}")
            body = tok[1:]
            i, j = (int(s) for s in body.split("_")) if "_" in body else (int(body[0]), int(body[1]))
            k = 1
            if peek() == "^":
                take()
                k = signed_int()
            if not (1 <= i <= ring.n and 1 <= j <= ring.n):
                raise ValueError(f"parameter {tok} out of range for n={ring.n}")
            return ring.monomial({(i, j): k})
        raise ValueError(f"unexpected token {tok!r} in {text!r}")

    def factor():
        if peek() == "-":
            take()
            return -factor()
        if peek() == "+":
            take()
            return factor()
        return atom()

    def term():
        val = factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def expr():
        val = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    if not tokens:
        raise ValueError("empty scalar literal")
    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in scalar literal {text!r}")
    return result


# ------------------------------------------------------------------- config


@lru_cache(maxsize=None)
def _ring_for(backend: Backend, n: int, N: int):
    if backend is Backend.RATIONAL:
        return RationalField()
    if backend is Backend.CYCLOTOMIC:
        return CyclotomicField(N)
    return LaurentRing(n)


@dataclass(frozen=True)
class ScalarConfig:
    """Backend choice plus the parameters q_ij.

    For the cyclotomic backend ``q_ij = zeta_N ** M[i][j]`` and ``M`` must be
    skew-symmetric modulo ``N``.  The rational backend is the commutative
    case (every q_ij = 1); the generic backend keeps the q_ij formal.
    """

    backend: Backend
    n: int
    N: int = 1
    M: tuple[tuple[int, ...], ...] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.backend is Backend.CYCLOTOMIC:
            if self.M is None:
                raise ValueError("cyclotomic backend needs the exponent matrix M")
            M = tuple(tuple(int(v) for v in row) for row in self.M)
            if len(M) != self.n or any(len(row) != self.n for row in M):
                raise ValueError(f"M must be {self.n}x{self.n}")
            for i in range(self.n):
                if M[i][i] % self.N:
                    raise ValueError(f"M[{i + 1}][{i + 1}] must vanish mod N")
                for j in range(self.n):
                    if (M[i][j] + M[j][i]) % self.N:
                        raise ValueError(f"M is not skew-symmetric mod N at ({i + 1},{j + 1})")
            object.__setattr__(self, "M", M)
        else:
            object.__setattr__(self, "M", None)
            object.__setattr__(self, "N", 1)

    @classmethod
    def cyclotomic(cls, N: int, M: Iterable[Iterable[int]]) -> ScalarConfig:
        M = tuple(tuple(row) for row in M)
        return cls(Backend.CYCLOTOMIC, len(M), N, M)

    @classmethod
    def cyclotomic_upper(cls, n: int, N: int, upper: Mapping[tuple[int, int], int]) -> ScalarConfig:
        """Build M from its entries above the diagonal, ``{(i, j): m_ij}`` with 1 <= i < j <= n."""
        M = [[0] * n for _ in range(n)]
        for (i, j), m in upper.items():
            M[i - 1][j - 1] = m % N
            M[j - 1][i - 1] = (-m) % N
        return cls(Backend.CYCLOTOMIC, n, N, tuple(map(tuple, M)))

    @classmethod
    def generic(cls, n: int) -> ScalarConfig:
        return cls(Backend.GENERIC, n)

    @classmethod
    def rational(cls, n: int) -> ScalarConfig:
        return cls(Backend.RATIONAL, n)

    @property
    def ring(self):
        return _ring_for(self.backend, self.n, self.N)

    def scalar(self, x):
        return self.ring(x)

    def root_of_unity(self, k: int):
        if self.backend is not Backend.CYCLOTOMIC:
            raise BackendMismatch("root_of_unity requires the cyclotomic backend")
        return self.ring.root_of_unity(k)

    def to_json(self) -> dict:
        out = {"backend": self.backend.value, "n": self.n}
        if self.backend is Backend.CYCLOTOMIC:
            out["N"] = self.N
            out["M"] = [list(row) for row in self.M]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> ScalarConfig:
        backend = Backend(data["backend"])
        n = int(data["n"])
        if backend is Backend.CYCLOTOMIC:
            return cls(backend, n, int(data["N"]), tuple(tuple(r) for r in data["M"]))
        return cls(backend, n)
