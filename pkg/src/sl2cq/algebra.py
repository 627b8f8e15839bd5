"""The Lie algebra q = sl_2(C_q) + C + D.

Basis keys are ``X(a)``, ``Y(a)``, ``U(a)``, ``W(a)`` (a in Z^n, W only
off the radical) and ``C(i)``, ``D(i)`` for i = 1..n.  ``U(0)`` is the
Cartan element h.  :meth:`Sl2Cq.bracket` uses the closed-form table;
:meth:`Sl2Cq.bracket_oracle` recomputes it from 2x2 matrices over the
quantum torus.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from . import _kernel
from .lattice import Lattice, Vec, add, lex_key
from .scalars import Backend, ScalarConfig
from .torus import TorusElement, center_split, epsilon, torus_multiply


class AlgebraError(Exception):
    pass


class InvalidKey(AlgebraError, ValueError):
    pass


class InternalTableInconsistency(AlgebraError, RuntimeError):
    pass


class UnsupportedKeys(AlgebraError, ValueError):
    pass


class NotARoot(AlgebraError, ValueError):
    pass


class Kind(enum.IntEnum):
    X = _kernel.KIND_X
    Y = _kernel.KIND_Y
    U = _kernel.KIND_U
    W = _kernel.KIND_W
    C = _kernel.KIND_C
    D = _kernel.KIND_D


LATTICE_KINDS = (Kind.X, Kind.Y, Kind.U, Kind.W)


class BasisKey(NamedTuple):
    """``kind`` plus either a lattice vector (X, Y, U, W) or a 1-based index (C, D)."""

    kind: Kind
    data: object

    @property
    def a(self) -> Vec:
        return self.data if self.kind in LATTICE_KINDS else None

    @property
    def i(self) -> int:
        return self.data if self.kind in (Kind.C, Kind.D) else None

    def sort_key(self):
        if self.kind in LATTICE_KINDS:
            return (int(self.kind), lex_key(self.data))
        return (int(self.kind), (self.data,))

    def __str__(self):
        if self.kind in LATTICE_KINDS:
            return f"{self.kind.name}:({','.join(map(str, self.data))})"
        return f"{self.kind.name}:{self.data}"

    @classmethod
    def parse(cls, text: str) -> BasisKey:
        """Inverse of ``str``: ``X:(1,0)``, ``W:(0,-1)``, ``C:2``."""
        name, _, rest = text.strip().partition(":")
        kind = Kind[name.strip().upper()[:1]]
        rest = rest.strip()
        if kind in LATTICE_KINDS:
            body = rest.strip("()[] ")
            return cls(kind, tuple(int(s) for s in body.split(",") if s.strip()))
        return cls(kind, int(rest))


class Root(NamedTuple):
    """``alpha * (the simple root) + sum lattice_i delta_i``."""

    alpha: int
    lattice: Vec


CARTAN = "cartan"


class AlgebraElement:
    """Finite linear combination of basis keys with scalar coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Sl2Cq, terms: Mapping[BasisKey, object] | Iterable = ()):
        self.algebra = algebra
        ring = algebra.ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for k, c in items:
            c = ring(c)
            if c:
                clean[k] = clean[k] + c if k in clean else c
        clean = {k: c for k, c in clean.items() if c}
        self.terms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other):
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return AlgebraElement(self.algebra, acc)

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return AlgebraElement(self.algebra, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __str__(self):
        if not self.terms:
            return "0"
        return ", ".join(f"{k} {c}" for k, c in self.terms.items())

    __repr__ = __str__

    def to_json(self) -> list:
        out = []
        for k, c in self.terms.items():
            entry = {"kind": k.kind.name}
            if k.kind in LATTICE_KINDS:
                entry["exponent"] = list(k.data)
            else:
                entry["index"] = k.data
            entry["coeff"] = str(c)
            out.append(entry)
        return out


class Sl2Cq:
    """sl_2(C_q) extended by the centre C and the degree derivations D."""

    def __init__(self, config: ScalarConfig | Lattice):
        self.lattice = config if isinstance(config, Lattice) else Lattice(config)
        self.config = self.lattice.config
        self.ring = self.lattice.ring
        self.n = self.config.n
        self._setup_codes()
        self._basis_cache: dict = {}

    def __repr__(self):
        return f"Sl2Cq({self.config})"

    # group codes ------------------------------------------------------------

    def _setup_codes(self):
        cfg, n = self.config, self.n
        K = np.zeros((n, n), dtype=np.int64)
        if cfg.backend is Backend.CYCLOTOMIC:
            self.modulus = cfg.N
            for i in range(n):
                for j in range(i + 1, n):
                    K[j, i] = cfg.M[j][i] % cfg.N
            self.phi = np.array(self.ring.phi_poly, dtype=np.int64)
        elif cfg.backend is Backend.RATIONAL:
            self.modulus = 1
            self.phi = np.array([-1, 1], dtype=np.int64)
        else:
            self.modulus = 0
            pairs = self.ring.pairs
            self._code_bits = 62 // max(len(pairs), 1)
            base = 1 << self._code_bits
            for k, (i, j) in enumerate(pairs):
                # sigma(a, b) carries q_ij^(-a_j b_i) for i < j
                K[j - 1, i - 1] = -(base**k)
            self.phi = np.zeros(1, dtype=np.int64)
        self.K = K
        self._code_cache: dict = {}

    def _group_element(self, code: int):
        """Scalar value of the group element with the given code."""
        try:
            return self._code_cache[code]
        except KeyError:
            pass
        cfg = self.config
        if cfg.backend is Backend.CYCLOTOMIC:
            val = self.ring.root_of_unity(code)
        elif cfg.backend is Backend.RATIONAL:
            val = self.ring.one
        else:
            bits = self._code_bits
            base = 1 << bits
            exps = []
            rest = code
            for _ in self.ring.pairs:
                digit = rest % base
                if digit >= base // 2:
                    digit -= base
                exps.append(digit)
                rest = (rest - digit) // base
            val = self.ring.from_exponent_vector(exps)
        self._code_cache[code] = val
        return val

    def _check_code_range(self, a: Vec, b: Vec):
        if self.modulus == 0 and self.ring.pairs:
            limit = 1 << (self._code_bits - 3)
            if max(map(abs, a), default=0) * max(map(abs, b), default=0) * self.n >= limit:
                raise OverflowError("lattice vectors too large for packed generic exponents")

    # keys -------------------------------------------------------------------

    def key(self, kind: Kind | str, data) -> BasisKey:
        kind = Kind[kind] if isinstance(kind, str) else Kind(kind)
        if kind in LATTICE_KINDS:
            a = tuple(int(x) for x in data)
            if len(a) != self.n:
                raise InvalidKey(f"{kind.name} needs a vector of length {self.n}")
            if kind is Kind.W and self.lattice.in_radical(a):
                raise InvalidKey(f"W{a} is not a basis element: {a} lies in the radical")
            return BasisKey(kind, a)
        i = int(data)
        if not 1 <= i <= self.n:
            raise InvalidKey(f"index {i} outside 1..{self.n}")
        return BasisKey(kind, i)

    def element(self, terms: Mapping | Iterable = ()) -> AlgebraElement:
        return AlgebraElement(self, terms)

    def basis(self, key: BasisKey, coeff=1) -> AlgebraElement:
        return AlgebraElement(self, {key: coeff})

    def X(self, a, coeff=1):
        return self.basis(self.key(Kind.X, a), coeff)

    def Y(self, a, coeff=1):
        return self.basis(self.key(Kind.Y, a), coeff)

    def U(self, a, coeff=1):
        return self.basis(self.key(Kind.U, a), coeff)

    def W(self, a, coeff=1):
        return self.basis(self.key(Kind.W, a), coeff)

    def C(self, i, coeff=1):
        return self.basis(self.key(Kind.C, i), coeff)

    def D(self, i, coeff=1):
        return self.basis(self.key(Kind.D, i), coeff)

    def h(self, coeff=1):
        return self.U((0,) * self.n, coeff)

    def basis_keys(self, bound: int, kinds: Iterable[Kind] = tuple(Kind)) -> list[BasisKey]:
        """All basis keys with lattice part in [-bound, bound]^n, in canonical order."""
        from .lattice import box_vectors

        kinds = set(kinds)
        out = []
        pts = list(box_vectors(self.n, bound))
        for kind in Kind:
            if kind not in kinds:
                continue
            if kind in LATTICE_KINDS:
                for a in pts:
                    if kind is Kind.W and self.lattice.in_radical(a):
                        continue
                    out.append(BasisKey(kind, a))
            else:
                out.extend(BasisKey(kind, i) for i in range(1, self.n + 1))
        return out

    # bracket ----------------------------------------------------------------

    def basis_bracket(self, k1: BasisKey, k2: BasisKey) -> tuple:
        """Bracket of two basis keys as a tuple of ``(key, coeff)`` pairs."""
        cache_key = (k1, k2)
        hit = self._basis_cache.get(cache_key)
        if hit is not None:
            return hit
        n = self.n
        zero = (0,) * n
        a = k1.data if k1.kind in LATTICE_KINDS else zero
        b = k2.data if k2.kind in LATTICE_KINDS else zero
        i1 = k1.data - 1 if k1.kind not in LATTICE_KINDS else 0
        i2 = k2.data - 1 if k2.kind not in LATTICE_KINDS else 0
        self._check_code_range(a, b)
        tk = np.zeros(3, dtype=np.int64)
        tn = np.zeros((3, 2), dtype=np.int64)
        tc = np.zeros((3, 2), dtype=np.int64)
        cen = np.zeros(n, dtype=np.int64)
        nt, hc, status = _kernel.structure(
            int(k1.kind), np.array(a, dtype=np.int64), i1, int(k2.kind), np.array(b, dtype=np.int64), i2,
            self.K, self.modulus, tk, tn, tc, cen,
        )
        if status != _kernel.OK:
            raise InternalTableInconsistency(f"nonzero W coefficient on the radical in [{k1}, {k2}]")
        c = add(a, b)
        terms = []
        for t in range(nt):
            coeff = (self._group_element(int(tc[t, 0])) * int(tn[t, 0])
                     + self._group_element(int(tc[t, 1])) * int(tn[t, 1])) * Fraction(1, 2)
            if coeff:
                kind = Kind(int(tk[t]))
                if kind is Kind.W and self.lattice.in_radical(c):
                    raise InternalTableInconsistency(f"W{c} produced with c in the radical")
                terms.append((BasisKey(kind, c), coeff))
        if hc:
            g = self._group_element(int(tc[2, 0]))
            for i in range(n):
                if cen[i]:
                    terms.append((BasisKey(Kind.C, i + 1), g * Fraction(int(cen[i]), 2)))
        result = tuple(terms)
        self._basis_cache[cache_key] = result
        return result

    def bracket(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        acc: dict = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                for k, c in self.basis_bracket(k1, k2):
                    val = c1 * c2 * c
                    acc[k] = acc[k] + val if k in acc else val
        return AlgebraElement(self, acc)

    # matrix oracle ----------------------------------------------------------

    def _to_matrix(self, x: AlgebraElement) -> dict:
        lat = self.lattice
        entries: dict = {}

        def put(pos, a, c):
            entries.setdefault(pos, {})
            entries[pos][a] = entries[pos][a] + c if a in entries[pos] else c

        for k, c in x.terms.items():
            if k.kind not in LATTICE_KINDS:
                raise UnsupportedKeys(f"{k} has no matrix realisation")
            a = k.data
            if k.kind is Kind.X:
                put((0, 1), a, c)
            elif k.kind is Kind.Y:
                put((1, 0), a, c)
            elif k.kind is Kind.U:
                put((0, 0), a, c)
                put((1, 1), a, -c)
            else:
                put((0, 0), a, c)
                put((1, 1), a, c)
        return {pos: TorusElement(lat, d) for pos, d in entries.items()}

    def _matmul(self, P: dict, Q: dict) -> dict:
        out: dict = {}
        for (i, k), p in P.items():
            for (k2, j), q in Q.items():
                if k != k2:
                    continue
                prod = torus_multiply(p, q)
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        return out

    def _from_matrix(self, P: dict) -> AlgebraElement:
        lat = self.lattice
        zero_t = TorusElement(lat)
        A = P.get((0, 0), zero_t)
        Dg = P.get((1, 1), zero_t)
        half = Fraction(1, 2)
        terms: dict = {}
        for a, c in P.get((0, 1), zero_t):
            terms[BasisKey(Kind.X, a)] = c
        for a, c in P.get((1, 0), zero_t):
            terms[BasisKey(Kind.Y, a)] = c
        for a, c in (A - Dg).scale(half):
            terms[BasisKey(Kind.U, a)] = c
        central, comm = center_split((A + Dg).scale(half))
        if central:
            raise InternalTableInconsistency("identity part of a commutator has central support")
        for a, c in comm:
            terms[BasisKey(Kind.W, a)] = c
        return AlgebraElement(self, terms)

    def _degree_scaled(self, x: AlgebraElement, i: int) -> AlgebraElement:
        """[d_i, x] for x in sl_2(C_q)."""
        return AlgebraElement(self, {k: c * k.data[i - 1] for k, c in x.terms.items()})

    def invariant_form(self, x: AlgebraElement, y: AlgebraElement):
        """epsilon(tr(x y)) computed from the matrix product over C_q."""
        P = self._matmul(self._to_matrix(x), self._to_matrix(y))
        zero_t = TorusElement(self.lattice)
        return epsilon(P.get((0, 0), zero_t) + P.get((1, 1), zero_t))

    def _split(self, x: AlgebraElement) -> tuple:
        """Parts of ``x`` in sl_2(C_q) and in D (the C part brackets to zero)."""
        loop = {k: c for k, c in x.terms.items() if k.kind in LATTICE_KINDS}
        ders = {k.data: c for k, c in x.terms.items() if k.kind is Kind.D}
        return AlgebraElement(self, loop), ders

    def bracket_oracle(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Bracket from first principles, independent of the structure table.

        On sl_2(C_q) it is the matrix commutator over C_q plus the central
        correction ``sum_i ([d_i, x], y) c_i``.  The ``c_i`` are central and
        ``d_i`` acts on ``t^a`` by ``a_i``.
        """
        x_loop, x_der = self._split(x)
        y_loop, y_der = self._split(y)
        result = AlgebraElement(self)
        if x_loop and y_loop:
            mx, my = self._to_matrix(x_loop), self._to_matrix(y_loop)
            xy = self._matmul(mx, my)
            yx = self._matmul(my, mx)
            comm = dict(xy)
            for pos, t in yx.items():
                comm[pos] = comm[pos] - t if pos in comm else -t
            result = self._from_matrix(comm)
            central = {}
            for i in range(1, self.n + 1):
                dx = self._degree_scaled(x_loop, i)
                if dx:
                    val = self.invariant_form(dx, y_loop)
                    if val:
                        central[BasisKey(Kind.C, i)] = val
            result = result + AlgebraElement(self, central)
        for i, c in x_der.items():
            result = result + self._degree_scaled(y_loop, i) * c
        for i, c in y_der.items():
            result = result - self._degree_scaled(x_loop, i) * c
        return result

    # roots ------------------------------------------------------------------

    def root_of(self, key: BasisKey):
        if key.kind is Kind.X:
            return Root(1, key.data)
        if key.kind is Kind.Y:
            return Root(-1, key.data)
        if key.kind in (Kind.U, Kind.W) and any(key.data):
            return Root(0, key.data)
        return CARTAN

    def root_space_basis(self, beta: Root) -> list[BasisKey]:
        alpha, a = beta
        a = tuple(a)
        if len(a) != self.n:
            raise NotARoot(f"{beta} has the wrong rank")
        if alpha == 1:
            return [BasisKey(Kind.X, a)]
        if alpha == -1:
            return [BasisKey(Kind.Y, a)]
        if alpha != 0 or not any(a):
            raise NotARoot(f"{beta} is not a root")
        if self.lattice.in_radical(a):
            return [BasisKey(Kind.U, a)]
        return [BasisKey(Kind.U, a), BasisKey(Kind.W, a)]

    # bulk identity checks ----------------------------------------------------

    def _key_arrays(self, keys: list[BasisKey]):
        n = self.n
        kinds = np.array([int(k.kind) for k in keys], dtype=np.int64)
        vecs = np.zeros((len(keys), n), dtype=np.int64)
        idxs = np.zeros(len(keys), dtype=np.int64)
        for t, k in enumerate(keys):
            if k.kind in LATTICE_KINDS:
                vecs[t] = k.data
            else:
                idxs[t] = k.data - 1
        return kinds, vecs, idxs

    def check_jacobi(self, keys: list[BasisKey]) -> dict:
        """Exact Jacobi identity on every unordered triple of distinct keys.

        Triples with a repeated key vanish by antisymmetry, which is checked
        separately by :meth:`check_antisymmetry`.
        """
        for k in keys:
            if k.kind in LATTICE_KINDS:
                self._check_code_range(k.data, tuple(3 * x for x in k.data))
        kinds, vecs, idxs = self._key_arrays(keys)
        checked, failures, i, j, k, status = _kernel.jacobi_check(
            kinds, vecs, idxs, self.K, self.modulus, self.phi, 0, len(keys)
        )
        first = None if i < 0 else (keys[i], keys[j], keys[k])
        return {"checked": int(checked), "failures": int(failures), "first_failure": first,
                "table_error": status != _kernel.OK}

    def check_oracle(self, keys: list[BasisKey]) -> dict:
        """Compiled bulk version of ``bracket == bracket_oracle`` on all ordered pairs of keys."""
        kinds, vecs, idxs = self._key_arrays(keys)
        checked, failures, i, j = _kernel.oracle_check(kinds, vecs, idxs, self.K, self.modulus, self.phi)
        first = None if i < 0 else (keys[i], keys[j])
        return {"checked": int(checked), "failures": int(failures), "first_failure": first}

    def check_antisymmetry(self, keys: list[BasisKey]) -> dict:
        kinds, vecs, idxs = self._key_arrays(keys)
        checked, failures, i, j = _kernel.antisymmetry_check(kinds, vecs, idxs, self.K, self.modulus, self.phi)
        first = None if i < 0 else (keys[i], keys[j])
        return {"checked": int(checked), "failures": int(failures), "first_failure": first}
