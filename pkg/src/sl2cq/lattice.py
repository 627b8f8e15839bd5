"""The lattice Z^n: its two orders, the twisting maps sigma and f, and radicals.

Lattice vectors are plain tuples of ints.  Everything that depends on the
parameters q_ij lives on :class:`Lattice`, which wraps a
:class:`~sl2cq.scalars.ScalarConfig`.
"""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from .scalars import Backend, ScalarConfig

Vec = tuple


class LatticeError(Exception):
    pass


class NotNegative(LatticeError, ValueError):
    pass


class RankOutOfRange(LatticeError, ValueError):
    pass


class SupportViolation(LatticeError, ValueError):
    pass


class InRadical(LatticeError, ValueError):
    pass


class SearchBudgetExceeded(LatticeError, RuntimeError):
    pass


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def zero(n: int) -> Vec:
    return (0,) * n


def add(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: Sequence[int]) -> Vec:
    return tuple(-x for x in a)


def scale(k: int, a: Sequence[int]) -> Vec:
    return tuple(k * x for x in a)


def last_nonzero(a: Sequence[int]) -> int:
    """1-based position of the last nonzero coordinate, 0 for the zero vector."""
    for i in range(len(a) - 1, -1, -1):
        if a[i]:
            return i + 1
    return 0


# ------------------------------------------------------------------- orders


def lex_key(a: Sequence[int]) -> tuple:
    """Sort key for the lexicographic order (decided at the largest differing index)."""
    return tuple(reversed(a))


def lex_compare(a: Sequence[int], b: Sequence[int]) -> Cmp:
    ka, kb = lex_key(a), lex_key(b)
    if ka == kb:
        return Cmp.EQUAL
    return Cmp.LESS if ka < kb else Cmp.GREATER


def is_negative(a: Sequence[int]) -> bool:
    r = last_nonzero(a)
    return r > 0 and a[r - 1] < 0


def is_positive(a: Sequence[int]) -> bool:
    r = last_nonzero(a)
    return r > 0 and a[r - 1] > 0


def neg_order_key(a: Sequence[int]) -> tuple:
    """Sort key for the recursive order on the negative cone.

    For ``a = (prefix, -k, 0, ..., 0)`` with ``-k`` at position r: a deeper
    last nonzero position comes first, then smaller k, then the prefix in
    lexicographic order.
    """
    r = last_nonzero(a)
    if r == 0 or a[r - 1] >= 0:
        raise NotNegative(f"{tuple(a)} is not in the negative cone")
    return (-r, -a[r - 1], tuple(reversed(a[: r - 1])))


def neg_order_compare(a: Sequence[int], b: Sequence[int]) -> Cmp:
    ka, kb = neg_order_key(a), neg_order_key(b)
    if ka == kb:
        return Cmp.EQUAL
    return Cmp.LESS if ka < kb else Cmp.GREATER


def box_vectors(n: int, bound: int) -> Iterator[Vec]:
    """All of [-bound, bound]^n in lexicographic order."""
    pts = list(itertools.product(range(-bound, bound + 1), repeat=n))
    pts.sort(key=lex_key)
    return iter(pts)


# ------------------------------------------------------- integer lattices


def _column_echelon_kernel(A: list[list[int]]) -> list[list[int]]:
    """Basis of the integer kernel {x : A x = 0} by unimodular column operations.

    Pivot choice is deterministic (smallest absolute value, then lowest
    column), so the output is reproducible.
    """
    rows = len(A)
    m = len(A[0]) if A else 0
    # columns of the stacked matrix [A; I]
    cols = [[A[i][j] for i in range(rows)] + [1 if k == j else 0 for k in range(m)] for j in range(m)]
    piv = 0
    for i in range(rows):
        while True:
            live = [j for j in range(piv, m) if cols[j][i] != 0]
            if not live:
                break
            best = min(live, key=lambda j: (abs(cols[j][i]), j))
            cols[piv], cols[best] = cols[best], cols[piv]
            if len(live) == 1:
                piv += 1
                break
            p = cols[piv][i]
            for j in range(piv + 1, m):
                if cols[j][i]:
                    q = cols[j][i] // p
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[piv])]
        if piv == m:
            break
    return [c[rows:] for c in cols[piv:]]


def hermite_normal_form(gens: Sequence[Sequence[int]]) -> list[Vec]:
    """Row-style Hermite normal form of the lattice spanned by ``gens``.

    Returns nonzero rows with positive pivots moving strictly right and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    rows = [list(g) for g in gens if any(g)]
    if not rows:
        return []
    m = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < m:
        while True:
            live = [r for r in rows if r[col] != 0]
            if not live:
                break
            best = min(live, key=lambda r: (abs(r[col]), lex_key(r)))
            others = []
            for r in rows:
                if r is best:
                    continue
                if r[col]:
                    q = r[col] // best[col]
                    r = [x - q * y for x, y in zip(r, best)]
                if any(r):
                    others.append(r)
            if all(r[col] == 0 for r in others):
                if best[col] < 0:
                    best = [-x for x in best]
                out.append(best)
                rows = others
                break
            rows = others + [best]
        col += 1
    for k, row in enumerate(out):
        p = next(j for j, x in enumerate(row) if x)
        for prev in range(k):
            q = out[prev][p] // row[p]
            if q:
                out[prev] = [x - q * y for x, y in zip(out[prev], row)]
    return [tuple(r) for r in out]


# ------------------------------------------------------------ the lattice


class Lattice:
    """Z^n together with the twisting data of the quantum torus."""

    def __init__(self, config: ScalarConfig):
        self.config = config
        self.n = config.n
        self.ring = config.ring
        self.sigma = lru_cache(maxsize=None)(self._sigma)
        self.f_map = lru_cache(maxsize=None)(self._f_map)
        self.in_radical = lru_cache(maxsize=None)(self._in_radical)

    def __repr__(self):
        return f"Lattice({self.config})"

    # exponent bookkeeping --------------------------------------------------

    def _check(self, a):
        if len(a) != self.n:
            raise ValueError(f"expected a vector of length {self.n}, got {tuple(a)}")

    def _sigma(self, a: Vec, b: Vec):
        """prod_{i<j} q_ji^(a_j b_i)."""
        self._check(a)
        self._check(b)
        cfg = self.config
        n = self.n
        if cfg.backend is Backend.RATIONAL:
            return self.ring.one
        if cfg.backend is Backend.CYCLOTOMIC:
            M = cfg.M
            k = sum(M[j][i] * a[j] * b[i] for i in range(n) for j in range(i + 1, n))
            return self.ring.root_of_unity(k)
        return self.ring.monomial({(j + 1, i + 1): a[j] * b[i] for i in range(n) for j in range(i + 1, n)})

    def _f_map(self, a: Vec, b: Vec):
        """prod_{i != j} q_ij^(a_i b_j)."""
        self._check(a)
        self._check(b)
        cfg = self.config
        n = self.n
        if cfg.backend is Backend.RATIONAL:
            return self.ring.one
        if cfg.backend is Backend.CYCLOTOMIC:
            M = cfg.M
            k = sum(M[i][j] * a[i] * b[j] for i in range(n) for j in range(n) if i != j)
            return self.ring.root_of_unity(k)
        return self.ring.monomial({(i + 1, j + 1): a[i] * b[j] for i in range(n) for j in range(n) if i != j})

    # radicals ----------------------------------------------------------------

    def _rank(self, r):
        if r is None:
            return self.n
        if not 1 <= r <= self.n:
            raise RankOutOfRange(f"rank {r} outside 1..{self.n}")
        return r

    def radical_basis(self, r: int | None = None) -> list[Vec]:
        """Lattice basis (Hermite normal form) of R_r, padded to length n."""
        r = self._rank(r)
        pad = (0,) * (self.n - r)
        cfg = self.config
        if cfg.backend is Backend.GENERIC:
            return [(1,) + (0,) * (self.n - 1)] if r == 1 else []
        if cfg.backend is Backend.RATIONAL:
            return [tuple(1 if i == k else 0 for i in range(r)) + pad for k in range(r)]
        N = cfg.N
        # x in R_r  iff  S^T x = 0 mod N, with S the top-left r x r block of M
        St = [[cfg.M[j][i] for j in range(r)] for i in range(r)]
        A = [St[i] + [N if k == i else 0 for k in range(r)] for i in range(r)]
        kernel = _column_echelon_kernel(A)
        gens = [vec[:r] for vec in kernel]
        return [v + pad for v in hermite_normal_form(gens)]

    def _in_radical(self, a: Vec, r: int | None = None) -> bool:
        r = self._rank(r)
        self._check(a)
        if any(a[r:]):
            raise SupportViolation(f"{a} is not supported on the first {r} coordinates")
        cfg = self.config
        if cfg.backend is Backend.RATIONAL:
            return True
        if cfg.backend is Backend.GENERIC:
            return r == 1 or not any(a)
        M, N = cfg.M, cfg.N
        return all(sum(M[i][j] * a[i] for i in range(r)) % N == 0 for j in range(r))

    def in_union_radical(self, a: Vec) -> bool:
        """Membership in the union of R_1, ..., R_n (decided at the smallest admissible r)."""
        r = last_nonzero(a)
        return self.in_radical(tuple(a), max(r, 1))

    def lemma2_witness(self, b: Vec, bounds: Sequence[int], budget: int = 100_000) -> Vec:
        """Smallest c = (-N_1, ..., -N_{r-1}, 1, 0, ...) with N_i > bounds_i and f(c, b) != 1.

        Candidates are scanned by increasing sum of the N_i, then
        lexicographically.  ``r`` is ``len(bounds) + 1``.
        """
        r = len(bounds) + 1
        r = self._rank(r)
        b = tuple(b)
        if self.in_radical(b, r):
            raise InRadical(f"{b} lies in R_{r}")
        lows = [k + 1 for k in bounds]
        tried = 0
        total = sum(lows)
        while True:
            for extra in _compositions(total - sum(lows), r - 1):
                Ns = [lo + e for lo, e in zip(lows, extra)]
                c = tuple(-x for x in Ns) + (1,) + (0,) * (self.n - r)
                tried += 1
                if self.f_map(c, b) != 1:
                    return c
                if tried >= budget:
                    raise SearchBudgetExceeded(f"no witness among {tried} candidates (sum N_i <= {total})")
            total += 1
            if r == 1:
                raise SearchBudgetExceeded("rank-1 search space is a single candidate")


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` parts, in lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def in_lambda_lattice(lambda_c: Sequence, rvec: Sequence[int]) -> bool:
    """True iff ``rvec != 0`` and sum r_i lambda(c_i) == 0."""
    if len(lambda_c) != len(rvec):
        raise ValueError("lambda and rvec have different lengths")
    if not any(rvec):
        return False
    total = 0
    for r, lam in zip(rvec, lambda_c):
        if r:
            total = lam * r + total
    return total == 0
