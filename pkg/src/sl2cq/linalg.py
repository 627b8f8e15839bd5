"""Sparse exact linear algebra over the scalar backends.

Vectors are plain dicts ``{column: Scalar}``.  :class:`Echelon` keeps an
incrementally maintained row echelon basis of the span of the vectors fed
to it.  Column priority is given by a sort key, which is how
"span intersected with a coordinate subspace" is computed: give the
unwanted columns the highest priority and read off the rows whose pivot
lies among the wanted ones.

Over a field (rationals, cyclotomic fields) pivots are normalised to 1.
Over the Laurent ring of the generic backend elimination is division-free
(rows are cross-multiplied), which is exact but lets coefficients grow.
"""

from __future__ import annotations

import heapq
from typing import Callable, Hashable, Iterable, Mapping

from .scalars import LaurentRing

Column = Hashable
Vector = dict


def is_field(ring) -> bool:
    return not isinstance(ring, LaurentRing)


def axpy(target: dict, coeff, source: Mapping) -> None:
    """``target += coeff * source`` in place, dropping zeros."""
    for k, c in source.items():
        v = target.get(k)
        v = c * coeff if v is None else v + c * coeff
        if v:
            target[k] = v
        else:
            target.pop(k, None)


def scale_vec(vec: Mapping, coeff) -> dict:
    if not coeff:
        return {}
    return {k: c * coeff for k, c in vec.items()}


class Echelon:
    """Incremental row echelon form of a growing set of sparse vectors.

    Rows are kept in echelon form only (every entry of a row lies at or
    after its pivot in column order); the reduced form is produced on
    demand by :meth:`basis`.  Skipping back-substitution on insertion keeps
    large pools cheap to grow.
    """

    def __init__(self, ring, order: Callable[[Column], object]):
        self.ring = ring
        self.order = order
        self.field = is_field(ring)
        self.rows: dict[Column, dict] = {}
        self._keys: dict = {}

    def __len__(self):
        return len(self.rows)

    def _key(self, col):
        k = self._keys.get(col)
        if k is None:
            k = self._keys[col] = self.order(col)
        return k

    def pivots(self) -> list:
        return sorted(self.rows, key=self._key)

    def reduce(self, vec: Mapping) -> dict:
        """Remainder of ``vec`` after eliminating every pivot column.

        Over a field the remainder is ``vec`` minus an element of the span,
        and it does not depend on how ``vec`` is written.  Over a domain it
        is a nonzero multiple of that, which is enough for membership and
        rank questions.
        """
        out = dict(vec)
        rows = self.rows
        key = self._key
        heap = [(key(c), c) for c in out if c in rows]
        heapq.heapify(heap)
        while heap:
            _, col = heapq.heappop(heap)
            coeff = out.get(col)
            if not coeff:
                continue
            row = rows[col]
            if self.field:
                axpy(out, -coeff, row)
            else:
                piv = row[col]
                out = {k: c * piv for k, c in out.items()}
                axpy(out, -coeff, row)
            for k in row:
                if k != col and k in rows and k in out:
                    heapq.heappush(heap, (key(k), k))
        return out

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping):
        """Insert ``vec``; returns ``(pivot, row)`` for a new row or ``None``."""
        rem = self.reduce(vec)
        if not rem:
            return None
        piv = min(rem, key=self._key)
        if self.field:
            inv = rem[piv].inverse()
            rem = {k: c * inv for k, c in rem.items()}
        self.rows[piv] = rem
        return piv, rem

    def extend(self, vecs: Iterable[Mapping]) -> int:
        return sum(1 for v in vecs if self.add(v) is not None)

    def reduced_rows(self) -> dict:
        """Reduced row echelon form: every pivot column is cleared in the other rows."""
        out: dict = {}
        # later pivots first, so each row only needs the already-reduced later rows
        for col in reversed(self.pivots()):
            row = dict(self.rows[col])
            hits = sorted((k for k in row if k != col and k in out), key=self._key)
            for k in hits:
                coeff = row.get(k)
                if not coeff:
                    continue
                other = out[k]
                if self.field:
                    axpy(row, -coeff, other)
                else:
                    p = other[k]
                    row = {j: c * p for j, c in row.items()}
                    axpy(row, -coeff, other)
            out[col] = row
        return out

    def basis(self, pivot_filter: Callable[[Column], bool] | None = None) -> list[dict]:
        """Reduced rows in pivot order, optionally only those whose pivot passes the filter."""
        red = self.reduced_rows()
        return [red[c] for c in self.pivots() if pivot_filter is None or pivot_filter(c)]


class _Tag(tuple):
    """Marker column used to track coefficients of the inputs in :func:`kernel`."""


def kernel(ring, images: list[Mapping], order: Callable[[Column], object]) -> list[dict]:
    """Basis of ``{c : sum_j c_j images[j] == 0}`` as dicts ``{j: c_j}``.

    Works by row reducing ``[image_j | e_j]`` with all image columns ahead
    of the tag columns: rows whose pivot is a tag column carry kernel vectors.
    """

    def full_order(col):
        if isinstance(col, _Tag):
            return (1, col[0])
        return (0, order(col))

    ech = Echelon(ring, full_order)
    for j, img in enumerate(images):
        v = dict(img)
        v[_Tag((j,))] = ring.one
        ech.add(v)
    return [{col[0]: c for col, c in row.items()} for row in ech.basis(lambda p: isinstance(p, _Tag))]


def rank(ring, vecs: Iterable[Mapping], order: Callable[[Column], object]) -> int:
    ech = Echelon(ring, order)
    return ech.extend(vecs)
