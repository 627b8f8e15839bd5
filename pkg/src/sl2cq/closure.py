"""Fixed-point closure of a graded subspace under a finite set of operators.

Used for the submodules of H(lambda) and M(lambda).  Each graded slot keeps
an :class:`~sl2cq.linalg.Echelon` in which columns outside the truncation box
take priority, so the rows whose pivot lies inside the box span exactly the
in-box part of everything generated so far.  Only those in-box vectors are
fed back to the operators, so the loop terminates once the finite-dimensional
in-box slots stop growing.  Every stored vector lies in the true submodule;
completeness inside the box depends on the truncation.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Callable, Hashable, Iterable, Mapping

from .linalg import Echelon

log = logging.getLogger(__name__)


class ClosureBudgetExceeded(RuntimeError):
    pass


class GradedClosure:
    """Closure of a span under operators, truncated to a box of monomials.

    ``slot_of(monomial)`` gives the grading slot, ``in_box(monomial)`` decides
    truncation and ``slot_ok(slot)`` drops whole slots outside the box.
    ``sort_key(monomial)`` fixes a deterministic column order.

    Two optional hooks prune work without changing the result:
    ``target_slot(op, slot)`` predicts where an operator sends a slot and
    ``capacity(slot)`` counts the in-box monomials of a slot.  An operator
    is not applied when its target slot is rejected, has no in-box
    monomials, or is already spanned in full.
    """

    def __init__(self, ring, slot_of: Callable, in_box: Callable[[Hashable], bool],
                 slot_ok: Callable[[Hashable], bool], sort_key: Callable,
                 max_vectors: int | None = None, target_slot: Callable | None = None,
                 capacity: Callable[[Hashable], int] | None = None):
        self.ring = ring
        self.slot_of = slot_of
        self.in_box = in_box
        self.slot_ok = slot_ok
        self.sort_key = sort_key
        self.max_vectors = max_vectors
        self.target_slot = target_slot
        self.capacity = capacity
        self._capacity: dict = {}
        self._in_box_dims: dict = {}
        self.pools: dict[Hashable, Echelon] = {}
        self._queue: deque = deque()
        self.applications = 0
        self.in_box_count = 0

    def _order(self, mono):
        return (1 if self.in_box(mono) else 0, self.sort_key(mono))

    def pool(self, slot) -> Echelon:
        ech = self.pools.get(slot)
        if ech is None:
            ech = self.pools[slot] = Echelon(self.ring, self._order)
        return ech

    def _split(self, vec: Mapping) -> dict:
        parts: dict = {}
        for mono, c in vec.items():
            parts.setdefault(self.slot_of(mono), {})[mono] = c
        return parts

    def add(self, vec: Mapping) -> int:
        """Add a vector (split into homogeneous parts); returns the number of new in-box rows."""
        new = 0
        for slot, part in self._split(vec).items():
            if not self.slot_ok(slot):
                continue
            if self._full(slot):
                continue
            hit = self.pool(slot).add(part)
            if hit is not None and self.in_box(hit[0]):
                self._queue.append((slot, dict(hit[1])))
                self.in_box_count += 1
                self._in_box_dims[slot] = self._in_box_dims.get(slot, 0) + 1
                new += 1
        return new

    def _full(self, slot) -> bool:
        if self.capacity is None:
            return False
        cap = self._capacity.get(slot)
        if cap is None:
            cap = self._capacity[slot] = self.capacity(slot)
        return self._in_box_dims.get(slot, 0) >= cap

    def run(self, operators: Iterable, act: Callable[[object, Mapping], Mapping],
            stop: Callable[[], bool] | None = None) -> bool:
        """Iterate to the fixed point; returns False if ``stop()`` ended the loop early."""
        operators = list(operators)
        while self._queue:
            if stop is not None and stop():
                return False
            slot, v = self._queue.popleft()
            for op in operators:
                if self.target_slot is not None:
                    target = self.target_slot(op, slot)
                    if not self.slot_ok(target) or self._full(target):
                        continue
                self.applications += 1
                w = act(op, v)
                if w:
                    self.add(w)
            if self.max_vectors is not None and self.in_box_count > self.max_vectors:
                raise ClosureBudgetExceeded(f"more than {self.max_vectors} in-box vectors")
        log.debug("closure done: %d slots, %d applications", len(self.pools), self.applications)
        return True

    def in_box_basis(self, slot) -> list[dict]:
        ech = self.pools.get(slot)
        if ech is None:
            return []
        return ech.basis(self.in_box)

    def in_box_dim(self, slot) -> int:
        return self._in_box_dims.get(slot, 0)

    def total_in_box(self) -> int:
        return sum(self.in_box_dim(s) for s in self.pools)

    def slots(self) -> list:
        return list(self.pools)
