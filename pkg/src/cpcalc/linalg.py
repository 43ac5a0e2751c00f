"""Incremental exact row reduction on sparse rows.

Rows are dicts ``column -> value``; the special column ``None`` holds the
constant term of an affine equation ``sum(value * column) + const = 0``.
"""
from __future__ import annotations

from typing import Callable, Hashable, Iterable

__all__ = ["Echelon", "AffineSolution"]


class Echelon:
    """Reduced row echelon form, grown one row at a time.

    ``priority(col)`` ranks columns: the highest-priority column present in a
    new row becomes its pivot.  Every stored row is kept fully reduced
    against every other pivot, so ``rows[p]`` expresses pivot ``p`` in terms
    of free columns only.
    """

    def __init__(self, priority: Callable[[Hashable], object] | None = None):
        self.priority = priority
        self.rows: dict = {}
        self.inconsistent = False
        self._uses: dict = {}  # free column -> set of pivots whose row mentions it

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        r = {k: v for k, v in row.items() if v}
        pivots = [p for p in r if p in self.rows]
        for p in pivots:
            c = r.pop(p, None)
            if not c:
                continue
            for k, v in self.rows[p].items():
                if k == p:
                    continue
                x = r.get(k, 0) - c * v
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
        return r

    def _pick(self, cols):
        if self.priority is None:
            return next(iter(cols))
        return max(cols, key=self.priority)

    def add(self, row: dict) -> bool:
        """Insert a row; return True when the rank grows."""
        r = self.reduce(row)
        cols = [k for k in r if k is not None]
        if not cols:
            if r.get(None):
                self.inconsistent = True
            return False
        p = self._pick(cols)
        inv = 1 / r[p]
        r = {k: (v * inv if k != p else 1 + 0 * v) for k, v in r.items()}
        r[p] = r[p] if r[p] == 1 else 1
        # eliminate p from rows that mention it
        for other in list(self._uses.get(p, ())):
            orow = self.rows[other]
            c = orow.pop(p, None)
            if not c:
                continue
            for k, v in r.items():
                if k == p:
                    continue
                x = orow.get(k, 0) - c * v
                if x:
                    if k not in orow:
                        self._uses.setdefault(k, set()).add(other)
                    orow[k] = x
                else:
                    if k in orow:
                        del orow[k]
                        if k is not None:
                            self._uses.get(k, set()).discard(other)
        self._uses.pop(p, None)
        self.rows[p] = r
        for k in r:
            if k != p and k is not None:
                self._uses.setdefault(k, set()).add(p)
        return True

    def extend(self, rows: Iterable[dict]) -> int:
        return sum(1 for r in rows if self.add(r))

    def value_of(self, col, assignment: dict | None = None):
        """Evaluate a column given values for free columns (default 0)."""
        assignment = assignment or {}
        if col not in self.rows:
            return assignment.get(col, 0)
        r = self.rows[col]
        total = 0
        for k, v in r.items():
            if k == col:
                continue
            if k is None:
                total = total - v
            else:
                total = total - v * assignment.get(k, 0)
        return total


class AffineSolution:
    """Solution set of ``Echelon`` restricted to a fixed list of unknowns."""

    def __init__(self, ech: Echelon, unknowns: list, one=1):
        self.unknowns = list(unknowns)
        self.inconsistent = ech.inconsistent
        self.free = [u for u in self.unknowns if u not in ech.rows]
        self.expr: dict = {}
        for u in self.unknowns:
            if u in ech.rows:
                row = ech.rows[u]
                self.expr[u] = {k: -v for k, v in row.items() if k != u}
            else:
                self.expr[u] = {u: one}

    @property
    def dim(self) -> int:
        return len(self.free)

    def particular(self) -> dict:
        return {u: e.get(None, 0) for u, e in self.expr.items()}

    def evaluate(self, params: dict) -> dict:
        out = {}
        for u, e in self.expr.items():
            total = 0
            for k, v in e.items():
                total = total + (v if k is None else v * params.get(k, 0))
            out[u] = total
        return out
