"""Sparse linear algebra over F_p.

Rows are dicts ``{column: value}``. ``Echelon`` keeps every stored row with
its pivot as the smallest column, so reducing a new row only ever introduces
larger columns.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Mapping, Sequence

Row = dict[int, int]


class InconsistentSystem(ValueError):
    pass


class Echelon:
    def __init__(self, p: int, rhs_col: int | None = None):
        self.p = p
        self.rhs_col = rhs_col
        self.rows: dict[int, Row] = {}

    def reduce(self, row: Mapping[int, int]) -> Row:
        p = self.p
        r = {c: v % p for c, v in row.items() if v % p}
        heap = [c for c in r if c in self.rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            v = r.get(c)
            if not v:
                continue
            for cc, vv in self.rows[c].items():
                nv = (r.get(cc, 0) - v * vv) % p
                if nv:
                    if cc not in r and cc in self.rows:
                        heapq.heappush(heap, cc)
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        return r

    def add(self, row: Mapping[int, int]) -> bool:
        """Insert a row; returns True if it was independent of the stored ones."""
        r = self.reduce(row)
        if not r:
            return False
        piv = min(r)
        if piv == self.rhs_col:
            raise InconsistentSystem("linear system has no solution")
        inv = pow(r[piv], -1, self.p)
        if inv != 1:
            r = {c: v * inv % self.p for c, v in r.items()}
        self.rows[piv] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def back_substitute(self) -> dict[int, Row]:
        """Fully reduced rows: each pivot expressed in free columns (and rhs)."""
        p = self.p
        done: dict[int, Row] = {}
        for piv in sorted(self.rows, reverse=True):
            row = self.rows[piv]
            out: Row = {}
            for c, v in row.items():
                if c == piv:
                    continue
                if c in done:
                    for cc, vv in done[c].items():
                        nv = (out.get(cc, 0) - v * vv) % p
                        if nv:
                            out[cc] = nv
                        else:
                            out.pop(cc, None)
                else:
                    nv = (out.get(c, 0) + v) % p
                    if nv:
                        out[c] = nv
                    else:
                        out.pop(c, None)
            # out holds sum over non-pivot columns; pivot = -(out) with rhs moved over
            done[piv] = out
        return done


def solve_affine(rows: Iterable[Mapping[int, int]], ncols: int, p: int):
    """Solve ``A x = b`` where column ``ncols`` of each row holds ``b``.

    Returns ``(particular, kernel)``: ``particular`` maps column -> value and
    ``kernel`` is a list of sparse basis vectors of the homogeneous solutions.
    Raises InconsistentSystem when there is no solution.
    """
    ech = Echelon(p, rhs_col=ncols)
    for r in rows:
        ech.add(r)
    reduced = ech.back_substitute()
    particular: dict[int, int] = {}
    # row: x_piv + sum_free a_f x_f = b  ->  x_piv = b - sum a_f x_f
    free = [c for c in range(ncols) if c not in reduced]
    kernel_cols: dict[int, Row] = {f: {f: 1} for f in free}
    for piv, row in reduced.items():
        b = row.get(ncols, 0)
        if b:
            particular[piv] = b
        for c, v in row.items():
            if c == ncols:
                continue
            kernel_cols[c][piv] = (-v) % p
    return particular, [kernel_cols[f] for f in free]


def solve_dense(A: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """One solution of ``A x = b`` (A given as rows), or None if inconsistent."""
    ncols = len(A[0]) if A else 0
    rows = []
    for arow, bv in zip(A, b):
        r = {c: v for c, v in enumerate(arow) if v % p}
        if bv % p:
            r[ncols] = bv
        rows.append(r)
    try:
        particular, _ = solve_affine(rows, ncols, p)
    except InconsistentSystem:
        return None
    return [particular.get(c, 0) for c in range(ncols)]


def rank(rows: Iterable[Mapping[int, int]], p: int) -> int:
    ech = Echelon(p)
    for r in rows:
        ech.add(r)
    return ech.rank


def det_mod_p(M: Sequence[Sequence[int]], p: int) -> int:
    n = len(M)
    A = [[v % p for v in row] for row in M]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col] % p
        inv = pow(A[col][col], -1, p)
        for r in range(col + 1, n):
            if A[r][col]:
                t = A[r][col] * inv % p
                A[r] = [(a - t * b) % p for a, b in zip(A[r], A[col])]
    return det % p
