"""Exact sparse Gauss-Jordan elimination over the rationals.

Rows are scaled to primitive integer vectors and combined fraction-free
(``row <- p*row - c*pivot_row`` followed by division by the content).  Pivots
are chosen by the Markowitz cost (r-1)(c-1) with ties broken by
(row index, column index), so the result depends only on the input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = ["Echelon", "eliminate", "primitive_row"]


def primitive_row(row: Mapping[int, Fraction | int]) -> dict[int, int]:
    """Scale a rational row to coprime integers with positive leading entry."""
    items = [(c, Fraction(v)) for c, v in row.items() if v != 0]
    if not items:
        return {}
    den = 1
    for _, v in items:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in items}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {c: v // g for c, v in ints.items()}


def _combine(row: dict[int, int], piv: dict[int, int], col: int) -> dict[int, int]:
    p = piv[col]
    c = row[col]
    g = math.gcd(p, c)
    a, b = p // g, c // g
    out = {k: a * v for k, v in row.items()}
    for k, v in piv.items():
        w = out.get(k, 0) - b * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    out.pop(col, None)
    return primitive_row(out) if out else {}


@dataclass
class Echelon:
    """Reduced row echelon form: ``rows[c]`` has pivot column ``c``."""

    ncols: int
    rows: dict[int, dict[int, int]]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.rows]

    def solve_pivot(self, col: int) -> dict[int, Fraction]:
        """Pivot column ``col`` as a combination of free columns."""
        row = self.rows[col]
        p = row[col]
        return {c: Fraction(-v, p) for c, v in row.items() if c != col}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Normal form of a vector modulo the row space (free columns only)."""
        out: dict[int, Fraction] = {}
        for c, v in vec.items():
            if v == 0:
                continue
            if c in self.rows:
                for c2, w in self.solve_pivot(c).items():
                    out[c2] = out.get(c2, Fraction(0)) + v * w
            else:
                out[c] = out.get(c, Fraction(0)) + Fraction(v)
        return {c: v for c, v in out.items() if v != 0}


def eliminate(rows: Iterable[Mapping[int, Fraction | int]], ncols: int) -> Echelon:
    """Gauss-Jordan elimination with Markowitz pivoting."""
    active: dict[int, dict[int, int]] = {}
    for i, r in enumerate(rows):
        pr = primitive_row(r)
        if pr:
            if max(pr) >= ncols or min(pr) < 0:
                raise IndexError("row refers to a column outside the matrix")
            active[i] = pr
    col_rows: dict[int, set[int]] = {}
    for i, r in active.items():
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    done: dict[int, tuple[int, dict[int, int]]] = {}  # col -> (row id, row)
    done_cols: dict[int, set[int]] = {}  # col -> pivot columns whose rows contain it

    while active:
        best = None
        for i in sorted(active):
            r = active[i]
            rl = len(r) - 1
            for c in sorted(r):
                cost = rl * (len(col_rows[c]) - 1)
                cand = (cost, i, c)
                if best is None or cand < best:
                    best = cand
                    if cost == 0:
                        break
            if best is not None and best[0] == 0:
                break
        _, i, c = best
        piv = active.pop(i)
        for k in piv:
            col_rows[k].discard(i)
        for j in sorted(col_rows.get(c, ())):
            old = active[j]
            new = _combine(old, piv, c)
            for k in old:
                col_rows[k].discard(j)
            if new:
                active[j] = new
                for k in new:
                    col_rows.setdefault(k, set()).add(j)
            else:
                del active[j]
        for pc in sorted(done_cols.get(c, ())):
            rid, prow = done[pc]
            if c not in prow:
                continue
            new = _combine(prow, piv, c)
            for k in prow:
                if k != pc:
                    done_cols.get(k, set()).discard(pc)
            done[pc] = (rid, new)
            for k in new:
                if k != pc:
                    done_cols.setdefault(k, set()).add(pc)
        done[c] = (i, piv)
        for k in piv:
            if k != c:
                done_cols.setdefault(k, set()).add(c)
    return Echelon(ncols, {c: r for c, (_, r) in done.items()})
