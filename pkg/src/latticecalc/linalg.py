"""Exact linear algebra over the rationals.

Rows are sparse ``{column: Fraction}`` maps.  Elimination always pivots on the
smallest column of a row, so ranks, reduced echelon forms and nullspace bases
are deterministic, and reduced forms are the canonical ones for the row space.
"""

from __future__ import annotations

from fractions import Fraction

Row = dict[int, Fraction]

_ZERO = Fraction(0)


class RowReducer:
    """Incremental echelon form; feed rows one at a time, query the rank anytime."""

    def __init__(self) -> None:
        self.pivot_rows: dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: Row) -> Row:
        """Remainder of ``row`` after elimination against the rows seen so far."""
        rem = {c: v for c, v in row.items() if v}
        while rem:
            col = min(rem)
            pivot = self.pivot_rows.get(col)
            if pivot is None:
                return rem
            factor = rem[col]
            for c, v in pivot.items():
                new = rem.get(c, _ZERO) - factor * v
                if new:
                    rem[c] = new
                else:
                    rem.pop(c, None)
        return rem

    def add(self, row: Row) -> bool:
        """Insert a row; True when it enlarged the span."""
        rem = self.reduce(row)
        if not rem:
            return False
        inv = rem[min(rem)]
        self.pivot_rows[min(rem)] = {c: v / inv for c, v in rem.items()}
        return True

    def rref_rows(self) -> list[Row]:
        """Back-eliminated pivot rows sorted by pivot column (canonical RREF)."""
        cols = sorted(self.pivot_rows)
        out = {c: dict(self.pivot_rows[c]) for c in cols}
        for i in reversed(range(len(cols))):
            row = out[cols[i]]
            for j in range(i + 1, len(cols)):
                factor = row.get(cols[j])
                if not factor:
                    continue
                for c, v in out[cols[j]].items():
                    new = row.get(c, _ZERO) - factor * v
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
        return [out[c] for c in cols]


def echelon(rows) -> RowReducer:
    reducer = RowReducer()
    for row in rows:
        reducer.add(row)
    return reducer


def rank(rows) -> int:
    return echelon(rows).rank


def dense(row: Row, ncols: int) -> tuple[Fraction, ...]:
    out = [_ZERO] * ncols
    for c, v in row.items():
        out[c] = v
    return tuple(out)


def rref_basis(rows, ncols: int) -> list[tuple[Fraction, ...]]:
    """Canonical (RREF) basis of the span of ``rows``, as dense vectors."""
    return [dense(r, ncols) for r in echelon(rows).rref_rows()]


def nullspace_of(reducer: RowReducer, ncols: int) -> list[tuple[Fraction, ...]]:
    """Canonical basis of the solution space of the rows held by ``reducer``."""
    rref = reducer.rref_rows()
    pivot_set = {min(r) for r in rref}
    vectors: list[Row] = []
    for free in (c for c in range(ncols) if c not in pivot_set):
        vec: Row = {free: Fraction(1)}
        for row in rref:
            coeff = row.get(free)
            if coeff:
                vec[min(row)] = -coeff
        vectors.append(vec)
    # normalize the basis itself so the output is unique for the solution space
    return rref_basis(vectors, ncols)


def nullspace(rows, ncols: int) -> list[tuple[Fraction, ...]]:
    return nullspace_of(echelon(rows), ncols)
