"""Exact sparse linear algebra over the rationals.

Coboundary operators are large and very sparse, so matrices are stored as
``{(row, col): Fraction}`` maps.  Elimination runs on integer rows (each row
is cleared of denominators first) and keeps every row primitive after each
update, which is the fraction-free scheme that controls coefficient growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .tensors import ShapeError, parse_scalar


class ContainmentError(ArithmeticError):
    """A boundary space is not contained in the cycle space (broken d^2 = 0)."""


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ShapeError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = parse_scalar(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ShapeError("ragged dense matrix")
            for j, v in enumerate(row):
                if v != 0:
                    entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ShapeError(f"column {j} has length {len(col)}, expected {rows}")
            for i, v in enumerate(col):
                if v != 0:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict]:
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ShapeError(f"vector length {len(vec)} != {self.cols} columns")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            x = vec[j]
            if x:
                out[i] += v * x
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        right = other.row_dicts()
        acc: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in right[k].items():
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return Matrix(self.rows, other.cols, acc)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ShapeError("row counts differ")
        entries = dict(self.entries)
        entries.update({(i, j + self.cols): v for (i, j), v in other.entries.items()})
        return Matrix(self.rows, self.cols + other.cols, entries)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ShapeError("column counts differ")
        entries = dict(self.entries)
        entries.update({(i + self.rows, j): v for (i, j), v in other.entries.items()})
        return Matrix(self.rows + other.rows, self.cols, entries)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def nnz(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple = ()

    def __post_init__(self):
        basis = tuple(tuple(parse_scalar(x) for x in v) for v in self.basis)
        for v in basis:
            if len(v) != self.ambient_dim:
                raise ShapeError(f"basis vector of length {len(v)} in ambient dim {self.ambient_dim}")
        object.__setattr__(self, "basis", basis)
        if basis and rank(Matrix.from_dense(basis, self.ambient_dim)) != len(basis):
            raise ValueError("subspace basis is linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence) -> bool:
        if all(x == 0 for x in vec):
            return True
        if not self.basis:
            return False
        m = Matrix.from_dense(list(self.basis) + [list(vec)], self.ambient_dim)
        return rank(m) == self.dim

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Subspace spanned by arbitrary (possibly dependent) vectors."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls(ambient_dim, ())
        pivots = _echelon(Matrix.from_dense(vectors, ambient_dim).row_dicts(), ambient_dim)
        basis = []
        for _, row in pivots:
            vec = [Fraction(0)] * ambient_dim
            for j, v in row.items():
                vec[j] = Fraction(v)
            basis.append(vec)
        return cls(ambient_dim, tuple(basis))


# -- elimination -------------------------------------------------------------


def _to_integer_row(row: dict) -> dict:
    if not row:
        return {}
    den = 1
    for v in row.values():
        q = Fraction(v).denominator
        den = den * q // math.gcd(den, q)
    out = {j: int(Fraction(v) * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _echelon(rows: list, ncols: int, stop_col: Optional[int] = None) -> list:
    """Fraction-free reduced echelon form.

    Returns ``[(pivot_col, int_row_dict)]``; every pivot column is zero in all
    other returned rows.  Pivot rows are chosen by fewest nonzeros.
    """
    work = [r for r in (_to_integer_row(r) for r in rows) if r]
    done: list = []
    for col in range(ncols if stop_col is None else stop_col):
        cands = [k for k, r in enumerate(work) if col in r]
        if not cands:
            continue
        k = min(cands, key=lambda k: len(work[k]))
        prow = work.pop(k)
        p = prow[col]
        for idx, r in enumerate(work):
            c = r.get(col)
            if c:
                work[idx] = _combine(r, p, prow, c)
        for idx, (pc, r) in enumerate(done):
            c = r.get(col)
            if c:
                done[idx] = (pc, _combine(r, p, prow, c))
        done.append((col, prow))
        work = [r for r in work if r]
    return done


def _combine(r: dict, p: int, prow: dict, c: int) -> dict:
    """Primitive part of p*r - c*prow, cancelling the pivot column."""
    g = math.gcd(p, c)
    a, b = p // g, c // g
    out = {j: a * v for j, v in r.items()}
    for j, v in prow.items():
        w = out.get(j, 0) - b * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return _primitive(out)


def rank(m: Matrix) -> int:
    return len(_echelon(m.row_dicts(), m.cols))


def kernel_basis(m: Matrix) -> Subspace:
    piv = _echelon(m.row_dicts(), m.cols)
    pivot_cols = {pc for pc, _ in piv}
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for pc, row in piv:
            c = row.get(f)
            if c:
                vec[pc] = Fraction(-c, row[pc])
        basis.append(vec)
    for v in basis:
        if any(x != 0 for x in m.apply(v)):
            raise ArithmeticError("kernel vector failed verification")
    return Subspace(m.cols, tuple(basis))


def solve(m: Matrix, b: Sequence) -> Optional[list[Fraction]]:
    """Some x with m x = b, or None when b is not in the image of m."""
    if len(b) != m.rows:
        raise ShapeError(f"right-hand side of length {len(b)} for {m.rows} rows")
    rows = m.row_dicts()
    for i, v in enumerate(b):
        v = parse_scalar(v)
        if v:
            rows[i][m.cols] = v
    piv = _echelon(rows, m.cols + 1)
    if any(pc == m.cols for pc, _ in piv):
        return None
    x = [Fraction(0)] * m.cols
    for pc, row in piv:
        x[pc] = Fraction(row.get(m.cols, 0), row[pc])
    if m.apply(x) != [parse_scalar(v) for v in b]:
        raise ArithmeticError("solution failed verification")
    return x


def quotient_dim(cycles: Subspace, boundaries: Subspace) -> int:
    if cycles.ambient_dim != boundaries.ambient_dim:
        raise ShapeError("cycles and boundaries live in different ambient spaces")
    if boundaries.basis:
        stacked = Matrix.from_dense(list(cycles.basis) + list(boundaries.basis), cycles.ambient_dim)
        if rank(stacked) != cycles.dim:
            raise ContainmentError("boundary space is not contained in the cycle space")
    return cycles.dim - boundaries.dim


def image_basis(m: Matrix) -> Subspace:
    return Subspace.span(m.rows, m.transpose().to_dense()) if m.cols else Subspace(m.rows, ())
