"""Dense linear algebra over a FieldCtx.

Prime fields go through a vectorised mod-p elimination on integer arrays;
extension fields fall back to row operations on FieldElement objects.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .ffield import FieldCtx, FieldElement


class SingularMatrixError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


class Matrix:
    """Row-major matrix of FieldElements sharing one context."""

    def __init__(self, ctx: FieldCtx, rows: Sequence[Sequence]):
        self.ctx = ctx
        self.rows = [[ctx(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(row) != self.ncols for row in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> Matrix:
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx: FieldCtx, r: int, c: int) -> Matrix:
        return cls(ctx, [[0] * c for _ in range(r)])

    @classmethod
    def vandermonde(cls, points: Sequence[FieldElement], nrows: int | None = None) -> Matrix:
        """V[w][t] = points[t]**w."""
        ctx = points[0].ctx
        nrows = len(points) if nrows is None else nrows
        rows = []
        cur = [ctx.one] * len(points)
        for _ in range(nrows):
            rows.append(cur)
            cur = [c * x for c, x in zip(cur, points)]
        return cls(ctx, rows)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other.rows))
            return Matrix(self.ctx, [[_dot(row, col, self.ctx) for col in cols] for row in self.rows])
        return [_dot(row, other, self.ctx) for row in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ctx == other.ctx and self.rows == other.rows

    def to_ints(self) -> np.ndarray:
        return np.array([[int(x) for x in row] for row in self.rows], dtype=object)


def _dot(a, b, ctx):
    acc = ctx.zero
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# elimination mod p on integer arrays


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); returns (R, pivot columns)."""
    dtype = np.int64 if p < 2**31 else object
    a = np.array(a, dtype=dtype) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if len(nzr):
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod_p(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref_mod_p(a, p)[1])


# ---------------------------------------------------------------------------
# elimination over FieldElements


def _rref_generic(rows: list[list[FieldElement]]):
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref(ctx: FieldCtx, rows):
    if ctx.m == 1:
        arr = np.array([[int(x) for x in row] for row in rows], dtype=object)
        red, pivots = rref_mod_p(arr, ctx.p)
        return [[ctx(int(x)) for x in row] for row in red], pivots
    return _rref_generic(rows)


def rank(a: Matrix) -> int:
    if a.nrows == 0 or a.ncols == 0:
        return 0
    return len(_rref(a.ctx, a.rows)[1])


def solve(a: Matrix, b: Sequence) -> list[FieldElement]:
    """Unique solution of A x = b for square or tall consistent systems."""
    ctx = a.ctx
    if a.nrows < a.ncols:
        raise ValueError("underdetermined system")
    if len(b) != a.nrows:
        raise ValueError("right-hand side has the wrong length")
    aug = [row + [ctx(y)] for row, y in zip(a.rows, b)]
    red, pivots = _rref(ctx, aug)
    if a.ncols in pivots:
        if a.nrows == a.ncols:
            raise SingularMatrixError("singular matrix")
        raise InconsistentSystemError("system has no solution")
    if len(pivots) < a.ncols:
        raise SingularMatrixError("singular matrix")
    return [red[i][-1] for i in range(a.ncols)]


def vandermonde_solve(points: Sequence[FieldElement], rhs: Sequence) -> list[FieldElement]:
    """Solve sum_t points[t]**w * x[t] = rhs[w] for w = 0..len(points)-1."""
    if len(points) != len(rhs):
        raise ValueError("points and rhs differ in length")
    if len(set(points)) != len(points):
        raise SingularMatrixError("repeated Vandermonde points")
    if not points:
        return []
    return solve(Matrix.vandermonde(points), rhs)


def inverse(a: Matrix) -> Matrix:
    """Inverse of a square matrix via one augmented elimination."""
    ctx = a.ctx
    n = a.nrows
    if a.ncols != n:
        raise ValueError("matrix is not square")
    aug = [row + [ctx.one if i == j else ctx.zero for j in range(n)] for i, row in enumerate(a.rows)]
    red, pivots = _rref(ctx, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("singular matrix")
    return Matrix(ctx, [row[n:] for row in red])
