"""Exact linear algebra over the rationals.

All routines use :class:`fractions.Fraction` and leftmost-nonzero pivoting,
so every basis and particular solution is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


def q(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are refused; they would silently corrupt exact data.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class QMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        if data:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entries do not form a {rows}x{cols} matrix")
            body = tuple(tuple(q(x) for x in r) for r in data)
        else:
            body = tuple((Fraction(0),) * cols for _ in range(rows))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", body)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "QMatrix":
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        columns = list(columns)
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols_other = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            out.append([sum((a * b for a, b in zip(r, c) if a and b), Fraction(0))
                        for c in cols_other])
        return QMatrix(self.rows, other.cols, out)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return QMatrix(self.rows, self.cols,
                       [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "QMatrix":
        c = q(c)
        return QMatrix(self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum((a * q(b) for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self.data]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else [])

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def first_nonzero(self):
        """(row, col, value) of the first nonzero entry in row-major order, or None."""
        for i, r in enumerate(self.data):
            for j, a in enumerate(r):
                if a:
                    return i, j, a
        return None

    def to_lists(self):
        return [list(r) for r in self.data]

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]


def _as_rows(M) -> list:
    if isinstance(M, QMatrix):
        return [list(r) for r in M.data], M.cols
    rows = [[q(x) for x in r] for r in M]
    return rows, (len(rows[0]) if rows else 0)


def rref(M):
    """Reduced row echelon form with leftmost-nonzero pivots.

    Returns ``(rows, pivot_columns)``; ``rows`` holds only the nonzero rows.
    """
    rows, ncols = _as_rows(M)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        piv = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], piv)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M) -> int:
    return len(rref(M)[1])


def kernel_basis(M) -> list:
    """Basis of the null space, one vector per free column (leftmost pivots)."""
    rows, ncols = _as_rows(M)
    red, pivots = rref(rows) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve_affine(M, b: Sequence) -> Optional[list]:
    """One solution of ``M x = b`` (free variables set to zero), or None."""
    rows, ncols = _as_rows(M)
    if len(b) != len(rows):
        raise ValueError("right-hand side length does not match row count")
    aug = [r + [q(bi)] for r, bi in zip(rows, b)]
    red, pivots = rref(QMatrix(len(aug), ncols + 1, aug) if aug else QMatrix(0, ncols + 1))
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def row_space_basis(vectors: Iterable[Sequence], length: int) -> list:
    """Canonical (RREF) basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    return rref(QMatrix(len(vecs), length, vecs))[0]


def span_rank(vectors: Iterable[Sequence], length: int) -> int:
    vecs = [list(v) for v in vectors]
    return rank(QMatrix(len(vecs), length, vecs)) if vecs else 0


def in_span(vectors: Sequence[Sequence], target: Sequence, length: int) -> Optional[list]:
    """Coefficients expressing ``target`` in terms of ``vectors``, or None."""
    if not vectors:
        return [] if all(q(t) == 0 for t in target) else None
    return solve_affine(QMatrix.from_columns(vectors, length), list(target))


def inverse(M: QMatrix) -> Optional[QMatrix]:
    if M.rows != M.cols:
        raise ValueError("only square matrices are invertible")
    n = M.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.data)]
    red, pivots = rref(QMatrix(n, 2 * n, aug) if n else QMatrix(0, 0))
    if pivots[:n] != list(range(n)):
        return None
    return QMatrix(n, n, [r[n:] for r in red])


def complement_basis(sub: Sequence[Sequence], whole: Sequence[Sequence], length: int) -> list:
    """Vectors of ``whole`` extending a basis of span(sub) to span(sub + whole).

    Greedy in the given order, so the choice is deterministic.
    """
    chosen = []
    current = span_rank(sub, length)
    acc = [list(v) for v in sub]
    for w in whole:
        trial = span_rank(acc + [list(w)], length)
        if trial > current:
            acc.append(list(w))
            chosen.append(list(w))
            current = trial
    return chosen
