"""Exact rational scalars, vectors and dense matrices.

Rationals are :class:`fractions.Fraction` values, which are always stored in
lowest terms with a positive denominator.  Vectors are plain tuples of
fractions; matrices are immutable :class:`QMatrix` objects.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import permutations
from math import lcm, prod
from typing import Iterable, Sequence

from .errors import InputError, NonSquare, SingularMatrix

Rational = Fraction
QVector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"-7/15"`` or ``"3"``.  Zero denominators are rejected."""
    if not isinstance(text, str):
        raise InputError(f"expected a rational string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise InputError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def qvec(*xs) -> tuple:
    """Build a vector of fractions from ints, fractions or rational strings."""
    if len(xs) == 1 and not isinstance(xs[0], (int, Fraction, str)):
        xs = tuple(xs[0])
    return tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in xs)


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(t, v: Sequence[Fraction]) -> tuple:
    return tuple(t * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


class QMatrix:
    """Immutable dense matrix of fractions stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(Fraction(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "QMatrix":
        return cls.from_rows(cols).transpose()

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.col(j) for j in range(other.cols)]
        return QMatrix(self.rows, other.cols,
                       [dot(self.row(i), c) for i in range(self.rows) for c in cols])

    def apply(self, v: Sequence[Fraction]) -> tuple:
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, [-x for x in self.entries])

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


def _as_matrix(m) -> QMatrix:
    return m if isinstance(m, QMatrix) else QMatrix.from_rows(m)


def solve_linear(m, rhs) -> QMatrix:
    """Solve ``m @ X = rhs`` exactly by Gauss-Jordan elimination.

    ``rhs`` may be a matrix with several columns.  Raises
    :class:`SingularMatrix` when ``m`` has rank below its size.
    """
    m, rhs = _as_matrix(m), _as_matrix(rhs)
    if not m.is_square:
        raise NonSquare(f"{m.rows}x{m.cols} system matrix")
    if rhs.rows != m.rows:
        raise ValueError("right-hand side has wrong row count")
    n, k = m.rows, rhs.cols
    aug = [list(m.row(i)) + list(rhs.row(i)) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"no pivot in column {col}")
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        prow = aug[col] = [x * inv for x in prow]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], prow)]
    return QMatrix(n, k, [aug[i][n + j] for i in range(n) for j in range(k)])


def solve_vector(m, b: Sequence) -> tuple:
    x = solve_linear(m, QMatrix(len(b), 1, b))
    return x.col(0)


def _integer_rows(m: QMatrix) -> tuple[list[list[int]], int]:
    """Scale each row to integers; return rows and the product of the scalings."""
    rows, scale = [], 1
    for i in range(m.rows):
        r = m.row(i)
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * den) for x in r])
        scale *= den
    return rows, scale


def bareiss_determinant(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (destroys ``rows``)."""
    n = len(rows)
    sign, prev = 1, 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if rows[r][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - a * rk[j]) // prev
        prev = pivot
    return sign * rows[n - 1][n - 1] if n else 1


def determinant(m) -> Fraction:
    """Exact determinant via row scaling to integers and Bareiss elimination."""
    m = _as_matrix(m)
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    rows, scale = _integer_rows(m)
    return Fraction(bareiss_determinant(rows), scale)


def cofactor_determinant(m) -> Fraction:
    """Determinant by Laplace expansion along the first row.

    Exponential cost; kept as an independent check for small matrices.
    """
    m = _as_matrix(m)
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    rows = m.to_rows()

    def expand(a: list[list[Fraction]]) -> Fraction:
        n = len(a)
        if n == 0:
            return Fraction(1)
        if n == 1:
            return a[0][0]
        total = Fraction(0)
        for j, x in enumerate(a[0]):
            if x:
                minor = [r[:j] + r[j + 1:] for r in a[1:]]
                total += (-1) ** j * x * expand(minor)
        return total

    return expand(rows)


def leibniz_determinant(m) -> Fraction:
    """Permutation-sum determinant; only usable for tiny matrices."""
    m = _as_matrix(m)
    n = m.rows
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * prod((m[i, perm[i]] for i in range(n)), start=Fraction(1))
    return total


def rank(m) -> int:
    """Exact rank over the rationals (row echelon form, first nonzero pivot)."""
    m = _as_matrix(m)
    a = m.to_rows()
    r = 0
    for col in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        for i in range(r + 1, m.rows):
            if a[i][col] != 0:
                f = a[i][col] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m.rows:
            break
    return r
