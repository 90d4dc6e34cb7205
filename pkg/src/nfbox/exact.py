"""Exact arithmetic substrate: big-integer matrices, Hermite normal form,
fraction-free determinants, rational linear solving, and dense integer
polynomials with resultants and discriminants.

Matrices are stored as tuples of row tuples and treated as immutable.
Column conventions: a lattice is the set of integer combinations of the
*columns* of its matrix.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "IntMatrix",
    "IntPolynomial",
    "hnf",
    "bareiss_det",
    "solve_integral",
    "rational_solve",
    "rational_matrix_det",
    "rational_matrix_inverse",
    "integer_rank",
    "resultant",
    "discriminant",
]


class IntMatrix:
    """Immutable rectangular matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]]) -> "IntMatrix":
        if not cols:
            return IntMatrix([])
        n = len(cols[0])
        return IntMatrix([[c[i] for c in cols] for i in range(n)])

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.cols)])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().entries
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries]
        )

    def mul_vector(self, v: Sequence[int]) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"IntMatrix({list(map(list, self.entries))!r})"


def hnf(m: IntMatrix):
    """Column-style Hermite normal form of the lattice spanned by m's columns.

    Returns (H, rank, det_abs): H keeps only the pivot columns (lower
    "staircase" shape, positive pivots, entries left of a pivot reduced into
    [0, pivot)); det_abs is |det m| when m is square nonsingular, else None.
    Entries are kept small by reducing against the pivot as soon as it is
    found.
    """
    cols = [list(c) for c in m.columns()]
    nrows = m.rows
    out = []
    row = 0
    while row < nrows and cols:
        # gcd-eliminate row `row` across all remaining columns
        while True:
            nz = [j for j, c in enumerate(cols) if c[row] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(cols[j][row]))
            j0 = nz[0]
            for j in nz[1:]:
                q = cols[j][row] // cols[j0][row]
                if q:
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[j0])]
        nz = [j for j, c in enumerate(cols) if c[row] != 0]
        if nz:
            j0 = nz[0]
            piv = cols.pop(j0)
            if piv[row] < 0:
                piv = [-a for a in piv]
            # reduce previously found pivot columns against this one
            for prev in out:
                q = prev[row] // piv[row]
                if q:
                    prev[:] = [a - q * b for a, b in zip(prev, piv)]
            out.append(piv)
        row += 1
    h = IntMatrix.from_columns(out)
    rank = len(out)
    det_abs: Optional[int] = None
    if m.rows == m.cols == rank:
        det_abs = 1
        for c in out:
            det_abs *= c[_pivot_row(c)]
    return h, rank, det_abs


def _pivot_row(col) -> int:
    for i, a in enumerate(col):
        if a != 0:
            return i
    raise ValueError("zero column")


def bareiss_det(m: IntMatrix) -> int:
    """Fraction-free Gaussian elimination determinant (exact)."""
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_solve(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]):
    """Solve the square system m x = v over Q; None if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def solve_integral(m: IntMatrix, v: Sequence[int]):
    """Solve m x = v in integers; None when v is not in the column lattice."""
    if m.rows != m.cols:
        raise ValueError("matrix must be square")
    if bareiss_det(m) == 0:
        raise ValueError("matrix must be nonsingular")
    sol = rational_solve(
        [[Fraction(x) for x in row] for row in m.entries], [Fraction(x) for x in v]
    )
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def rational_matrix_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def rational_matrix_inverse(m: Sequence[Sequence[Fraction]]):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer vectors (exact row reduction)."""
    rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is not None:
            rows[rank], rows[piv] = rows[piv], rows[rank]
            pv = rows[rank][col]
            rows[rank] = [x / pv for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
            rank += 1
            if rank == len(rows):
                break
        col += 1
    return rank


class IntPolynomial:
    """Dense univariate polynomial over Z, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def is_monic(self) -> bool:
        return self.lead == 1

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> "IntPolynomial":
        if self.degree <= 0:
            return IntPolynomial([0])
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def mul(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial([0])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def add(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    def scale(self, c: int) -> "IntPolynomial":
        return IntPolynomial([c * a for a in self.coeffs])

    def eval_int(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def eval_fraction(self, x: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def shift_argument(self, c: int) -> "IntPolynomial":
        """Coefficients of p(x + c), by repeated synthetic division by (x - c)."""
        coeffs = list(self.coeffs)
        out = []
        while coeffs:
            acc = 0
            descending = []
            for a in reversed(coeffs):
                acc = acc * c + a
                descending.append(acc)
            out.append(descending[-1])
            coeffs = list(reversed(descending[:-1]))
        return IntPolynomial(out if out else [0])

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Resultant via Bareiss determinant of the Sylvester matrix."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return bareiss_det(IntMatrix(rows))


def discriminant(f: IntPolynomial) -> int:
    """disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f)."""
    if f.is_zero():
        raise ValueError("discriminant of the zero polynomial")
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant(f, f.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f.lead)
    if rem:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return q
