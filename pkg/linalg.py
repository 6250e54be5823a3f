"""Exact rational linear algebra.

Elimination is fraction-free: every row is scaled to a primitive integer
vector and rows are combined by cross-multiplication. Only the final reduced
echelon form is normalized back to ``Fraction`` entries, so results are
canonical and independent of the order in which rows were supplied.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]
Vector = Tuple[Fraction, ...]


def to_fraction(value: Union[Number, str]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact entry")


@dataclass(frozen=True)
class QMatrix:
    """Rational matrix with an explicit shape (either side may be zero)."""

    nrows: int
    ncols: int
    rows: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows or any(len(row) != self.ncols for row in self.rows):
            raise ValueError(f"rows do not match declared shape {self.nrows}x{self.ncols}")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Union[Number, str]]], ncols: Optional[int] = None) -> "QMatrix":
        converted = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not converted:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(converted[0])
        return QMatrix(len(converted), ncols, converted)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "QMatrix":
        zero = Fraction(0)
        return QMatrix(nrows, ncols, tuple((zero,) * ncols for _ in range(nrows)))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @staticmethod
    def from_columns(columns: Sequence[Sequence[Number]], nrows: int) -> "QMatrix":
        return QMatrix.from_rows(
            [[columns[j][i] for j in range(len(columns))] for i in range(nrows)],
            ncols=len(columns),
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        columns = [other.column(j) for j in range(other.ncols)]
        return QMatrix(
            self.nrows,
            other.ncols,
            tuple(
                tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in columns)
                for row in self.rows
            ),
        )

    def apply(self, vector: Sequence[Number]) -> Vector:
        if len(vector) != self.ncols:
            raise ValueError(f"vector of length {len(vector)} does not fit {self.nrows}x{self.ncols}")
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return QMatrix(
            self.nrows,
            self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "QMatrix":
        return self.scale(-1)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, factor: Number) -> "QMatrix":
        factor = to_fraction(factor)
        return QMatrix(self.nrows, self.ncols, tuple(tuple(factor * a for a in row) for row in self.rows))

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def flatten(self) -> Vector:
        return tuple(a for row in self.rows for a in row)

    def tolist(self) -> List[List[Fraction]]:
        return [list(row) for row in self.rows]

    def rank(self) -> int:
        return rank(self.rows, self.ncols)

    def __str__(self) -> str:
        if not self.nrows or not self.ncols:
            return f"[{self.nrows}x{self.ncols}]"
        return "[" + ", ".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.rows) + "]"


def block_diagonal(blocks: Sequence[QMatrix]) -> QMatrix:
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    rows: List[Vector] = []
    offset = 0
    zero = Fraction(0)
    for block in blocks:
        for row in block.rows:
            rows.append((zero,) * offset + row + (zero,) * (ncols - offset - block.ncols))
        offset += block.ncols
    return QMatrix(nrows, ncols, tuple(rows))


def _primitive(row: List[int]) -> List[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
    if g > 1:
        return [x // g for x in row]
    return row


def _integer_row(row: Sequence[Number]) -> List[int]:
    fractions = [to_fraction(x) for x in row]
    denominator = 1
    for x in fractions:
        denominator = lcm(denominator, x.denominator)
    return _primitive([int(x * denominator) for x in fractions])


def echelon_form(rows: Iterable[Sequence[Number]], ncols: int) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form of the row space, without zero rows, plus pivot columns."""
    work = [_integer_row(row) for row in rows if any(x != 0 for x in row)]
    for row in work:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)} in a system with {ncols} columns")
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        pivot = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead_row = work[r]
        lead = lead_row[c]
        for i in range(len(work)):
            factor = work[i][c]
            if i == r or factor == 0:
                continue
            work[i] = _primitive([lead * a - factor * b for a, b in zip(work[i], lead_row)])
        pivots.append(c)
        r += 1
    reduced = [tuple(Fraction(x, work[i][c]) for x in work[i]) for i, c in enumerate(pivots)]
    return reduced, pivots


def rank(rows: Iterable[Sequence[Number]], ncols: int) -> int:
    return len(echelon_form(rows, ncols)[1])


def nullspace(rows: Iterable[Sequence[Number]], ncols: int) -> List[Vector]:
    """Basis of {x : A x = 0}, returned as the reduced echelon form of the stacked solutions."""
    reduced, pivots = echelon_form(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in (c for c in range(ncols) if c not in pivot_set):
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for row, c in zip(reduced, pivots):
            vector[c] = -row[free]
        basis.append(vector)
    canonical, _ = echelon_form(basis, ncols)
    return canonical


def solve(rows: Sequence[Sequence[Number]], rhs: Sequence[Number], ncols: int) -> Optional[Vector]:
    """One solution of A x = b (free variables set to zero), or None if inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("right-hand side does not match the number of equations")
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = echelon_form(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    solution = [Fraction(0)] * ncols
    for row, c in zip(reduced, pivots):
        solution[c] = row[ncols]
    return tuple(solution)


def coordinates(basis: Sequence[Sequence[Number]], vector: Sequence[Number]) -> Optional[Vector]:
    """Coefficients expressing ``vector`` in the (independent) ``basis``, or None if outside the span."""
    if not basis:
        return () if all(x == 0 for x in vector) else None
    system = [[basis[k][i] for k in range(len(basis))] for i in range(len(vector))]
    return solve(system, vector, len(basis))


def complement_indices(rows: Iterable[Sequence[Number]], ncols: int) -> List[int]:
    """Standard basis positions completing the row space to the whole space."""
    _, pivots = echelon_form(rows, ncols)
    pivot_set = set(pivots)
    return [c for c in range(ncols) if c not in pivot_set]
