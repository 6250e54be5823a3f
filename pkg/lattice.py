"""Integer lattices: Hermite normal forms, saturated kernels and determinants."""

from typing import List, Sequence, Tuple

import sympy

IntVector = Tuple[int, ...]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """Row-style HNF of the lattice spanned by ``rows``.

    Nonzero rows only; pivots strictly move right and are positive, entries
    above a pivot lie in [0, pivot). The result depends only on the lattice.
    """
    work = [[int(x) for x in row] for row in rows]
    for row in work:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)} in a lattice of rank {ncols}")
    work = [row for row in work if any(row)]
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        for i in range(r + 1, len(work)):
            if work[i][c] == 0:
                continue
            if work[r][c] == 0:
                work[r], work[i] = work[i], work[r]
                continue
            a, b = work[r][c], work[i][c]
            g, x, y = xgcd(a, b)
            upper = [x * p + y * q for p, q in zip(work[r], work[i])]
            lower = [(-b // g) * p + (a // g) * q for p, q in zip(work[r], work[i])]
            work[r], work[i] = upper, lower
        if work[r][c] == 0:
            continue
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        pivot = work[r][c]
        for i in range(r):
            q = work[i][c] // pivot
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        r += 1
    return [tuple(row) for row in work[:r]]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """HNF basis of {v in Z^n : A v = 0}.

    Row-reduces [A^T | I] by unimodular operations; the identity part of the
    rows whose A^T part vanishes spans the kernel, saturated by construction.
    """
    conditions = [[int(x) for x in row] for row in rows]
    m = len(conditions)
    augmented = [
        [conditions[k][i] for k in range(m)] + [int(i == j) for j in range(ncols)]
        for i in range(ncols)
    ]
    reduced = hermite_normal_form(augmented, m + ncols)
    kernel = [row[m:] for row in reduced if not any(row[:m])]
    return hermite_normal_form(kernel, ncols)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix; the empty matrix has determinant 1."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    return int(sympy.Matrix([[int(x) for x in row] for row in rows]).det(method="bareiss"))


def is_unimodular(rows: Sequence[Sequence[int]]) -> bool:
    return len(rows) > 0 and abs(determinant(rows)) == 1
