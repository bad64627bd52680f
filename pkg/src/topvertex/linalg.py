"""Exact determinants over commutative rings and fields.

Elements only need ``+``, ``-``, ``*`` and a zero test; ``det`` additionally
needs ``/`` (field elements such as QRat or Fraction).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Callable, Sequence

Matrix = Sequence[Sequence[Any]]


def _is_zero(x) -> bool:
    return x == 0 if not hasattr(x, "is_zero") else x.is_zero()


def _check_square(M: Matrix) -> int:
    n = len(M)
    for row in M:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def det(M: Matrix, one: Any = 1) -> Any:
    """Gaussian elimination with pivot-on-first-nonzero; det([]) = one."""
    n = _check_square(M)
    if n == 0:
        return one
    A = [list(row) for row in M]
    sign = 1
    result = None
    for c in range(n):
        pivot = next((r for r in range(c, n) if not _is_zero(A[r][c])), None)
        if pivot is None:
            return A[0][0] * 0
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            sign = -sign
        p = A[c][c]
        result = p if result is None else result * p
        inv = 1 / p
        for r in range(c + 1, n):
            if _is_zero(A[r][c]):
                continue
            factor = A[r][c] * inv
            row_r, row_c = A[r], A[c]
            for k in range(c + 1, n):
                if not _is_zero(row_c[k]):
                    row_r[k] = row_r[k] - factor * row_c[k]
    return result if sign == 1 else -result


def det_cofactor(M: Matrix, one: Any = 1) -> Any:
    """Division-free Laplace expansion along the first row, with memoized minors.

    Cost is O(n 2^n) ring multiplications; fine for the n <= 8 used here.
    """
    n = _check_square(M)
    if n == 0:
        return one
    zero = None

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> Any:
        # determinant of rows row..n-1 restricted to `cols` (sorted)
        if row == n:
            return one
        total = zero
        for pos, c in enumerate(sorted(cols)):
            entry = M[row][c]
            if _is_zero(entry):
                continue
            sub = minor(row + 1, cols - {c})
            term = entry * sub
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else one * 0

    return minor(0, frozenset(range(n)))


def solve(M: Matrix, b: Sequence[Any]) -> list:
    """Solve M x = b over a field by Gauss-Jordan elimination."""
    n = _check_square(M)
    A = [list(row) + [b[i]] for i, row in enumerate(M)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if not _is_zero(A[r][c])), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[pivot] = A[pivot], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and not _is_zero(A[r][c]):
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[i][n] for i in range(n)]


def matmap(M: Matrix, f: Callable[[Any], Any]) -> list[list[Any]]:
    return [[f(x) for x in row] for row in M]
