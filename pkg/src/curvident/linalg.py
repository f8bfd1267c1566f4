"""Exact linear algebra over the rationals.

Matrices are plain sequences of rows. Entries may be ``int`` or
``Fraction``; nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _gcd
from typing import Sequence

import numpy as np


def _as_rows(matrix) -> list[list]:
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2:
            raise ValueError("expected a 2-d matrix")
        return [[_exact(x) for x in row] for row in matrix.tolist()]
    return [[_exact(x) for x in row] for row in matrix]


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"non-exact entry {x!r} ({type(x).__name__})")


def _integerize(rows: list[list]) -> list[list[int]]:
    # scale each row by the lcm of its denominators; rank is unchanged
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def rank(matrix) -> int:
    """Exact rank, computed by fraction-free (Bareiss) elimination."""
    rows = _integerize(_as_rows(matrix))
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            f = row[c]
            if f == 0:
                if p != prev:
                    for j in range(c + 1, ncols):
                        row[j] = row[j] * p // prev
                continue
            for j in range(c + 1, ncols):
                row[j] = (row[j] * p - prow[j] * f) // prev
            row[c] = 0
        prev = p
        r += 1
        if r == len(rows):
            break
    return r


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    rows = [[Fraction(x) for x in row] for row in _as_rows(matrix)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right nullspace, one vector per free column.

    ``ncols`` is needed only when the matrix has no rows.
    """
    rows = _as_rows(matrix)
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(matrix, rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of ``matrix @ x = rhs`` (free variables zero), or None."""
    rows = _as_rows(matrix)
    if len(rows) != len(rhs):
        raise ValueError("row count mismatch")
    ncols = len(rows[0]) if rows else 0
    aug = [row + [_exact(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def solve_many(matrix, rhs_columns: Sequence[Sequence]) -> list[list[Fraction] | None]:
    """Like :func:`solve` for several right-hand sides sharing one elimination."""
    rows = _as_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    k = len(rhs_columns)
    aug = [row + [_exact(col[i]) for col in rhs_columns] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    sols: list[list[Fraction] | None] = []
    for j in range(k):
        # inconsistent iff some zero row of the coefficient part has a nonzero rhs
        bad = any(
            all(x == 0 for x in row[:ncols]) and row[ncols + j] != 0 for row in red
        )
        if bad:
            sols.append(None)
            continue
        x = [Fraction(0)] * ncols
        for row, pc in zip(red, pivots):
            if pc < ncols:
                x[pc] = row[ncols + j]
        sols.append(x)
    return sols


def common_denominator(values) -> int:
    den = 1
    for x in values:
        if isinstance(x, Fraction):
            den = den * x.denominator // _gcd(den, x.denominator)
    return den


def primitive_integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers (first nonzero entry positive)."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    return [-x for x in ints] if lead < 0 else ints


def gram_of_columns(matrix: np.ndarray) -> list[list[int]]:
    """Exact ``M^T M`` of an integer matrix.

    Over the reals rank(M^T M) == rank(M), so this shrinks a tall
    evaluation matrix to a square one before elimination. Rational rows
    are first scaled to integers, which changes the product but not its
    rank.
    """
    m = np.asarray(matrix)
    if m.dtype != object:
        bound = int(np.abs(m).max()) if m.size else 0
        if bound ** 2 * max(m.shape[0], 1) < 2 ** 62:
            g = m.astype(np.int64).T @ m.astype(np.int64)
            return [[int(x) for x in row] for row in g]
        m = m.astype(object)
    # exact Python-int path for large or rational entries
    rows = _integerize(_as_rows(m))
    m = np.array(rows, dtype=object).reshape(m.shape)
    g = m.T.dot(m)
    return [[int(x) for x in row] for row in g]
