"""Exact rational linear algebra: rank, solving, determinants.

Matrices are lists of rows of rationals.  Pivot selection is deterministic:
columns are scanned in declared order and the first remaining row with a
nonzero entry becomes the pivot row, so reported pivots are reproducible
across runs and platforms.
"""

from __future__ import annotations

from .errors import DomainError, IntegrityError
from .rational import ONE, ZERO, mpq


def exact_rank(matrix):
    """(rank, pivot_columns, pivot_rows) by exact Gaussian elimination.

    Pivot columns are 0-based indices in scan order; pivot_rows[i] is the
    original row index that provided the pivot for pivot_columns[i].
    """
    m = [[mpq(x) for x in row] for row in matrix]
    if not m:
        return 0, [], []
    ncols = len(m[0])
    if any(len(row) != ncols for row in m):
        raise DomainError("ragged matrix", code="ragged-matrix")
    row_ids = list(range(len(m)))
    pivot_cols = []
    pivot_rows = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        row_ids[r], row_ids[pivot] = row_ids[pivot], row_ids[r]
        pivot_cols.append(col)
        pivot_rows.append(row_ids[r])
        inv = 1 / m[r][col]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            if f:
                f = f * inv
                ri, rr = m[i], m[r]
                for j in range(col, ncols):
                    ri[j] = ri[j] - f * rr[j]
        r += 1
        if r == len(m):
            break
    return r, pivot_cols, pivot_rows


def exact_det(matrix):
    """Exact determinant of a square rational matrix."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DomainError("determinant needs a square matrix", code="not-square")
    m = [[mpq(x) for x in row] for row in matrix]
    det = ONE
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            f = m[i][col]
            if f:
                f = f * inv
                for j in range(col, n):
                    m[i][j] = m[i][j] - f * m[col][j]
    return det


def solve_square(matrix, rhs):
    """Solve A x = b exactly for square invertible A; IntegrityError if singular.

    rhs entries may be any ring elements supporting +, -, and scaling by
    rationals (rationals themselves, or jets), so the same elimination solves
    numeric systems and jet-valued ones.
    """
    n = len(matrix)
    m = [[mpq(x) for x in row] for row in matrix]
    b = list(rhs)
    if len(b) != n:
        raise DomainError("rhs length mismatch", code="shape-mismatch")
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            raise IntegrityError("singular linear block", code="singular-block")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            f = m[i][col]
            if f:
                f = f * inv
                for j in range(col, n):
                    m[i][j] = m[i][j] - f * m[col][j]
                b[i] = b[i] - b[col] * f
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc = acc - x[j] * m[i][j]
        x[i] = acc * (1 / m[i][i])
    return x


def solve_general(matrix, rhs):
    """(particular, nullspace_basis) for A x = b, or None when inconsistent."""
    if not matrix:
        return ([], []) if all(not x for x in rhs) else None
    ncols = len(matrix[0])
    m = [[mpq(x) for x in row] + [mpq(rhs[i])] for i, row in enumerate(matrix)]
    rank, pivot_cols, _ = 0, [], None
    r = 0
    pivots = []
    for col in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][ncols]:
            return None
    particular = [ZERO] * ncols
    for i, col in enumerate(pivots):
        particular[col] = m[i][ncols]
    null_basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for i, col in enumerate(pivots):
            vec[col] = -m[i][free]
        null_basis.append(vec)
    return particular, null_basis


def invert(matrix):
    """Exact inverse of a square rational matrix."""
    n = len(matrix)
    cols = []
    for k in range(n):
        e = [ONE if i == k else ZERO for i in range(n)]
        cols.append(solve_square(matrix, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def mat_vec(matrix, vec):
    return [sum((row[j] * vec[j] for j in range(len(vec))), ZERO) for row in matrix]
