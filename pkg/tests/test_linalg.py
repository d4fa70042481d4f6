import random

import pytest

from hopf3.errors import IntegrityError
from hopf3.linalg import (exact_det, exact_rank, invert, mat_vec, solve_general,
                          solve_square)
from hopf3.rational import mpq


def test_identity_rank():
    rank, cols, rows = exact_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank == 3
    assert cols == [0, 1, 2]  # 0-based column indices


def test_zero_matrix_rank():
    rank, cols, _ = exact_rank([[0, 0], [0, 0]])
    assert rank == 0 and cols == []


def test_deterministic_pivots_first_nonzero_row():
    m = [[0, 2, 1], [3, 0, 0], [3, 2, 1]]
    rank, cols, rows = exact_rank(m)
    assert rank == 2
    assert cols == [0, 1]
    assert rows[0] == 1  # first row with a nonzero entry in column 0


def bareiss_rank(matrix):
    """Fraction-free elimination oracle (integer matrices)."""
    m = [[int(x) for x in row] for row in matrix]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def test_rank_against_fraction_free_oracle():
    rng = random.Random(99)
    for _ in range(60):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 20)
        m = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)]
        if rng.random() < 0.4 and rows > 1:  # plant dependencies
            m[-1] = [2 * a - b for a, b in zip(m[0], m[rows // 2])]
        got, _, _ = exact_rank(m)
        assert got == bareiss_rank(m)


def test_det_and_solve():
    m = [[mpq(2), mpq(1)], [mpq(1), mpq(3)]]
    assert exact_det(m) == mpq(5)
    x = solve_square(m, [mpq(3), mpq(4)])
    assert mat_vec(m, x) == [mpq(3), mpq(4)]
    inv = invert(m)
    assert mat_vec(inv, [mpq(3), mpq(4)]) == x


def test_singular_solve_raises():
    with pytest.raises(IntegrityError):
        solve_square([[1, 1], [2, 2]], [1, 2])


def test_solve_general_particular_and_nullspace():
    got = solve_general([[1, 1, 0], [0, 0, 1]], [2, 3])
    assert got is not None
    particular, null = got
    assert particular[0] + particular[1] == 2 and particular[2] == 3
    assert len(null) == 1
    assert solve_general([[1, 1], [1, 1]], [0, 1]) is None
