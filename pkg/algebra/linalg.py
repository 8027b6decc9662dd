# algebra/linalg.py
# Точная линейная алгебра над Field: матрицы как списки списков Scalar.
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from errors import InvalidParameter
from algebra.scalar import Field, Scalar

Matrix = List[List[Scalar]]

__all__ = [
    "Matrix",
    "identity",
    "zeros",
    "to_matrix",
    "transpose",
    "matmul",
    "matvec",
    "det",
    "inverse",
    "rank",
    "is_symmetric",
]


def identity(field: Field, n: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field: Field, n: int, m: Optional[int] = None) -> Matrix:
    m = n if m is None else m
    return [[field.zero for _ in range(m)] for _ in range(n)]


def to_matrix(field: Field, rows: Sequence[Sequence]) -> Matrix:
    return [[field(v) for v in row] for row in rows]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), row[0].field.zero) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[Scalar]) -> List[Scalar]:
    return [sum((x * y for x, y in zip(row, v)), row[0].field.zero) for row in a]


def _echelon(a: Matrix) -> Tuple[Matrix, int, Scalar]:
    """Прямой ход Гаусса: (матрица, ранг, произведение ведущих с учётом перестановок)."""
    m = [list(r) for r in a]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    field = m[0][0].field
    sign = field.one
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        inv = m[r][c].inv()
        for i in range(r + 1, n_rows):
            if m[i][c].is_zero():
                continue
            f = m[i][c] * inv
            m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == n_rows:
            break
    return m, r, sign


def det(a: Matrix) -> Scalar:
    n = len(a)
    if n == 3:
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
    m, r, sign = _echelon(a)
    if r < n:
        return a[0][0].field.zero
    out = sign
    for i in range(n):
        out = out * m[i][i]
    return out


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return _echelon(a)[1]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    field = a[0][0].field
    aug = [list(row) + identity(field, n)[i] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not aug[i][c].is_zero()), None)
        if piv is None:
            raise InvalidParameter("вырожденная матрица: обратной нет")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inv()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))
