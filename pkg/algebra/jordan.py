# algebra/jordan.py
"""
Кубическая йорданова алгебра J_C эрмитовых 3x3 матриц над композиционной алгеброй C.

Элемент (c1, c2, c3, x1, x2, x3) задаёт матрицу
    [[c1,       x3,       conj(x2)],
     [conj(x3), c2,       x1      ],
     [x2,       conj(x1), c3      ]].
"""
from __future__ import annotations

import logging
from typing import Any, List, Optional, Sequence

from errors import DescriptorMismatch, InvalidParameter
from fkit_config import debug_enabled
from algebra import linalg
from algebra.composition import (
    Automorphism,
    CompElem,
    CompositionAlgebra,
    trace0_basis,
    unarion,
)
from algebra.scalar import Scalar

log = logging.getLogger(__name__)

__all__ = [
    "JordanElem",
    "Gl3Elem",
    "jordan_identity",
    "jordan_zero",
    "diag",
    "J",
    "random_jordan",
    "random_gl3",
    "jordan_mul",
    "norm_N",
    "trace",
    "trace_pairing",
    "trilinear",
    "sharp",
    "cross",
    "rank_jordan",
    "f_map",
    "embed",
    "act",
    "act_dual",
    "jordan_dim",
    "is_trace0_strip",
    "random_trace0_strip",
    "v0",
]


def jordan_dim(dim_c: int) -> int:
    return 3 + 3 * dim_c


class JordanElem:
    __slots__ = ("algebra", "c", "x")

    def __init__(self, algebra: CompositionAlgebra, c: Sequence[Any], x: Sequence[CompElem]):
        if len(c) != 3 or len(x) != 3:
            raise InvalidParameter("элемент J_C задаётся тремя скалярами и тремя элементами C")
        for xi in x:
            if xi.algebra != algebra:
                raise DescriptorMismatch(f"{xi.algebra.label()} внутри J над {algebra.label()}")
        self.algebra = algebra
        self.c = tuple(algebra.field(ci) for ci in c)
        self.x = tuple(x)

    @property
    def field(self):
        return self.algebra.field

    def _same(self, other: "JordanElem") -> None:
        if other.algebra != self.algebra:
            raise DescriptorMismatch(f"{self.algebra.label()} и {other.algebra.label()}: разные J")

    def __add__(self, other: "JordanElem") -> "JordanElem":
        self._same(other)
        return JordanElem(
            self.algebra,
            [a + b for a, b in zip(self.c, other.c)],
            [a + b for a, b in zip(self.x, other.x)],
        )

    def __sub__(self, other: "JordanElem") -> "JordanElem":
        self._same(other)
        return JordanElem(
            self.algebra,
            [a - b for a, b in zip(self.c, other.c)],
            [a - b for a, b in zip(self.x, other.x)],
        )

    def __neg__(self) -> "JordanElem":
        return JordanElem(self.algebra, [-a for a in self.c], [-a for a in self.x])

    def __mul__(self, s) -> "JordanElem":
        if isinstance(s, JordanElem):
            raise TypeError("произведение Жордана: используйте jordan_mul(A, B)")
        s = self.field(s)
        return JordanElem(self.algebra, [s * a for a in self.c], [s * a for a in self.x])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JordanElem):
            return NotImplemented
        return self.algebra == other.algebra and self.c == other.c and self.x == other.x

    def __hash__(self) -> int:
        return hash((self.algebra.key, self.c, self.x))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c) and all(a.is_zero() for a in self.x)

    def to_vector(self) -> List[Scalar]:
        out = list(self.c)
        for xi in self.x:
            out.extend(xi.coords)
        return out

    @classmethod
    def from_vector(cls, algebra: CompositionAlgebra, vec: Sequence[Scalar]) -> "JordanElem":
        n = algebra.dim
        if len(vec) != 3 + 3 * n:
            raise InvalidParameter(f"вектор длины {len(vec)}, ожидалось {3 + 3 * n}")
        xs = [CompElem(algebra, vec[3 + k * n: 3 + (k + 1) * n]) for k in range(3)]
        return cls(algebra, vec[:3], xs)

    def hermitian(self) -> List[List[CompElem]]:
        alg = self.algebra
        c1, c2, c3 = (alg.scalar(ci) for ci in self.c)
        x1, x2, x3 = self.x
        return [
            [c1, x3, x2.conj()],
            [x3.conj(), c2, x1],
            [x2, x1.conj(), c3],
        ]

    def __repr__(self) -> str:
        cs = ", ".join(str(ci) for ci in self.c)
        xs = ", ".join(repr(xi) for xi in self.x)
        return f"J(c=[{cs}], x=[{xs}])"


class Gl3Elem:
    """Обратимая 3x3 матрица над полем F."""

    def __init__(self, matrix: linalg.Matrix):
        if len(matrix) != 3 or any(len(r) != 3 for r in matrix):
            raise InvalidParameter("ожидалась 3x3 матрица")
        self.matrix = [list(r) for r in matrix]
        self.det = linalg.det(self.matrix)
        if self.det.is_zero():
            raise InvalidParameter("det(h) = 0: элемент не лежит в GL3")
        self._inverse: Optional[linalg.Matrix] = None

    @property
    def field(self):
        return self.matrix[0][0].field

    @property
    def inverse(self) -> linalg.Matrix:
        if self._inverse is None:
            self._inverse = linalg.inverse(self.matrix)
        return self._inverse

    @classmethod
    def identity(cls, field) -> "Gl3Elem":
        return cls(linalg.identity(field, 3))

    def to_rows(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.matrix]


# ---------------------------
# конструкторы
# ---------------------------
def jordan_zero(algebra: CompositionAlgebra) -> JordanElem:
    z = algebra.zero()
    return JordanElem(algebra, [algebra.field.zero] * 3, [z, z, z])


def diag(algebra: CompositionAlgebra, c1: Any, c2: Any, c3: Any) -> JordanElem:
    z = algebra.zero()
    return JordanElem(algebra, [c1, c2, c3], [z, z, z])


def jordan_identity(algebra: CompositionAlgebra) -> JordanElem:
    return diag(algebra, 1, 1, 1)


def J(x: Sequence[CompElem]) -> JordanElem:
    """J(x): нулевая диагональ, полоса x = (x1, x2, x3)."""
    alg = x[0].algebra
    return JordanElem(alg, [alg.field.zero] * 3, list(x))


def random_jordan(algebra: CompositionAlgebra, rng) -> JordanElem:
    f = algebra.field
    return JordanElem(algebra, [f.random(rng) for _ in range(3)], [algebra.random(rng) for _ in range(3)])


def random_gl3(field, rng) -> Gl3Elem:
    while True:
        m = [[field.random(rng) for _ in range(3)] for _ in range(3)]
        if not linalg.det(m).is_zero():
            return Gl3Elem(m)


# ---------------------------
# эрмитова форма <-> элемент
# ---------------------------
def _scalar_part(y: CompElem) -> Scalar:
    return y.trace() / 2


def _from_hermitian(algebra: CompositionAlgebra, m: List[List[CompElem]]) -> JordanElem:
    if debug_enabled():
        for i in range(3):
            assert m[i][i] == algebra.scalar(_scalar_part(m[i][i])), "диагональ не скалярна"
        assert m[1][0] == m[0][1].conj() and m[2][1] == m[1][2].conj() and m[0][2] == m[2][0].conj(), \
            "результат не эрмитов"
    return JordanElem(
        algebra,
        [_scalar_part(m[i][i]) for i in range(3)],
        [m[1][2], m[2][0], m[0][1]],
    )


# =============================
# операции
# =============================
def jordan_mul(a: JordanElem, b: JordanElem) -> JordanElem:
    """A*B = (AB + BA)/2 через буквальное произведение 3x3 матриц над C."""
    a._same(b)
    alg = a.algebra
    ma, mb = a.hermitian(), b.hermitian()
    half = alg.field.one / 2
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = alg.zero()
            for k in range(3):
                acc = acc + ma[i][k] * mb[k][j] + mb[i][k] * ma[k][j]
            row.append(half * acc)
        out.append(row)
    return _from_hermitian(alg, out)


def norm_N(x: JordanElem) -> Scalar:
    c1, c2, c3 = x.c
    x1, x2, x3 = x.x
    return (
        c1 * c2 * c3
        - c1 * x1.norm()
        - c2 * x2.norm()
        - c3 * x3.norm()
        + ((x1 * x2) * x3).trace()
    )


def trace(x: JordanElem) -> Scalar:
    return x.c[0] + x.c[1] + x.c[2]


def trace_pairing(x: JordanElem, y: JordanElem) -> Scalar:
    """<X, Y> = Tr(X*Y) = sum c_i c'_i + sum B(x_i, x'_i), развёрнутый след jordan_mul."""
    x._same(y)
    alg = x.algebra
    out = sum((a * b for a, b in zip(x.c, y.c)), alg.field.zero)
    for u, v in zip(x.x, y.x):
        out = out + alg.bilinear(u, v)
    return out


def trilinear(x: JordanElem, y: JordanElem, z: JordanElem) -> Scalar:
    """Полная поляризация N, нормированная как (X,X,X) = 6N(X)."""
    return (
        norm_N(x + y + z)
        - norm_N(x + y)
        - norm_N(x + z)
        - norm_N(y + z)
        + norm_N(x)
        + norm_N(y)
        + norm_N(z)
    )


def sharp(x: JordanElem) -> JordanElem:
    c1, c2, c3 = x.c
    x1, x2, x3 = x.x
    b1, b2, b3 = x1.conj(), x2.conj(), x3.conj()
    return JordanElem(
        x.algebra,
        [c2 * c3 - x1.norm(), c1 * c3 - x2.norm(), c1 * c2 - x3.norm()],
        [b3 * b2 - c1 * x1, b1 * b3 - c2 * x2, b2 * b1 - c3 * x3],
    )


def cross(x: JordanElem, y: JordanElem) -> JordanElem:
    return sharp(x + y) - sharp(x) - sharp(y)


def rank_jordan(x: JordanElem) -> int:
    if x.is_zero():
        return 0
    if sharp(x).is_zero():
        return 1
    if norm_N(x).is_zero():
        return 2
    return 3


# ---------------------------
# f: J_C -> J_F и вложение J_F -> J_C
# ---------------------------
def f_map(x: JordanElem) -> JordanElem:
    """Диагональ сохраняется, каждое x_j -> Tr(x_j)/2 в F = unarion."""
    base = unarion(x.field)
    return JordanElem(base, x.c, [base.element([xi.trace() / 2]) for xi in x.x])


def embed(x: JordanElem, algebra: CompositionAlgebra) -> JordanElem:
    if x.algebra.dim != 1:
        raise InvalidParameter("вкладывать можно только элементы J_F (unarion)")
    return JordanElem(algebra, x.c, [algebra.scalar(xi.coords[0]) for xi in x.x])


# ---------------------------
# действие Aut(C) x GL3
# ---------------------------
def _apply_g(g: Optional[Automorphism], x: JordanElem) -> JordanElem:
    if g is None:
        return x
    if g.algebra != x.algebra:
        raise DescriptorMismatch("автоморфизм другой алгебры")
    return JordanElem(x.algebra, x.c, [g(xi) for xi in x.x])


def _congruence(x: JordanElem, left: linalg.Matrix, right: linalg.Matrix, scale: Scalar) -> JordanElem:
    """scale * left * X * right, left, right: скалярные 3x3 матрицы."""
    alg = x.algebra
    m = x.hermitian()
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = alg.zero()
            for k in range(3):
                lik = left[i][k]
                if lik.is_zero():
                    continue
                for l in range(3):
                    rlj = right[l][j]
                    if rlj.is_zero():
                        continue
                    acc = acc + (lik * rlj) * m[k][l]
            row.append(scale * acc)
        out.append(row)
    return _from_hermitian(alg, out)


def act(g: Optional[Automorphism], h: Gl3Elem, x: JordanElem) -> JordanElem:
    """X -> det(h) (h^-1)^T g(X) h^-1; фактор подобия det(h)."""
    hi = h.inverse
    return _congruence(_apply_g(g, x), linalg.transpose(hi), hi, h.det)


def act_dual(g: Optional[Automorphism], h: Gl3Elem, x: JordanElem) -> JordanElem:
    """Дуальное действие h~: <act(g,h,X), act_dual(g,h,Y)> = <X, Y>."""
    return _congruence(_apply_g(g, x), h.matrix, linalg.transpose(h.matrix), h.det.inv())


def is_trace0_strip(x: JordanElem) -> bool:
    return all(ci.is_zero() for ci in x.c) and all(xi.trace().is_zero() for xi in x.x)


def random_trace0_strip(algebra: CompositionAlgebra, rng) -> JordanElem:
    return J([algebra.random_trace0(rng) for _ in range(3)])


def v0(algebra: CompositionAlgebra) -> JordanElem:
    """diag(1,0,0): свидетель ранга 1 со следом 1."""
    return diag(algebra, 1, 0, 0)
