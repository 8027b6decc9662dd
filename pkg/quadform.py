# quadform.py
"""
Тернарные квадратичные формы над Q и F_p.

Диагонализация (симметричный Гаусс), дискриминант, символ Гильберта (формулы Серра
и переборный оракул по модулю p^k), инварианты Хассе, подобие и изотропность.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, List, Sequence, Set, Tuple, Union

from sympy import factorint, isprime
from sympy.ntheory import legendre_symbol

from errors import DegenerateForm, DescriptorMismatch, FieldError, InvalidParameter, WrongDimension
from algebra import linalg
from algebra.scalar import Field, Scalar, rationals

log = logging.getLogger(__name__)

__all__ = [
    "TernaryForm",
    "INF",
    "diagonal_form",
    "diagonalize",
    "discriminant",
    "squarefree",
    "hilbert_symbol",
    "hilbert_symbol_bruteforce",
    "hasse_invariant",
    "relevant_places",
    "ternary_similar",
    "is_isotropic",
    "norm_form_on_trace0",
    "form_from_rows",
]

INF = "inf"
Place = Union[int, str]


class TernaryForm:
    def __init__(self, field: Field, gram: Sequence[Sequence[Any]]):
        if len(gram) != 3 or any(len(r) != 3 for r in gram):
            raise InvalidParameter("тернарная форма задаётся матрицей 3x3")
        self.field = field
        self.gram = linalg.to_matrix(field, gram)
        if not linalg.is_symmetric(self.gram):
            raise InvalidParameter("матрица Грама не симметрична")

    def det(self) -> Scalar:
        return linalg.det(self.gram)

    def is_degenerate(self) -> bool:
        return self.det().is_zero()

    def value(self, vec: Sequence[Any]) -> Scalar:
        v = [self.field(x) for x in vec]
        return sum((v[i] * self.gram[i][j] * v[j] for i in range(3) for j in range(3)), self.field.zero)

    def scaled(self, lam: Any) -> "TernaryForm":
        lam = self.field(lam)
        return TernaryForm(self.field, [[lam * x for x in row] for row in self.gram])

    def to_rows(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.gram]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TernaryForm) and self.field == other.field and self.gram == other.gram

    def __repr__(self) -> str:
        return f"TernaryForm({self.to_rows()}, {self.field.label()})"


def diagonal_form(field: Field, entries: Sequence[Any]) -> TernaryForm:
    z = field.zero
    e = [field(x) for x in entries]
    return TernaryForm(field, [[e[0], z, z], [z, e[1], z], [z, z, e[2]]])


# ---------------------------
# квадратосвободная часть
# ---------------------------
@lru_cache(maxsize=4096)
def _squarefree_int(n: int) -> Tuple[int, int]:
    """n = s * k^2, s квадратосвободно (со знаком n). Возвращает (s, k)."""
    if n == 0:
        return 0, 1
    s, k = (1 if n > 0 else -1), 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
        k *= p ** (e // 2)
    return s, k


def squarefree(x: Union[Scalar, Fraction, int]) -> int:
    """Представитель класса x в Q*/Q*^2: n/d ~ n*d."""
    r = Fraction(x.v) if isinstance(x, Scalar) else Fraction(x)
    return _squarefree_int(r.numerator * r.denominator)[0]


# =============================
# диагонализация
# =============================
def _swap(g: linalg.Matrix, p: linalg.Matrix, i: int, j: int) -> None:
    g[i], g[j] = g[j], g[i]
    for row in g:
        row[i], row[j] = row[j], row[i]
    for row in p:
        row[i], row[j] = row[j], row[i]


def _add_col(g: linalg.Matrix, p: linalg.Matrix, dst: int, src: int, f: Scalar) -> None:
    """e_dst <- e_dst + f e_src (конгруэнция)."""
    for row in g:
        row[dst] = row[dst] + f * row[src]
    g[dst] = [x + f * y for x, y in zip(g[dst], g[src])]
    for row in p:
        row[dst] = row[dst] + f * row[src]


def diagonalize(form: TernaryForm) -> Tuple[List[Scalar], linalg.Matrix]:
    """(D, P) с P^T G P = diag(D); над Q элементы D квадратосвободны."""
    field = form.field
    g = [list(r) for r in form.gram]
    p = linalg.identity(field, 3)
    n = 3
    for i in range(n):
        if g[i][i].is_zero():
            j = next((j for j in range(i + 1, n) if not g[j][j].is_zero()), None)
            if j is not None:
                _swap(g, p, i, j)
            else:
                j = next((j for j in range(i + 1, n) if not g[i][j].is_zero()), None)
                if j is None:
                    continue
                _add_col(g, p, i, j, field.one)
        piv = g[i][i]
        for j in range(i + 1, n):
            if not g[j][i].is_zero():
                _add_col(g, p, j, i, -(g[j][i] / piv))
    diag = [g[i][i] for i in range(n)]
    if field.kind == "Q":
        for i, x in enumerate(diag):
            if x.is_zero():
                continue
            r = Fraction(x.v)
            s, k = _squarefree_int(r.numerator * r.denominator)
            # x = s (k/den)^2  ->  столбец умножается на den/k
            scale = field(Fraction(r.denominator, k))
            for row in p:
                row[i] = row[i] * scale
            diag[i] = field(s)
    return diag, p


def discriminant(form: TernaryForm) -> Scalar:
    """det по модулю квадратов: квадратосвободное целое над Q, 1 или невычет над F_p."""
    d = form.det()
    if d.is_zero():
        return d
    if form.field.kind == "Q":
        return form.field(squarefree(d))
    if d.is_square():
        return form.field.one
    return d


# =============================
# символ Гильберта
# =============================
def _to_int_class(x: Any) -> int:
    if isinstance(x, Scalar):
        if x.field.kind != "Q":
            raise FieldError("символ Гильберта определён здесь только для Q")
        x = x.v
    r = Fraction(x)
    if r == 0:
        raise InvalidParameter("символ Гильберта от нуля не определён")
    return r.numerator * r.denominator


def _check_place(place: Place) -> Place:
    if place == INF:
        return INF
    p = int(place)
    if not isprime(p):
        raise InvalidParameter(f"место {place!r} не простое и не бесконечность")
    return p


def _split_val(n: int, p: int) -> Tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def hilbert_symbol(a: Any, b: Any, place: Place) -> int:
    place = _check_place(place)
    a, b = _to_int_class(a), _to_int_class(b)
    if place == INF:
        return -1 if (a < 0 and b < 0) else 1
    p = place
    alpha, u = _split_val(a, p)
    beta, v = _split_val(b, p)
    if p != 2:
        eps = ((p - 1) // 2) % 2
        out = (-1) ** (alpha * beta * eps)
        if beta % 2:
            out *= legendre_symbol(u % p, p)
        if alpha % 2:
            out *= legendre_symbol(v % p, p)
        return out

    def e(t: int) -> int:
        return ((t - 1) // 2) % 2

    def w(t: int) -> int:
        return ((t * t - 1) // 8) % 2

    exp = e(u) * e(v) + alpha * w(v) + beta * w(u)
    return -1 if exp % 2 else 1


def hilbert_symbol_bruteforce(a: Any, b: Any, p: int, k: int = 0) -> int:
    """Оракул: примитивное решение z^2 = a x^2 + b y^2 по модулю p^k (a, b квадратосвободны)."""
    p = _check_place(p)
    if p == INF:
        raise InvalidParameter("переборный оракул только для конечных мест")
    a = _squarefree_int(_to_int_class(a))[0]
    b = _squarefree_int(_to_int_class(b))[0]
    if not k:
        k = 6 if p == 2 else 3
    m = p ** k
    squares = {(z * z) % m for z in range(m)}
    unit_squares = {(z * z) % m for z in range(m) if z % p}
    for x in range(m):
        ax = a * x * x
        for y in range(m):
            val = (ax + b * y * y) % m
            if x % p or y % p:
                if val in squares:
                    return 1
            elif val in unit_squares:
                return 1
    return -1


# =============================
# инварианты Хассе
# =============================
def _nonzero_diag(form: TernaryForm) -> List[Scalar]:
    diag, _ = diagonalize(form)
    if any(x.is_zero() for x in diag):
        raise DegenerateForm(f"вырожденная форма {form!r}")
    return diag


def _hasse_of_diag(diag: Sequence[Any], place: Place) -> int:
    out = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            out *= hilbert_symbol(diag[i], diag[j], place)
    return out


def hasse_invariant(form: TernaryForm, place: Place) -> int:
    if form.field.kind != "Q":
        raise FieldError("инварианты Хассе вычисляются над Q")
    return _hasse_of_diag(_nonzero_diag(form), place)


def _primes_of(x: Any) -> Set[int]:
    n = abs(_to_int_class(x))
    return set(factorint(n).keys()) if n > 1 else set()


def relevant_places(*forms: TernaryForm) -> List[Place]:
    """2, бесконечность и простые делители диагональных элементов."""
    primes: Set[int] = {2}
    for f in forms:
        for x in _nonzero_diag(f):
            primes |= _primes_of(x)
    return sorted(primes) + [INF]


def is_isotropic(form: TernaryForm) -> bool:
    """Хассе–Минковский: изотропна <=> hasse_p = (-1, -det)_p во всех местах."""
    if form.is_degenerate():
        return True
    if form.field.kind != "Q":
        return True
    minus_det = -form.det()
    for place in relevant_places(form):
        if hasse_invariant(form, place) != hilbert_symbol(-1, minus_det, place):
            return False
    return True


def ternary_similar(f1: TernaryForm, f2: TernaryForm) -> bool:
    """Существует ли lambda с lambda*f1 изометричной f2."""
    if f1.field != f2.field:
        raise DescriptorMismatch("формы над разными полями")
    if f1.is_degenerate() or f2.is_degenerate():
        raise DegenerateForm("подобие определено для невырожденных форм")
    if f1.field.kind != "Q":
        return True
    # disc(lambda f1) = lambda^3 disc f1 ~ lambda disc f1
    lam = squarefree(f1.det()) * squarefree(f2.det())
    d1 = [lam * Fraction(x.v) for x in _nonzero_diag(f1)]
    d2 = [Fraction(x.v) for x in _nonzero_diag(f2)]
    places: Set[int] = {2} | _primes_of(lam)
    for x in d1 + d2:
        places |= _primes_of(x)
    for place in sorted(places) + [INF]:
        if _hasse_of_diag(d1, place) != _hasse_of_diag(d2, place):
            log.debug("формы не подобны: Хассе различаются в месте %s", place)
            return False
    return True


def norm_form_on_trace0(algebra) -> TernaryForm:
    """Ограничение n_C на C^0 в базисе trace0_basis (матрица B/2)."""
    from algebra.composition import trace0_basis

    if algebra.dim != 4:
        raise WrongDimension(f"норма на C^0 как тернарная форма требует dim C = 4, а не {algebra.dim}")
    basis = trace0_basis(algebra)
    return TernaryForm(algebra.field, [[algebra.bilinear(u, v) / 2 for v in basis] for u in basis])


def form_from_rows(rows: Iterable[Iterable[Any]], field: Field = None) -> TernaryForm:
    field = field or rationals()
    return TernaryForm(field, [[field(x) for x in r] for r in rows])
