# fibers.py
"""
Слои отображения F: W_C -> W_F, (a, b, c, d) -> (a, f(b), f(c), d).

Для xi = (1, 0, c, d) элемент ранга 1 из слоя имеет вид (1, J(x), J(x)#, N(J(x))),
x = (x1, x2, x3) из (C^0)^3, при условиях c = 1/2 Tr(x_i x_j) и d = Tr(x1 x2 x3).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    InvalidParameter,
    NonSplitAlgebra,
    NotNormalized,
    WrongDimension,
)
from fkit_config import debug_enabled
from algebra import linalg
from algebra.composition import (
    Automorphism,
    CompElem,
    CompositionAlgebra,
    matrix2x2,
    trace0_basis,
    unarion,
)
from algebra.freudenthal import FreudenthalElem, rank_w, special_rank1
from algebra.jordan import J, JordanElem, embed, f_map, jordan_zero
from algebra.scalar import Field, Scalar
from quadform import TernaryForm, norm_form_on_trace0, ternary_similar

log = logging.getLogger(__name__)

__all__ = [
    "FiberResult",
    "F_map",
    "embed_w",
    "fiber_target",
    "target_matrix",
    "rank1_lift",
    "triple_gram",
    "fiber_membership",
    "sextic_check",
    "rank3_fiber_test",
    "fiber_action",
    "rank0_fiber_predicate",
    "quadratic_fiber_test",
    "nilpotent_pair_oracle",
    "strip_coordinates",
    "strip_symplectic",
    "decode_triple",
    "scan_fiber",
    "orbit_of_witness",
]

Triple = Tuple[CompElem, CompElem, CompElem]

RATIONAL_WITNESS_RANGE = (-1, 0, 1)


@dataclass
class FiberResult:
    status: str
    witness: Optional[List[Any]] = None
    cardinality: Optional[int] = None
    reason: str = ""
    details: Dict[str, Any] = dc_field(default_factory=dict)

    @property
    def nonempty(self) -> bool:
        return self.status == "nonempty"


# =============================
# F и вложение
# =============================
def F_map(w: FreudenthalElem) -> FreudenthalElem:
    return FreudenthalElem(w.a, f_map(w.b), f_map(w.c), w.d)


def embed_w(w: FreudenthalElem, algebra: CompositionAlgebra) -> FreudenthalElem:
    return FreudenthalElem(w.a, embed(w.b, algebra), embed(w.c, algebra), w.d)


def fiber_target(field: Field, c: Sequence[Sequence[Any]], d: Any) -> FreudenthalElem:
    """xi = (1, 0, c, d) в W_F по симметричной 3x3 матрице c."""
    base = unarion(field)
    m = linalg.to_matrix(field, c)
    if not linalg.is_symmetric(m):
        raise InvalidParameter("матрица c должна быть симметричной")
    cj = JordanElem(
        base,
        [m[0][0], m[1][1], m[2][2]],
        [base.element([m[1][2]]), base.element([m[2][0]]), base.element([m[0][1]])],
    )
    return FreudenthalElem(field.one, jordan_zero(base), cj, d)


def target_matrix(xi: FreudenthalElem) -> linalg.Matrix:
    """c-компонента xi как симметричная 3x3 матрица."""
    _check_normalized(xi)
    c = xi.c
    x1, x2, x3 = (v.coords[0] for v in c.x)
    return [
        [c.c[0], x3, x2],
        [x3, c.c[1], x1],
        [x2, x1, c.c[2]],
    ]


def _check_normalized(xi: FreudenthalElem) -> None:
    if xi.algebra.dim != 1:
        raise NotNormalized("xi должен лежать в W_F (unarion)")
    if xi.a != 1 or not xi.b.is_zero():
        raise NotNormalized(f"xi должен иметь вид (1, 0, c, d), получено {xi!r}")


# =============================
# подъём ранга 1 и условия слоя
# =============================
def _check_triple(x: Sequence[CompElem]) -> Triple:
    if len(x) != 3:
        raise InvalidParameter("нужна тройка (x1, x2, x3)")
    for xi in x:
        if not xi.trace().is_zero():
            raise InvalidParameter(f"{xi!r} не лежит в C^0 (Tr != 0)")
    return tuple(x)


def rank1_lift(x: Sequence[CompElem]) -> FreudenthalElem:
    """(1, J(x), J(x)#, N(J(x)))."""
    x = _check_triple(x)
    lift = special_rank1(J(x))
    if debug_enabled():
        assert rank_w(lift) == 1, f"подъём {x!r} не ранга 1"
    return lift


def triple_gram(x: Sequence[CompElem]) -> linalg.Matrix:
    return [[(x[i] * x[j]).trace() / 2 for j in range(3)] for i in range(3)]


def _triple_product(x: Sequence[CompElem]) -> Scalar:
    return ((x[0] * x[1]) * x[2]).trace()


def fiber_membership(xi: FreudenthalElem, x: Sequence[CompElem]) -> bool:
    c = target_matrix(xi)
    x = _check_triple(x)
    if triple_gram(x) != c:
        return False
    return _triple_product(x) == xi.d


def sextic_check(x: Sequence[CompElem]) -> Tuple[Scalar, Scalar, bool]:
    """-4 det(1/2 Tr(x_i x_j)) против Tr(x1 x2 x3)^2."""
    if x[0].algebra.dim != 4:
        raise WrongDimension(f"тождество шестой степени — для dim C = 4, а не {x[0].algebra.dim}")
    x = _check_triple(x)
    lhs = -4 * linalg.det(triple_gram(x))
    t = _triple_product(x)
    rhs = t * t
    return lhs, rhs, lhs == rhs


def decode_triple(algebra: CompositionAlgebra, idx: int) -> Triple:
    """Индекс одометра над координатами (C^0)^3 -> тройка; координата 0 старшая."""
    p = algebra.field.p
    basis = trace0_basis(algebra)
    m = len(basis)
    digits = []
    for _ in range(3 * m):
        digits.append(idx % p)
        idx //= p
    digits.reverse()
    out = []
    for k in range(3):
        acc = algebra.zero()
        for a in range(m):
            acc = acc + digits[k * m + a] * basis[a]
        out.append(acc)
    return tuple(out)


# =============================
# слой ранга 3 (dim C = 4)
# =============================
def _rational_witness(xi: FreudenthalElem, algebra: CompositionAlgebra) -> Optional[Triple]:
    basis = trace0_basis(algebra)
    c = target_matrix(xi)
    candidates = []
    for coeffs in itertools.product(RATIONAL_WITNESS_RANGE, repeat=len(basis)):
        v = algebra.zero()
        for s, b in zip(coeffs, basis):
            v = v + s * b
        candidates.append(v)
    # диагональ c отсекает кандидатов по отдельности
    slots = [[v for v in candidates if (v * v).trace() / 2 == c[i][i]] for i in range(3)]
    for x in itertools.product(*slots):
        if fiber_membership(xi, x):
            return x
    return None


def scan_fiber(xi: FreudenthalElem, algebra: CompositionAlgebra, workers: int) -> Tuple[int, Optional[Triple]]:
    """Полный перебор (C^0)^3 ядром fiber_scan: (|слой|, первый свидетель)."""
    from kernels.pool import run_partitioned
    from kernels.scans import fiber_scan
    from kernels.tables import build_tables

    tables = build_tables(algebra)
    cmat = np.array([[v.residue for v in row] for row in target_matrix(xi)], dtype=np.int64)
    total = tables.p ** (3 * tables.G0.shape[0])
    parts = run_partitioned(
        fiber_scan,
        (tables.G0, tables.T, cmat, xi.d.residue, tables.p),
        total,
        workers,
        label="fiber",
    )
    count = sum(int(c) for c, _ in parts)
    firsts = [int(f) for _, f in parts if f >= 0]
    witness = decode_triple(algebra, firsts[0]) if firsts else None
    return count, witness


def rank3_fiber_test(
    xi: FreudenthalElem,
    algebra: CompositionAlgebra,
    workers: int = 1,
    search: bool = True,
) -> FiberResult:
    if algebra.dim != 4:
        raise WrongDimension("слой ранга 3 рассматривается для dim C = 4")
    c = target_matrix(xi)
    field = algebra.field
    det_c = linalg.det(c)
    if det_c.is_zero():
        raise InvalidParameter("c должна иметь ранг 3")
    d = xi.d
    details = {"det_c": str(det_c), "d2": str(d * d)}
    if d * d != -4 * det_c:
        return FiberResult("empty", reason="d^2 != -4 det(c)", details=details)
    similar = ternary_similar(TernaryForm(field, c), norm_form_on_trace0(algebra))
    details["similar_to_norm_form"] = similar
    if not similar:
        return FiberResult("empty", reason="c не подобна норме на C^0", details=details)
    if not search:
        return FiberResult("nonempty", reason="инварианты", details=details)
    if field.is_prime_field:
        count, witness = scan_fiber(xi, algebra, workers)
        if witness is None:
            return FiberResult("empty", cardinality=0, reason="перебор не нашёл свидетеля", details=details)
        return FiberResult("nonempty", witness=list(witness), cardinality=count, details=details)
    if field.kind == "Q":
        witness = _rational_witness(xi, algebra)
        if witness is not None:
            return FiberResult("nonempty", witness=list(witness), details=details)
        return FiberResult("nonempty", reason="инварианты; свидетель вне области поиска", details=details)
    return FiberResult("nonempty", reason="инварианты; поиск свидетеля над F_p2 не выполняется", details=details)


def fiber_action(g: Optional[Automorphism], h: Sequence[Sequence[Scalar]], x: Sequence[CompElem], c=None) -> Triple:
    """x -> (g x) h^T: x'_j = sum_i h_ji g(x_i); при заданной c проверяется h из SO(3, c)."""
    hm = [list(r) for r in getattr(h, "matrix", h)]
    if c is not None:
        if linalg.det(hm) != 1:
            raise InvalidParameter("h не из SO(3, c): det(h) != 1")
        if linalg.matmul(linalg.matmul(hm, c), linalg.transpose(hm)) != [list(r) for r in c]:
            raise InvalidParameter("h не из SO(3, c): h c h^T != c")
    gx = [g(xi) if g is not None else xi for xi in x]
    alg = gx[0].algebra
    out = []
    for j in range(3):
        acc = alg.zero()
        for i in range(3):
            acc = acc + hm[j][i] * gx[i]
        out.append(acc)
    return tuple(out)


def orbit_of_witness(xi: FreudenthalElem, witness: Sequence[CompElem], group: Sequence[linalg.Matrix]) -> Dict[str, Any]:
    """Орбита свидетеля под SO(3, c): размер, все ли точки в слое."""
    c = target_matrix(xi)
    images = {fiber_action(None, h, witness, c=c) for h in group}
    inside = all(fiber_membership(xi, y) for y in images)
    return {"orbit": len(images), "group": len(group), "inside_fiber": inside}


# =============================
# C^0 (x) V_6 и слой над нулём
# =============================
def strip_coordinates(w: FreudenthalElem) -> Tuple[CompElem, ...]:
    """(0, J(x), J(y), 0) -> (x1, x2, x3, y1, y2, y3)."""
    if not (w.a.is_zero() and w.d.is_zero()):
        raise InvalidParameter("ожидался элемент вида (0, J(x), J(y), 0)")
    for jm in (w.b, w.c):
        if any(not ci.is_zero() for ci in jm.c):
            raise InvalidParameter("диагональ b и c должна быть нулевой")
    return tuple(w.b.x) + tuple(w.c.x)


def strip_symplectic(s: Sequence[CompElem], t: Sequence[CompElem]) -> Scalar:
    """sum B(y_i, x'_i) - B(x_i, y'_i) для s = (x, y), t = (x', y')."""
    alg = s[0].algebra
    out = alg.field.zero
    for i in range(3):
        out = out + alg.bilinear(s[3 + i], t[i]) - alg.bilinear(s[i], t[3 + i])
    return out


def _factor_pure_tensor(rows: Sequence[CompElem]) -> Optional[Tuple[CompElem, List[Scalar]]]:
    x = next((r for r in rows if not r.is_zero()), None)
    if x is None:
        return None
    lead = next(i for i, v in enumerate(x.coords) if not v.is_zero())
    v = []
    for r in rows:
        mu = r.coords[lead] / x.coords[lead]
        if r != mu * x:
            return None
        v.append(mu)
    return x, v


def rank0_fiber_predicate(w: FreudenthalElem) -> FiberResult:
    """Статусы: not-in-fiber (F(w) != 0), rank-not-1 (в слое, ранг не 1), pure-tensor, violation."""
    alg = w.algebra
    if alg.dim != 4:
        raise WrongDimension("слой над нулём рассматривается для dim C = 4")
    if not alg.is_split():
        raise NonSplitAlgebra(f"{alg.label()} не расщеплена: C^0 анизотропна")
    if not F_map(w).is_zero():
        return FiberResult("not-in-fiber", reason="F(w) != 0")
    if rank_w(w) != 1:
        return FiberResult("rank-not-1", reason="F(w) = 0, но rank_w(w) != 1")
    rows = strip_coordinates(w)
    factored = _factor_pure_tensor(rows)
    if factored is None:
        return FiberResult("violation", witness=list(rows), reason="координаты не раскладываются в x (x) v")
    x, v = factored
    if not (x * x).is_zero():
        return FiberResult("violation", witness=list(rows), reason="x^2 != 0")
    return FiberResult("pure-tensor", witness=[x], details={"v": [str(s) for s in v]})


# =============================
# квадратичная алгебра (dim C = 2)
# =============================
def _strip_line(algebra: CompositionAlgebra, s: Sequence[Scalar]) -> Triple:
    u = trace0_basis(algebra)[0]
    return tuple(si * u for si in s)


def quadratic_fiber_test(xi: FreudenthalElem, algebra: CompositionAlgebra) -> FiberResult:
    """C^0 = F u: c = g s s^T с g = 1/2 Tr(u^2), d = 0."""
    if algebra.dim != 2:
        raise WrongDimension("этот тест слоя — для dim C = 2")
    c = target_matrix(xi)
    field = algebra.field
    if not xi.d.is_zero():
        return FiberResult("empty", reason="d != 0")
    u = trace0_basis(algebra)[0]
    g = (u * u).trace() / 2
    if linalg.rank(c) > 1:
        return FiberResult("empty", reason="rank(c) > 1")
    solutions: List[Tuple[Scalar, ...]] = []
    if field.is_finite:
        for s in itertools.product(list(field.elements()), repeat=3):
            if all(g * s[i] * s[j] == c[i][j] for i in range(3) for j in range(3)):
                solutions.append(s)
    else:
        k = next((i for i in range(3) if not c[i][i].is_zero()), None)
        if k is None:
            solutions.append((field.zero,) * 3)
        else:
            ratio = c[k][k] / g
            root = _rational_sqrt(ratio)
            if root is not None:
                for sk in (root, -root):
                    s = tuple(c[k][j] / (g * sk) for j in range(3))
                    if all(g * s[i] * s[j] == c[i][j] for i in range(3) for j in range(3)):
                        solutions.append(s)
    if not solutions:
        return FiberResult("empty", cardinality=0, reason="c не имеет вида g s s^T над этим полем")
    witness = [_strip_line(algebra, s) for s in solutions]
    return FiberResult("nonempty", witness=witness, cardinality=len(witness))


def _rational_sqrt(x: Scalar) -> Optional[Scalar]:
    from fractions import Fraction
    import math

    if not x.is_square():
        return None
    r = Fraction(x.v)
    return x.field(Fraction(math.isqrt(r.numerator), math.isqrt(r.denominator)))


# =============================
# лемма о нильпотентных 2x2
# =============================
def nilpotent_pair_oracle(field: Field) -> Dict[str, Any]:
    """beta^2 = gamma^2 = 0, beta gamma + gamma beta = 0 => beta, gamma пропорциональны."""
    alg = matrix2x2(field)
    nilpotent = [x for x in alg.elements() if (x * x).is_zero()]
    pairs = 0
    counterexamples: List[Tuple[CompElem, CompElem]] = []
    for beta in nilpotent:
        for gamma in nilpotent:
            if not (beta * gamma + gamma * beta).is_zero():
                continue
            pairs += 1
            if _factor_pure_tensor([beta, gamma]) is None and not (beta.is_zero() and gamma.is_zero()):
                counterexamples.append((beta, gamma))
    log.info("Лемма о нильпотентных парах %s: %d пар, %d контрпримеров", field.label(), pairs, len(counterexamples))
    return {
        "field": field.descriptor(),
        "nilpotent": len(nilpotent),
        "pairs": pairs,
        "counterexamples": len(counterexamples),
        "examples": [(repr(b), repr(g)) for b, g in counterexamples[:5]],
    }
