# algebra/composition.py
"""
Композиционные алгебры размерности 1, 2, 4, 8 в виде таблиц структурных констант.

Кватернионы и октонионы строятся удвоением Кэли–Диксона:
    (a, b)(c, d) = (ac + mu * conj(d) b,  d a + b conj(c)),   conj(a, b) = (conj(a), -b),
так что n(a, b) = n(a) - mu * n(b). Для quaternion(a, b): i^2 = a, j^2 = b, ij = k, k^2 = -ab.
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from errors import (
    DescriptorMismatch,
    InvalidParameter,
    NotAnAutomorphism,
    ParseError,
    WrongDimension,
)
from fkit_config import debug_enabled
from algebra import linalg
from algebra.scalar import Field, Scalar

log = logging.getLogger(__name__)

__all__ = [
    "CompositionAlgebra",
    "CompElem",
    "Automorphism",
    "CompositionReport",
    "TAGS",
    "PARAM_NAMES",
    "construct",
    "unarion",
    "binarion_split",
    "binarion_quadratic",
    "quaternion",
    "matrix2x2",
    "octonion",
    "octonion_split",
    "trace0_basis",
    "verify_composition_law",
    "is_associative",
    "is_alternative",
    "identity_automorphism",
    "conjugation_automorphism",
    "inner_automorphism",
    "doubled_inner_automorphism",
    "twist_automorphism",
    "random_automorphism",
]

TAGS = (
    "unarion",
    "binarion-split",
    "binarion-quadratic",
    "quaternion",
    "matrix2x2",
    "octonion",
    "octonion-split",
)

_CD_LABELS = {
    2: ["1", "i"],
    4: ["1", "i", "j", "k"],
    8: ["1", "i", "j", "k", "l", "il", "jl", "kl"],
}


class CompElem:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: "CompositionAlgebra", coords: Sequence[Scalar]):
        if len(coords) != algebra.dim:
            raise DescriptorMismatch(f"длина {len(coords)} != dim {algebra.dim}")
        self.algebra = algebra
        self.coords = tuple(coords)

    def _same(self, other: "CompElem") -> None:
        if other.algebra != self.algebra:
            raise DescriptorMismatch(f"{self.algebra.label()} и {other.algebra.label()}: разные алгебры")

    def __add__(self, other: "CompElem") -> "CompElem":
        self._same(other)
        return CompElem(self.algebra, [x + y for x, y in zip(self.coords, other.coords)])

    def __sub__(self, other: "CompElem") -> "CompElem":
        self._same(other)
        return CompElem(self.algebra, [x - y for x, y in zip(self.coords, other.coords)])

    def __neg__(self) -> "CompElem":
        return CompElem(self.algebra, [-x for x in self.coords])

    def __mul__(self, other):
        if isinstance(other, CompElem):
            return self.algebra.mul(self, other)
        s = self.algebra.field(other)
        return CompElem(self.algebra, [x * s for x in self.coords])

    def __rmul__(self, other):
        s = self.algebra.field(other)
        return CompElem(self.algebra, [s * x for x in self.coords])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CompElem):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.algebra.key, self.coords))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def conj(self) -> "CompElem":
        return self.algebra.conj(self)

    def trace(self) -> Scalar:
        return self.algebra.trace(self)

    def norm(self) -> Scalar:
        return self.algebra.norm(self)

    def __repr__(self) -> str:
        parts = [f"{c}*{lbl}" for c, lbl in zip(self.coords, self.algebra.labels) if not c.is_zero()]
        return "(" + (" + ".join(parts) if parts else "0") + ")"


class CompositionAlgebra:
    def __init__(
        self,
        field: Field,
        tag: str,
        params: Dict[str, Any],
        labels: List[str],
        table: Dict[Tuple[int, int], List[Tuple[int, Scalar]]],
        conj_matrix: linalg.Matrix,
        unit: Sequence[Scalar],
        half: Optional["CompositionAlgebra"] = None,
        mu: Optional[Scalar] = None,
    ):
        self.field = field
        self.tag = tag
        self.params = dict(params)
        self.labels = list(labels)
        self.dim = len(labels)
        self.half = half
        self.mu = mu
        # table[(i, j)] = [(k, c), ...]  <=>  b_i b_j = sum c * b_k
        self.table = {key: list(v) for key, v in table.items() if v}
        self.conj_matrix = conj_matrix
        self._rows: Dict[int, List[Tuple[int, int, Scalar]]] = {}
        for (i, j), entries in self.table.items():
            for k, c in entries:
                self._rows.setdefault(i, []).append((j, k, c))
        self.unit = CompElem(self, unit)
        self._unit_index = max(i for i, u in enumerate(unit) if not u.is_zero())
        self.trace_vector = [self._basis_trace(i) for i in range(self.dim)]
        self.bilinear_gram: linalg.Matrix = [
            [self._trace_raw(self.mul(self.basis(i), self.conj(self.basis(j)))) for j in range(self.dim)]
            for i in range(self.dim)
        ]
        half_ = field.one / 2
        self.norm_gram: linalg.Matrix = [[b * half_ for b in row] for row in self.bilinear_gram]

    # ---------------------------
    # идентичность
    # ---------------------------
    @property
    def key(self) -> Tuple:
        return (self.tag, tuple(sorted((k, str(v)) for k, v in self.params.items())), self.field.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CompositionAlgebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def label(self) -> str:
        if not self.params:
            return f"{self.tag}/{self.field.label()}"
        args = ",".join(str(self.params[k]) for k in sorted(self.params))
        return f"{self.tag}({args})/{self.field.label()}"

    def __repr__(self) -> str:
        return self.label()

    # ---------------------------
    # элементы
    # ---------------------------
    def element(self, coords: Sequence[Any]) -> CompElem:
        return CompElem(self, [self.field(c) for c in coords])

    def zero(self) -> CompElem:
        return CompElem(self, [self.field.zero] * self.dim)

    def scalar(self, s: Any) -> CompElem:
        """s * e: вложение поля в алгебру."""
        return self.field(s) * self.unit

    def basis(self, i: int) -> CompElem:
        return CompElem(self, [self.field.one if k == i else self.field.zero for k in range(self.dim)])

    def random(self, rng) -> CompElem:
        return CompElem(self, [self.field.random(rng) for _ in range(self.dim)])

    def random_trace0(self, rng) -> CompElem:
        out = self.zero()
        for b in trace0_basis(self):
            out = out + self.field.random(rng) * b
        return out

    def elements(self) -> Iterator[CompElem]:
        vals = list(self.field.elements())
        for combo in itertools.product(vals, repeat=self.dim):
            yield CompElem(self, combo)

    # ---------------------------
    # операции
    # ---------------------------
    def mul(self, x: CompElem, y: CompElem) -> CompElem:
        if x.algebra != self or y.algebra != self:
            raise DescriptorMismatch("умножение элементов разных алгебр")
        acc = [self.field.zero] * self.dim
        ys = y.coords
        for i, xi in enumerate(x.coords):
            if xi.is_zero():
                continue
            for j, k, c in self._rows.get(i, ()):
                yj = ys[j]
                if yj.is_zero():
                    continue
                acc[k] = acc[k] + c * xi * yj
        return CompElem(self, acc)

    def conj(self, x: CompElem) -> CompElem:
        return CompElem(self, linalg.matvec(self.conj_matrix, x.coords))

    def _trace_raw(self, x: CompElem) -> Scalar:
        s = x + self.conj(x)
        return s.coords[self._unit_index] / self.unit.coords[self._unit_index]

    def _basis_trace(self, i: int) -> Scalar:
        return self._trace_raw(self.basis(i))

    def trace(self, x: CompElem) -> Scalar:
        return sum((t * c for t, c in zip(self.trace_vector, x.coords)), self.field.zero)

    def bilinear(self, x: CompElem, y: CompElem) -> Scalar:
        out = self.field.zero
        for i, xi in enumerate(x.coords):
            if xi.is_zero():
                continue
            row = self.bilinear_gram[i]
            for j, yj in enumerate(y.coords):
                if not row[j].is_zero() and not yj.is_zero():
                    out = out + row[j] * xi * yj
        return out

    def norm(self, x: CompElem) -> Scalar:
        n = self.bilinear(x, x) / 2
        if debug_enabled():
            assert self.mul(x, self.conj(x)) == n * self.unit, f"x*conj(x) != n(x)e для {x!r}"
        return n

    def is_split(self) -> bool:
        """Изотропна ли норма (есть ли делители нуля)."""
        from quadform import is_isotropic, TernaryForm

        if self.dim == 1:
            return False
        if self.dim == 2:
            # n = x^2 - eps*y^2 на базисе (1, r); изотропна <=> eps квадрат
            return (-linalg.det(self.norm_gram)).is_square()
        if self.field.is_finite:
            return True
        if self.dim == 8:
            # над Q октонионы расщеплены, если норма не положительно определена
            if self.tag == "octonion-split":
                return True
            return not all(self.params[k].v < 0 for k in ("a", "b", "c"))
        return is_isotropic(TernaryForm(self.field, _trace0_gram(self)))

    def describe(self) -> Dict[str, Any]:
        return {
            "tag": self.tag,
            "params": {k: str(v) for k, v in self.params.items()},
            "field": self.field.descriptor(),
            "dim": self.dim,
            "labels": list(self.labels),
            "unit": [str(c) for c in self.unit.coords],
            "trace": [str(t) for t in self.trace_vector],
            "norm_gram": [[str(v) for v in row] for row in self.norm_gram],
        }


def _trace0_gram(algebra: CompositionAlgebra) -> linalg.Matrix:
    basis = trace0_basis(algebra)
    return [[algebra.bilinear(u, v) / 2 for v in basis] for u in basis]


# =============================
# построения
# =============================
def _check_nonzero(field: Field, **params) -> Dict[str, Scalar]:
    out = {}
    for name, value in params.items():
        s = field(value)
        if s.is_zero():
            raise InvalidParameter(f"структурная константа {name}=0 недопустима")
        out[name] = s
    return out


def unarion(field: Field) -> CompositionAlgebra:
    return CompositionAlgebra(
        field,
        "unarion",
        {},
        ["1"],
        {(0, 0): [(0, field.one)]},
        [[field.one]],
        [field.one],
    )


def _cayley_dickson(base: CompositionAlgebra, mu: Scalar, tag: str, params: Dict[str, Any]) -> CompositionAlgebra:
    field = base.field
    n = base.dim
    zero = base.zero()

    def split(i: int) -> Tuple[CompElem, CompElem]:
        return (base.basis(i), zero) if i < n else (zero, base.basis(i - n))

    table: Dict[Tuple[int, int], List[Tuple[int, Scalar]]] = {}
    for u in range(2 * n):
        a, b = split(u)
        for v in range(2 * n):
            c, d = split(v)
            p = a * c + mu * (d.conj() * b)
            q = d * a + b * c.conj()
            coords = list(p.coords) + list(q.coords)
            table[(u, v)] = [(k, s) for k, s in enumerate(coords) if not s.is_zero()]

    conj = linalg.zeros(field, 2 * n)
    for i in range(n):
        for j in range(n):
            conj[i][j] = base.conj_matrix[i][j]
        conj[n + i][n + i] = -field.one
    unit = list(base.unit.coords) + [field.zero] * n
    return CompositionAlgebra(field, tag, params, _CD_LABELS[2 * n], table, conj, unit, half=base, mu=mu)


def binarion_split(field: Field) -> CompositionAlgebra:
    one, zero = field.one, field.zero
    table = {(0, 0): [(0, one)], (1, 1): [(1, one)]}
    conj = [[zero, one], [one, zero]]
    return CompositionAlgebra(field, "binarion-split", {}, ["e1", "e2"], table, conj, [one, one])


def binarion_quadratic(field: Field, eps: Any) -> CompositionAlgebra:
    p = _check_nonzero(field, eps=eps)
    if p["eps"].is_square():
        raise InvalidParameter(f"eps={p['eps']} — квадрат в {field.label()}: алгебра расщеплена")
    return _cayley_dickson(unarion(field), p["eps"], "binarion-quadratic", {"eps": p["eps"]})


def quaternion(field: Field, a: Any, b: Any) -> CompositionAlgebra:
    p = _check_nonzero(field, a=a, b=b)
    inner = _cayley_dickson(unarion(field), p["a"], "binarion", {"a": p["a"]})
    return _cayley_dickson(inner, p["b"], "quaternion", {"a": p["a"], "b": p["b"]})


def matrix2x2(field: Field) -> CompositionAlgebra:
    one, zero = field.one, field.zero
    # E_ij E_kl = delta_jk E_il, базис E11, E12, E21, E22
    idx = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}
    table: Dict[Tuple[int, int], List[Tuple[int, Scalar]]] = {}
    for (i, j), u in idx.items():
        for (k, l), v in idx.items():
            if j == k:
                table[(u, v)] = [(idx[(i, l)], one)]
    conj = [
        [zero, zero, zero, one],
        [zero, -one, zero, zero],
        [zero, zero, -one, zero],
        [one, zero, zero, zero],
    ]
    return CompositionAlgebra(field, "matrix2x2", {}, ["e11", "e12", "e21", "e22"], table, conj, [one, zero, zero, one])


def octonion(field: Field, a: Any, b: Any, c: Any) -> CompositionAlgebra:
    p = _check_nonzero(field, a=a, b=b, c=c)
    q = quaternion(field, p["a"], p["b"])
    return _cayley_dickson(q, p["c"], "octonion", {"a": p["a"], "b": p["b"], "c": p["c"]})


def octonion_split(field: Field) -> CompositionAlgebra:
    q = quaternion(field, 1, 1)
    return _cayley_dickson(q, field.one, "octonion-split", {})


_BUILDERS = {
    "unarion": (unarion, ()),
    "binarion-split": (binarion_split, ()),
    "binarion-quadratic": (binarion_quadratic, ("eps",)),
    "quaternion": (quaternion, ("a", "b")),
    "matrix2x2": (matrix2x2, ()),
    "octonion": (octonion, ("a", "b", "c")),
    "octonion-split": (octonion_split, ()),
}

PARAM_NAMES: Dict[str, Tuple[str, ...]] = {tag: names for tag, (_, names) in _BUILDERS.items()}

@lru_cache(maxsize=None)
def _build(tag: str, values: Tuple[Scalar, ...], field: Field) -> CompositionAlgebra:
    builder, _ = _BUILDERS[tag]
    algebra = builder(field, *values)
    log.debug("Построена алгебра %s", algebra.label())
    return algebra


def construct(tag: str, params: Optional[Dict[str, Any]], field: Field) -> CompositionAlgebra:
    if tag not in _BUILDERS:
        raise ParseError(f"неизвестный тег алгебры {tag!r}; допустимы: {', '.join(TAGS)}")
    _, names = _BUILDERS[tag]
    params = dict(params or {})
    missing = [n for n in names if n not in params]
    if missing:
        raise ParseError(f"{tag}: не хватает параметров {missing}")
    extra = [n for n in params if n not in names]
    if extra:
        raise ParseError(f"{tag}: лишние параметры {extra}")
    return _build(tag, tuple(field(params[n]) for n in names), field)


def trace0_basis(algebra: CompositionAlgebra) -> List[CompElem]:
    """Базис C^0: b_i - (t_i / t_u) b_u для опорного индекса u."""
    if algebra.dim == 1:
        return []
    cached = getattr(algebra, "_trace0", None)
    if cached is not None:
        return list(cached)
    t = algebra.trace_vector
    u = max(i for i, ti in enumerate(t) if not ti.is_zero())
    out = []
    for i in range(algebra.dim):
        if i == u:
            continue
        out.append(algebra.basis(i) - (t[i] / t[u]) * algebra.basis(u))
    algebra._trace0 = tuple(out)
    return out


# =============================
# проверки
# =============================
@dataclass
class CompositionReport:
    algebra: str
    mode: str
    checked: int = 0
    failures: List[Dict[str, Any]] = dc_field(default_factory=list)
    notes: List[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, **data) -> None:
        if len(self.failures) < 10:
            self.failures.append({"check": check, **{k: repr(v) for k, v in data.items()}})
        else:
            self.failures.append({"check": check})


def _check_pair(rep: CompositionReport, alg: CompositionAlgebra, x: CompElem, y: CompElem) -> None:
    rep.checked += 1
    if alg.norm(x * y) != alg.norm(x) * alg.norm(y):
        rep.fail("n(xy)=n(x)n(y)", x=x, y=y)


def _check_single(rep: CompositionReport, alg: CompositionAlgebra, x: CompElem) -> None:
    e = alg.unit
    xb = x.conj()
    if x + xb != x.trace() * e:
        rep.fail("x+conj(x)=Tr(x)e", x=x)
    if x * xb != x.norm() * e:
        rep.fail("x*conj(x)=n(x)e", x=x)
    if xb.conj() != x:
        rep.fail("conj(conj(x))=x", x=x)
    if e * x != x or x * e != x:
        rep.fail("unit", x=x)


def verify_composition_law(
    algebra: CompositionAlgebra,
    trials: int = 10_000,
    exhaustive: bool = False,
    rng=None,
) -> CompositionReport:
    rep = CompositionReport(algebra=algebra.label(), mode="exhaustive" if exhaustive else f"sampled({trials})")
    if exhaustive:
        elems = list(algebra.elements())
        for x in elems:
            _check_single(rep, algebra, x)
        for x in elems:
            for y in elems:
                _check_pair(rep, algebra, x, y)
    else:
        if rng is None:
            raise InvalidParameter("для выборочной проверки нужен rng")
        for _ in range(trials):
            x, y = algebra.random(rng), algebra.random(rng)
            _check_single(rep, algebra, x)
            _check_pair(rep, algebra, x, y)
    # Tr(xy) = -B(x,y) проверяется только на C^0; в общем случае Tr(xy) = B(x, conj(y))
    basis0 = trace0_basis(algebra)
    for u in basis0:
        for v in basis0:
            if (u * v).trace() != -algebra.bilinear(u, v):
                rep.fail("Tr(xy)=-B(x,y) on C0", x=u, y=v)
    for u in (algebra.basis(i) for i in range(algebra.dim)):
        for v in (algebra.basis(i) for i in range(algebra.dim)):
            if (u * v).trace() != algebra.bilinear(u, v.conj()):
                rep.fail("Tr(xy)=B(x,conj(y))", x=u, y=v)
    rep.notes.append("Tr(xy)=-B(x,y) asserted on C0 only; on all of C the identity is Tr(xy)=B(x,conj y)")
    log.debug("composition-law %s: %d проверок, %d ошибок", rep.algebra, rep.checked, len(rep.failures))
    return rep


def _associator(x: CompElem, y: CompElem, z: CompElem) -> CompElem:
    return (x * y) * z - x * (y * z)


def is_associative(algebra: CompositionAlgebra) -> bool:
    """Точная проверка: ассоциатор трилинеен, достаточно базисных троек."""
    b = [algebra.basis(i) for i in range(algebra.dim)]
    return all(_associator(x, y, z).is_zero() for x in b for y in b for z in b)


def is_alternative(algebra: CompositionAlgebra) -> bool:
    """Ассоциатор кососимметричен (линеаризация альтернативности, char != 2)."""
    b = [algebra.basis(i) for i in range(algebra.dim)]
    for x in b:
        for y in b:
            for z in b:
                a = _associator(x, y, z)
                if not (a + _associator(y, x, z)).is_zero():
                    return False
                if not (a + _associator(x, z, y)).is_zero():
                    return False
    return True


# =============================
# автоморфизмы
# =============================
class Automorphism:
    """Матрица g (столбцы: образы базиса), проверенная на таблице умножения."""

    def __init__(self, algebra: CompositionAlgebra, matrix: linalg.Matrix, verify: bool = True):
        self.algebra = algebra
        self.matrix = [list(row) for row in matrix]
        if verify:
            self._verify()

    def _verify(self) -> None:
        alg = self.algebra
        if len(self.matrix) != alg.dim or any(len(r) != alg.dim for r in self.matrix):
            raise NotAnAutomorphism(f"матрица не {alg.dim}x{alg.dim}")
        if linalg.det(self.matrix).is_zero():
            raise NotAnAutomorphism("вырожденная матрица")
        images = [self(alg.basis(i)) for i in range(alg.dim)]
        for i in range(alg.dim):
            for j in range(alg.dim):
                if self(alg.basis(i) * alg.basis(j)) != images[i] * images[j]:
                    raise NotAnAutomorphism(f"g(b{i} b{j}) != g(b{i}) g(b{j})")

    def __call__(self, x: CompElem) -> CompElem:
        return CompElem(self.algebra, linalg.matvec(self.matrix, x.coords))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self ∘ other."""
        return Automorphism(self.algebra, linalg.matmul(self.matrix, other.matrix), verify=False)

    def is_identity(self) -> bool:
        return self.matrix == linalg.identity(self.algebra.field, self.algebra.dim)

    def to_rows(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.matrix]


def _from_map(algebra: CompositionAlgebra, fn, verify: bool = True) -> Automorphism:
    cols = [fn(algebra.basis(i)).coords for i in range(algebra.dim)]
    return Automorphism(algebra, linalg.transpose([list(c) for c in cols]), verify=verify)


def identity_automorphism(algebra: CompositionAlgebra) -> Automorphism:
    return Automorphism(algebra, linalg.identity(algebra.field, algebra.dim), verify=False)


def conjugation_automorphism(algebra: CompositionAlgebra) -> Automorphism:
    if algebra.dim != 2:
        raise WrongDimension("сопряжение — автоморфизм только в коммутативном случае dim=2")
    return Automorphism(algebra, algebra.conj_matrix)


def _inverse(x: CompElem) -> CompElem:
    n = x.norm()
    if n.is_zero():
        raise InvalidParameter(f"{x!r} необратим (n=0)")
    return n.inv() * x.conj()


def inner_automorphism(u: CompElem) -> Automorphism:
    alg = u.algebra
    if alg.dim > 4:
        raise WrongDimension("внутренние автоморфизмы определены для ассоциативных алгебр (dim <= 4)")
    ui = _inverse(u)
    return _from_map(alg, lambda x: u * x * ui)


def _halves(algebra: CompositionAlgebra, x: CompElem) -> Tuple[CompElem, CompElem]:
    n = algebra.half.dim
    return CompElem(algebra.half, x.coords[:n]), CompElem(algebra.half, x.coords[n:])


def _join(algebra: CompositionAlgebra, p: CompElem, q: CompElem) -> CompElem:
    return CompElem(algebra, list(p.coords) + list(q.coords))


def doubled_inner_automorphism(algebra: CompositionAlgebra, u: CompElem) -> Automorphism:
    """(p, q) -> (u p u^-1, u q u^-1) для u из ассоциативной половины удвоения."""
    if algebra.half is None or algebra.dim != 8:
        raise WrongDimension("нужно удвоение Кэли–Диксона размерности 8")
    ui = _inverse(u)

    def fn(x: CompElem) -> CompElem:
        p, q = _halves(algebra, x)
        return _join(algebra, u * p * ui, u * q * ui)

    return _from_map(algebra, fn)


def twist_automorphism(algebra: CompositionAlgebra, w: CompElem) -> Automorphism:
    """(p, q) -> (p, w q) при n(w) = 1."""
    if algebra.half is None or algebra.dim != 8:
        raise WrongDimension("нужно удвоение Кэли–Диксона размерности 8")
    if w.norm() != algebra.field.one:
        raise InvalidParameter("twist требует n(w) = 1")

    def fn(x: CompElem) -> CompElem:
        p, q = _halves(algebra, x)
        return _join(algebra, p, w * q)

    return _from_map(algebra, fn)


def _random_invertible(algebra: CompositionAlgebra, rng) -> CompElem:
    while True:
        u = algebra.random(rng)
        if not u.norm().is_zero():
            return u


def random_automorphism(algebra: CompositionAlgebra, rng) -> Automorphism:
    if algebra.dim == 1:
        return identity_automorphism(algebra)
    if algebra.dim == 2:
        if int(rng.integers(0, 2)):
            return conjugation_automorphism(algebra)
        return identity_automorphism(algebra)
    if algebra.dim == 4:
        return inner_automorphism(_random_invertible(algebra, rng))
    half = algebra.half
    u = _random_invertible(half, rng)
    v = _random_invertible(half, rng)
    w = v.norm().inv() * (v * v)
    return doubled_inner_automorphism(algebra, u).compose(twist_automorphism(algebra, w))
