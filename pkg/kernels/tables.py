# kernels/tables.py
# Алгебра над F_p -> массивы int64 для ядер numba.
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from errors import FieldError, UsageError
from algebra.composition import CompositionAlgebra, trace0_basis
from algebra.freudenthal import FreudenthalElem, apply, w_basis
from algebra.jordan import Gl3Elem, JordanElem, act, act_dual, jordan_mul

__all__ = [
    "AlgebraTables",
    "build_tables",
    "inv_mod_py",
    "jordan_to_array",
    "array_to_jordan",
    "w_to_array",
    "array_to_w",
    "slice_slots",
    "jordan_basis",
    "jordan_mul_table",
    "linear_matrix",
    "word_matrix",
    "levi_matrices",
]


def inv_mod_py(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


@dataclass
class AlgebraTables:
    p: int
    n: int
    alg: Tuple[np.ndarray, ...]   # (mi, mj, mk, mc, conj, bform, tr)
    inv2: int
    inv6: int
    t0: np.ndarray                # базис C^0: (n-1) x n
    G0: np.ndarray                # 1/2 Tr(e_a e_b) на C^0
    T: np.ndarray                 # Tr((e_a e_b) e_c) на C^0

    @property
    def jd(self) -> int:
        return 3 + 3 * self.n

    @property
    def wd(self) -> int:
        return 2 + 2 * self.jd


def build_tables(algebra: CompositionAlgebra) -> AlgebraTables:
    field = algebra.field
    if not field.is_prime_field:
        raise FieldError(f"ядра работают только над простым полем F_p, а не над {field.label()}")
    p = field.p
    n = algebra.dim
    mi, mj, mk, mc = [], [], [], []
    for (i, j), entries in sorted(algebra.table.items()):
        for k, c in entries:
            mi.append(i)
            mj.append(j)
            mk.append(k)
            mc.append(c.residue)
    conj = np.array([[v.residue for v in row] for row in algebra.conj_matrix], dtype=np.int64)
    bform = np.array([[v.residue for v in row] for row in algebra.bilinear_gram], dtype=np.int64)
    tr = np.array([t.residue for t in algebra.trace_vector], dtype=np.int64)
    alg = (
        np.array(mi, dtype=np.int64),
        np.array(mj, dtype=np.int64),
        np.array(mk, dtype=np.int64),
        np.array(mc, dtype=np.int64),
        conj,
        bform,
        tr,
    )
    basis0 = trace0_basis(algebra)
    m = len(basis0)
    t0 = np.array([[c.residue for c in b.coords] for b in basis0], dtype=np.int64).reshape(m, n)
    G0 = np.zeros((m, m), dtype=np.int64)
    T = np.zeros((m, m, m), dtype=np.int64)
    for a, ea in enumerate(basis0):
        for b, eb in enumerate(basis0):
            prod = ea * eb
            G0[a, b] = (prod.trace() / 2).residue
            for c, ec in enumerate(basis0):
                T[a, b, c] = (prod * ec).trace().residue
    return AlgebraTables(
        p=p,
        n=n,
        alg=alg,
        inv2=inv_mod_py(2, p),
        inv6=inv_mod_py(6, p),
        t0=t0,
        G0=G0,
        T=T,
    )


# ---------------------------
# элементы <-> массивы
# ---------------------------
def jordan_to_array(x: JordanElem) -> np.ndarray:
    return np.array([s.residue for s in x.to_vector()], dtype=np.int64)


def array_to_jordan(algebra: CompositionAlgebra, arr: Sequence[int]) -> JordanElem:
    f = algebra.field
    return JordanElem.from_vector(algebra, [f(int(v)) for v in arr])


def w_to_array(v: FreudenthalElem) -> np.ndarray:
    return np.array([s.residue for s in v.to_vector()], dtype=np.int64)


def array_to_w(algebra: CompositionAlgebra, arr: Sequence[int]) -> FreudenthalElem:
    f = algebra.field
    return FreudenthalElem.from_vector(algebra, [f(int(v)) for v in arr])


def slice_slots(n: int, kind: str) -> Tuple[np.ndarray, np.ndarray]:
    """(slots, base): позиции координат среза внутри вектора W и фиксированная часть."""
    jd = 3 + 3 * n
    wd = 2 + 2 * jd
    base = np.zeros(wd, dtype=np.int64)
    if kind == "diagonal":
        # (a, diag b, diag c, d)
        slots: List[int] = [0, 1, 2, 3, 1 + jd, 2 + jd, 3 + jd, 1 + 2 * jd]
    elif kind == "special":
        # (1, 0, c, d)
        base[0] = 1
        slots = list(range(1 + jd, 1 + 2 * jd)) + [1 + 2 * jd]
    elif kind == "wrank1":
        # (a, s*E11, t*E11, d)
        slots = [0, 1, 1 + jd, 1 + 2 * jd]
    elif kind == "full":
        slots = list(range(wd))
    else:
        raise UsageError(f"неизвестный срез {kind!r}: diagonal | special | wrank1 | full")
    return np.array(slots, dtype=np.int64), base


# ---------------------------
# линейные отображения -> матрицы над F_p
# ---------------------------
def _require_prime(algebra: CompositionAlgebra) -> None:
    if not algebra.field.is_prime_field:
        raise FieldError(f"матрицы F_p строятся только над простым полем, а не над {algebra.field.label()}")


def jordan_basis(algebra: CompositionAlgebra) -> List[JordanElem]:
    f = algebra.field
    n = 3 + 3 * algebra.dim
    return [JordanElem.from_vector(algebra, [f.one if k == i else f.zero for k in range(n)]) for i in range(n)]


_JT_CACHE: Dict[Tuple, Tuple[np.ndarray, ...]] = {}


def jordan_mul_table(algebra: CompositionAlgebra) -> Tuple[np.ndarray, ...]:
    """(ji, jj, jk, jc): e_ji o e_jj += jc * e_jk; симметрична по (ji, jj)."""
    _require_prime(algebra)
    if algebra.key not in _JT_CACHE:
        basis = jordan_basis(algebra)
        ji: List[int] = []
        jj: List[int] = []
        jk: List[int] = []
        jc: List[int] = []
        for i, ei in enumerate(basis):
            for j in range(i, len(basis)):
                prod = jordan_mul(ei, basis[j])
                for k, s in enumerate(prod.to_vector()):
                    if s.is_zero():
                        continue
                    for a, b in ((i, j),) if i == j else ((i, j), (j, i)):
                        ji.append(a)
                        jj.append(b)
                        jk.append(k)
                        jc.append(s.residue)
        _JT_CACHE[algebra.key] = tuple(np.array(col, dtype=np.int64) for col in (ji, jj, jk, jc))
    return _JT_CACHE[algebra.key]


def linear_matrix(fn: Callable, basis: Sequence) -> np.ndarray:
    """Столбец i: вычеты fn(basis[i])."""
    cols = [[s.residue for s in fn(e).to_vector()] for e in basis]
    return np.ascontiguousarray(np.array(cols, dtype=np.int64).T)


def word_matrix(word, algebra: CompositionAlgebra) -> np.ndarray:
    """Матрица атома или слова на W в базисе w_basis."""
    _require_prime(algebra)
    return linear_matrix(lambda v: apply(word, v), w_basis(algebra))


def levi_matrices(algebra: CompositionAlgebra, samples: Sequence) -> Tuple[np.ndarray, np.ndarray]:
    """(acts, duals) формы (1+S, jd, jd): сначала тождество, затем act и act_dual каждого (g, h)."""
    _require_prime(algebra)
    basis = jordan_basis(algebra)
    jd = len(basis)
    acts = [np.eye(jd, dtype=np.int64)]
    duals = [np.eye(jd, dtype=np.int64)]
    for item in samples:
        g, h = item.g, item.h
        h = h if h is not None else Gl3Elem.identity(algebra.field)
        acts.append(linear_matrix(lambda X: act(g, h, X), basis))
        duals.append(linear_matrix(lambda X: act_dual(g, h, X), basis))
    return np.ascontiguousarray(np.stack(acts)), np.ascontiguousarray(np.stack(duals))
