# algebra/freudenthal.py
"""
Пространство Фрейденталя W_C = F + J + J + F.

Содержит симплектическую и квартичную формы, 4-линейную форму (v,v,v,v) = 2q(v),
отображение flat, ранг 0..4, критерий ранга 1 и образующие группы подобий:
n(x), nbar(x), s_lambda, s*_lambda, инволюцию и Леви-элементы Aut(C) x GL3.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import DescriptorMismatch, InvalidParameter, SimilitudeError
from algebra import linalg
from algebra.composition import Automorphism, CompositionAlgebra, random_automorphism
from algebra.jordan import (
    Gl3Elem,
    JordanElem,
    act,
    act_dual,
    cross,
    jordan_identity,
    jordan_mul,
    jordan_zero,
    norm_N,
    random_gl3,
    random_jordan,
    sharp,
    trace_pairing,
)
from algebra.scalar import Scalar

log = logging.getLogger(__name__)

__all__ = [
    "FreudenthalElem",
    "Atom",
    "GeneratorWord",
    "w_zero",
    "w_basis",
    "random_w",
    "special_rank1",
    "symplectic",
    "quartic",
    "fourlinear",
    "flat",
    "rank_w",
    "perp_basis",
    "rank1_criterion_GS",
    "calibrate_flat_duality",
    "n_atom",
    "nbar_atom",
    "s_atom",
    "sstar_atom",
    "involution",
    "levi",
    "aut",
    "gl3",
    "apply",
    "similitude_factor",
    "random_levi",
    "random_word",
]


class FreudenthalElem:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Any, b: JordanElem, c: JordanElem, d: Any):
        if b.algebra != c.algebra:
            raise DescriptorMismatch("b и c над разными алгебрами")
        f = b.field
        self.a = f(a)
        self.b = b
        self.c = c
        self.d = f(d)

    @property
    def algebra(self) -> CompositionAlgebra:
        return self.b.algebra

    @property
    def field(self):
        return self.b.field

    def _same(self, other: "FreudenthalElem") -> None:
        if other.algebra != self.algebra:
            raise DescriptorMismatch(f"W над {self.algebra.label()} и {other.algebra.label()}")

    def __add__(self, other: "FreudenthalElem") -> "FreudenthalElem":
        self._same(other)
        return FreudenthalElem(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "FreudenthalElem") -> "FreudenthalElem":
        self._same(other)
        return FreudenthalElem(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "FreudenthalElem":
        return FreudenthalElem(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, s) -> "FreudenthalElem":
        s = self.field(s)
        return FreudenthalElem(s * self.a, s * self.b, s * self.c, s * self.d)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreudenthalElem):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.d))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.d.is_zero() and self.b.is_zero() and self.c.is_zero()

    def to_vector(self) -> List[Scalar]:
        return [self.a] + self.b.to_vector() + self.c.to_vector() + [self.d]

    @classmethod
    def from_vector(cls, algebra: CompositionAlgebra, vec: Sequence[Scalar]) -> "FreudenthalElem":
        jd = 3 + 3 * algebra.dim
        if len(vec) != 2 + 2 * jd:
            raise InvalidParameter(f"вектор W длины {len(vec)}, ожидалось {2 + 2 * jd}")
        return cls(
            vec[0],
            JordanElem.from_vector(algebra, vec[1: 1 + jd]),
            JordanElem.from_vector(algebra, vec[1 + jd: 1 + 2 * jd]),
            vec[-1],
        )

    def __repr__(self) -> str:
        return f"W(a={self.a}, b={self.b!r}, c={self.c!r}, d={self.d})"


# ---------------------------
# конструкторы
# ---------------------------
def w_zero(algebra: CompositionAlgebra) -> FreudenthalElem:
    z = jordan_zero(algebra)
    return FreudenthalElem(algebra.field.zero, z, z, algebra.field.zero)


def w_dim(algebra: CompositionAlgebra) -> int:
    return 8 + 6 * algebra.dim


_BASIS_CACHE: Dict[Tuple, List[FreudenthalElem]] = {}


def w_basis(algebra: CompositionAlgebra) -> List[FreudenthalElem]:
    if algebra.key not in _BASIS_CACHE:
        f = algebra.field
        n = w_dim(algebra)
        _BASIS_CACHE[algebra.key] = [
            FreudenthalElem.from_vector(algebra, [f.one if k == i else f.zero for k in range(n)])
            for i in range(n)
        ]
    return list(_BASIS_CACHE[algebra.key])


def random_w(algebra: CompositionAlgebra, rng) -> FreudenthalElem:
    f = algebra.field
    return FreudenthalElem(f.random(rng), random_jordan(algebra, rng), random_jordan(algebra, rng), f.random(rng))


def special_rank1(b: JordanElem) -> FreudenthalElem:
    """(1, b, b#, N(b)): элемент ранга 1 с a = 1."""
    return FreudenthalElem(b.field.one, b, sharp(b), norm_N(b))


# =============================
# формы
# =============================
def symplectic(v: FreudenthalElem, w: FreudenthalElem) -> Scalar:
    v._same(w)
    return v.a * w.d - trace_pairing(v.b, w.c) + trace_pairing(v.c, w.b) - v.d * w.a


def _t(v: FreudenthalElem) -> Scalar:
    return v.a * v.d - trace_pairing(v.b, v.c)


def quartic(v: FreudenthalElem) -> Scalar:
    t = _t(v)
    return (
        t * t
        + 4 * v.a * norm_N(v.c)
        + 4 * v.d * norm_N(v.b)
        - 4 * trace_pairing(sharp(v.b), sharp(v.c))
    )


def fourlinear(v1: FreudenthalElem, v2: FreudenthalElem, v3: FreudenthalElem, v4: FreudenthalElem) -> Scalar:
    """Полная поляризация q с нормировкой (v,v,v,v) = 2q(v)."""
    vs = (v1, v2, v3, v4)
    f = v1.field
    out = f.zero
    for r in range(1, 5):
        sign = 1 if (4 - r) % 2 == 0 else -1
        for subset in itertools.combinations(vs, r):
            s = subset[0]
            for u in subset[1:]:
                s = s + u
            out = out + sign * quartic(s)
    return out / 12


def flat(v: FreudenthalElem) -> FreudenthalElem:
    a, b, c, d = v.a, v.b, v.c, v.d
    t = _t(v)
    bs, cs = sharp(b), sharp(c)
    return FreudenthalElem(
        -a * t - 2 * norm_N(b),
        -2 * cross(c, bs) + 2 * a * cs - t * b,
        2 * cross(b, cs) - 2 * d * bs + t * c,
        d * t + 2 * norm_N(c),
    )


def calibrate_flat_duality(algebra: CompositionAlgebra) -> Scalar:
    """kappa в <v#flat, w> = kappa (v,v,v,w) по элементу ранга 4 (1,0,0,1)."""
    f = algebra.field
    z = jordan_zero(algebra)
    v = FreudenthalElem(f.one, z, z, f.one)
    kappa = symplectic(flat(v), v) / fourlinear(v, v, v, v)
    log.debug("flat duality %s: kappa=%s", algebra.label(), kappa)
    return kappa


# =============================
# ранг
# =============================
def perp_basis(v: FreudenthalElem) -> List[FreudenthalElem]:
    """Базис v^perp: e_i - (l_i / l_k) e_k, l_i = <v, e_i>, k первый ненулевой."""
    basis = w_basis(v.algebra)
    ell = [symplectic(v, e) for e in basis]
    k = next((i for i, li in enumerate(ell) if not li.is_zero()), None)
    if k is None:
        raise InvalidParameter("v = 0: ортогональное дополнение — всё W")
    return [basis[i] - (ell[i] / ell[k]) * basis[k] for i in range(len(basis)) if i != k]


def _perp_form_vanishes(v: FreudenthalElem) -> bool:
    """(v,v,w,w') = 0 на v^perp; предполагается q(v) = 0."""
    sixth = v.field.one / 6

    def Q(w: FreudenthalElem) -> Scalar:
        # (v,v,w,w) = [q(v+w) + q(v-w) - 2q(v) - 2q(w)] / 6
        return (quartic(v + w) + quartic(v - w) - 2 * quartic(w)) * sixth

    ws = perp_basis(v)
    diag = []
    for w in ws:
        qw = Q(w)
        if not qw.is_zero():
            return False
        diag.append(qw)
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            if not (Q(ws[i] + ws[j]) - diag[i] - diag[j]).is_zero():
                return False
    return True


def rank_w(v: FreudenthalElem) -> int:
    if v.is_zero():
        return 0
    if not quartic(v).is_zero():
        return 4
    if not flat(v).is_zero():
        return 3
    return 1 if _perp_form_vanishes(v) else 2


def rank1_criterion_GS(v: FreudenthalElem, levi_samples: Iterable = ()) -> bool:
    """b# = ac, c# = db и ad*I = h(b) * h~(c) для h = 1 и каждого (g, h) из выборки."""
    if v.is_zero():
        return False
    a, b, c, d = v.a, v.b, v.c, v.d
    if sharp(b) != a * c or sharp(c) != d * b:
        return False
    target = (a * d) * jordan_identity(v.algebra)
    pairs = [(None, Gl3Elem.identity(v.field))]
    for item in levi_samples:
        pairs.append((item.g, item.h) if isinstance(item, Atom) else tuple(item))
    for g, h in pairs:
        h = h if h is not None else Gl3Elem.identity(v.field)
        if jordan_mul(act(g, h, b), act_dual(g, h, c)) != target:
            return False
    return True


# =============================
# образующие
# =============================
ATOM_KINDS = ("n", "nbar", "s", "sstar", "involution", "levi")


@dataclass(frozen=True)
class Atom:
    kind: str
    x: Optional[JordanElem] = None
    lam: Optional[Scalar] = None
    g: Optional[Automorphism] = None
    h: Optional[Gl3Elem] = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise InvalidParameter(f"неизвестный атом {self.kind!r}")
        if self.kind in ("n", "nbar") and self.x is None:
            raise InvalidParameter(f"атом {self.kind} требует x")
        if self.kind in ("s", "sstar"):
            if self.lam is None or self.lam.is_zero():
                raise InvalidParameter(f"атом {self.kind}: lambda должно быть ненулевым")

    def declared_factor(self, field) -> Scalar:
        if self.kind in ("s", "sstar"):
            return self.lam
        return field.one

    def inverse(self) -> List["Atom"]:
        if self.kind in ("n", "nbar"):
            return [Atom(self.kind, x=-self.x)]
        if self.kind in ("s", "sstar"):
            return [Atom(self.kind, lam=self.lam.inv())]
        if self.kind == "involution":
            # iota^-1 = -iota = iota^3
            return [self, self, self]
        g_inv = None
        if self.g is not None:
            g_inv = Automorphism(self.g.algebra, linalg.inverse(self.g.matrix), verify=False)
        h_inv = Gl3Elem(self.h.inverse) if self.h is not None else None
        return [Atom("levi", g=g_inv, h=h_inv)]


def n_atom(x: JordanElem) -> Atom:
    return Atom("n", x=x)


def nbar_atom(x: JordanElem) -> Atom:
    return Atom("nbar", x=x)


def s_atom(lam: Scalar) -> Atom:
    return Atom("s", lam=lam)


def sstar_atom(lam: Scalar) -> Atom:
    return Atom("sstar", lam=lam)


def involution() -> Atom:
    return Atom("involution")


def levi(g: Optional[Automorphism], h: Optional[Gl3Elem]) -> Atom:
    return Atom("levi", g=g, h=h)


def aut(g: Automorphism) -> Atom:
    return Atom("levi", g=g)


def gl3(h: Gl3Elem) -> Atom:
    return Atom("levi", h=h)


def _apply_n(x: JordanElem, v: FreudenthalElem) -> FreudenthalElem:
    a, b, c, d = v.a, v.b, v.c, v.d
    xs = sharp(x)
    return FreudenthalElem(
        a,
        b + a * x,
        c + cross(b, x) + a * xs,
        d + trace_pairing(c, x) + trace_pairing(b, xs) + a * norm_N(x),
    )


def _apply_nbar(x: JordanElem, v: FreudenthalElem) -> FreudenthalElem:
    a, b, c, d = v.a, v.b, v.c, v.d
    xs = sharp(x)
    return FreudenthalElem(
        a + trace_pairing(b, x) + trace_pairing(c, xs) + d * norm_N(x),
        b + cross(c, x) + d * xs,
        c + d * x,
        d,
    )


def apply_atom(atom: Atom, v: FreudenthalElem) -> FreudenthalElem:
    k = atom.kind
    if k == "n":
        return _apply_n(atom.x, v)
    if k == "nbar":
        return _apply_nbar(atom.x, v)
    if k == "s":
        lam = atom.lam
        return FreudenthalElem(lam * lam * v.a, lam * v.b, v.c, lam.inv() * v.d)
    if k == "sstar":
        lam = atom.lam
        return FreudenthalElem(lam.inv() * v.a, v.b, lam * v.c, lam * lam * v.d)
    if k == "involution":
        return FreudenthalElem(-v.d, v.c, -v.b, v.a)
    h = atom.h if atom.h is not None else Gl3Elem.identity(v.field)
    lam = h.det
    return FreudenthalElem(lam * v.a, act(atom.g, h, v.b), act_dual(atom.g, h, v.c), lam.inv() * v.d)


class GeneratorWord:
    """Слово из атомов; применяется слева направо."""

    def __init__(self, atoms: Sequence[Atom] = ()):
        self.atoms = list(atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __call__(self, v: FreudenthalElem) -> FreudenthalElem:
        for atom in self.atoms:
            v = apply_atom(atom, v)
        return v

    def then(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.atoms + other.atoms)

    def inverse(self) -> "GeneratorWord":
        out: List[Atom] = []
        for atom in reversed(self.atoms):
            out.extend(atom.inverse())
        return GeneratorWord(out)

    def declared_factor(self, field) -> Scalar:
        nu = field.one
        for atom in self.atoms:
            nu = nu * atom.declared_factor(field)
        return nu

    def __repr__(self) -> str:
        return "Word[" + " ".join(a.kind for a in self.atoms) + "]"


def apply(word: GeneratorWord, v: FreudenthalElem) -> FreudenthalElem:
    if isinstance(word, Atom):
        word = GeneratorWord([word])
    return word(v)


def similitude_factor(
    word: GeneratorWord,
    algebra: CompositionAlgebra,
    rng=None,
    samples: int = 32,
) -> Scalar:
    """nu из <g e_a, g e_d>, затем <gv,gw> = nu<v,w> и q(gv) = nu^2 q(v) на случайных парах."""
    if isinstance(word, Atom):
        word = GeneratorWord([word])
    if rng is None:
        rng = np.random.Generator(np.random.Philox(0))
    f = algebra.field
    z = jordan_zero(algebra)
    e_a = FreudenthalElem(f.one, z, z, f.zero)
    e_d = FreudenthalElem(f.zero, z, z, f.one)
    nu = symplectic(word(e_a), word(e_d))
    for _ in range(samples):
        v, w = random_w(algebra, rng), random_w(algebra, rng)
        gv, gw = word(v), word(w)
        if symplectic(gv, gw) != nu * symplectic(v, w):
            raise SimilitudeError(f"{word!r}: <gv,gw> != nu<v,w> при nu={nu}")
        if quartic(gv) != nu * nu * quartic(v):
            raise SimilitudeError(f"{word!r}: q(gv) != nu^2 q(v) при nu={nu}")
    return nu


# ---------------------------
# случайные слова
# ---------------------------
def random_levi(algebra: CompositionAlgebra, rng) -> Atom:
    return Atom("levi", g=random_automorphism(algebra, rng), h=random_gl3(algebra.field, rng))


def random_atom(algebra: CompositionAlgebra, rng) -> Atom:
    kind = ATOM_KINDS[int(rng.integers(0, len(ATOM_KINDS)))]
    if kind in ("n", "nbar"):
        return Atom(kind, x=random_jordan(algebra, rng))
    if kind in ("s", "sstar"):
        return Atom(kind, lam=algebra.field.random_nonzero(rng))
    if kind == "involution":
        return involution()
    return random_levi(algebra, rng)


def random_word(algebra: CompositionAlgebra, rng, length: int = 3) -> GeneratorWord:
    return GeneratorWord([random_atom(algebra, rng) for _ in range(length)])
