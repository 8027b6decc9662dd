# suites.py
"""
Именованные наборы проверок для `verify`.

Каждый набор есть список проверок (имя, функция -> Outcome). Проверки выполняются
по очереди; исключение внутри проверки логируется и засчитывается как провал
с текстом исключения в качестве контрпримера, после чего прогон продолжается.
"""
from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import codec
from errors import DomainError, NonSplitAlgebra, UsageError
from fkit_config import FkitConfig
from algebra import dimension_table, linalg
from algebra.composition import (
    CompositionAlgebra,
    is_alternative,
    is_associative,
    trace0_basis,
    verify_composition_law,
)
from algebra.freudenthal import (
    Atom,
    FreudenthalElem,
    GeneratorWord,
    apply_atom,
    calibrate_flat_duality,
    flat,
    fourlinear,
    involution,
    n_atom,
    nbar_atom,
    random_levi,
    random_w,
    random_word,
    rank1_criterion_GS,
    rank_w,
    s_atom,
    similitude_factor,
    special_rank1,
    sstar_atom,
    symplectic,
    w_dim,
    w_zero,
)
from algebra.jordan import (
    J,
    JordanElem,
    act,
    act_dual,
    cross,
    diag,
    jordan_dim,
    jordan_identity,
    jordan_mul,
    jordan_zero,
    norm_N,
    random_gl3,
    random_jordan,
    rank_jordan,
    sharp,
    trace_pairing,
    trilinear,
)
from algebra.composition import random_automorphism
from algebra.scalar import Field, parse_field
from census import (
    expected_rank0_rank1,
    fiber_census,
    freudenthal_census,
    make_rng,
    rank0_census,
    so3_elements,
    so3_order,
)
from fibers import (
    F_map,
    fiber_membership,
    fiber_target,
    nilpotent_pair_oracle,
    orbit_of_witness,
    rank0_fiber_predicate,
    rank1_lift,
    rank3_fiber_test,
    sextic_check,
    triple_gram,
)
from kernels.pool import run_partitioned
from kernels.ffield import matvec
from kernels.scans import (
    j_rank_change_rows,
    j_rank_rows,
    sextic_scan,
    similitude_rows,
    w_criterion_rows,
    w_criterion_slice_scan,
    w_rank_change_rows,
    w_rank_rows,
)
from kernels.tables import (
    AlgebraTables,
    array_to_jordan,
    array_to_w,
    build_tables,
    jordan_mul_table,
    jordan_to_array,
    levi_matrices,
    slice_slots,
    w_to_array,
    word_matrix,
)
from quadform import (
    INF,
    diagonal_form,
    hilbert_symbol,
    hilbert_symbol_bruteforce,
    is_isotropic,
    norm_form_on_trace0,
    ternary_similar,
)

log = logging.getLogger(__name__)

__all__ = [
    "SuiteDescriptor",
    "CheckResult",
    "SuiteReport",
    "SUITE_NAMES",
    "run_suite",
    "default_algebras",
]

DEFAULT_FIELDS = ("Q", "Fp:5")

DEFAULT_ALGEBRAS = {
    "Q": (
        "unarion",
        "binarion-split",
        "binarion-quadratic:2",
        "quaternion:-1,-1",
        "matrix2x2",
        "octonion:-1,-1,-1",
        "octonion-split",
    ),
    "Fp": (
        "unarion",
        "binarion-split",
        "binarion-quadratic:2",
        "quaternion:1,1",
        "matrix2x2",
        "octonion:-1,-1,-1",
        "octonion-split",
    ),
    "Fp2": (
        "unarion",
        "binarion-split",
        "quaternion:1,1",
        "octonion-split",
    ),
}


# ---------------------------
# типы
# ---------------------------
@dataclass
class SuiteDescriptor:
    name: str
    trials: int
    seed: int
    fields: List[Field]
    algebras: List[str] = dc_field(default_factory=list)
    exhaustive: bool = False
    workers: int = 1
    levi_samples: int = 64
    exhaustive_limit: int = 10**8
    report_format: str = "json"

    def __post_init__(self):
        if self.name not in SUITE_NAMES:
            raise UsageError(f"неизвестный набор {self.name!r}; допустимы: {', '.join(SUITE_NAMES)}")
        if self.trials < 1:
            raise UsageError("trials должно быть >= 1")

    @classmethod
    def from_config(
        cls,
        name: str,
        cfg: FkitConfig,
        fields: Optional[Sequence[str]] = None,
        algebras: Optional[Sequence[str]] = None,
        exhaustive: bool = False,
    ) -> "SuiteDescriptor":
        return cls(
            name=name,
            trials=cfg.trials,
            seed=cfg.seed,
            fields=[parse_field(f) for f in (fields or DEFAULT_FIELDS)],
            algebras=list(algebras or []),
            exhaustive=exhaustive,
            workers=cfg.workers,
            levi_samples=cfg.levi_samples,
            exhaustive_limit=cfg.exhaustive_limit,
            report_format=cfg.report_format,
        )


@dataclass
class Outcome:
    trials: int
    failures: int = 0
    counterexample: Optional[str] = None
    details: Dict[str, Any] = dc_field(default_factory=dict)

    def check(self, ok: bool, example: Any = None) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = repr(example)

    def absorb(self, trials: int, failures: int, example: Any = None) -> None:
        """Счётчики пакетной проверки (ядро numba) в общий итог."""
        self.trials += int(trials)
        self.failures += int(failures)
        if failures and self.counterexample is None:
            self.counterexample = repr(example)


@dataclass
class CheckResult:
    name: str
    trials: int
    failures: int
    elapsed: float
    counterexample: Optional[str] = None
    details: Dict[str, Any] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures,
            "elapsed": round(self.elapsed, 3),
            "counterexample": self.counterexample,
            "details": self.details,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def space(self) -> str:
        return f"verify:{self.suite}"

    @property
    def report_id(self) -> str:
        raw = json.dumps([self.suite, self.seed, [c.name for c in self.checks], [c.failures for c in self.checks]])
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.report_id,
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "check": c.name,
                    "passed": c.passed,
                    "trials": c.trials,
                    "failures": c.failures,
                    "elapsed": round(c.elapsed, 3),
                    "counterexample": c.counterexample or "",
                }
                for c in self.checks
            ],
            columns=["check", "passed", "trials", "failures", "elapsed", "counterexample"],
        )


Check = Tuple[str, Callable[[], Outcome]]
_SUITES: Dict[str, Callable[[SuiteDescriptor], List[Check]]] = {}


def suite(name: str):
    def deco(fn):
        _SUITES[name] = fn
        return fn

    return deco


# ---------------------------
# вспомогательное
# ---------------------------
def default_algebras(field: Field) -> Tuple[str, ...]:
    return DEFAULT_ALGEBRAS[field.kind]


def _algebras(desc: SuiteDescriptor, field: Field, dims: Optional[Iterable[int]] = None) -> List[CompositionAlgebra]:
    out = []
    for spec in desc.algebras or default_algebras(field):
        try:
            alg = codec.parse_algebra(spec, field)
        except DomainError as e:
            log.warning("Пропускаю %s над %s: %s", spec, field.label(), e)
            continue
        if dims is None or alg.dim in dims:
            out.append(alg)
    return out


def _rng(desc: SuiteDescriptor) -> np.random.Generator:
    return make_rng(desc.seed)


def _per_algebra(desc: SuiteDescriptor, name: str, fn, dims=None) -> List[Check]:
    checks: List[Check] = []
    for field in desc.fields:
        for alg in _algebras(desc, field, dims):
            checks.append((f"{name}[{alg.label()}]", (lambda a=alg: fn(desc, a))))
    return checks


def _prime_fields(desc: SuiteDescriptor) -> List[Field]:
    return [f for f in desc.fields if f.is_prime_field]


# =============================
# композиционные алгебры и поля
# =============================
def _composition_law(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    f = alg.field
    exhaustive = f.is_finite and alg.dim <= 2 and f.order ** (2 * alg.dim) <= 10**6
    rep = verify_composition_law(alg, trials=desc.trials, exhaustive=exhaustive, rng=_rng(desc))
    out = Outcome(trials=rep.checked, details={"mode": rep.mode, "notes": rep.notes})
    out.failures = len(rep.failures)
    if rep.failures:
        out.counterexample = repr(rep.failures[0])
    out.check(is_associative(alg) == (alg.dim <= 4), f"ассоциативность {alg.label()}")
    out.check(is_alternative(alg), f"альтернативность {alg.label()}")
    return out


@suite("composition-law")
def _suite_composition(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "composition-law", _composition_law)


def _field_axioms(desc: SuiteDescriptor, f: Field) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    for _ in range(desc.trials):
        a, b, c = f.random(rng), f.random(rng), f.random(rng)
        out.check((a + b) + c == a + (b + c), (a, b, c))
        out.check((a * b) * c == a * (b * c), (a, b, c))
        out.check(a * (b + c) == a * b + a * c, (a, b, c))
        out.check((a * a).is_square(), a)
        if not a.is_zero():
            out.check(a * a.inv() == f.one, a)
    if f.is_finite:
        squares = sum(1 for x in f.elements() if not x.is_zero() and x.is_square())
        out.check(squares == (f.order - 1) // 2, f"квадратов {squares} в {f.label()}")
        out.details["nonzero_squares"] = squares
    return out


@suite("field-axioms")
def _suite_fields(desc: SuiteDescriptor) -> List[Check]:
    return [(f"field-axioms[{f.label()}]", (lambda f=f: _field_axioms(desc, f))) for f in desc.fields]


# =============================
# J_C
# =============================
def _adjoint(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    I = jordan_identity(alg)
    for _ in range(desc.trials):
        X = random_jordan(alg, rng)
        Xs = sharp(X)
        n = norm_N(X)
        out.check(sharp(Xs) == n * X, X)
        out.check(jordan_mul(X, Xs) == n * I, X)
        out.check(norm_N(Xs) == n * n, X)
        out.check(trace_pairing(X, Xs) == 3 * n, X)
    return out


@suite("adjoint")
def _suite_adjoint(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "adjoint", _adjoint)


def _cross_duality(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    for _ in range(desc.trials):
        X, Y, Z = (random_jordan(alg, rng) for _ in range(3))
        out.check(trace_pairing(cross(X, Y), Z) == trilinear(X, Y, Z), (X, Y, Z))
        out.check(trilinear(X, X, X) == 6 * norm_N(X), X)
    return out


@suite("cross-duality")
def _suite_cross(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "cross-duality", _cross_duality)


# =============================
# W_C
# =============================
def _rank1_special(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    for _ in range(desc.trials):
        b = random_jordan(alg, rng)
        v = special_rank1(b)
        out.check(rank_w(v) == 1, b)
        if int(rng.integers(0, 2)):
            v = FreudenthalElem(v.a, v.b, v.c + random_jordan(alg, rng), v.d)
        else:
            v = FreudenthalElem(v.a, v.b, v.c, v.d + alg.field.random_nonzero(rng))
        special = v.c == sharp(v.b) and v.d == norm_N(v.b)
        out.check((rank_w(v) == 1) == special, v)
    f = alg.field
    if desc.exhaustive and f.is_prime_field:
        points = f.p ** (jordan_dim(alg.dim) + 1)
        if points <= desc.exhaustive_limit:
            cfg = FkitConfig(workers=desc.workers, exhaustive_limit=desc.exhaustive_limit)
            rep = freudenthal_census(alg, mode="exhaustive", slice_kind="special", config=cfg)
            out.trials += rep.total
            out.check(rep.counts["rank1"] == 1 and rep.details["rank1_off_origin"] == 0, rep.counts)
            out.details["special_slice"] = rep.counts
        else:
            out.details["skipped_slices"] = {"special": points}
    return out


@suite("rank1-special")
def _suite_rank1_special(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "rank1-special", _rank1_special)


# ---------------------------
# пул атомов и их матрицы над F_p
# ---------------------------
ATOM_POOL = 2
WORD_LENGTH = 3
J_LEVI_SAMPLES = 16
SIMILITUDE_EXACT_SAMPLES = 4


def _exact_cross_checks(alg: CompositionAlgebra) -> int:
    return 8 if alg.dim <= 4 else 2


def _atoms_for(alg: CompositionAlgebra, rng) -> List[Tuple[Atom, Any]]:
    f = alg.field
    lam = f.random_nonzero(rng)
    mu = f.random_nonzero(rng)
    return [
        (n_atom(random_jordan(alg, rng)), f.one),
        (nbar_atom(random_jordan(alg, rng)), f.one),
        (involution(), f.one),
        (s_atom(lam), lam),
        (sstar_atom(mu), mu),
        (random_levi(alg, rng), f.one),
    ]


def _atom_pool(alg: CompositionAlgebra, rng) -> List[Atom]:
    return [atom for _ in range(ATOM_POOL) for atom, _ in _atoms_for(alg, rng)]


def _pool_matrices(alg: CompositionAlgebra, atoms: Sequence[Atom]) -> np.ndarray:
    return np.ascontiguousarray(np.stack([word_matrix(atom, alg) for atom in atoms]))


def _random_rows(rng, p: int, count: int, dim: int) -> np.ndarray:
    return rng.integers(0, p, size=(count, dim), dtype=np.int64)


# ---------------------------
# критерий ранга 1
# ---------------------------
def _rank1_candidates(alg: CompositionAlgebra, rng, count: int) -> List[FreudenthalElem]:
    """По кругу: орбита (1,0,0,0), её возмущения, (0, h E11, h~ E22, 0) и случайные элементы."""
    f = alg.field
    z = jordan_zero(alg)
    e_a = FreudenthalElem(f.one, z, z, f.zero)
    out = []
    for k in range(count):
        kind = k % 4
        if kind == 3:
            v = random_w(alg, rng)
        elif kind == 2:
            g, h = random_automorphism(alg, rng), random_gl3(f, rng)
            v = FreudenthalElem(f.zero, act(g, h, diag(alg, 1, 0, 0)), act_dual(g, h, diag(alg, 0, 1, 0)), f.zero)
        else:
            v = random_word(alg, rng, length=2)(e_a)
            if kind == 1:
                v = v + FreudenthalElem(f.zero, z, diag(alg, f.random_nonzero(rng), 0, 0), f.zero)
        out.append(v)
    return out


def _rank1_rows(tables: AlgebraTables, mats: np.ndarray, acts: np.ndarray, duals: np.ndarray, rng, count: int) -> np.ndarray:
    """То же над F_p строками: орбита e_a, возмущение в c или d, (0, B, B', 0), случайная строка."""
    p, jd, wd = tables.p, tables.jd, tables.wd
    rows = np.zeros((count, wd), dtype=np.int64)
    e_a = np.zeros(wd, dtype=np.int64)
    e_a[0] = 1
    for k in range(count):
        kind = k % 4
        if kind == 3:
            rows[k] = rng.integers(0, p, size=wd, dtype=np.int64)
            continue
        if kind == 2:
            s = int(rng.integers(0, len(acts)))
            B = np.zeros(jd, dtype=np.int64)
            C = np.zeros(jd, dtype=np.int64)
            B[int(rng.integers(0, 3))] = int(rng.integers(1, p))
            C[int(rng.integers(0, 3))] = int(rng.integers(1, p))
            v = np.zeros(wd, dtype=np.int64)
            v[1:1 + jd] = matvec(acts[s], B, p)
            v[1 + jd:1 + 2 * jd] = matvec(duals[s], C, p)
            steps = int(rng.integers(0, 3))
        else:
            v = e_a
            steps = 2
        for t in rng.integers(0, len(mats), size=steps):
            v = matvec(mats[t], v, p)
        if kind == 1:
            v = v.copy()
            slot = 1 + jd if int(rng.integers(0, 2)) else wd - 1
            v[slot] = (v[slot] + int(rng.integers(1, p))) % p
        rows[k] = v
    return rows


def _criterion_slice(desc: SuiteDescriptor, alg: CompositionAlgebra, tables: AlgebraTables,
                     jt, acts: np.ndarray, duals: np.ndarray, kind: str, out: Outcome) -> None:
    if kind != "wrank1" and not desc.exhaustive:
        return
    slots, base = slice_slots(alg.dim, kind)
    points = tables.p ** len(slots)
    if points > desc.exhaustive_limit:
        out.details.setdefault("skipped_slices", {})[kind] = points
        log.info("rank1-criterion[%s]: срез %s пропущен, %d точек > %d", alg.label(), kind, points,
                 desc.exhaustive_limit)
        return
    parts = run_partitioned(
        w_criterion_slice_scan,
        (tables.alg, tables.p, tables.inv2, jt, acts, duals, slots, base),
        points,
        desc.workers,
        label=f"rank1-criterion/{kind}",
    )
    mismatches = sum(int(m) for m, _, _ in parts)
    rank1 = sum(int(r) for _, _, r in parts)
    first = next((int(i) for _, i, _ in parts if i >= 0), -1)
    out.absorb(points, mismatches, (kind, first))
    if kind == "special":
        # (1, 0, c, d) ранга 1 только при c = 0, d = 0
        out.check(rank1 == 1, ("special", rank1))
    out.details[f"slice_{kind}"] = {"points": points, "rank1": rank1}


def _rank1_criterion_fp(desc: SuiteDescriptor, alg: CompositionAlgebra, rng) -> Outcome:
    out = Outcome(trials=0)
    tables = build_tables(alg)
    p, inv2 = tables.p, tables.inv2
    samples = [random_levi(alg, rng) for _ in range(desc.levi_samples)]
    acts, duals = levi_matrices(alg, samples)
    jt = jordan_mul_table(alg)
    mats = _pool_matrices(alg, _atom_pool(alg, rng))
    rows = _rank1_rows(tables, mats, acts, duals, rng, desc.trials)
    crit = w_criterion_rows(tables.alg, p, inv2, jt, acts, duals, rows)
    ranks = w_rank_rows(tables.alg, p, inv2, rows)
    bad = np.flatnonzero((crit == 1) != (ranks == 1))
    out.absorb(len(rows), len(bad), rows[bad[0]].tolist() if len(bad) else None)

    # точная арифметика против ядер на первых строках
    m = _exact_cross_checks(alg)
    few = w_criterion_rows(tables.alg, p, inv2, jt, acts[:5], duals[:5], rows[:m])
    for row, c, r in zip(rows[:m], few, ranks[:m]):
        v = array_to_w(alg, row)
        out.check(rank1_criterion_GS(v, samples[:4]) == bool(c), ("criterion", row.tolist()))
        out.check(rank_w(v) == int(r), ("rank", row.tolist()))

    for kind in ("wrank1", "diagonal", "special"):
        _criterion_slice(desc, alg, tables, jt, acts[:5], duals[:5], kind, out)
    out.details["levi_samples"] = len(samples)
    out.details["rank1_rows"] = int(np.count_nonzero(ranks == 1))
    return out


def _rank1_criterion(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    if alg.field.is_prime_field:
        return _rank1_criterion_fp(desc, alg, rng)
    out = Outcome(trials=0)
    # автоморфизмы октонионов дороги: для dim 8 берём четверть выборки
    n_levi = desc.levi_samples if alg.dim <= 4 else max(1, desc.levi_samples // 4)
    samples = [random_levi(alg, rng) for _ in range(n_levi)]
    for v in _rank1_candidates(alg, rng, desc.trials):
        out.check(rank1_criterion_GS(v, samples) == (rank_w(v) == 1), v)
    out.details["levi_samples"] = len(samples)
    return out


@suite("rank1-criterion")
def _suite_rank1_criterion(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "rank1-criterion", _rank1_criterion)


# ---------------------------
# подобия и сопряжение
# ---------------------------
def _similitude_fp(desc: SuiteDescriptor, alg: CompositionAlgebra, rng) -> Outcome:
    out = Outcome(trials=0)
    tables = build_tables(alg)
    p = tables.p
    for atom, expected in _atoms_for(alg, rng):
        word = GeneratorWord([atom])
        nu = similitude_factor(word, alg, rng=rng, samples=SIMILITUDE_EXACT_SAMPLES)
        out.check(nu == expected and nu == word.declared_factor(alg.field), (atom.kind, nu))
        M = word_matrix(word, alg)
        v = random_w(alg, rng)
        out.check(array_to_w(alg, matvec(M, w_to_array(v), p)) == word(v), (atom.kind, "matrix", v))
        rows = _random_rows(rng, p, 2 * desc.trials, tables.wd)
        failures, first = similitude_rows(tables.alg, p, tables.inv2, M, nu.residue, rows)
        out.absorb(desc.trials, failures, (atom.kind, rows[2 * first].tolist() if failures else None))
    out.details["samples_per_atom"] = desc.trials
    return out


def _similitude(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    if alg.field.is_prime_field:
        return _similitude_fp(desc, alg, rng)
    out = Outcome(trials=0)
    for atom, expected in _atoms_for(alg, rng):
        word = GeneratorWord([atom])
        nu = similitude_factor(word, alg, rng=rng, samples=desc.trials)
        out.trials += desc.trials
        out.check(nu == expected and nu == word.declared_factor(alg.field), (atom.kind, nu))
        v = random_w(alg, rng)
        out.check(flat(word(v)) == nu * word(flat(v)), (atom.kind, "flat", v))
    out.details["samples_per_atom"] = desc.trials
    return out


@suite("similitude")
def _suite_similitude(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "similitude", _similitude)


def _conjugation(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    iota = involution()
    for _ in range(desc.trials):
        x = random_jordan(alg, rng)
        v = random_w(alg, rng)
        word = GeneratorWord(iota.inverse() + [n_atom(x), iota])
        out.check(word(v) == apply_atom(nbar_atom(-x), v), (x, v))
    return out


@suite("conjugation")
def _suite_conjugation(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "conjugation", _conjugation)


def _flat_duality(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    kappa = calibrate_flat_duality(alg)
    out = Outcome(trials=0, details={"kappa": str(kappa)})
    out.check(kappa == -1, kappa)
    for _ in range(desc.trials):
        v, w = random_w(alg, rng), random_w(alg, rng)
        out.check(symplectic(flat(v), w) == kappa * fourlinear(v, v, v, w), (v, w))
    return out


@suite("flat-duality")
def _suite_flat(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "flat-duality", _flat_duality)


# ---------------------------
# инвариантность ранга
# ---------------------------
def _rank_seeds(alg: CompositionAlgebra) -> List[FreudenthalElem]:
    f = alg.field
    z = jordan_zero(alg)
    seeds = [w_zero(alg), FreudenthalElem(f.one, z, z, f.zero), FreudenthalElem(f.one, z, z, f.one)]
    for entries in ((1, 0, 0), (1, 1, 0), (1, 1, 1)):
        seeds.append(FreudenthalElem(f.zero, diag(alg, *entries), z, f.zero))
    return seeds


def _jordan_seeds(alg: CompositionAlgebra) -> List[JordanElem]:
    return [diag(alg, 1, 0, 0), diag(alg, 1, 1, 0), jordan_identity(alg)]


def _rank_histogram(ranks: Iterable[int]) -> Dict[str, int]:
    values, counts = np.unique(np.asarray(list(ranks), dtype=np.int64), return_counts=True)
    return {str(int(r)): int(n) for r, n in zip(values, counts)}


def _rank_invariance_fp(desc: SuiteDescriptor, alg: CompositionAlgebra, rng) -> Outcome:
    out = Outcome(trials=0)
    tables = build_tables(alg)
    p, inv2 = tables.p, tables.inv2
    atoms = _atom_pool(alg, rng)
    mats = _pool_matrices(alg, atoms)
    v = random_w(alg, rng)
    for atom, M in zip(atoms, mats):
        out.check(matvec(M, w_to_array(v), p).tolist() == w_to_array(apply_atom(atom, v)).tolist(), (atom.kind, v))

    count = desc.trials
    seeds = [w_to_array(s) for s in _rank_seeds(alg)]
    rows = _random_rows(rng, p, count, tables.wd)
    for k in range(0, count, 2):
        row = seeds[(k // 2) % len(seeds)]
        for t in rng.integers(0, len(mats), size=2):
            row = matvec(mats[t], row, p)
        rows[k] = row
    words = rng.integers(0, len(mats), size=(count, WORD_LENGTH), dtype=np.int64)
    changes, first, ranks = w_rank_change_rows(tables.alg, p, inv2, mats, words, rows)
    out.absorb(count, changes, rows[first].tolist() if changes else None)
    m = _exact_cross_checks(alg)
    for row, r in zip(rows[:m], ranks[:m]):
        out.check(rank_w(array_to_w(alg, row)) == int(r), ("rank_w", row.tolist()))

    acts, _ = levi_matrices(alg, [random_levi(alg, rng) for _ in range(J_LEVI_SAMPLES)])
    jrows = _random_rows(rng, p, count, tables.jd)
    for k, X in enumerate(_jordan_seeds(alg)[:count]):
        jrows[k] = jordan_to_array(X)
    jchanges, jfirst = j_rank_change_rows(tables.alg, p, inv2, acts[1:], jrows)
    out.absorb(count, jchanges, jrows[jfirst].tolist() if jchanges else None)
    for row, r in zip(jrows[:m], j_rank_rows(tables.alg, p, inv2, jrows[:m])):
        out.check(rank_jordan(array_to_jordan(alg, row)) == int(r), ("rank_jordan", row.tolist()))
    out.details["ranks"] = _rank_histogram(ranks)
    return out


def _rank_invariance(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    if alg.field.is_prime_field:
        return _rank_invariance_fp(desc, alg, rng)
    out = Outcome(trials=0)
    seeds = _rank_seeds(alg)
    count = desc.trials
    ranks = []
    for k in range(count):
        v = seeds[k % len(seeds)] if k % 2 == 0 else random_w(alg, rng)
        r = rank_w(v)
        ranks.append(r)
        w = random_word(alg, rng)(v)
        out.check(rank_w(w) == r, (v, w))
    for X in _jordan_seeds(alg) + [random_jordan(alg, rng) for _ in range(count)]:
        g, h = random_automorphism(alg, rng), random_gl3(alg.field, rng)
        out.check(rank_jordan(act(g, h, X)) == rank_jordan(X), X)
    out.details["ranks"] = _rank_histogram(ranks)
    return out


@suite("rank-invariance")
def _suite_rank_invariance(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "rank-invariance", _rank_invariance)


def _dimensions(desc: SuiteDescriptor) -> Outcome:
    out = Outcome(trials=0)
    table = {row["dim_C"]: row for row in dimension_table()}
    out.check([table[n]["dim_W"] for n in (1, 2, 4, 8)] == [14, 20, 32, 56], table)
    for field in desc.fields:
        for alg in _algebras(desc, field):
            row = table[alg.dim]
            out.check(w_dim(alg) == row["dim_W"] and jordan_dim(alg.dim) == row["dim_J"], alg.label())
    out.details["table"] = list(table.values())
    return out


@suite("dimensions")
def _suite_dimensions(desc: SuiteDescriptor) -> List[Check]:
    return [("dimensions", lambda: _dimensions(desc))]


# =============================
# слои
# =============================
def _sextic(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    for _ in range(desc.trials):
        x = [alg.random_trace0(rng) for _ in range(3)]
        lhs, rhs, ok = sextic_check(x)
        out.check(ok, x)
    f = alg.field
    if desc.exhaustive and f.is_prime_field and f.p ** 9 <= desc.exhaustive_limit:
        tables = build_tables(alg)
        parts = run_partitioned(sextic_scan, (tables.G0, tables.T, tables.p), f.p ** 9, desc.workers, label="sextic")
        failures = sum(int(n) for n, _ in parts)
        out.trials += f.p ** 9
        out.failures += failures
        out.details["exhaustive"] = f.p ** 9
    return out


@suite("sextic")
def _suite_sextic(desc: SuiteDescriptor) -> List[Check]:
    return _per_algebra(desc, "sextic", _sextic, dims=(4,))


def _random_rank3_triple(alg: CompositionAlgebra, rng):
    while True:
        x = [alg.random_trace0(rng) for _ in range(3)]
        if not linalg.det(triple_gram(x)).is_zero():
            return x


def _xi_of(alg: CompositionAlgebra, x) -> FreudenthalElem:
    return fiber_target(alg.field, triple_gram(x), ((x[0] * x[1]) * x[2]).trace())


def _rank3_fiber(desc: SuiteDescriptor, alg: CompositionAlgebra) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    f = alg.field
    if f.kind == "Q":
        x = trace0_basis(alg)
    else:
        x = _random_rank3_triple(alg, rng)
    xi = _xi_of(alg, x)
    lift = rank1_lift(x)
    out.check(F_map(lift) == xi and fiber_membership(xi, x), x)
    out.check(rank_w(lift) == 1, lift)
    res = rank3_fiber_test(xi, alg, workers=desc.workers, search=f.kind != "Fp2")
    out.check(res.nonempty, res.reason)
    if res.witness:
        out.check(fiber_membership(xi, res.witness), res.witness)
    bad = FreudenthalElem(xi.a, xi.b, xi.c, xi.d + 1)
    out.check(rank3_fiber_test(bad, alg, search=False).status == "empty", "d+1")
    if f.is_prime_field and f.p ** 9 <= desc.exhaustive_limit:
        cfg = FkitConfig(workers=desc.workers, exhaustive_limit=desc.exhaustive_limit)
        count = fiber_census(xi, alg, config=cfg).counts["fiber"]
        c = [list(r) for r in triple_gram(x)]
        order = so3_order(c, f)
        out.check(count == order, (count, order))
        orbit = orbit_of_witness(xi, x, so3_elements(c, f))
        out.check(orbit["orbit"] == orbit["group"] == count and orbit["inside_fiber"], orbit)
        out.details.update({"fiber": count, "so3_order": order})
        if desc.exhaustive:
            out.check(fiber_census(bad, alg, config=cfg).counts["fiber"] == 0, "d+1 census")
    return out


def _similarity_cases(desc: SuiteDescriptor) -> Outcome:
    """Над Q: c = -I подобна норме гамильтоновых кватернионов и не подобна расщеплённой."""
    out = Outcome(trials=0)
    Q = parse_field("Q")
    xi = fiber_target(Q, [[-1, 0, 0], [0, -1, 0], [0, 0, -1]], 2)
    hamilton = codec.parse_algebra("quaternion:-1,-1", Q)
    split = codec.parse_algebra("matrix2x2", Q)
    out.check(rank3_fiber_test(xi, hamilton).nonempty, "quaternion(-1,-1)")
    out.check(rank3_fiber_test(xi, split, search=False).status == "empty", "matrix2x2")
    return out


@suite("rank3-fiber")
def _suite_rank3(desc: SuiteDescriptor) -> List[Check]:
    checks = _per_algebra(desc, "rank3-fiber", _rank3_fiber, dims=(4,))
    if any(f.kind == "Q" for f in desc.fields):
        checks.append(("rank3-fiber[similarity]", lambda: _similarity_cases(desc)))
    return checks


def _rank0_fiber(desc: SuiteDescriptor, field: Field) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    alg = codec.parse_algebra("matrix2x2", field)
    z = alg.zero()
    e12 = alg.basis(1)
    w = FreudenthalElem(field.zero, J([e12, z, z]), jordan_zero(alg), field.zero)
    res = rank0_fiber_predicate(w)
    out.check(res.status == "pure-tensor" and res.witness[0] == e12, res)
    # случайные x (x) v с x^2 = 0
    nil = [y for y in (alg.random_trace0(rng) for _ in range(64)) if (y * y).is_zero() and not y.is_zero()]
    nil = nil or [e12]
    for k in range(desc.trials):
        x = nil[k % len(nil)]
        v = [field.random(rng) for _ in range(6)]
        if all(s.is_zero() for s in v):
            v[k % 6] = field.one
        w = FreudenthalElem(field.zero, J([s * x for s in v[:3]]), J([s * x for s in v[3:]]), field.zero)
        out.check(rank0_fiber_predicate(w).status == "pure-tensor", w)
    if field.is_finite:
        oracle = nilpotent_pair_oracle(field)
        out.check(oracle["counterexamples"] == 0, oracle["examples"])
        out.details["nilpotent_pairs"] = oracle["pairs"]
    if field.is_prime_field and desc.exhaustive:
        cfg = FkitConfig(workers=desc.workers, exhaustive_limit=desc.exhaustive_limit)
        rep = rank0_census(alg, config=cfg)
        out.trials += rep.total
        out.check(rep.details["violations"] == 0, rep.details["first_violation"])
        out.check(rep.counts["rank1"] == expected_rank0_rank1(field.p), rep.counts)
        out.details["census"] = rep.counts
        aniso = codec.parse_algebra("binarion-quadratic:2", field) if _nonsquare(field, 2) else None
        if aniso is not None:
            arep = rank0_census(aniso, config=cfg)
            out.check(arep.counts["rank1"] == 0, arep.counts)
    if field.kind == "Q":
        hamilton = codec.parse_algebra("quaternion:-1,-1", field)
        try:
            rank0_fiber_predicate(w_zero(hamilton))
            out.check(False, "NonSplitAlgebra не поднято")
        except NonSplitAlgebra:
            out.check(True)
    return out


def _nonsquare(field: Field, value: int) -> bool:
    return not field(value).is_square()


@suite("rank0-fiber")
def _suite_rank0(desc: SuiteDescriptor) -> List[Check]:
    return [(f"rank0-fiber[{f.label()}]", (lambda f=f: _rank0_fiber(desc, f))) for f in desc.fields if f.kind != "Fp2"]


# =============================
# квадратичные формы
# =============================
SQUAREFREE = (-1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 11, 13, 15, -15, 30)


def _hilbert(desc: SuiteDescriptor) -> Outcome:
    rng = _rng(desc)
    out = Outcome(trials=0)
    for _ in range(desc.trials):
        a = Fraction(int(rng.integers(1, 200)) * (1 if rng.integers(0, 2) else -1), int(rng.integers(1, 50)))
        b = Fraction(int(rng.integers(1, 200)) * (1 if rng.integers(0, 2) else -1), int(rng.integers(1, 50)))
        places = sorted(_primes(a) | _primes(b) | {2}) + [INF]
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
            out.check(hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v), (a, b, v))
        out.check(prod == 1, (a, b))
    for a in SQUAREFREE[:8]:
        for b in SQUAREFREE[:8]:
            for p in (2, 3, 5, 7):
                out.check(hilbert_symbol(a, b, p) == hilbert_symbol_bruteforce(a, b, p), (a, b, p))
    Q = parse_field("Q")
    I = diagonal_form(Q, (1, 1, 1))
    split = diagonal_form(Q, (1, 1, -1))
    out.check(not ternary_similar(I, split), "diag(1,1,1) ~ diag(1,1,-1)")
    out.check(ternary_similar(split, diagonal_form(Q, (1, -1, -1))), "diag(1,1,-1) !~ diag(1,-1,-1)")
    out.check(not is_isotropic(I) and is_isotropic(split), "isotropy")
    out.check(ternary_similar(norm_form_on_trace0(codec.parse_algebra("quaternion:1,1", Q)), split), "quaternion(1,1)")
    out.check(ternary_similar(norm_form_on_trace0(codec.parse_algebra("quaternion:-1,-1", Q)), I), "quaternion(-1,-1)")
    forms = [diagonal_form(Q, [int(rng.choice(SQUAREFREE)) for _ in range(3)]) for _ in range(12)]
    for f1 in forms:
        out.check(ternary_similar(f1, f1), f1)
        for f2 in forms:
            out.check(ternary_similar(f1, f2) == ternary_similar(f2, f1), (f1, f2))
    return out


def _primes(x: Fraction) -> set:
    from sympy import factorint

    out = set()
    for n in (abs(x.numerator), x.denominator):
        if n > 1:
            out |= set(factorint(n))
    return out


@suite("hilbert")
def _suite_hilbert(desc: SuiteDescriptor) -> List[Check]:
    return [("hilbert", lambda: _hilbert(desc))]


SUITE_NAMES = (
    "composition-law",
    "field-axioms",
    "adjoint",
    "cross-duality",
    "sextic",
    "rank1-special",
    "rank1-criterion",
    "similitude",
    "conjugation",
    "flat-duality",
    "rank-invariance",
    "dimensions",
    "rank3-fiber",
    "rank0-fiber",
    "hilbert",
    "all",
)


# =============================
# прогон
# =============================
def _run_check(name: str, fn: Callable[[], Outcome]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = fn()
    except Exception as e:
        log.exception("Проверка %s упала", name)
        return CheckResult(name, trials=0, failures=1, elapsed=time.perf_counter() - t0,
                           counterexample=f"{type(e).__name__}: {e}")
    res = CheckResult(name, out.trials, out.failures, time.perf_counter() - t0, out.counterexample, out.details)
    mark = "✅" if res.passed else "❌"
    log.info("%s %s: %d проверок, %d ошибок, %.2f с", mark, name, res.trials, res.failures, res.elapsed)
    return res


def run_suite(desc: SuiteDescriptor) -> SuiteReport:
    names = [n for n in SUITE_NAMES if n != "all"] if desc.name == "all" else [desc.name]
    log.info("verify %s: seed=%d, trials=%d, поля: %s", desc.name, desc.seed, desc.trials,
             ", ".join(f.label() for f in desc.fields))
    checks: List[CheckResult] = []
    for name in names:
        for check_name, fn in _SUITES[name](desc):
            checks.append(_run_check(check_name, fn))
    report = SuiteReport(desc.name, desc.seed, checks)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        log.warning("verify %s: провалено %d из %d: %s", desc.name, len(failed), len(checks), ", ".join(failed))
    else:
        log.info("verify %s: все %d проверок пройдены", desc.name, len(checks))
    return report
