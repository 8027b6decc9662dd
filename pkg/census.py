# census.py
"""
Переписи над F_p: распределение рангов в J_C и W_C, мощности слоёв,
порядок SO(3, c) и перепись слоя F^-1(0).

Полный перебор идёт одометром по координатам (координата 0 старшая), куски
[start, stop) считаются параллельно и сливаются сложением, поэтому счётчики и
контрольная сумма не зависят от числа потоков.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from errors import CensusOverflow, DegenerateForm, FieldError, UsageError, WrongDimension
from fkit_config import FkitConfig
from algebra import linalg
from algebra.composition import CompositionAlgebra
from algebra.freudenthal import FreudenthalElem
from algebra.scalar import Field
from fibers import scan_fiber, target_matrix
from kernels.pool import run_partitioned
from kernels.scans import (
    CHECKSUM_MOD,
    j_rank_rows,
    jordan_rank_scan,
    rank0_pair_scan,
    sharp_null_strips,
    so3_count,
    so3_fill,
    w_sample_scan,
    w_slice_scan,
)
from kernels.tables import build_tables, slice_slots
from quadform import TernaryForm

log = logging.getLogger(__name__)

__all__ = [
    "CensusReport",
    "make_rng",
    "jordan_census",
    "freudenthal_census",
    "fiber_census",
    "so3_order",
    "so3_elements",
    "so3_census",
    "rank0_census",
    "expected_rank0_rank1",
    "rank0_candidates",
    "emit_report",
]

SLICES = ("diagonal", "special", "wrank1", "full")


@dataclass
class CensusReport:
    space: str
    field: Dict[str, Any]
    mode: str
    counts: Dict[str, int]
    total: int
    elapsed: float
    checksum: int
    seed: Optional[int] = None
    details: Dict[str, Any] = dc_field(default_factory=dict)

    @property
    def report_id(self) -> str:
        raw = json.dumps([self.space, self.field, self.mode, self.counts, self.checksum], sort_keys=True)
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.report_id,
            "space": self.space,
            "field": self.field,
            "mode": self.mode,
            "seed": self.seed,
            "total": self.total,
            "counts": self.counts,
            "checksum": self.checksum,
            "elapsed": round(self.elapsed, 3),
            "details": self.details,
        }

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(
            [{"stratum": k, "count": v} for k, v in self.counts.items()],
            columns=["stratum", "count"],
        )
        df["fraction"] = df["count"] / self.total if self.total else 0.0
        df.insert(0, "space", self.space)
        df.insert(1, "mode", self.mode)
        return df


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _check_size(total: int, limit: int, what: str) -> None:
    if total > limit:
        raise CensusOverflow(f"{what}: {total} элементов больше лимита {limit}")


def _rank_counts(arr: np.ndarray) -> Dict[str, int]:
    return {f"rank{r}": int(v) for r, v in enumerate(arr)}


def _sample_checksum(ranks: np.ndarray) -> int:
    acc = 0
    for i, r in enumerate(ranks.tolist()):
        acc = (acc + (i + 1) * (r + 1)) % CHECKSUM_MOD
    return acc


# =============================
# J_C
# =============================
def jordan_census(
    algebra: CompositionAlgebra,
    mode: str = "exhaustive",
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    config: Optional[FkitConfig] = None,
) -> CensusReport:
    cfg = config or FkitConfig()
    workers = workers or cfg.workers
    tables = build_tables(algebra)
    p, jd = tables.p, tables.jd
    t0 = time.perf_counter()
    if mode == "exhaustive":
        total = p ** jd
        _check_size(total, cfg.exhaustive_limit, f"J над {algebra.label()}")
        parts = run_partitioned(
            jordan_rank_scan,
            (tables.alg, p, tables.inv2, jd),
            total,
            workers,
            label="jordan",
        )
        counts = sum(c for c, _ in parts)
        checksum = sum(int(a) for _, a in parts) % CHECKSUM_MOD
        seed = None
    elif mode == "sampled":
        seed = cfg.seed if seed is None else seed
        total = int(samples or cfg.trials)
        rows = make_rng(seed).integers(0, p, size=(total, jd), dtype=np.int64)
        ranks = j_rank_rows(tables.alg, p, tables.inv2, rows)
        counts = np.bincount(ranks, minlength=4)
        checksum = _sample_checksum(ranks)
    else:
        raise UsageError(f"неизвестный режим {mode!r}: exhaustive | sampled")
    report = CensusReport(
        space=f"jordan:{algebra.label()}",
        field=algebra.field.descriptor(),
        mode=mode,
        counts=_rank_counts(counts),
        total=total,
        elapsed=time.perf_counter() - t0,
        checksum=checksum,
        seed=seed,
    )
    log.info("Перепись %s (%s): %s за %.2f с", report.space, mode, report.counts, report.elapsed)
    return report


# =============================
# W_C
# =============================
def freudenthal_census(
    algebra: CompositionAlgebra,
    mode: str = "sampled",
    slice_kind: str = "full",
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    config: Optional[FkitConfig] = None,
) -> CensusReport:
    cfg = config or FkitConfig()
    workers = workers or cfg.workers
    if slice_kind not in SLICES:
        raise UsageError(f"неизвестный срез {slice_kind!r}: {' | '.join(SLICES)}")
    tables = build_tables(algebra)
    p = tables.p
    slots, base = slice_slots(tables.n, slice_kind)
    details: Dict[str, Any] = {"slice": slice_kind, "slots": int(slots.shape[0])}
    t0 = time.perf_counter()
    if mode == "exhaustive":
        total = p ** int(slots.shape[0])
        _check_size(total, cfg.exhaustive_limit, f"W над {algebra.label()}, срез {slice_kind}")
        parts = run_partitioned(
            w_slice_scan,
            (tables.alg, p, tables.inv2, slots, base),
            total,
            workers,
            label=f"w/{slice_kind}",
        )
        counts = sum(c for c, _, _ in parts)
        checksum = sum(int(a) for _, a, _ in parts) % CHECKSUM_MOD
        details["rank1_off_origin"] = int(sum(int(r) for _, _, r in parts))
        seed = None
    elif mode == "sampled":
        seed = cfg.seed if seed is None else seed
        total = int(samples or cfg.trials)
        digits = make_rng(seed).integers(0, p, size=(total, slots.shape[0]), dtype=np.int64)
        rows = np.tile(base, (total, 1))
        rows[:, slots] = (rows[:, slots] + digits) % p
        parts = run_partitioned(
            w_sample_scan,
            (tables.alg, p, tables.inv2, rows),
            total,
            workers,
            label=f"w/{slice_kind}/sampled",
        )
        counts = sum(c for c, _, _ in parts)
        checksum = sum(int(a) for _, a, _ in parts) % CHECKSUM_MOD
        details["rank4_fraction"] = float(counts[4]) / total if total else 0.0
    else:
        raise UsageError(f"неизвестный режим {mode!r}: exhaustive | sampled")
    report = CensusReport(
        space=f"freudenthal:{algebra.label()}",
        field=algebra.field.descriptor(),
        mode=mode,
        counts=_rank_counts(counts),
        total=total,
        elapsed=time.perf_counter() - t0,
        checksum=checksum,
        seed=seed,
        details=details,
    )
    log.info("Перепись %s [%s, %s]: %s за %.2f с", report.space, slice_kind, mode, report.counts, report.elapsed)
    return report


# =============================
# слои и SO(3, c)
# =============================
def _cmat(c: Any, field: Field) -> np.ndarray:
    rows = c.gram if isinstance(c, TernaryForm) else linalg.to_matrix(field, c)
    if linalg.det(rows).is_zero():
        raise DegenerateForm("c вырождена: det(c) = 0")
    return np.array([[v.residue for v in row] for row in rows], dtype=np.int64)


def so3_order(c: Any, field: Field) -> int:
    """|{g : det g = 1, g c g^T = c}| полным перебором по строкам."""
    if not field.is_prime_field:
        raise FieldError(f"SO(3, c) перечисляется только над F_p, а не над {field.label()}")
    order = int(so3_count(_cmat(c, field), field.p))
    log.debug("|SO(3, c)(%s)| = %d", field.label(), order)
    return order


def so3_elements(c: Any, field: Field, limit: Optional[int] = None) -> List[linalg.Matrix]:
    if not field.is_prime_field:
        raise FieldError(f"SO(3, c) перечисляется только над F_p, а не над {field.label()}")
    cmat = _cmat(c, field)
    size = int(so3_count(cmat, field.p))
    flat = so3_fill(cmat, field.p, size)
    if limit is not None:
        flat = flat[:limit]
    return [[[field(int(flat[k, 3 * i + j])) for j in range(3)] for i in range(3)] for k in range(flat.shape[0])]


def so3_census(c: Any, field: Field) -> CensusReport:
    t0 = time.perf_counter()
    order = so3_order(c, field)
    rows = c.gram if isinstance(c, TernaryForm) else linalg.to_matrix(field, c)
    return CensusReport(
        space="so3",
        field=field.descriptor(),
        mode="exhaustive",
        counts={"so3": order},
        total=field.p ** 9,
        elapsed=time.perf_counter() - t0,
        checksum=order % CHECKSUM_MOD,
        details={"c": [[str(v) for v in row] for row in rows]},
    )


def fiber_census(
    xi: FreudenthalElem,
    algebra: CompositionAlgebra,
    workers: Optional[int] = None,
    config: Optional[FkitConfig] = None,
) -> CensusReport:
    """|Omega_xi| полным перебором (C^0)^3; рядом для сравнения |SO(3, c)|."""
    cfg = config or FkitConfig()
    workers = workers or cfg.workers
    if algebra.dim != 4:
        raise WrongDimension("перепись слоя — для dim C = 4")
    field = algebra.field
    if not field.is_prime_field:
        raise FieldError(f"перепись слоя только над F_p, а не над {field.label()}")
    total = field.p ** 9
    _check_size(total, cfg.exhaustive_limit, "(C^0)^3")
    c = target_matrix(xi)
    t0 = time.perf_counter()
    count, witness = scan_fiber(xi, algebra, workers)
    details: Dict[str, Any] = {
        "c": [[str(v) for v in row] for row in c],
        "d": str(xi.d),
        "witness": [repr(x) for x in witness] if witness else None,
    }
    if not linalg.det(c).is_zero():
        details["so3_order"] = so3_order(c, field)
    report = CensusReport(
        space=f"fiber:{algebra.label()}",
        field=field.descriptor(),
        mode="exhaustive",
        counts={"fiber": count},
        total=total,
        elapsed=time.perf_counter() - t0,
        checksum=count % CHECKSUM_MOD,
        details=details,
    )
    log.info("Слой над c=%s, d=%s: %d точек", details["c"], details["d"], count)
    return report


# =============================
# слой F^-1(0)
# =============================
def expected_rank0_rank1(q: int) -> int:
    """(q^2 - 1)(q^6 - 1)/(q - 1): пары (x, v) с x^2 = 0 по модулю (lx, l^-1 v)."""
    return (q * q - 1) * (q ** 6 - 1) // (q - 1)


def rank0_candidates(algebra: CompositionAlgebra):
    """beta из (C^0)^3 с J(beta)# = 0: необходимое условие ранга 1 для (0, J(beta), J(gamma), 0)."""
    tables = build_tables(algebra)
    size, _, _ = sharp_null_strips(tables.alg, tables.p, tables.inv2, tables.t0, False, 1)
    _, coords, jords = sharp_null_strips(tables.alg, tables.p, tables.inv2, tables.t0, True, int(size))
    return tables, coords, jords


def rank0_census(
    algebra: CompositionAlgebra,
    workers: Optional[int] = None,
    config: Optional[FkitConfig] = None,
) -> CensusReport:
    cfg = config or FkitConfig()
    workers = workers or cfg.workers
    if algebra.dim < 2:
        raise WrongDimension("C^0 = 0 при dim C = 1")
    field = algebra.field
    if not field.is_prime_field:
        raise FieldError(f"перепись F^-1(0) только над F_p, а не над {field.label()}")
    m = algebra.dim - 1
    _check_size(field.p ** (3 * m), cfg.exhaustive_limit, "(C^0)^3")
    t0 = time.perf_counter()
    tables, coords, jords = rank0_candidates(algebra)
    L = int(jords.shape[0])
    _check_size(L * L, cfg.exhaustive_limit, "пары кандидатов")
    parts = run_partitioned(
        rank0_pair_scan,
        (tables.alg, tables.p, tables.inv2, tables.G0, coords, jords),
        L,
        workers,
        label="rank0",
    )
    counts = sum(c for c, _, _ in parts)
    violations = sum(int(v) for _, v, _ in parts)
    firsts = [int(f) for _, _, f in parts if f >= 0]
    details: Dict[str, Any] = {
        "candidates": L,
        "violations": violations,
        "first_violation": min(firsts) if firsts else None,
        "split": algebra.is_split(),
    }
    if algebra.dim == 4 and details["split"]:
        details["expected_rank1"] = expected_rank0_rank1(field.p)
    report = CensusReport(
        space=f"rank0:{algebra.label()}",
        field=field.descriptor(),
        mode="exhaustive",
        counts=_rank_counts(counts),
        total=L * L,
        elapsed=time.perf_counter() - t0,
        checksum=int(counts[1]) % CHECKSUM_MOD,
        details=details,
    )
    log.info("F^-1(0) над %s: %d кандидатов, ранг 1: %d, нарушений: %d",
             algebra.label(), L, int(counts[1]), violations)
    return report


# =============================
# вывод отчётов
# =============================
def _report_stem(report: CensusReport) -> str:
    safe = report.space.replace(":", "_").replace(",", "-")
    return f"{safe}_{report.report_id}"


def emit_report(report: CensusReport, out_dir: Optional[str] = None, fmt: Optional[str] = None) -> List[str]:
    cfg = FkitConfig(out_dir=out_dir, report_format=fmt)
    os.makedirs(cfg.out_dir, exist_ok=True)
    stem = os.path.join(cfg.out_dir, _report_stem(report))
    paths: List[str] = []
    if cfg.report_format in ("json", "both"):
        path = stem + ".json"
        with open(path, "w", encoding="utf-8") as f:
            f.write(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
        paths.append(path)
    if cfg.report_format in ("csv", "both"):
        path = stem + ".csv"
        report.to_frame().to_csv(path, index=False)
        paths.append(path)
    log.info("Отчёт %s записан: %s", report.report_id, ", ".join(paths))
    return paths
