# tests/test_census.py
import json
import os

import pandas as pd
import pytest

from errors import CensusOverflow, DegenerateForm, FieldError, UsageError, WrongDimension
from algebra.composition import construct
from census import (
    emit_report,
    expected_rank0_rank1,
    fiber_census,
    freudenthal_census,
    jordan_census,
    rank0_census,
    so3_census,
    so3_order,
)
from fibers import fiber_target
from fkit_config import FkitConfig


# ---------------------------------------------------------
# J_C
# ---------------------------------------------------------
def test_jordan_census_binarion_split(F5):
    alg = construct("binarion-split", {}, F5)
    report = jordan_census(alg, mode="exhaustive", workers=2)
    assert report.total == 5 ** 9
    assert sum(report.counts.values()) == report.total
    assert report.counts["rank0"] == 1
    assert report.seed is None


def test_jordan_census_independent_of_workers(F5):
    alg = construct("unarion", {}, F5)
    a = jordan_census(alg, workers=1)
    b = jordan_census(alg, workers=4)
    assert a.counts == b.counts
    assert a.checksum == b.checksum
    assert a.report_id == b.report_id


def test_jordan_census_sampled_is_reproducible(F7):
    alg = construct("matrix2x2", {}, F7)
    a = jordan_census(alg, mode="sampled", samples=200, seed=3)
    b = jordan_census(alg, mode="sampled", samples=200, seed=3)
    assert a.counts == b.counts and a.checksum == b.checksum
    assert a.total == 200 and a.seed == 3
    with pytest.raises(UsageError):
        jordan_census(alg, mode="guess")


def test_census_needs_prime_field(Q, F25):
    with pytest.raises(FieldError):
        jordan_census(construct("unarion", {}, Q))
    with pytest.raises(FieldError):
        freudenthal_census(construct("unarion", {}, F25), mode="sampled", samples=10)


# ---------------------------------------------------------
# W_C
# ---------------------------------------------------------
def test_special_slice(F5):
    alg = construct("unarion", {}, F5)
    report = freudenthal_census(alg, mode="exhaustive", slice_kind="special", workers=2)
    assert report.counts["rank1"] == 1
    assert report.details["rank1_off_origin"] == 0


@pytest.mark.slow
def test_diagonal_slice(F5):
    alg = construct("unarion", {}, F5)
    report = freudenthal_census(alg, mode="exhaustive", slice_kind="diagonal", workers=2)
    assert report.total == 5 ** 8
    assert report.counts["rank0"] == 1


def test_sampled_w_census(F5):
    alg = construct("binarion-split", {}, F5)
    report = freudenthal_census(alg, mode="sampled", samples=300, seed=11)
    assert sum(report.counts.values()) == 300
    assert 0.0 <= report.details["rank4_fraction"] <= 1.0


def test_exhaustive_overflow(F5):
    alg = construct("octonion-split", {}, F5)
    with pytest.raises(CensusOverflow):
        freudenthal_census(alg, mode="exhaustive", slice_kind="full")
    with pytest.raises(UsageError):
        freudenthal_census(alg, slice_kind="diagonal-ish")


def test_overflow_respects_config_limit(F5):
    alg = construct("unarion", {}, F5)
    with pytest.raises(CensusOverflow):
        jordan_census(alg, config=FkitConfig(exhaustive_limit=100))


# ---------------------------------------------------------
# SO(3) и слои
# ---------------------------------------------------------
@pytest.mark.slow
def test_so3_orders(F5, F7):
    identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert so3_order(identity, F5) == 120
    assert so3_order(identity, F7) == 336
    report = so3_census([[1, 0, 0], [0, 2, 0], [0, 0, 3]], F5)
    assert report.counts == {"so3": 120}


def test_so3_rejects_degenerate(F5, Q):
    with pytest.raises(DegenerateForm):
        so3_order([[1, 0, 0], [0, 1, 0], [0, 0, 0]], F5)
    with pytest.raises(FieldError):
        so3_order([[1, 0, 0], [0, 1, 0], [0, 0, 1]], Q)


def test_fiber_census_empty_for_wrong_d(F5):
    alg = construct("quaternion", {"a": "1", "b": "1"}, F5)
    report = fiber_census(fiber_target(F5, [[1, 0, 0], [0, 1, 0], [0, 0, -1]], 1), alg)
    assert report.counts == {"fiber": 0}
    assert report.details["witness"] is None
    assert report.details["so3_order"] == 120
    with pytest.raises(WrongDimension):
        fiber_census(fiber_target(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 0), construct("unarion", {}, F5))


# ---------------------------------------------------------
# F^-1(0)
# ---------------------------------------------------------
def test_expected_rank0_rank1():
    assert expected_rank0_rank1(5) == 93744
    assert expected_rank0_rank1(3) == 8 * 728 // 2


@pytest.mark.slow
def test_rank0_census_matrix2x2(F5):
    report = rank0_census(construct("matrix2x2", {}, F5), workers=4)
    assert report.details["candidates"] == 745
    assert report.counts["rank1"] == 93744
    assert report.details["violations"] == 0


def test_rank0_census_anisotropic_has_no_rank1(F5):
    report = rank0_census(construct("binarion-quadratic", {"eps": "2"}, F5))
    assert report.counts["rank1"] == 0
    assert report.details["split"] is False
    assert "expected_rank1" not in report.details


def test_rank0_census_rejects_unarion(F5):
    with pytest.raises(WrongDimension):
        rank0_census(construct("unarion", {}, F5))


# ---------------------------------------------------------
# отчёты
# ---------------------------------------------------------
def test_emit_report_formats(tmp_path, F5):
    report = jordan_census(construct("unarion", {}, F5))
    paths = emit_report(report, out_dir=str(tmp_path), fmt="both")
    assert [os.path.splitext(p)[1] for p in paths] == [".json", ".csv"]
    with open(paths[0], encoding="utf-8") as f:
        data = json.load(f)
    assert data["id"] == report.report_id
    assert data["counts"] == report.counts
    frame = pd.read_csv(paths[1])
    assert list(frame.columns) == ["space", "mode", "stratum", "count", "fraction"]
    assert frame["count"].sum() == report.total


def test_emit_report_uses_env_out_dir(F5):
    report = jordan_census(construct("unarion", {}, F5))
    paths = emit_report(report)
    assert paths[0].startswith(os.environ["FKIT_OUT_DIR"])
