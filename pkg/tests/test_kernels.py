# tests/test_kernels.py
import numpy as np
import pytest

from errors import FieldError, UsageError
from algebra.composition import construct
from algebra.freudenthal import (
    FreudenthalElem,
    apply,
    quartic,
    random_levi,
    random_w,
    random_word,
    rank1_criterion_GS,
    rank_w,
    s_atom,
    special_rank1,
    w_dim,
)
from algebra.jordan import (
    act,
    act_dual,
    diag,
    jordan_identity,
    jordan_mul,
    jordan_zero,
    norm_N,
    random_jordan,
    rank_jordan,
)
from kernels.ffield import j_mul, j_norm, matvec, w_quartic
from kernels.pool import partition, run_partitioned
from kernels.scans import (
    j_rank_change_rows,
    j_rank_rows,
    jordan_rank_scan,
    similitude_rows,
    so3_count,
    w_criterion_rows,
    w_criterion_slice_scan,
    w_rank_change_rows,
    w_rank_rows,
    w_slice_scan,
)
from kernels.tables import (
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


def _rank_seeds(alg, rng):
    z = jordan_zero(alg)
    seeds = [
        FreudenthalElem(0, z, z, 0),
        FreudenthalElem(1, z, z, 0),
        FreudenthalElem(0, diag(alg, 1, 1, 0), z, 0),
        FreudenthalElem(0, jordan_identity(alg), z, 0),
        FreudenthalElem(1, z, z, 1),
    ]
    out = []
    for v in seeds:
        out.append(v)
        out.append(random_word(alg, rng, length=2)(v))
    return out


# ---------------------------------------------------------
# таблицы
# ---------------------------------------------------------
def test_tables_require_prime_field(Q, F25):
    with pytest.raises(FieldError):
        build_tables(construct("unarion", {}, Q))
    with pytest.raises(FieldError):
        build_tables(construct("binarion-split", {}, F25))


def test_table_shapes(F5):
    t = build_tables(construct("quaternion", {"a": "1", "b": "1"}, F5))
    assert (t.p, t.n, t.jd, t.wd) == (5, 4, 15, 32)
    assert t.t0.shape == (3, 4)
    assert t.G0.shape == (3, 3)
    assert t.inv2 * 2 % 5 == 1


def test_array_conversion(F5, rng):
    alg = construct("binarion-split", {}, F5)
    X = random_jordan(alg, rng)
    assert array_to_jordan(alg, jordan_to_array(X)) == X
    v = random_w(alg, rng)
    assert array_to_w(alg, w_to_array(v)) == v


def test_slice_slots(F5):
    slots, base = slice_slots(1, "diagonal")
    assert len(slots) == 8 and not base.any()
    slots, base = slice_slots(2, "special")
    assert len(slots) == 10 and base[0] == 1
    assert len(slice_slots(4, "full")[0]) == 32
    with pytest.raises(UsageError):
        slice_slots(1, "bogus")


# ---------------------------------------------------------
# ядра против точной арифметики
# ---------------------------------------------------------
@pytest.mark.parametrize("tag", ["unarion", "binarion-split", "matrix2x2"])
def test_jordan_kernel_matches_library(tag, F5, rng):
    alg = construct(tag, {}, F5)
    t = build_tables(alg)
    elems = [random_jordan(alg, rng) for _ in range(12)]
    elems += [jordan_zero(alg), diag(alg, 1, 0, 0), diag(alg, 1, 1, 0)]
    rows = np.stack([jordan_to_array(X) for X in elems])
    ranks = j_rank_rows(t.alg, t.p, t.inv2, rows)
    assert list(ranks) == [rank_jordan(X) for X in elems]
    for X, row in zip(elems, rows):
        assert F5(int(j_norm(row, t.alg, t.p, t.inv2))) == norm_N(X)


@pytest.mark.parametrize("tag", ["unarion", "binarion-split"])
def test_freudenthal_kernel_matches_library(tag, F7, rng):
    alg = construct(tag, {}, F7)
    t = build_tables(alg)
    elems = _rank_seeds(alg, rng) + [random_w(alg, rng) for _ in range(4)]
    elems.append(special_rank1(random_jordan(alg, rng)))
    rows = np.stack([w_to_array(v) for v in elems])
    ranks = w_rank_rows(t.alg, t.p, t.inv2, rows)
    assert list(ranks) == [rank_w(v) for v in elems]
    for v, row in zip(elems, rows):
        assert F7(int(w_quartic(row, t.alg, t.p, t.inv2))) == quartic(v)


def test_special_slice_has_single_rank1(F5):
    t = build_tables(construct("unarion", {}, F5))
    slots, base = slice_slots(1, "special")
    total = 5 ** len(slots)
    counts, _, rank1_off = w_slice_scan(t.alg, t.p, t.inv2, slots, base, 0, total)
    assert counts.sum() == total
    assert counts[1] == 1
    assert rank1_off == 0


# ---------------------------------------------------------
# матрицы атомов, критерий ранга 1, подобия
# ---------------------------------------------------------
@pytest.mark.parametrize("tag", ["unarion", "binarion-split", "quaternion", "octonion-split"])
def test_jordan_mul_table_matches_library(tag, F5, rng):
    params = {"a": "1", "b": "1"} if tag == "quaternion" else {}
    alg = construct(tag, params, F5)
    t = build_tables(alg)
    jt = jordan_mul_table(alg)
    for _ in range(5):
        X, Y = random_jordan(alg, rng), random_jordan(alg, rng)
        out = j_mul(jordan_to_array(X), jordan_to_array(Y), jt, t.p)
        assert array_to_jordan(alg, out) == jordan_mul(X, Y)


def test_word_matrix_matches_apply(F7, rng):
    alg = construct("quaternion", {"a": "2", "b": "3"}, F7)
    word = random_word(alg, rng, length=3)
    M = word_matrix(word, alg)
    assert M.shape == (w_dim(alg), w_dim(alg))
    for _ in range(4):
        v = random_w(alg, rng)
        assert array_to_w(alg, matvec(M, w_to_array(v), 7)) == apply(word, v)


def test_levi_matrices_start_with_identity(F5, rng):
    alg = construct("binarion-split", {}, F5)
    samples = [random_levi(alg, rng) for _ in range(3)]
    acts, duals = levi_matrices(alg, samples)
    assert acts.shape == duals.shape == (4, 9, 9)
    assert (acts[0] == np.eye(9, dtype=np.int64)).all()
    X = random_jordan(alg, rng)
    g, h = samples[1].g, samples[1].h
    assert array_to_jordan(alg, matvec(acts[2], jordan_to_array(X), 5)) == act(g, h, X)
    assert array_to_jordan(alg, matvec(duals[2], jordan_to_array(X), 5)) == act_dual(g, h, X)


def test_matrices_require_prime_field(Q):
    alg = construct("unarion", {}, Q)
    with pytest.raises(FieldError):
        jordan_mul_table(alg)
    with pytest.raises(FieldError):
        levi_matrices(alg, [])


def test_criterion_rows_match_exact_criterion(F5, rng):
    alg = construct("binarion-split", {}, F5)
    t = build_tables(alg)
    samples = [random_levi(alg, rng) for _ in range(4)]
    acts, duals = levi_matrices(alg, samples)
    z = jordan_zero(alg)
    elems = [
        special_rank1(random_jordan(alg, rng)),
        FreudenthalElem(0, diag(alg, 1, 0, 0), diag(alg, 0, 1, 0), 0),
        FreudenthalElem(0, diag(alg, 1, 0, 0), diag(alg, 1, 0, 0), 0),
        FreudenthalElem(1, z, z, 1),
        FreudenthalElem(0, z, z, 0),
    ] + [random_w(alg, rng) for _ in range(5)]
    rows = np.array([w_to_array(v) for v in elems], dtype=np.int64)
    crit = w_criterion_rows(t.alg, t.p, t.inv2, jordan_mul_table(alg), acts, duals, rows)
    assert [bool(c) for c in crit] == [rank1_criterion_GS(v, samples) for v in elems]
    assert list(crit[:5]) == [1, 1, 0, 0, 0]


def test_criterion_agrees_with_rank_on_wrank1_slice(F5, rng):
    alg = construct("quaternion", {"a": "1", "b": "1"}, F5)
    t = build_tables(alg)
    acts, duals = levi_matrices(alg, [random_levi(alg, rng) for _ in range(2)])
    slots, base = slice_slots(alg.dim, "wrank1")
    mismatches, first, rank1 = w_criterion_slice_scan(
        t.alg, t.p, t.inv2, jordan_mul_table(alg), acts, duals, slots, base, 0, 5 ** len(slots)
    )
    assert mismatches == 0 and first == -1
    # a t = d s = s t = a d = 0 вне нуля
    assert rank1 == 48


def test_similitude_rows_detect_wrong_factor(F7, rng):
    alg = construct("binarion-split", {}, F7)
    t = build_tables(alg)
    lam = F7(3)
    M = word_matrix(s_atom(lam), alg)
    rows = rng.integers(0, 7, size=(20, t.wd), dtype=np.int64)
    failures, first = similitude_rows(t.alg, t.p, t.inv2, M, lam.residue, rows)
    assert failures == 0 and first == -1
    failures, first = similitude_rows(t.alg, t.p, t.inv2, M, 2, rows)
    assert failures > 0 and first >= 0


def test_rank_change_rows_are_zero_for_generators(F5, rng):
    alg = construct("binarion-split", {}, F5)
    t = build_tables(alg)
    mats = np.stack([word_matrix(random_word(alg, rng, length=1), alg) for _ in range(6)])
    rows = np.array([w_to_array(v) for v in _rank_seeds(alg, rng)], dtype=np.int64)
    words = rng.integers(0, 6, size=(len(rows), 3), dtype=np.int64)
    changes, first, ranks = w_rank_change_rows(t.alg, t.p, t.inv2, mats, words, rows)
    assert changes == 0 and first == -1
    assert list(ranks) == [rank_w(array_to_w(alg, r)) for r in rows]

    acts, _ = levi_matrices(alg, [random_levi(alg, rng) for _ in range(3)])
    jrows = np.array([jordan_to_array(random_jordan(alg, rng)) for _ in range(12)], dtype=np.int64)
    jchanges, _ = j_rank_change_rows(t.alg, t.p, t.inv2, acts[1:], jrows)
    assert jchanges == 0


# ---------------------------------------------------------
# разбиение и потоки
# ---------------------------------------------------------
@pytest.mark.parametrize("total,workers", [(1, 4), (10, 1), (97, 3), (625, 8)])
def test_partition_covers_range(total, workers):
    parts = partition(total, workers)
    assert parts[0][0] == 0 and parts[-1][1] == total
    for (a, b), (c, _) in zip(parts, parts[1:]):
        assert b == c and a < b
    assert sum(b - a for a, b in parts) == total


def test_partition_empty():
    assert partition(0, 4) == []


def test_thread_count_does_not_change_counts(F5):
    t = build_tables(construct("unarion", {}, F5))
    total = 5 ** t.jd
    args = (t.alg, t.p, t.inv2, t.jd)
    merged = []
    for workers in (1, 3):
        parts = run_partitioned(jordan_rank_scan, args, total, workers, label="test")
        counts = sum(c for c, _ in parts)
        acc = sum(a for _, a in parts) % ((1 << 61) - 1)
        merged.append((list(counts), acc))
    assert merged[0] == merged[1]
    assert sum(merged[0][0]) == total
    assert merged[0][0][0] == 1


# ---------------------------------------------------------
# SO(3)
# ---------------------------------------------------------
@pytest.mark.slow
@pytest.mark.parametrize("p,order", [(5, 120), (7, 336)])
def test_so3_order(p, order):
    cmat = np.eye(3, dtype=np.int64)
    assert so3_count(cmat, p) == order
