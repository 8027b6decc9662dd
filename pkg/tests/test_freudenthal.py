# tests/test_freudenthal.py
import pytest

from errors import InvalidParameter
from algebra.composition import construct
from algebra.freudenthal import (
    FreudenthalElem,
    GeneratorWord,
    calibrate_flat_duality,
    flat,
    fourlinear,
    involution,
    levi,
    n_atom,
    nbar_atom,
    quartic,
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
from algebra.jordan import diag, jordan_identity, jordan_zero, norm_N, random_jordan, sharp


def e_a(alg):
    z = jordan_zero(alg)
    return FreudenthalElem(1, z, z, 0)


def e_ad(alg):
    z = jordan_zero(alg)
    return FreudenthalElem(1, z, z, 1)


# ---------------------------------------------------------
# формы
# ---------------------------------------------------------
def test_quartic_of_rank4_point(Q):
    for tag in ("unarion", "matrix2x2"):
        alg = construct(tag, {}, Q)
        assert quartic(e_ad(alg)) == 1
        assert quartic(e_a(alg)) == 0


def test_symplectic_is_alternating(F5, rng):
    alg = construct("quaternion", {"a": "1", "b": "1"}, F5)
    for _ in range(5):
        v, w = random_w(alg, rng), random_w(alg, rng)
        assert symplectic(v, w) == -symplectic(w, v)
        assert symplectic(v, v) == 0


def test_fourlinear_normalization(Q, rng):
    alg = construct("binarion-split", {}, Q)
    v = random_w(alg, rng)
    assert fourlinear(v, v, v, v) == 2 * quartic(v)


def test_flat_duality_constant(Q, F5):
    for field in (Q, F5):
        for tag in ("unarion", "binarion-split", "matrix2x2"):
            assert calibrate_flat_duality(construct(tag, {}, field)) == -1


def test_flat_matches_fourlinear(F7, rng):
    alg = construct("binarion-split", {}, F7)
    for _ in range(3):
        v, w = random_w(alg, rng), random_w(alg, rng)
        assert symplectic(flat(v), w) == -fourlinear(v, v, v, w)


def test_dimension(Q):
    dims = [w_dim(construct(t, {}, Q)) for t in ("unarion", "binarion-split", "matrix2x2", "octonion-split")]
    assert dims == [14, 20, 32, 56]


# ---------------------------------------------------------
# ранг
# ---------------------------------------------------------
def test_rank_seeds(Q):
    alg = construct("binarion-split", {}, Q)
    z = jordan_zero(alg)
    assert rank_w(w_zero(alg)) == 0
    assert rank_w(e_a(alg)) == 1
    assert rank_w(FreudenthalElem(0, diag(alg, 1, 0, 0), z, 0)) == 1
    assert rank_w(FreudenthalElem(0, diag(alg, 1, 1, 0), z, 0)) == 2
    assert rank_w(FreudenthalElem(0, jordan_identity(alg), z, 0)) == 3
    assert rank_w(e_ad(alg)) == 4


def test_special_rank1(F5, rng):
    alg = construct("binarion-split", {}, F5)
    for _ in range(5):
        b = random_jordan(alg, rng)
        v = special_rank1(b)
        assert v.c == sharp(b) and v.d == norm_N(b)
        assert rank_w(v) == 1
        bumped = FreudenthalElem(v.a, v.b, v.c, v.d + 1)
        assert rank_w(bumped) != 1


def test_rank_preserved_by_words(F5, rng):
    alg = construct("unarion", {}, F5)
    z = jordan_zero(alg)
    seeds = [e_a(alg), FreudenthalElem(0, diag(alg, 1, 1, 0), z, 0),
             FreudenthalElem(0, jordan_identity(alg), z, 0), e_ad(alg)]
    for v in seeds:
        word = random_word(alg, rng, length=3)
        assert rank_w(word(v)) == rank_w(v)


def test_rank1_criterion_agrees_with_rank(F5, rng):
    alg = construct("binarion-split", {}, F5)
    samples = [random_levi(alg, rng) for _ in range(4)]
    z = jordan_zero(alg)
    candidates = [
        random_word(alg, rng, length=2)(e_a(alg)),
        FreudenthalElem(0, diag(alg, 1, 1, 0), z, 0),
        e_ad(alg),
        random_w(alg, rng),
    ]
    for v in candidates:
        assert rank1_criterion_GS(v, samples) == (rank_w(v) == 1)
    assert not rank1_criterion_GS(w_zero(alg))


# ---------------------------------------------------------
# образующие
# ---------------------------------------------------------
def test_n_on_e_a(Q, rng):
    alg = construct("quaternion", {"a": "-1", "b": "-1"}, Q)
    x = random_jordan(alg, rng)
    v = GeneratorWord([n_atom(x)])(e_a(alg))
    assert v == FreudenthalElem(1, x, sharp(x), norm_N(x))


def test_involution_squared_is_minus_one(F5, rng):
    alg = construct("matrix2x2", {}, F5)
    v = random_w(alg, rng)
    assert GeneratorWord([involution(), involution()])(v) == -v


def test_s_zero_rejected(F5):
    with pytest.raises(InvalidParameter):
        s_atom(F5(0))
    with pytest.raises(InvalidParameter):
        sstar_atom(F5(0))


def test_similitude_factors(F7, rng):
    alg = construct("binarion-split", {}, F7)
    lam = F7(3)
    cases = [
        (n_atom(random_jordan(alg, rng)), 1),
        (nbar_atom(random_jordan(alg, rng)), 1),
        (involution(), 1),
        (s_atom(lam), 3),
        (sstar_atom(lam), 3),
        (random_levi(alg, rng), 1),
    ]
    for atom, expected in cases:
        word = GeneratorWord([atom])
        nu = similitude_factor(word, alg, rng=rng, samples=4)
        assert nu == expected
        assert word.declared_factor(F7) == expected
        v = random_w(alg, rng)
        assert flat(word(v)) == nu * word(flat(v))


def test_word_inverse(F5, rng):
    alg = construct("quaternion", {"a": "1", "b": "1"}, F5)
    word = random_word(alg, rng, length=4)
    v = random_w(alg, rng)
    assert word.inverse()(word(v)) == v


def test_conjugation_by_involution(Q, rng):
    alg = construct("binarion-split", {}, Q)
    x = random_jordan(alg, rng)
    v = random_w(alg, rng)
    iota = involution()
    word = GeneratorWord(iota.inverse() + [n_atom(x), iota])
    assert word(v) == GeneratorWord([nbar_atom(-x)])(v)


def test_levi_with_identity_is_identity(Q, rng):
    alg = construct("matrix2x2", {}, Q)
    v = random_w(alg, rng)
    assert GeneratorWord([levi(None, None)])(v) == v
