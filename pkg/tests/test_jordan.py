# tests/test_jordan.py
import pytest

from errors import DescriptorMismatch, InvalidParameter
from algebra.composition import construct, random_automorphism
from algebra.jordan import (
    Gl3Elem,
    J,
    JordanElem,
    act,
    act_dual,
    cross,
    diag,
    embed,
    f_map,
    is_trace0_strip,
    jordan_dim,
    jordan_identity,
    jordan_mul,
    jordan_zero,
    norm_N,
    random_gl3,
    random_jordan,
    random_trace0_strip,
    rank_jordan,
    sharp,
    trace,
    trace_pairing,
    trilinear,
    v0,
)


def sample_algebras(field):
    return [
        construct("unarion", {}, field),
        construct("binarion-split", {}, field),
        construct("quaternion", {"a": "1", "b": "1"}, field),
        construct("octonion-split", {}, field),
    ]


# ---------------------------------------------------------
# норма, след, #
# ---------------------------------------------------------
def test_diagonal_norm_and_trace(Q):
    alg = construct("quaternion", {"a": "-1", "b": "-1"}, Q)
    X = diag(alg, 2, 3, 5)
    assert norm_N(X) == 30
    assert trace(X) == 10
    assert sharp(X) == diag(alg, 15, 10, 6)


def test_unarion_norm_is_determinant(Q):
    # [[1,2,3],[2,4,5],[3,5,6]]: x1 = m12, x2 = m20, x3 = m01
    F = construct("unarion", {}, Q)
    X = JordanElem(F, [1, 4, 6], [F.element([5]), F.element([3]), F.element([2])])
    assert norm_N(X) == -1


@pytest.mark.parametrize("fname", ["Q", "F5"])
def test_adjoint_identities(fname, request, rng):
    field = request.getfixturevalue(fname)
    for alg in sample_algebras(field):
        I = jordan_identity(alg)
        for _ in range(4):
            X = random_jordan(alg, rng)
            Xs = sharp(X)
            n = norm_N(X)
            assert sharp(Xs) == n * X
            assert jordan_mul(X, Xs) == n * I
            assert norm_N(Xs) == n * n
            assert trace_pairing(X, Xs) == 3 * n


@pytest.mark.parametrize("fname", ["Q", "F7"])
def test_trace_pairing_is_trace_of_jordan_product(fname, request, rng):
    field = request.getfixturevalue(fname)
    for alg in sample_algebras(field):
        for _ in range(3):
            X, Y = random_jordan(alg, rng), random_jordan(alg, rng)
            assert trace_pairing(X, Y) == trace(jordan_mul(X, Y))
            assert trace_pairing(X, Y) == trace_pairing(Y, X)


def test_cross_is_dual_to_trilinear(F7, rng):
    for alg in sample_algebras(F7):
        X, Y, Z = (random_jordan(alg, rng) for _ in range(3))
        assert trace_pairing(cross(X, Y), Z) == trilinear(X, Y, Z)
        assert trilinear(X, X, X) == 6 * norm_N(X)
        assert cross(X, X) == 2 * sharp(X)


def test_jordan_identity_is_unit(F5, rng):
    alg = construct("octonion-split", {}, F5)
    X = random_jordan(alg, rng)
    assert jordan_mul(jordan_identity(alg), X) == X


# ---------------------------------------------------------
# ранг
# ---------------------------------------------------------
def test_rank_values(Q):
    alg = construct("matrix2x2", {}, Q)
    assert rank_jordan(jordan_zero(alg)) == 0
    assert rank_jordan(diag(alg, 1, 0, 0)) == 1
    assert rank_jordan(diag(alg, 1, 1, 0)) == 2
    assert rank_jordan(jordan_identity(alg)) == 3


def test_rank_one_offdiagonal(Q):
    # x1 = e12 с x1^2 = 0: J(e12, 0, 0) имеет ранг 1
    alg = construct("matrix2x2", {}, Q)
    z = alg.zero()
    X = J([alg.basis(1), z, z])
    assert sharp(X).is_zero()
    assert rank_jordan(X) == 1


def test_dimension():
    assert [jordan_dim(n) for n in (1, 2, 4, 8)] == [6, 9, 15, 27]


# ---------------------------------------------------------
# f и вложение
# ---------------------------------------------------------
def test_f_after_embed_is_identity(Q, rng):
    F = construct("unarion", {}, Q)
    alg = construct("quaternion", {"a": "1", "b": "1"}, Q)
    for _ in range(5):
        X = random_jordan(F, rng)
        assert f_map(embed(X, alg)) == X


def test_embed_requires_unarion(Q):
    alg = construct("quaternion", {"a": "1", "b": "1"}, Q)
    with pytest.raises(InvalidParameter):
        embed(jordan_identity(alg), alg)


def test_f_map_takes_half_trace(Q):
    alg = construct("quaternion", {"a": "1", "b": "1"}, Q)
    x = alg.element([3, 1, 0, 2])
    X = J([x, alg.zero(), alg.zero()])
    assert f_map(X).x[0].coords[0] == 3


def test_f_map_kills_trace0_strips(F7, rng):
    alg = construct("octonion-split", {}, F7)
    for _ in range(5):
        X = random_trace0_strip(alg, rng)
        assert is_trace0_strip(X)
        assert f_map(X) == jordan_zero(construct("unarion", {}, F7))
    assert not is_trace0_strip(v0(alg))


def test_v0_is_rank_one_with_unit_trace(Q):
    for alg in sample_algebras(Q):
        assert rank_jordan(v0(alg)) == 1
        assert trace(v0(alg)) == 1


# ---------------------------------------------------------
# действие Aut(C) x GL3
# ---------------------------------------------------------
def test_act_scales_norm_by_det(F5, rng):
    for alg in sample_algebras(F5):
        g = random_automorphism(alg, rng)
        h = random_gl3(F5, rng)
        X, Y = random_jordan(alg, rng), random_jordan(alg, rng)
        assert norm_N(act(g, h, X)) == h.det * norm_N(X)
        assert trace_pairing(act(g, h, X), act_dual(g, h, Y)) == trace_pairing(X, Y)


def test_act_identity(Q, rng):
    alg = construct("binarion-split", {}, Q)
    X = random_jordan(alg, rng)
    assert act(None, Gl3Elem.identity(Q), X) == X


def test_singular_h_rejected(Q):
    with pytest.raises(InvalidParameter):
        Gl3Elem([[Q(1), Q(2), Q(3)], [Q(2), Q(4), Q(6)], [Q(0), Q(0), Q(1)]])


def test_mixed_algebras_rejected(Q):
    a = construct("quaternion", {"a": "1", "b": "1"}, Q)
    b = construct("matrix2x2", {}, Q)
    with pytest.raises(DescriptorMismatch):
        jordan_identity(a) + jordan_identity(b)
