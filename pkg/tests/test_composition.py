# tests/test_composition.py
import pytest

from errors import InvalidParameter, NotAnAutomorphism, ParseError, WrongDimension
from algebra import dimension_table
from algebra.composition import (
    PARAM_NAMES,
    TAGS,
    Automorphism,
    conjugation_automorphism,
    construct,
    inner_automorphism,
    is_alternative,
    is_associative,
    random_automorphism,
    trace0_basis,
    verify_composition_law,
)


def all_algebras(field):
    out = [
        construct("unarion", {}, field),
        construct("binarion-split", {}, field),
        construct("quaternion", {"a": "1", "b": "1"}, field),
        construct("matrix2x2", {}, field),
        construct("octonion-split", {}, field),
    ]
    if field.kind == "Q":
        out.append(construct("quaternion", {"a": "-1", "b": "-1"}, field))
        out.append(construct("binarion-quadratic", {"eps": "2"}, field))
    else:
        out.append(construct("binarion-quadratic", {"eps": "2"}, field))
    return out


# ---------------------------------------------------------
# построение
# ---------------------------------------------------------
def test_tags_and_param_names():
    assert set(PARAM_NAMES) == set(TAGS)
    assert PARAM_NAMES["quaternion"] == ("a", "b")
    assert PARAM_NAMES["octonion"] == ("a", "b", "c")
    assert PARAM_NAMES["matrix2x2"] == ()


def test_construct_is_cached(F5):
    a = construct("quaternion", {"a": "1", "b": "1"}, F5)
    b = construct("quaternion", {"a": 1, "b": 1}, F5)
    assert a is b
    assert a.label() == "quaternion(1,1)/Fp:5"
    assert construct("quaternion", {"a": "6", "b": "-4"}, F5) is a
    assert construct("quaternion", {"a": "2", "b": "1"}, F5) is not a


def test_construct_rejects_bad_input(Q):
    with pytest.raises(ParseError):
        construct("sedenion", {}, Q)
    with pytest.raises(ParseError):
        construct("quaternion", {"a": "1"}, Q)
    with pytest.raises(ParseError):
        construct("unarion", {"a": "1"}, Q)
    with pytest.raises(InvalidParameter):
        construct("quaternion", {"a": "0", "b": "1"}, Q)


def test_binarion_quadratic_requires_nonsquare(F5, Q):
    with pytest.raises(InvalidParameter):
        construct("binarion-quadratic", {"eps": "4"}, F5)
    with pytest.raises(InvalidParameter):
        construct("binarion-quadratic", {"eps": "9"}, Q)


def test_dimensions(Q):
    dims = [alg.dim for alg in all_algebras(Q)]
    assert dims == [1, 2, 4, 4, 8, 4, 2]


def test_dimension_table():
    rows = {r["dim_C"]: (r["dim_J"], r["dim_W"]) for r in dimension_table()}
    assert rows == {1: (6, 14), 2: (9, 20), 4: (15, 32), 8: (27, 56)}


# ---------------------------------------------------------
# закон композиции
# ---------------------------------------------------------
@pytest.mark.parametrize("fname", ["Q", "F5"])
def test_composition_law_sampled(fname, request, rng):
    field = request.getfixturevalue(fname)
    for alg in all_algebras(field):
        trials = 30 if alg.dim == 8 else 100
        rep = verify_composition_law(alg, trials=trials, rng=rng)
        assert rep.passed, (alg.label(), rep.failures[:3])
        assert rep.checked == trials


def test_composition_law_exhaustive_binarion(F5):
    alg = construct("binarion-split", {}, F5)
    rep = verify_composition_law(alg, exhaustive=True)
    assert rep.passed
    assert rep.checked == 25 * 25


def test_sampled_mode_needs_rng(Q):
    with pytest.raises(InvalidParameter):
        verify_composition_law(construct("unarion", {}, Q), trials=5)


def test_quaternion_relations(Q):
    alg = construct("quaternion", {"a": "2", "b": "3"}, Q)
    one, i, j, k = (alg.basis(n) for n in range(4))
    assert i * i == alg.scalar(2)
    assert j * j == alg.scalar(3)
    assert i * j == k
    assert k * k == alg.scalar(-6)
    assert i.norm() == -2
    assert i.trace() == 0
    assert one.trace() == 2


def test_matrix_norm_is_determinant(F5):
    alg = construct("matrix2x2", {}, F5)
    x = alg.element([1, 2, 3, 4])
    assert x.norm() == 1 * 4 - 2 * 3
    assert x.trace() == 5
    assert alg.basis(1).norm() == 0


def test_associativity_and_alternativity(Q):
    quat = construct("quaternion", {"a": "-1", "b": "-1"}, Q)
    octo = construct("octonion", {"a": "-1", "b": "-1", "c": "-1"}, Q)
    assert is_associative(quat)
    assert not is_associative(octo)
    assert is_alternative(octo)


def test_split_flags(Q, F5):
    assert not construct("quaternion", {"a": "-1", "b": "-1"}, Q).is_split()
    assert construct("quaternion", {"a": "1", "b": "1"}, Q).is_split()
    assert construct("matrix2x2", {}, Q).is_split()
    assert not construct("binarion-quadratic", {"eps": "2"}, Q).is_split()
    assert construct("binarion-split", {}, Q).is_split()
    assert not construct("octonion", {"a": "-1", "b": "-1", "c": "-1"}, Q).is_split()
    assert construct("quaternion", {"a": "2", "b": "3"}, F5).is_split()
    assert not construct("binarion-quadratic", {"eps": "2"}, F5).is_split()


def test_trace0_basis(F5):
    for alg in all_algebras(F5):
        basis = trace0_basis(alg)
        assert len(basis) == alg.dim - 1
        assert all(u.trace() == 0 for u in basis)


# ---------------------------------------------------------
# автоморфизмы
# ---------------------------------------------------------
def test_random_automorphisms_preserve_product(F5, rng):
    for alg in all_algebras(F5):
        g = random_automorphism(alg, rng)
        for _ in range(5):
            x, y = alg.random(rng), alg.random(rng)
            assert g(x * y) == g(x) * g(y)
            assert g(x).norm() == x.norm()


def test_inner_automorphism_dims(Q):
    octo = construct("octonion-split", {}, Q)
    with pytest.raises(WrongDimension):
        inner_automorphism(octo.basis(0))
    with pytest.raises(WrongDimension):
        conjugation_automorphism(construct("quaternion", {"a": "1", "b": "1"}, Q))


def test_non_automorphism_rejected(Q):
    alg = construct("quaternion", {"a": "-1", "b": "-1"}, Q)
    rows = [[Q(2 if i == j else 0) for j in range(4)] for i in range(4)]
    with pytest.raises(NotAnAutomorphism):
        Automorphism(alg, rows)
