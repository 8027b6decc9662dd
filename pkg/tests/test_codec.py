# tests/test_codec.py
import pytest

from errors import InvalidParameter, ParseError
from algebra.composition import construct
from algebra.freudenthal import quartic
from codec import (
    algebra_to_json,
    dumps,
    loads,
    parse_algebra,
    parse_atom,
    parse_element,
    parse_jordan,
    parse_matrix,
    parse_scalar,
    parse_w,
    parse_word,
    parse_xi,
    w_to_json,
    word_to_json,
)
from fibers import target_matrix

ZERO_J = {"c": ["0", "0", "0"], "x": [["0"], ["0"], ["0"]]}


# ---------------------------------------------------------
# JSON и скаляры
# ---------------------------------------------------------
def test_loads_rejects_malformed_json():
    with pytest.raises(ParseError):
        loads("{not json")
    assert loads('{"a": "1"}') == {"a": "1"}


def test_scalars_are_exact(Q, F5):
    assert parse_scalar(Q, "3/4") == Q("3/4")
    assert parse_scalar(F5, 7) == 2
    for bad in (0.5, True, None, [1]):
        with pytest.raises(ParseError):
            parse_scalar(Q, bad)


# ---------------------------------------------------------
# алгебры и элементы
# ---------------------------------------------------------
def test_parse_algebra_forms(Q, F5):
    a = parse_algebra("quaternion:1,1", F5)
    assert a is construct("quaternion", {"a": "1", "b": "1"}, F5)
    b = parse_algebra({"tag": "octonion-split", "params": {}, "field": {"field": "Q"}})
    assert b.field == Q and b.dim == 8
    assert parse_algebra(algebra_to_json(a)) is a


@pytest.mark.parametrize("spec", ["quaternion:1", "sedenion", "octonion:1,1"])
def test_parse_algebra_rejects(spec, Q):
    with pytest.raises(ParseError):
        parse_algebra(spec, Q)


def test_parse_algebra_needs_field():
    with pytest.raises(ParseError):
        parse_algebra("matrix2x2")


def test_parse_algebra_zero_param_is_domain_error(Q):
    with pytest.raises(InvalidParameter):
        parse_algebra("quaternion:0,1", Q)


def test_parse_element(F5):
    alg = construct("matrix2x2", {}, F5)
    x = parse_element(alg, ["1", "2", "3", "4"])
    assert x.norm() == 4 - 6
    with pytest.raises(ParseError):
        parse_element(alg, ["1", "2"])


def test_parse_jordan_requires_keys(Q):
    alg = construct("unarion", {}, Q)
    with pytest.raises(ParseError):
        parse_jordan(alg, {"c": ["1", "1", "1"]})
    with pytest.raises(ParseError):
        parse_jordan(alg, {"c": ["1", "1"], "x": [["0"], ["0"], ["0"]]})


def test_w_json_roundtrip(Q, rng):
    from algebra.freudenthal import random_w

    alg = construct("binarion-split", {}, Q)
    v = random_w(alg, rng)
    assert parse_w(alg, loads(dumps(w_to_json(v)))) == v


def test_parse_w_rank4_point(Q):
    alg = construct("unarion", {}, Q)
    v = parse_w(alg, {"a": "1", "b": ZERO_J, "c": ZERO_J, "d": "1"})
    assert quartic(v) == 1
    with pytest.raises(ParseError):
        parse_w(alg, {"a": "1", "b": ZERO_J})


def test_parse_matrix_shape(Q):
    with pytest.raises(ParseError):
        parse_matrix(Q, [[1, 0], [0, 1]])


# ---------------------------------------------------------
# слова и xi
# ---------------------------------------------------------
def test_parse_word(F5):
    alg = construct("unarion", {}, F5)
    word = parse_word(alg, [
        {"atom": "s", "lambda": "2"},
        {"atom": "involution"},
        {"atom": "n", "x": {"c": ["1", "0", "0"], "x": [["0"], ["0"], ["0"]]}},
        {"atom": "gl3", "h": [[1, 0, 0], [0, 2, 0], [0, 0, 1]]},
    ])
    assert len(word) == 4
    assert word.declared_factor(F5) == 2
    assert [a["atom"] for a in word_to_json(word)] == ["s", "involution", "n", "levi"]


def test_parse_word_errors(F5):
    alg = construct("unarion", {}, F5)
    with pytest.raises(ParseError):
        parse_word(alg, [{"atom": "rotate"}])
    with pytest.raises(ParseError):
        parse_word(alg, [{"atom": "s"}])
    with pytest.raises(InvalidParameter):
        parse_word(alg, [{"atom": "s", "lambda": "0"}])
    with pytest.raises(InvalidParameter):
        parse_word(alg, [{"atom": "gl3", "h": [[1, 0, 0], [0, 0, 0], [0, 0, 1]]}])


def test_parse_xi(Q):
    xi = parse_xi(Q, {"c": [["1", 0, 0], [0, 1, 0], [0, 0, "-1"]], "d": "-2"})
    assert target_matrix(xi)[2][2] == -1
    assert xi.d == -2
    with pytest.raises(ParseError):
        parse_xi(Q, {"c": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
