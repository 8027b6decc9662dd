# tests/test_scalar.py
from fractions import Fraction

import pytest

from errors import DescriptorMismatch, FieldError, ParseError, ZeroDivision
from algebra.scalar import (
    arith,
    field_from_descriptor,
    parse_field,
    prime_field,
    quadratic_extension,
    rationals,
)


# ---------------------------------------------------------
# дескрипторы полей
# ---------------------------------------------------------
def test_parse_field_labels():
    assert parse_field("Q").label() == "Q"
    assert parse_field("Fp:5").label() == "Fp:5"
    assert parse_field("Fp2:5,2").label() == "Fp2:5,2"
    assert parse_field("Fp:7").descriptor() == {"field": "Fp", "p": 7}


def test_descriptor_roundtrip():
    for text in ("Q", "Fp:5", "Fp:11", "Fp2:7,3"):
        f = parse_field(text)
        assert field_from_descriptor(f.descriptor()) == f


@pytest.mark.parametrize("text", ["", "R", "Fp:", "Fp:x", "Fp2:5"])
def test_parse_field_rejects_garbage(text):
    with pytest.raises(ParseError):
        parse_field(text)


@pytest.mark.parametrize("text", ["Fp:4", "Fp:3", "Fp:2", "Fp2:5,4", "Fp2:7,2"])
def test_field_preconditions(text):
    # не простое, p < 5, eps квадрат
    with pytest.raises(FieldError):
        parse_field(text)


def test_infinite_field_not_enumerable(Q):
    with pytest.raises(FieldError):
        list(Q.elements())


# ---------------------------------------------------------
# арифметика
# ---------------------------------------------------------
def test_rational_arithmetic(Q):
    x = Q("3/4")
    y = Q("-1/2")
    assert x + y == Fraction(1, 4)
    assert x * y == Fraction(-3, 8)
    assert x / y == Fraction(-3, 2)
    assert str(Q("6/8")) == "3/4"


def test_float_rejected(Q, F5):
    with pytest.raises(ParseError):
        Q(0.5)
    with pytest.raises(ParseError):
        F5(1.0)


def test_prime_field_inverse_exhaustive(F7):
    for x in F7.elements():
        if x.is_zero():
            with pytest.raises(ZeroDivision):
                x.inv()
            continue
        assert x * x.inv() == 1


def test_prime_field_fraction_input(F5):
    assert F5("1/2") == 3
    assert F5(Fraction(1, 3)) == 2
    with pytest.raises(ParseError):
        F5("1/5")


def test_squares_mod_5(F5):
    squares = {int(str(x)) for x in F5.elements() if x.is_square()}
    assert squares == {0, 1, 4}


def test_quadratic_extension_is_a_field(F25):
    elems = list(F25.elements())
    assert len(elems) == 25
    for x in elems:
        if not x.is_zero():
            assert x * x.inv() == F25.one
    r = F25("r")
    assert r * r == 2
    assert str(F25("1+2r")) == "1+2r"
    assert str(F25("3-r")) == "3+4r"


def test_extension_makes_eps_square():
    F = quadratic_extension(5, 2)
    assert F(2).is_square()
    assert not prime_field(5)(2).is_square()


def test_mixed_fields_rejected(F5, F7):
    with pytest.raises(DescriptorMismatch):
        F5(1) + F7(1)
    with pytest.raises(DescriptorMismatch):
        arith("mul", F5(2), F7(3))


def test_arith_dispatch(F5):
    assert arith("add", F5(3), F5(4)) == 2
    assert arith("div", F5(1), F5(2)) == 3
    assert arith("neg", F5(1)) == 4
    with pytest.raises(ParseError):
        arith("pow", F5(1), F5(1))


def test_pow_negative(Q):
    assert Q(2) ** -2 == Fraction(1, 4)
    assert rationals()(3) ** 0 == 1
