# algebra/scalar.py
"""
Точные поля коэффициентов: Q (fractions.Fraction), F_p (p >= 5) и F_p(sqrt(eps)).

Скаляр хранит ссылку на поле и каноническое «сырое» значение:
  Q     -> Fraction (несократимая, знаменатель > 0)
  F_p   -> int в [0, p)
  F_p2  -> (a, b) с a + b*r, r^2 = eps
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, Optional, Tuple, Union

from sympy import isprime
from sympy.ntheory import legendre_symbol

from errors import DescriptorMismatch, FieldError, ParseError, ZeroDivision

__all__ = [
    "Field",
    "Scalar",
    "rationals",
    "prime_field",
    "quadratic_extension",
    "field_from_descriptor",
    "parse_field",
    "arith",
    "is_square",
    "enumerate_field",
]

RATIONAL_NUM_RANGE = 9
RATIONAL_DEN_RANGE = 5


class Field:
    kind: str = ""
    p: Optional[int] = None
    eps: Optional[int] = None

    # ---------------------------
    # идентичность
    # ---------------------------
    @property
    def key(self) -> Tuple:
        return (self.kind, self.p, self.eps)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return self.label()

    def label(self) -> str:
        raise NotImplementedError

    def descriptor(self) -> Dict[str, Any]:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> Optional[int]:
        return None

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    # ---------------------------
    # построение скаляров
    # ---------------------------
    def __call__(self, value: Any) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise DescriptorMismatch(f"скаляр над {value.field!r}, ожидалось {self!r}")
            return value
        if isinstance(value, str):
            return Scalar(self, self._parse(value))
        return Scalar(self, self._canon(value))

    @property
    def zero(self) -> "Scalar":
        return self(0)

    @property
    def one(self) -> "Scalar":
        return self(1)

    def elements(self) -> Iterator["Scalar"]:
        raise FieldError(f"{self.label()}: бесконечное поле нельзя перечислить")

    def random(self, rng) -> "Scalar":
        raise NotImplementedError

    def random_nonzero(self, rng) -> "Scalar":
        while True:
            s = self.random(rng)
            if not s.is_zero():
                return s

    # сырые операции переопределяются в наследниках
    def _canon(self, value: Any):
        raise NotImplementedError

    def _parse(self, text: str):
        raise NotImplementedError

    def _format(self, raw) -> str:
        return str(raw)

    def _add(self, u, v):
        return u + v

    def _sub(self, u, v):
        return u - v

    def _mul(self, u, v):
        return u * v

    def _neg(self, u):
        return -u

    def _inv(self, u):
        raise NotImplementedError

    def _is_zero(self, u) -> bool:
        return u == 0

    def _is_square(self, u) -> bool:
        raise NotImplementedError


class RationalField(Field):
    kind = "Q"

    def label(self) -> str:
        return "Q"

    def descriptor(self) -> Dict[str, Any]:
        return {"field": "Q"}

    def random(self, rng) -> "Scalar":
        num = int(rng.integers(-RATIONAL_NUM_RANGE, RATIONAL_NUM_RANGE + 1))
        den = int(rng.integers(1, RATIONAL_DEN_RANGE + 1))
        return Scalar(self, Fraction(num, den))

    def _canon(self, value: Any) -> Fraction:
        if isinstance(value, float):
            raise ParseError("float не допускается: только точные значения")
        return Fraction(value)

    def _parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"не удалось разобрать рациональное число {text!r}: {e}") from e

    def _inv(self, u: Fraction) -> Fraction:
        return 1 / u

    def _is_square(self, u: Fraction) -> bool:
        if u == 0:
            return True
        if u < 0:
            return False
        n, d = u.numerator, u.denominator
        return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


class PrimeField(Field):
    kind = "Fp"

    def __init__(self, p: int):
        self.p = int(p)

    def label(self) -> str:
        return f"Fp:{self.p}"

    def descriptor(self) -> Dict[str, Any]:
        return {"field": "Fp", "p": self.p}

    @property
    def order(self) -> int:
        return self.p

    def elements(self) -> Iterator["Scalar"]:
        for v in range(self.p):
            yield Scalar(self, v)

    def random(self, rng) -> "Scalar":
        return Scalar(self, int(rng.integers(0, self.p)))

    def _canon(self, value: Any) -> int:
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivision(f"знаменатель {value.denominator} делится на p={self.p}")
            return num * pow(den, -1, self.p) % self.p
        if isinstance(value, float):
            raise ParseError("float не допускается: только точные значения")
        return int(value) % self.p

    def _parse(self, text: str) -> int:
        try:
            return self._canon(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"не удалось разобрать вычет {text!r}: {e}") from e

    def _add(self, u, v):
        return (u + v) % self.p

    def _sub(self, u, v):
        return (u - v) % self.p

    def _mul(self, u, v):
        return (u * v) % self.p

    def _neg(self, u):
        return (-u) % self.p

    def _inv(self, u):
        return pow(u, -1, self.p)

    def _is_square(self, u) -> bool:
        return u == 0 or legendre_symbol(u, self.p) == 1


class QuadraticExtension(Field):
    kind = "Fp2"

    def __init__(self, p: int, eps: int):
        self.p = int(p)
        self.eps = int(eps) % self.p

    def label(self) -> str:
        return f"Fp2:{self.p},{self.eps}"

    def descriptor(self) -> Dict[str, Any]:
        return {"field": "Fp2", "p": self.p, "eps": self.eps}

    @property
    def order(self) -> int:
        return self.p * self.p

    def elements(self) -> Iterator["Scalar"]:
        for a in range(self.p):
            for b in range(self.p):
                yield Scalar(self, (a, b))

    def random(self, rng) -> "Scalar":
        return Scalar(self, (int(rng.integers(0, self.p)), int(rng.integers(0, self.p))))

    def _canon(self, value: Any) -> Tuple[int, int]:
        if isinstance(value, tuple) and len(value) == 2:
            return (int(value[0]) % self.p, int(value[1]) % self.p)
        base = prime_field(self.p)._canon(value)
        return (base, 0)

    def _parse(self, text: str) -> Tuple[int, int]:
        s = text.replace(" ", "")
        if not s:
            raise ParseError("пустая строка вместо элемента F_p2")
        if not s.endswith("r"):
            return (prime_field(self.p)._parse(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            real, imag = "0", body
        else:
            real, imag = body[:cut], body[cut:]
        if imag in ("", "+"):
            imag = "1"
        elif imag == "-":
            imag = "-1"
        fp = prime_field(self.p)
        return (fp._parse(real), fp._parse(imag))

    def _format(self, raw) -> str:
        a, b = raw
        if b == 0:
            return str(a)
        if a == 0:
            return f"{b}r"
        return f"{a}+{b}r"

    def _add(self, u, v):
        return ((u[0] + v[0]) % self.p, (u[1] + v[1]) % self.p)

    def _sub(self, u, v):
        return ((u[0] - v[0]) % self.p, (u[1] - v[1]) % self.p)

    def _mul(self, u, v):
        a, b = u
        c, d = v
        return ((a * c + self.eps * b * d) % self.p, (a * d + b * c) % self.p)

    def _neg(self, u):
        return ((-u[0]) % self.p, (-u[1]) % self.p)

    def _norm(self, u) -> int:
        a, b = u
        return (a * a - self.eps * b * b) % self.p

    def _inv(self, u):
        n_inv = pow(self._norm(u), -1, self.p)
        return (u[0] * n_inv % self.p, (-u[1]) * n_inv % self.p)

    def _is_zero(self, u) -> bool:
        return u == (0, 0)

    def _is_square(self, u) -> bool:
        # x квадрат в F_{p^2} <=> N(x) квадрат в F_p
        if self._is_zero(u):
            return True
        return legendre_symbol(self._norm(u), self.p) == 1


class Scalar:
    __slots__ = ("field", "v")

    def __init__(self, field: Field, v):
        self.field = field
        self.v = v

    def _coerce(self, other: Any) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field!r} и {other.field!r}: разные поля")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._add(self.v, o.v))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._sub(self.v, o.v))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._sub(o.v, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._mul(self.v, o.v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.v))

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivision(f"обратного к нулю нет ({self.field.label()})")
        return Scalar(self.field, self.field._inv(self.v))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.v)

    def is_square(self) -> bool:
        return self.field._is_square(self.v)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self.field._canon(other)
            except ZeroDivision:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.key, self.v))

    def __str__(self) -> str:
        return self.field._format(self.v)

    def __repr__(self) -> str:
        return f"Scalar({self}, {self.field.label()})"

    @property
    def residue(self) -> int:
        """Вычет в [0, p), только для простого поля (ядра numba)."""
        if not self.field.is_prime_field:
            raise FieldError(f"residue определён только для F_p, а не для {self.field.label()}")
        return self.v


# ---------------------------
# фабрики полей
# ---------------------------
def _check_char(p: int) -> int:
    try:
        p = int(p)
    except (TypeError, ValueError) as e:
        raise ParseError(f"p должно быть целым: {p!r}") from e
    if not isprime(p):
        raise FieldError(f"p={p} не простое")
    if p < 5:
        raise FieldError(f"характеристика {p} < 5 не поддерживается (деление на 2 и 3)")
    return p


@lru_cache(maxsize=None)
def rationals() -> RationalField:
    return RationalField()


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(_check_char(p))


@lru_cache(maxsize=None)
def quadratic_extension(p: int, eps: int) -> QuadraticExtension:
    p = _check_char(p)
    eps = int(eps) % p
    if eps == 0 or legendre_symbol(eps, p) != -1:
        raise FieldError(f"eps={eps} — квадрат по модулю {p}, расширение не строится")
    return QuadraticExtension(p, eps)


def field_from_descriptor(desc: Dict[str, Any]) -> Field:
    if not isinstance(desc, dict) or "field" not in desc:
        raise ParseError(f"ожидался дескриптор поля вида {{'field': ...}}, получено {desc!r}")
    kind = desc["field"]
    if kind == "Q":
        return rationals()
    if kind == "Fp":
        if "p" not in desc:
            raise ParseError("дескриптор Fp без 'p'")
        return prime_field(desc["p"])
    if kind == "Fp2":
        if "p" not in desc or "eps" not in desc:
            raise ParseError("дескриптор Fp2 требует 'p' и 'eps'")
        return quadratic_extension(desc["p"], desc["eps"])
    raise ParseError(f"неизвестный тип поля {kind!r}")


def parse_field(text: str) -> Field:
    """'Q' | 'Fp:5' | 'Fp2:5,2' -> Field."""
    s = (text or "").strip()
    if s in ("Q", "QQ"):
        return rationals()
    head, _, tail = s.partition(":")
    try:
        if head == "Fp":
            return prime_field(int(tail))
        if head == "Fp2":
            p_txt, _, eps_txt = tail.partition(",")
            return quadratic_extension(int(p_txt), int(eps_txt))
    except ValueError as e:
        if isinstance(e, FieldError):
            raise
        raise ParseError(f"не удалось разобрать поле {text!r}: {e}") from e
    raise ParseError(f"неизвестное поле {text!r} (ожидается Q, Fp:p или Fp2:p,eps)")


# ---------------------------
# операции уровня модуля
# ---------------------------
_ARITH = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
    "neg": lambda x, y: -x,
    "inv": lambda x, y: x.inv(),
}


def arith(op: str, x: Scalar, y: Union[Scalar, None] = None) -> Scalar:
    if op not in _ARITH:
        raise ParseError(f"неизвестная операция {op!r}")
    if y is not None and isinstance(y, Scalar) and y.field != x.field:
        raise DescriptorMismatch(f"{x.field!r} и {y.field!r}: разные поля")
    return _ARITH[op](x, y)


def is_square(x: Scalar) -> bool:
    return x.is_square()


def enumerate_field(field: Field) -> Iterator[Scalar]:
    return field.elements()
