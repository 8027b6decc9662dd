# codec.py
"""
JSON и строковые дескрипторы для CLI.

Скаляры всегда строки ("3/4", "2", "1+2r"), никогда не float.
  поле:        "Q" | "Fp:5" | "Fp2:5,2"
  алгебра:     "quaternion:1,1" | "octonion-split" | {"tag": ..., "params": {...}}
  элемент C:   [coords] или {"algebra": {...}, "coords": [...]}
  J_C:         {"c": [c1, c2, c3], "x": [[x1], [x2], [x3]]}
  W_C:         {"a": .., "b": J, "c": J, "d": ..}
  слово:       [{"atom": "n", "x": J}, {"atom": "s", "lambda": "2"}, {"atom": "levi", "g": rows|null, "h": rows|null}, ...]
"""
from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Sequence, Union

from errors import ParseError
from algebra.composition import (
    PARAM_NAMES,
    Automorphism,
    CompElem,
    CompositionAlgebra,
    construct,
    unarion,
)
from algebra.freudenthal import (
    Atom,
    FreudenthalElem,
    GeneratorWord,
    involution,
    levi,
    n_atom,
    nbar_atom,
    s_atom,
    sstar_atom,
)
from algebra.jordan import Gl3Elem, JordanElem
from algebra.scalar import Field, Scalar, field_from_descriptor, parse_field
from quadform import TernaryForm

__all__ = [
    "loads",
    "dumps",
    "parse_field",
    "parse_algebra",
    "algebra_to_json",
    "parse_scalar",
    "parse_element",
    "element_to_json",
    "parse_jordan",
    "jordan_to_json",
    "parse_w",
    "w_to_json",
    "parse_matrix",
    "matrix_to_json",
    "parse_form",
    "parse_triple",
    "triple_to_json",
    "parse_atom",
    "atom_to_json",
    "parse_word",
    "word_to_json",
    "parse_xi",
]

Json = Union[Dict[str, Any], List[Any], str, int]


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except (json.JSONDecodeError, TypeError) as e:
        raise ParseError(f"некорректный JSON: {e}") from e


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)


def _expect(obj: Any, kind: type, what: str) -> Any:
    if not isinstance(obj, kind):
        raise ParseError(f"{what}: ожидался {kind.__name__}, получено {type(obj).__name__}")
    return obj


def _expect_len(seq: Sequence[Any], n: int, what: str) -> None:
    if len(seq) != n:
        raise ParseError(f"{what}: ожидалось {n} значений, получено {len(seq)}")


# ---------------------------
# поля и алгебры
# ---------------------------
def parse_algebra(spec: Any, field: Optional[Field] = None) -> CompositionAlgebra:
    if isinstance(spec, dict):
        if "field" in spec:
            try:
                field = field_from_descriptor(spec["field"])
            except (KeyError, TypeError) as e:
                raise ParseError(f"некорректный дескриптор поля: {spec['field']!r}") from e
        tag = spec.get("tag")
        params = dict(spec.get("params") or {})
    else:
        text = _expect(spec, str, "алгебра").strip()
        tag, _, rest = text.partition(":")
        names = PARAM_NAMES.get(tag)
        if names is None:
            # construct() сообщит о неизвестном теге
            params = {}
        else:
            args = [a.strip() for a in rest.split(",")] if rest else []
            _expect_len(args, len(names), f"параметры {tag}")
            params = dict(zip(names, args))
    if field is None:
        raise ParseError("не задано поле алгебры")
    return construct(tag, params, field)


def algebra_to_json(alg: CompositionAlgebra) -> Dict[str, Any]:
    return {
        "tag": alg.tag,
        "params": {k: str(v) for k, v in alg.params.items()},
        "field": alg.field.descriptor(),
    }


def parse_scalar(field: Field, value: Any) -> Scalar:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"скаляр {value!r}: нужны строка или целое (точная арифметика)")
    if not isinstance(value, (str, int)):
        raise ParseError(f"скаляр {value!r}: нужны строка или целое")
    return field(value)


# ---------------------------
# элементы
# ---------------------------
def parse_element(alg: Optional[CompositionAlgebra], obj: Any) -> CompElem:
    if isinstance(obj, dict):
        alg = parse_algebra(obj.get("algebra"), alg.field if alg is not None else None)
        obj = obj.get("coords")
    if alg is None:
        raise ParseError("элемент C без алгебры")
    coords = _expect(obj, list, "элемент C")
    _expect_len(coords, alg.dim, f"элемент {alg.label()}")
    return CompElem(alg, [parse_scalar(alg.field, c) for c in coords])


def element_to_json(x: CompElem, with_algebra: bool = False) -> Json:
    coords = [str(c) for c in x.coords]
    if with_algebra:
        return {"algebra": algebra_to_json(x.algebra), "coords": coords}
    return coords


def parse_jordan(alg: CompositionAlgebra, obj: Any) -> JordanElem:
    obj = _expect(obj, dict, "элемент J")
    try:
        c, x = obj["c"], obj["x"]
    except KeyError as e:
        raise ParseError(f"элемент J: нет ключа {e}") from e
    _expect_len(_expect(c, list, "J.c"), 3, "J.c")
    _expect_len(_expect(x, list, "J.x"), 3, "J.x")
    return JordanElem(alg, [parse_scalar(alg.field, ci) for ci in c], [parse_element(alg, xi) for xi in x])


def jordan_to_json(x: JordanElem) -> Dict[str, Any]:
    return {"c": [str(ci) for ci in x.c], "x": [element_to_json(xi) for xi in x.x]}


def parse_w(alg: CompositionAlgebra, obj: Any) -> FreudenthalElem:
    obj = _expect(obj, dict, "элемент W")
    missing = [k for k in ("a", "b", "c", "d") if k not in obj]
    if missing:
        raise ParseError(f"элемент W: нет ключей {missing}")
    return FreudenthalElem(
        parse_scalar(alg.field, obj["a"]),
        parse_jordan(alg, obj["b"]),
        parse_jordan(alg, obj["c"]),
        parse_scalar(alg.field, obj["d"]),
    )


def w_to_json(v: FreudenthalElem) -> Dict[str, Any]:
    return {"a": str(v.a), "b": jordan_to_json(v.b), "c": jordan_to_json(v.c), "d": str(v.d)}


def parse_matrix(field: Field, obj: Any, n: int = 3) -> List[List[Scalar]]:
    rows = _expect(obj, list, "матрица")
    _expect_len(rows, n, "матрица")
    out = []
    for r in rows:
        _expect_len(_expect(r, list, "строка матрицы"), n, "строка матрицы")
        out.append([parse_scalar(field, v) for v in r])
    return out


def matrix_to_json(m: Sequence[Sequence[Scalar]]) -> List[List[str]]:
    return [[str(v) for v in row] for row in m]


def parse_form(field: Field, obj: Any) -> TernaryForm:
    return TernaryForm(field, parse_matrix(field, obj))


def parse_triple(alg: CompositionAlgebra, obj: Any) -> List[CompElem]:
    items = _expect(obj, list, "тройка x")
    _expect_len(items, 3, "тройка x")
    return [parse_element(alg, it) for it in items]


def triple_to_json(x: Sequence[CompElem]) -> List[List[str]]:
    return [element_to_json(xi) for xi in x]


# ---------------------------
# образующие
# ---------------------------
def parse_atom(alg: CompositionAlgebra, obj: Any) -> Atom:
    obj = _expect(obj, dict, "атом")
    kind = obj.get("atom")
    field = alg.field
    if kind in ("n", "nbar"):
        if "x" not in obj:
            raise ParseError(f"атом {kind}: нет x")
        x = parse_jordan(alg, obj["x"])
        return n_atom(x) if kind == "n" else nbar_atom(x)
    if kind in ("s", "sstar"):
        if "lambda" not in obj:
            raise ParseError(f"атом {kind}: нет lambda")
        lam = parse_scalar(field, obj["lambda"])
        return s_atom(lam) if kind == "s" else sstar_atom(lam)
    if kind == "involution":
        return involution()
    if kind in ("levi", "aut", "gl3"):
        g_rows = obj.get("g") if kind != "gl3" else None
        h_rows = obj.get("h") if kind != "aut" else None
        g = Automorphism(alg, parse_matrix(field, g_rows, alg.dim)) if g_rows is not None else None
        h = Gl3Elem(parse_matrix(field, h_rows)) if h_rows is not None else None
        return levi(g, h)
    raise ParseError(f"неизвестный атом {kind!r}: n | nbar | s | sstar | involution | levi | aut | gl3")


def atom_to_json(atom: Atom) -> Dict[str, Any]:
    out: Dict[str, Any] = {"atom": atom.kind}
    if atom.kind in ("n", "nbar"):
        out["x"] = jordan_to_json(atom.x)
    elif atom.kind in ("s", "sstar"):
        out["lambda"] = str(atom.lam)
    elif atom.kind == "levi":
        out["g"] = atom.g.to_rows() if atom.g is not None else None
        out["h"] = atom.h.to_rows() if atom.h is not None else None
    return out


def parse_word(alg: CompositionAlgebra, obj: Any) -> GeneratorWord:
    if isinstance(obj, dict):
        obj = obj.get("word", [obj] if "atom" in obj else None)
    atoms = _expect(obj, list, "слово")
    return GeneratorWord([parse_atom(alg, a) for a in atoms])


def word_to_json(word: GeneratorWord) -> List[Dict[str, Any]]:
    return [atom_to_json(a) for a in word]


# ---------------------------
# xi = (1, 0, c, d)
# ---------------------------
def parse_xi(field: Field, obj: Any) -> FreudenthalElem:
    """{"c": 3x3, "d": ..} или полный элемент W над unarion."""
    from fibers import fiber_target

    obj = _expect(obj, dict, "xi")
    if "a" in obj:
        return parse_w(unarion(field), obj)
    if "c" not in obj or "d" not in obj:
        raise ParseError("xi: нужны ключи c и d")
    return fiber_target(field, parse_matrix(field, obj["c"]), parse_scalar(field, obj["d"]))
