import os
import sys
import logging
import argparse
from typing import Any, Dict, List, Optional

import codec
from errors import FkitError, ParseError, UsageError, WrongDimension, exit_code_for
from fkit_config import FkitConfig
from algebra import dimension_table
from algebra.composition import CompElem, CompositionAlgebra
from algebra.freudenthal import flat, quartic, rank_w, similitude_factor, symplectic
from algebra.jordan import JordanElem, cross, jordan_dim, norm_N, rank_jordan, sharp, trace
from algebra.scalar import Field, Scalar, field_from_descriptor, parse_field

logging.basicConfig(
    format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    level=os.getenv("FKIT_LOG_LEVEL", "INFO").upper(),
)
logger = logging.getLogger("fkit")

COMPUTE_WHAT = ("norm", "trace", "sharp", "cross", "rank", "quartic", "symplectic", "flat", "rankw")
CENSUS_SPACES = ("jordan", "freudenthal", "fiber", "so3", "rank0")


class _Parser(argparse.ArgumentParser):
    """argparse с UsageError вместо sys.exit: код выхода решает main()."""

    def error(self, message):
        raise UsageError(message)


def _get_env_any(names, default=None):
    for n in names:
        v = os.environ.get(n)
        if v:
            logger.debug("Использую %s=%s из ENV", n, v)
            return v
    return default


def _read_json(arg: Optional[str], what: str) -> Any:
    """JSON из аргумента, '@файл' или '-' (stdin)."""
    if arg is None:
        raise UsageError(f"не задан {what}")
    if arg == "-":
        text = sys.stdin.read()
    elif arg.startswith("@"):
        try:
            with open(arg[1:], "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise UsageError(f"{what}: не удалось прочитать {arg[1:]}: {e}") from e
    else:
        text = arg
    return codec.loads(text)


def _to_json(obj: Any) -> Any:
    if isinstance(obj, CompElem):
        return codec.element_to_json(obj)
    if isinstance(obj, JordanElem):
        return codec.jordan_to_json(obj)
    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_json(v) for v in obj]
    return obj


def _emit(obj: Any) -> None:
    print(codec.dumps(obj))


# ---------------------------
# контекст: поле, алгебра, конфиг
# ---------------------------
def _config(args) -> FkitConfig:
    workers = args.workers or _get_env_any(["FKIT_WORKERS"])
    return FkitConfig(
        workers=workers,
        seed=args.seed,
        trials=args.trials,
        out_dir=args.out,
        report_format=args.format,
    )


def _field(args, payload: Optional[Dict[str, Any]] = None) -> Field:
    if payload and "field" in payload:
        desc = payload["field"]
        if isinstance(desc, dict):
            try:
                return field_from_descriptor(desc)
            except (KeyError, TypeError) as e:
                raise ParseError(f"некорректный дескриптор поля: {desc!r}") from e
        return parse_field(desc)
    return parse_field(args.field[-1] if args.field else "Q")


def _algebra(args, field: Field, payload: Optional[Dict[str, Any]] = None) -> CompositionAlgebra:
    if payload and "algebra" in payload:
        return codec.parse_algebra(payload["algebra"], field)
    return codec.parse_algebra(args.algebra[-1] if args.algebra else "unarion", field)


# =============================
# compute
# =============================
def _need(payload: Dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if k not in payload]
    if missing:
        raise ParseError(f"во входном JSON нет ключей {missing}")


def compute(what: str, payload: Any, args) -> Dict[str, Any]:
    if what not in COMPUTE_WHAT:
        raise UsageError(f"неизвестная величина {what!r}: {' | '.join(COMPUTE_WHAT)}")
    if not isinstance(payload, dict):
        raise ParseError("вход compute: ожидался JSON-объект")
    field = _field(args, payload)
    alg = _algebra(args, field, payload)
    out: Dict[str, Any] = {
        "what": what,
        "field": field.descriptor(),
        "algebra": codec.algebra_to_json(alg),
        "input": {k: v for k, v in payload.items() if k not in ("field", "algebra")},
    }
    if what in ("norm", "trace") and isinstance(payload.get("x"), list):
        # элемент самой C: n(x), Tr(x)
        x = codec.parse_element(alg, payload["x"])
        out[what] = str(alg.norm(x) if what == "norm" else alg.trace(x))
    elif what in ("norm", "trace", "sharp", "rank"):
        _need(payload, "x")
        x = codec.parse_jordan(alg, payload["x"])
        if what == "norm":
            out["norm"] = str(norm_N(x))
        elif what == "trace":
            out["trace"] = str(trace(x))
        elif what == "sharp":
            out["sharp"] = codec.jordan_to_json(sharp(x))
        else:
            out["rank"] = rank_jordan(x)
    elif what == "cross":
        _need(payload, "x", "y")
        out["cross"] = codec.jordan_to_json(cross(codec.parse_jordan(alg, payload["x"]), codec.parse_jordan(alg, payload["y"])))
    elif what == "symplectic":
        _need(payload, "v", "w")
        out["symplectic"] = str(symplectic(codec.parse_w(alg, payload["v"]), codec.parse_w(alg, payload["w"])))
    else:
        _need(payload, "v")
        v = codec.parse_w(alg, payload["v"])
        if what == "quartic":
            out["q"] = str(quartic(v))
        elif what == "flat":
            out["flat"] = codec.w_to_json(flat(v))
        else:
            out["rank"] = rank_w(v)
    return out


def cmd_compute(args) -> int:
    payload = _read_json(args.input, "вход compute")
    _emit(compute(args.what, payload, args))
    return 0


# =============================
# act
# =============================
def act(word_obj: Any, v_obj: Any, args) -> Dict[str, Any]:
    payload = v_obj if isinstance(v_obj, dict) else {}
    field = _field(args, payload)
    alg = _algebra(args, field, payload)
    word = codec.parse_word(alg, word_obj)
    v = codec.parse_w(alg, v_obj.get("v", v_obj) if isinstance(v_obj, dict) else v_obj)
    gv = word(v)
    out: Dict[str, Any] = {
        "field": field.descriptor(),
        "algebra": codec.algebra_to_json(alg),
        "word": codec.word_to_json(word),
        "v": codec.w_to_json(v),
        "result": codec.w_to_json(gv),
        "nu": str(word.declared_factor(field)),
    }
    if args.check:
        out["nu_measured"] = str(similitude_factor(word, alg))
    return out


def cmd_act(args) -> int:
    _emit(act(_read_json(args.word, "слово"), _read_json(args.v, "элемент v"), args))
    return 0


# =============================
# fiber
# =============================
def _fiber_json(res) -> Dict[str, Any]:
    return {
        "status": res.status,
        "reason": res.reason,
        "cardinality": res.cardinality,
        "witness": _to_json(res.witness),
        "details": _to_json(res.details),
    }


def cmd_fiber(args) -> int:
    from fibers import quadratic_fiber_test, rank0_fiber_predicate, rank3_fiber_test
    from census import emit_report, fiber_census

    cfg = _config(args)
    field = _field(args)
    alg = _algebra(args, field)
    out: Dict[str, Any] = {"field": field.descriptor(), "algebra": codec.algebra_to_json(alg)}
    if args.w is not None:
        w = codec.parse_w(alg, _read_json(args.w, "элемент w"))
        out["kind"] = "rank0"
        out.update(_fiber_json(rank0_fiber_predicate(w)))
        _emit(out)
        return 0
    xi = codec.parse_xi(field, _read_json(args.xi, "xi"))
    if alg.dim == 4:
        out["kind"] = "rank3"
        res = rank3_fiber_test(xi, alg, workers=cfg.workers, search=field.kind != "Fp2")
    elif alg.dim == 2:
        out["kind"] = "quadratic"
        res = quadratic_fiber_test(xi, alg)
    else:
        raise WrongDimension(f"слой для dim C = {alg.dim} не рассматривается (нужно 2 или 4)")
    out.update(_fiber_json(res))
    if args.census:
        report = fiber_census(xi, alg, workers=cfg.workers, config=cfg)
        out["census"] = report.to_dict()
        out["files"] = emit_report(report, cfg.out_dir, cfg.report_format)
    _emit(out)
    return 0


# =============================
# verify
# =============================
def cmd_verify(args) -> int:
    from suites import SuiteDescriptor, run_suite
    from census import emit_report

    cfg = _config(args)
    desc = SuiteDescriptor.from_config(args.suite, cfg, fields=args.field, algebras=args.algebra,
                                       exhaustive=args.exhaustive)
    report = run_suite(desc)
    files = emit_report(report, cfg.out_dir, cfg.report_format)
    summary = report.to_dict()
    summary["files"] = files
    _emit(summary)
    if report.passed:
        logger.info("✅ verify %s: seed=%d", args.suite, desc.seed)
        return 0
    logger.error("❌ verify %s: есть проваленные проверки (seed=%d)", args.suite, desc.seed)
    return 1


# =============================
# census
# =============================
def census(args, cfg: FkitConfig):
    from census import fiber_census, freudenthal_census, jordan_census, rank0_census, so3_census

    field = _field(args)
    if args.space == "so3":
        src = _read_json(args.c if args.c is not None else args.xi, "матрица c")
        c = src["c"] if isinstance(src, dict) else src
        return so3_census(codec.parse_matrix(field, c), field)
    alg = _algebra(args, field)
    mode = "exhaustive" if args.exhaustive else "sampled"
    if args.space == "jordan":
        return jordan_census(alg, mode=mode, samples=args.samples, seed=cfg.seed, workers=cfg.workers, config=cfg)
    if args.space == "freudenthal":
        return freudenthal_census(alg, mode=mode, slice_kind=args.slice, samples=args.samples, seed=cfg.seed,
                                  workers=cfg.workers, config=cfg)
    if args.space == "fiber":
        xi = codec.parse_xi(field, _read_json(args.xi, "xi"))
        return fiber_census(xi, alg, workers=cfg.workers, config=cfg)
    return rank0_census(alg, workers=cfg.workers, config=cfg)


def cmd_census(args) -> int:
    from census import emit_report

    cfg = _config(args)
    report = census(args, cfg)
    files = emit_report(report, cfg.out_dir, cfg.report_format)
    summary = report.to_dict()
    summary["files"] = files
    _emit(summary)
    return 0


# =============================
# algebra-info
# =============================
def algebra_info(args) -> Dict[str, Any]:
    field = _field(args)
    alg = _algebra(args, field)
    info = alg.describe()
    info["label"] = alg.label()
    info["split"] = alg.is_split()
    info["dim_J"] = jordan_dim(alg.dim)
    info["dim_W"] = 2 + 2 * jordan_dim(alg.dim)
    info["dimensions"] = dimension_table()
    return info


def cmd_algebra_info(args) -> int:
    _emit(algebra_info(args))
    return 0


# ---------------------------
# argparse
# ---------------------------
def build_parser() -> argparse.ArgumentParser:
    from suites import SUITE_NAMES

    common = _Parser(add_help=False)
    common.add_argument("--field", action="append", help="Q | Fp:5 | Fp2:5,2 (для verify можно несколько)")
    common.add_argument("--algebra", action="append", help="тег[:параметры], напр. quaternion:1,1")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--exhaustive", action="store_true")
    common.add_argument("--workers", type=int, default=None, help="по умолчанию FKIT_WORKERS")
    common.add_argument("--out", default=None, help="каталог отчётов (FKIT_OUT_DIR)")
    common.add_argument("--format", choices=("json", "csv", "both"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="fkit", description="Точная арифметика: C, J_C, W_C, слои и переписи.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("compute", parents=[common], help="норма, след, #, ранг, q, ...")
    p.add_argument("what", choices=COMPUTE_WHAT)
    p.add_argument("input", help="JSON, @файл или -")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("act", parents=[common], help="применить слово из образующих к v")
    p.add_argument("--word", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--check", action="store_true", help="измерить nu на случайных парах")
    p.set_defaults(handler=cmd_act)

    p = sub.add_parser("fiber", parents=[common], help="тест слоя F^-1(xi)")
    p.add_argument("--xi", default=None)
    p.add_argument("--w", default=None, help="элемент W для предиката слоя над нулём")
    p.add_argument("--census", action="store_true")
    p.set_defaults(handler=cmd_fiber)

    p = sub.add_parser("verify", parents=[common], help="наборы проверок")
    p.add_argument("suite", help=" | ".join(SUITE_NAMES))
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("census", parents=[common], help="переписи над F_p")
    p.add_argument("space", choices=CENSUS_SPACES)
    p.add_argument("--slice", default="full", help="diagonal | special | wrank1 | full")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--xi", default=None)
    p.add_argument("--c", default=None, help="матрица c для so3")
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("algebra-info", parents=[common], help="описание алгебры и размерности")
    p.set_defaults(handler=cmd_algebra_info)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        return args.handler(args)
    except FkitError as e:
        code = exit_code_for(e)
        logger.error("❌ %s: %s", type(e).__name__, e)
        return code
    except Exception:
        logger.exception("Непредвиденная ошибка")
        return 1


if __name__ == "__main__":
    sys.exit(main())
