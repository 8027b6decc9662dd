# tests/test_cli.py
import json

import pytest

import main as cli

ZERO_J = {"c": ["0", "0", "0"], "x": [["0"], ["0"], ["0"]]}
E11 = {"c": ["1", "0", "0"], "x": [["0"], ["0"], ["0"]]}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def rank4_point(a="1", d="1"):
    return {"a": a, "b": ZERO_J, "c": ZERO_J, "d": d}


# ---------------------------------------------------------
# compute
# ---------------------------------------------------------
def test_compute_rank(capsys):
    code, out = run(capsys, "compute", "rank", json.dumps({"field": "Q", "algebra": "unarion", "x": E11}))
    assert code == 0
    assert out["rank"] == 1
    assert out["field"] == {"field": "Q"}


def test_compute_quartic(capsys):
    code, out = run(capsys, "compute", "quartic", json.dumps({"v": rank4_point()}), "--field", "Fp:5")
    assert code == 0
    assert out["q"] == "1"


def test_compute_norm_of_c_element(capsys):
    payload = {"field": "Fp:5", "algebra": "matrix2x2", "x": ["1", "2", "3", "4"]}
    code, out = run(capsys, "compute", "norm", json.dumps(payload))
    assert code == 0
    assert out["norm"] == "3"


def test_compute_from_file(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"x": E11}), encoding="utf-8")
    code, out = run(capsys, "compute", "sharp", f"@{path}", "--algebra", "binarion-split")
    assert code == 0
    assert out["sharp"]["c"] == ["0", "0", "0"]


def test_malformed_json_exits_2(capsys):
    code, _ = run(capsys, "compute", "rank", "{oops")
    assert code == 2


def test_float_scalar_exits_2(capsys):
    code, _ = run(capsys, "compute", "quartic", json.dumps({"v": {"a": 0.5, "b": ZERO_J, "c": ZERO_J, "d": "1"}}))
    assert code == 2


def test_bad_field_exits(capsys):
    assert run(capsys, "compute", "rank", json.dumps({"x": E11}), "--field", "Fp:x")[0] == 2
    assert run(capsys, "compute", "rank", json.dumps({"x": E11}), "--field", "Fp:9")[0] == 3


def test_unknown_subcommand_exits_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2


# ---------------------------------------------------------
# act
# ---------------------------------------------------------
def test_act_involution_twice(capsys):
    word = json.dumps([{"atom": "involution"}, {"atom": "involution"}])
    v = {"a": "1", "b": E11, "c": ZERO_J, "d": "2"}
    code, out = run(capsys, "act", "--word", word, "--v", json.dumps(v), "--field", "Fp:5")
    assert code == 0
    assert out["result"]["a"] == "4"
    assert out["result"]["d"] == "3"
    assert out["result"]["b"]["c"] == ["4", "0", "0"]
    assert out["nu"] == "1"


def test_act_s_zero_exits_3(capsys):
    word = json.dumps([{"atom": "s", "lambda": "0"}])
    code, _ = run(capsys, "act", "--word", word, "--v", json.dumps(rank4_point()), "--field", "Fp:5")
    assert code == 3


def test_act_measures_factor(capsys):
    word = json.dumps([{"atom": "s", "lambda": "3"}])
    code, out = run(capsys, "act", "--word", word, "--v", json.dumps(rank4_point()), "--field", "Fp:7", "--check")
    assert code == 0
    assert out["nu"] == out["nu_measured"] == "3"
    assert out["result"]["a"] == "2"


# ---------------------------------------------------------
# fiber
# ---------------------------------------------------------
def test_fiber_rank3_over_q(capsys):
    xi = json.dumps({"c": [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]], "d": "-2"})
    code, out = run(capsys, "fiber", "--xi", xi, "--field", "Q", "--algebra", "quaternion:-1,-1")
    assert code == 0
    assert out["kind"] == "rank3"
    assert out["status"] == "nonempty"


def test_fiber_wrong_dimension_exits_3(capsys):
    xi = json.dumps({"c": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "d": "0"})
    code, _ = run(capsys, "fiber", "--xi", xi, "--field", "Q", "--algebra", "octonion-split")
    assert code == 3


def test_fiber_rank0_predicate(capsys):
    strip = {"c": ["0", "0", "0"], "x": [["0", "1", "0", "0"], ["0"] * 4, ["0"] * 4]}
    zero = {"c": ["0", "0", "0"], "x": [["0"] * 4] * 3}
    w = {"a": "0", "b": strip, "c": zero, "d": "0"}
    code, out = run(capsys, "fiber", "--w", json.dumps(w), "--field", "Q", "--algebra", "matrix2x2")
    assert code == 0
    assert out["status"] == "pure-tensor"


# ---------------------------------------------------------
# verify, census, algebra-info
# ---------------------------------------------------------
def test_verify_dimensions(capsys):
    code, out = run(capsys, "verify", "dimensions", "--field", "Fp:5", "--trials", "3")
    assert code == 0
    assert out["passed"] is True
    assert out["files"]


def test_verify_unknown_suite_exits_2(capsys):
    assert run(capsys, "verify", "everything")[0] == 2


def test_census_overflow_exits_3(capsys):
    code, _ = run(capsys, "census", "freudenthal", "--field", "Fp:5", "--algebra", "octonion-split", "--exhaustive")
    assert code == 3


def test_census_jordan_sampled(capsys):
    code, out = run(capsys, "census", "jordan", "--field", "Fp:5", "--algebra", "unarion",
                    "--samples", "50", "--seed", "1")
    assert code == 0
    assert out["total"] == 50
    assert out["seed"] == 1


def test_census_over_q_exits_3(capsys):
    code, _ = run(capsys, "census", "jordan", "--field", "Q", "--exhaustive")
    assert code == 3


def test_algebra_info(capsys):
    code, out = run(capsys, "algebra-info", "--field", "Q", "--algebra", "quaternion:-1,-1")
    assert code == 0
    assert out["label"] == "quaternion(-1,-1)/Q"
    assert out["split"] is False
    assert (out["dim_J"], out["dim_W"]) == (15, 32)


@pytest.mark.parametrize("argv", [["compute"], ["census", "nowhere"], ["act", "--word", "[]"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
