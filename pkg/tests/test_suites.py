# tests/test_suites.py
import json

import pytest

from errors import UsageError
from census import emit_report
from fkit_config import FkitConfig
from algebra.scalar import parse_field
from suites import SUITE_NAMES, SuiteDescriptor, default_algebras, run_suite


def small(name, fields=("Fp:5",), algebras=("unarion", "binarion-split", "matrix2x2"), trials=5):
    cfg = FkitConfig(trials=trials, seed=7, levi_samples=4, workers=1)
    return SuiteDescriptor.from_config(name, cfg, fields=list(fields), algebras=list(algebras))


def test_unknown_suite_is_usage_error():
    with pytest.raises(UsageError):
        small("no-such-suite")


def test_all_is_a_suite_name():
    assert "all" in SUITE_NAMES
    assert len(set(SUITE_NAMES)) == len(SUITE_NAMES)


@pytest.mark.parametrize("name", ["field-axioms", "dimensions", "flat-duality", "adjoint", "cross-duality", "hilbert"])
def test_cheap_suites_pass(name):
    report = run_suite(small(name))
    assert report.checks
    assert report.passed, [c.to_dict() for c in report.checks if not c.passed]


def test_generator_suites_pass():
    for name in ("similitude", "conjugation", "rank-invariance", "rank1-special"):
        report = run_suite(small(name, trials=3))
        assert report.passed, (name, [c.counterexample for c in report.checks])


def test_suite_over_rationals():
    report = run_suite(small("composition-law", fields=("Q",), algebras=("quaternion:-1,-1", "octonion:-1,-1,-1")))
    assert report.passed
    assert len(report.checks) == 2


def test_report_is_deterministic():
    a = run_suite(small("adjoint"))
    b = run_suite(small("adjoint"))
    assert a.report_id == b.report_id


def test_suite_report_emitted(tmp_path):
    report = run_suite(small("dimensions"))
    paths = emit_report(report, out_dir=str(tmp_path), fmt="both")
    assert len(paths) == 2
    with open(paths[0], encoding="utf-8") as f:
        data = json.load(f)
    assert data["suite"] == "dimensions" and data["passed"] is True
    assert report.to_frame().shape[0] == len(report.checks)


@pytest.mark.slow
def test_rank3_fiber_suite():
    report = run_suite(small("rank3-fiber", fields=("Q", "Fp:5"), algebras=("quaternion:1,1", "matrix2x2"), trials=2))
    assert report.passed


# ---------------------------------------------------------
# trials на одну проверку
# ---------------------------------------------------------
@pytest.mark.parametrize("name", ["rank1-criterion", "similitude", "rank-invariance"])
def test_trials_are_per_check(name):
    report = run_suite(small(name, algebras=("unarion", "binarion-split"), trials=40))
    assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
    assert len(report.checks) == 2
    for check in report.checks:
        assert check.trials >= 40


def test_similitude_counts_every_atom():
    report = run_suite(small("similitude", algebras=("binarion-split",), trials=30))
    assert report.passed
    # шесть атомов, у каждого 30 пар строк
    assert report.checks[0].trials >= 6 * 30
    assert report.checks[0].details["samples_per_atom"] == 30


def test_rank1_criterion_over_rationals_counts_trials():
    report = run_suite(small("rank1-criterion", fields=("Q",), algebras=("binarion-split",), trials=12))
    assert report.passed, report.checks[0].counterexample
    assert report.checks[0].trials == 12


def test_rank1_criterion_runs_wrank1_slice():
    report = run_suite(small("rank1-criterion", algebras=("binarion-split", "quaternion:1,1"), trials=8))
    assert report.passed, [c.counterexample for c in report.checks]
    for check in report.checks:
        assert check.details["slice_wrank1"] == {"points": 625, "rank1": 48}
        assert "slice_special" not in check.details
        assert check.trials >= 8 + 625


def test_default_prime_field_algebras_include_octonion():
    assert "octonion:-1,-1,-1" in default_algebras(parse_field("Fp:5"))


@pytest.mark.slow
def test_rank1_criterion_exhaustive_slices():
    cfg = FkitConfig(trials=8, seed=7, levi_samples=4, workers=2)
    desc = SuiteDescriptor.from_config(
        "rank1-criterion", cfg, fields=["Fp:5"], algebras=["binarion-split", "quaternion:1,1"], exhaustive=True
    )
    report = run_suite(desc)
    assert report.passed, [c.counterexample for c in report.checks]
    binarion, quaternion = report.checks
    assert binarion.details["slice_special"] == {"points": 5 ** 10, "rank1": 1}
    assert binarion.trials >= 5 ** 10
    assert quaternion.details["skipped_slices"] == {"special": 5 ** 16}
    assert quaternion.details["slice_diagonal"]["points"] == 5 ** 8
