# tests/conftest.py
import numpy as np
import pytest

from algebra.scalar import parse_field, prime_field, rationals


def philox(seed=0):
    return np.random.Generator(np.random.Philox(seed))


@pytest.fixture
def rng():
    return philox(12345)


@pytest.fixture
def Q():
    return rationals()


@pytest.fixture
def F5():
    return prime_field(5)


@pytest.fixture
def F7():
    return prime_field(7)


@pytest.fixture
def F25():
    return parse_field("Fp2:5,2")


@pytest.fixture(autouse=True)
def _reports_tmp(tmp_path, monkeypatch):
    # отчёты тестов не должны попадать в ./reports
    monkeypatch.setenv("FKIT_OUT_DIR", str(tmp_path / "reports"))
    monkeypatch.setenv("FKIT_WORKERS", "2")
