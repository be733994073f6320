import os
import sys

import pytest

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

from kacmoody.affine_roots import fundamental_weight
from kacmoody.finite_cartan import from_string


@pytest.fixture(scope="session")
def a1():
    return from_string("A1")


@pytest.fixture(scope="session")
def a2():
    return from_string("A2")


@pytest.fixture(scope="session")
def lam0(a1):
    return fundamental_weight(a1, 0)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("KACMOODY_CACHE_DIR", str(tmp_path / "cache"))
    yield
