from pathlib import Path

import pytest

from conley import bench
from conley.io import parse_any

DATA = Path(__file__).parent / "data"


def load(name, field=None):
    return parse_any((DATA / name).read_text(), field)


@pytest.fixture
def triangle():
    return load("triangle.flt")


@pytest.fixture(scope="session")
def corpus():
    """500 small random complexes over characteristics 2, 3 and 5."""
    return [bench.random_complex(cfg) for cfg in bench.corpus_configs(500)]


@pytest.fixture(scope="session")
def small_corpus():
    return [bench.random_complex(cfg) for cfg in bench.corpus_configs(60, seed=7)]
