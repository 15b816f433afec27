import pytest

from conley import bench
from conley.cli import verify
from conley.complex import validate
from conley.connect import compute_connection_matrix
from conley.io import serialize_complex


def test_small_fixture():
    cfg = bench.GeneratorConfig(seed=1, n_grades=3, shape="chain", size=10)
    cx = bench.random_complex(cfg)
    assert 0 < len(cx) <= 10 and validate(cx).ok
    assert serialize_complex(cx) == serialize_complex(bench.random_complex(cfg))


def test_density_zero():
    cx = bench.random_complex(bench.GeneratorConfig(seed=2, size=25, density=0))
    assert len(cx) == 25 and not any(cx.columns)


@pytest.mark.parametrize("shape", ["chain", "antichain", "random"])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_valid_and_verified(shape, p):
    for seed in range(8):
        cfg = bench.GeneratorConfig(
            seed=seed, size=60, n_grades=5, shape=shape, characteristic=p, max_dim=3
        )
        cx = bench.random_complex(cfg)
        assert validate(cx).ok
        assert len(cx) <= 60
        assert verify(cx, compute_connection_matrix(cx)) == []


def test_bad_configs():
    with pytest.raises(ValueError):
        bench.GeneratorConfig(shape="tree")
    with pytest.raises(ValueError):
        bench.GeneratorConfig(n_grades=0)
    with pytest.raises(ValueError):
        bench.GeneratorConfig(density=2)
    with pytest.raises(ValueError):
        bench.random_complex(bench.GeneratorConfig(characteristic=6))


def test_scaling_rows():
    rows = bench.scaling_run([250, 500, 1000], bench.GeneratorConfig(n_grades=4), repeats=3)
    assert [r["size"] for r in rows] == [250, 500, 1000]
    secs = [r["seconds"] for r in rows]
    assert secs == sorted(secs)
    csv = bench.to_csv(rows).splitlines()
    assert csv[0] == "size,generators,seconds" and len(csv) == 4


def test_single_size():
    rows = bench.scaling_run([50], bench.GeneratorConfig())
    assert len(rows) == 1 and bench.loglog_slope(rows) is None
    with pytest.raises(ValueError):
        bench.scaling_run([100, 50], bench.GeneratorConfig())


def test_slope():
    rows = [{"generators": n, "seconds": 1e-6 * n**2} for n in (10, 20, 40)]
    assert bench.loglog_slope(rows) == pytest.approx(2.0)


def test_corpus_configs_deterministic():
    a = list(bench.corpus_configs(20))
    assert a == list(bench.corpus_configs(20))
    assert {c.characteristic for c in a} == {2, 3, 5}
    assert all(c.size <= 40 and c.n_grades <= 6 for c in a)
