"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line to the
terminal (even under output capture) before asserting.
"""

import time

import pytest

from conley import bench, cli
from conley.complex import homology_dims, relative_homology_dims, restrict_downset
from conley.connect import compute_connection_matrix, extract, global_reduce, prune
from conley.io import parse_complex, serialize_result
from conley.oracle import build_contraction, split_blocks, verify_contraction, zigzag_dM
from conley.reduction import clearing_reduce, conley_index_dims

from conftest import DATA, load

CORPUS_SIZE = 500


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def configs():
    cfgs = list(bench.corpus_configs(CORPUS_SIZE))
    assert len(cfgs) >= 500
    return cfgs


@pytest.fixture(scope="module")
def instances(configs):
    return [bench.random_complex(c) for c in configs]


def test_criterion_1_worked_example(report):
    cx = load("triangle.flt")
    best = float("inf")
    for _ in range(20):
        t0 = time.perf_counter()
        state = clearing_reduce(cx)
        reduced = global_reduce(prune(state))
        cc = extract(reduced)
        best = min(best, time.perf_counter() - t0)
    name = lambda j: cx.generators[j].id
    checks = {
        "step 1": [(name(a), name(b), c) for a, b, c in state.log] == [("vu", "vw", 1)],
        "boundaries": [cx.chain_by_id(b) for cell in state.sep.B.values() for _, b in cell]
        == [{"w": 1}, {"v": 1}],
        "preboundaries": sorted(name(w) for w in state.sep.matching()) == ["uw", "vu"],
        "step 3": [(name(a), name(b), c) for a, b, c in reduced.step3_log]
        == [("uw", "vw", 1)],
        "delta": cc.matrix().tolist() == [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
        and cc.index_gens[1].dim == 1
        and cc.index_gens[2].id == "uvw",
        "index dims": conley_index_dims(state) == {("0", 0): 1, ("2", 1): 1, ("3", 2): 1},
        "runtime": best < 1e-3,
    }
    bad = [k for k, v in checks.items() if not v]
    report(1, not bad, f"best runtime {best * 1e3:.3f} ms; failed: {bad or 'none'}")


def test_criterion_2_oracle_equivalence(report, configs):
    t0 = time.perf_counter()
    mismatches = []
    ps = set()
    for cfg in configs:
        cx = bench.random_complex(cfg)
        ps.add(cx.p)
        assert len(cx) <= 40 and len(cx.poset) <= 6
        blocks = split_blocks(clearing_reduce(cx))
        maps = build_contraction(blocks)
        delta = compute_connection_matrix(cx).matrix()
        zz = zigzag_dM(blocks)
        if not ((zz == maps.dM).all() and (maps.dM == delta).all()):
            mismatches.append(cfg.seed)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60 and ps == {2, 3, 5}
    report(
        2,
        ok,
        f"{len(configs)} instances, {len(mismatches)} mismatches, {elapsed:.1f} s",
    )


def test_criterion_3_contraction_identities(report, instances):
    failures = []
    for k, cx in enumerate(instances):
        maps = build_contraction(split_blocks(clearing_reduce(cx)))
        rep = verify_contraction(maps, cx)
        if not rep.ok:
            failures.append((k, rep.failures[0]))
    report(3, not failures, f"{len(instances)} instances, failures: {failures[:3] or 'none'}")


def test_criterion_4_conley_index(report, instances):
    bad = []
    for k, cx in enumerate(instances):
        cc = compute_connection_matrix(cx)
        if conley_index_dims(clearing_reduce(cx)) != relative_homology_dims(cx):
            bad.append((k, "index"))
        if cc.index_dims() != relative_homology_dims(cx):
            bad.append((k, "output index"))
        conley = cc.as_graded_complex()
        if homology_dims(conley) != homology_dims(cx):
            bad.append((k, "global"))
        for p in cx.poset.elements:
            if homology_dims(restrict_downset(conley, p)) != homology_dims(
                restrict_downset(cx, p)
            ):
                bad.append((k, f"down-set {p}"))
    report(4, not bad, f"{len(instances)} instances, failures: {bad[:3] or 'none'}")


def test_criterion_5_structural_invariants(report, instances):
    bad = [
        (k, v)
        for k, cx in enumerate(instances)
        for v in compute_connection_matrix(cx).violations()
    ]
    report(5, not bad, f"{len(instances)} outputs, violations: {bad[:3] or 'none'}")


def test_criterion_6_pipeline_stability(report, instances):
    bad = []
    for k, cx in enumerate(instances):
        ref = serialize_result(compute_connection_matrix(cx))
        variants = {
            "no prune": compute_connection_matrix(cx, use_prune=False),
            "reversed step 3": compute_connection_matrix(cx, order="reverse"),
            "parallel step 1": compute_connection_matrix(cx, parallel=True),
        }
        bad += [(k, name) for name, cc in variants.items() if serialize_result(cc) != ref]
    report(6, not bad, f"{len(instances)} instances x 3 variants, diffs: {bad[:3] or 'none'}")


def test_criterion_7_idempotence(report, instances):
    bad = []
    for k, cx in enumerate(instances):
        cc = compute_connection_matrix(cx)
        again = compute_connection_matrix(parse_complex(serialize_result(cc)))
        same = (
            again.triplets() == cc.triplets()
            and [(g.id, g.grade, g.dim) for g in again.index_gens]
            == [(g.id, g.grade, g.dim) for g in cc.index_gens]
        )
        if not same:
            bad.append(k)
    report(7, not bad, f"{len(instances)} instances, differing: {bad[:5] or 'none'}")


def test_criterion_8_complexity(report):
    cfg = bench.GeneratorConfig(seed=8, n_grades=4, characteristic=2)
    rows = bench.scaling_run([500, 1000, 2000], cfg)
    slope = bench.loglog_slope(rows)
    t2000 = rows[-1]["seconds"]
    ok = slope <= 3.5 and t2000 < 120 and rows[-1]["generators"] == 2000
    times = ", ".join(f"N={r['generators']}: {r['seconds']:.3f} s" for r in rows)
    report(8, ok, f"{times}; log-log slope {slope:.2f}")


def test_criterion_9_pentagon(report):
    cx = load("pentagon.flt")
    dims = conley_index_dims(clearing_reduce(cx))
    expected = {("cycle", 0): 1, ("cycle", 1): 1, ("rededge", 1): 1, ("redtri", 2): 1}
    code = cli.main(["compute", str(DATA / "pentagon.flt"), "--verify", "-o", "/dev/null"])
    ok = dims == relative_homology_dims(cx) == expected and code == 0
    report(9, ok, f"index dims {dims}; --verify exit {code}")
