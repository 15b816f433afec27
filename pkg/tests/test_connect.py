import pytest

from conley.complex import (
    Generator,
    GradedComplex,
    homology_dims,
    restrict_downset,
    validate,
)
from conley.connect import compute_connection_matrix, extract, global_reduce, prune
from conley.io import parse_complex, serialize_result
from conley.poset import build_poset, chain_poset
from conley.reduction import HOMOLOGY, clearing_reduce


def test_triangle(triangle):
    st = clearing_reduce(triangle)
    name = lambda j: triangle.generators[j].id
    pruned = prune(st)
    assert sorted(map(name, pruned.dropped_rows)) == ["uw", "vu"]
    assert [name(j) for j, c in enumerate(pruned.columns) if c is None] == ["w", "v"]
    red = global_reduce(pruned)
    assert [(name(a), name(b), c) for a, b, c in red.step3_log] == [("uw", "vw", 1)]
    cc = extract(red)
    assert [g.id for g in cc.index_gens] == ["u", "vw", "uvw"]
    assert cc.matrix().tolist() == [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    assert cc.index_gens[1].chain == {"uw": 1, "vu": 1, "vw": 1}
    assert cc.index_gens[1].cycle == {"vu": 1, "vw": 1}
    assert cc.triplets() == [("vw", "uvw", 1)]
    assert cc.index_dims() == {("0", 0): 1, ("2", 1): 1, ("3", 2): 1}


@pytest.mark.parametrize("p", [3, 5])
def test_triangle_odd_characteristic(p):
    from conftest import load

    cc = compute_connection_matrix(load("triangle.flt", p))
    assert [g.id for g in cc.index_gens] == ["u", "vw", "uvw"]
    assert len(cc.delta) == 1 and not cc.violations()


def test_no_preboundaries():
    P = chain_poset(2)
    gens = [Generator("a", 0, 0), Generator("b", 1, 1)]
    cx = GradedComplex.from_boundaries(P, gens, {"b": {"a": 1}})
    st = clearing_reduce(cx)
    assert not st.partner
    assert prune(st).columns == st.columns
    assert global_reduce(st).step3_log == []
    cc = extract(global_reduce(st))
    assert cc.triplets() == [("a", "b", 1)]


def test_empty_complex():
    cx = GradedComplex.from_boundaries(chain_poset(2), [], {})
    cc = compute_connection_matrix(cx)
    assert len(cc) == 0 and cc.delta == {}


def test_one_grade_poset(corpus):
    P = build_poset(["*"])
    for cx in corpus[:100]:
        gens = [Generator(g.id, g.dim, "*") for g in cx.generators]
        bd = {g.id: cx.chain_by_id(col) for g, col in zip(cx.generators, cx.columns)}
        flat = GradedComplex.from_boundaries(P, gens, bd, cx.field)
        cc = compute_connection_matrix(flat)
        assert cc.delta == {}
        assert {n: d for (_, n), d in cc.index_dims().items()} == homology_dims(cx)


def test_unknown_order(triangle):
    with pytest.raises(ValueError):
        global_reduce(clearing_reduce(triangle), order="sideways")


def test_global_reduction_postcondition(corpus):
    for cx in corpus:
        red = global_reduce(clearing_reduce(cx))
        rows = set(red.partner.values())
        for j in red.positions(HOMOLOGY):
            assert not rows.intersection(red.columns[j])
            assert red.columns[j] == cx.boundary(red.labels[j])


def test_invariants_corpus(corpus):
    for cx in corpus:
        assert compute_connection_matrix(cx).violations() == []


def test_pipeline_choices_agree(corpus):
    for cx in corpus:
        ref = compute_connection_matrix(cx)
        for kw in (
            {"use_prune": False},
            {"order": "forward"},
            {"order": "reverse"},
            {"parallel": True},
            {"use_prune": False, "order": "reverse"},
        ):
            other = compute_connection_matrix(cx, **kw)
            assert serialize_result(other) == serialize_result(ref), kw


def test_strict_input_unchanged(corpus):
    for cx in corpus[:200]:
        cc = compute_connection_matrix(cx)
        strict = cc.as_graded_complex()
        assert validate(strict).ok
        again = compute_connection_matrix(strict)
        assert again.delta == cc.delta
        assert [g.id for g in again.index_gens] == [g.id for g in cc.index_gens]


def test_idempotent_through_text(corpus):
    for cx in corpus[:200]:
        cc = compute_connection_matrix(cx)
        text = serialize_result(cc)
        again = compute_connection_matrix(parse_complex(text))
        assert again.matrix().tolist() == cc.matrix().tolist()


def test_homology_preserved(corpus):
    for cx in corpus[:250]:
        conley = compute_connection_matrix(cx).as_graded_complex()
        assert homology_dims(conley) == homology_dims(cx)
        for p in cx.poset.elements:
            assert homology_dims(restrict_downset(conley, p)) == homology_dims(
                restrict_downset(cx, p)
            )


def test_chains_are_cycles_mapping_to_delta(corpus):
    # d(g(z)) = sum over index generators of Delta * g(z')
    for cx in corpus[:200]:
        cc = compute_connection_matrix(cx)
        pos = {g.id: j for j, g in enumerate(cx.generators)}
        p = cx.p
        for j, gen in enumerate(cc.index_gens):
            d = cx.boundary({pos[k]: v for k, v in gen.chain.items()})
            expect = {}
            for (i, jj), v in cc.delta.items():
                if jj == j:
                    for k, c in cc.index_gens[i].chain.items():
                        expect[pos[k]] = (expect.get(pos[k], 0) + v * c) % p
            assert d == {k: v for k, v in expect.items() if v}
