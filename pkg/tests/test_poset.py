import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conley.poset import Poset, PosetError, build_poset, chain_poset


def brute_force_chains(poset, p, q):
    """Every subset of the open interval that is totally ordered."""
    inner = [x for x in poset.extension if poset.less(p, x) and poset.less(x, q)]
    out = set()
    for k in range(len(inner) + 1):
        for combo in itertools.combinations(inner, k):
            if all(poset.less(a, b) for a, b in zip(combo, combo[1:])):
                out.add(combo)
    return out


@st.composite
def posets(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    names = [f"e{i}" for i in range(n)]
    perm = draw(st.permutations(names))
    pairs = [(a, b) for i, a in enumerate(perm) for b in perm[i + 1:]]
    rel = [pr for pr in pairs if draw(st.booleans())]
    return build_poset(names, rel)


def test_chain_example():
    P = build_poset([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3)])
    assert P.extension == (0, 1, 2, 3)
    assert P.leq(0, 2) and not P.leq(2, 0)
    assert P.chains_between(0, 2) == [(), (1,)]
    assert P.chains_between(0, 1) == [()]


def test_antichain():
    P = build_poset(["a", "b"], [])
    assert P.extension == ("a", "b")
    assert not P.leq("a", "b") and P.leq("a", "a")


def test_diamond():
    P = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert P.chains_between("0", "1") == [(), ("a",), ("b",)]
    assert P.covers() == [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]


def test_max_len():
    P = chain_poset(5)
    assert P.chains_between(0, 4, max_len=1) == [(), (1,), (2,), (3,)]
    assert len(P.chains_between(0, 4)) == 8


def test_errors():
    with pytest.raises(PosetError):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(PosetError):
        build_poset(["a"], [("a", "z")])
    with pytest.raises(PosetError):
        chain_poset(3).leq(0, 9)
    with pytest.raises(PosetError):
        chain_poset(3).chains_between(2, 0)


def test_table_checks():
    with pytest.raises(PosetError):
        Poset("ab", np.zeros((2, 2), dtype=bool))
    with pytest.raises(PosetError):
        Poset("abc", np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=bool))


def test_extension_breaks_ties_by_declaration():
    P = build_poset(["c", "b", "a"], [("a", "b")])
    assert P.extension == ("c", "a", "b")


@settings(max_examples=150, deadline=None)
@given(posets())
def test_extension_refines_order(P):
    for p, q in itertools.product(P.elements, repeat=2):
        if P.leq(p, q):
            assert P.position(p) <= P.position(q)


@settings(max_examples=150, deadline=None)
@given(posets())
def test_chains_match_brute_force(P):
    for p, q in itertools.product(P.elements, repeat=2):
        if P.less(p, q):
            got = P.chains_between(p, q)
            assert len(got) == len(set(got))
            assert set(got) == brute_force_chains(P, p, q)
            keys = [[P.position(x) for x in c] for c in got]
            assert keys == sorted(keys)


@settings(max_examples=100, deadline=None)
@given(posets())
def test_down_set_closed(P):
    for p in P.elements:
        down = P.down_set(p)
        assert p in down
        assert all(P.leq(x, y) <= (x in down) for y in down for x in P.elements)
