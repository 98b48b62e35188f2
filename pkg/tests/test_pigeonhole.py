import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from strongtree import (
    EMPTY,
    StrongSubtree,
    Universe,
    a4_dichotomy,
    a4_step,
    axioms_check,
    enum_extensions,
    enum_product,
    enum_strong_subtrees,
    hl_witness,
    is_initial_segment,
    level_product_coloring,
    milliken_witness,
    set_coloring,
    tree_coloring,
)
from strongtree.canonical import Coloring
from strongtree.errors import LevelSetMismatch, NoRoom
from strongtree.pigeonhole import LevelProductColoring, monochromatic_on, product_colors

import oracles


def T(*texts):
    return StrongSubtree.from_nodes([tuple(int(ch) for ch in t) if t != "e" else () for t in texts], 2)


def check_by_scan(c, W, n):
    """Exhaustive recheck via the oracle subtree list."""
    b = W.b
    m = max(len(s) for s in W.nodes) + 1
    colors = {frozenset(X): c[StrongSubtree.from_nodes(X, b)]
              for X in oracles.strong_subtrees(b, m, n)
              if StrongSubtree.from_nodes(X, b) in c.table}
    return oracles.monochromatic(colors, W.nodes)


def test_milliken_witness_examples(u24):
    const = tree_coloring("constant", u24, 1)
    assert milliken_witness(const, u24, 1, 2).witness == enum_strong_subtrees(u24, 2)[0]
    parity = tree_coloring("level-parity", u24, 1)
    res = milliken_witness(parity, u24, 1, 2)
    assert res.witness.levels == (0, 2)
    assert check_by_scan(parity, res.witness, 1)
    u22 = Universe.full(2, 2)
    res = milliken_witness(tree_coloring("injective", u22, 1), u22, 1, 2)
    assert res.witness is None and res.exhausted


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 3))
def test_milliken_witness_rechecks(seed, colors):
    U = Universe.full(2, 4)
    c = tree_coloring("random", U, 1, seed=seed, colors=colors)
    res = milliken_witness(c, U, 1, 2)
    if res:
        assert check_by_scan(c, res.witness, 1)
    else:
        assert all(len(monochromatic_on(c, W, 1)) > 1 for W in enum_strong_subtrees(U, 2))


def test_unary_pigeonhole_is_subset_pigeonhole():
    for m in range(2, 7):
        U = Universe.full(1, m)
        for seed in range(4):
            cs = set_coloring("random", m, 1, seed=seed)
            ct = Coloring.of(enum_strong_subtrees(U, 1), lambda X: cs[(len(X.root),)])
            for k in range(1, m + 1):
                res = milliken_witness(ct, U, 1, k)
                exists = any(len({cs[(i,)] for i in A}) == 1
                             for A in itertools.combinations(range(m), k))
                assert bool(res) == exists


def test_hl_examples():
    U = Universe.full(2, 4)
    c = level_product_coloring("level-parity", [U, U])
    res = hl_witness(c, 2)
    assert all(X.levels == (0, 2) for X in res.witness)
    assert len(product_colors(c, res.witness.members)) == 1
    const = level_product_coloring("constant", [U, U])
    assert hl_witness(const, 2).witness == enum_product([U, U], 2)[0]


def test_hl_rechecks_all_level_products():
    U = Universe.full(2, 4)
    c = level_product_coloring("level-parity", [U, U])
    F = hl_witness(c, 2).witness.members
    seen = set()
    for k in U.levels:
        rows = [[s for s in X.nodes if len(s) == k] for X in F]
        for t in itertools.product(*rows):
            seen.add(len(t[0]) % 2)
    assert len(seen) == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_hl_single_coordinate_matches_milliken(seed):
    U = Universe.full(2, 4)
    lp = level_product_coloring("random", [U], seed=seed)
    tc = Coloring.of(enum_strong_subtrees(U, 1), lambda X: lp[(X.root,)])
    for k in (1, 2, 3):
        a = hl_witness(lp, k).witness
        b = milliken_witness(tc, U, 1, k).witness
        assert (a[0] if a else None) == b


RULES = {
    "everything": lambda Y: True,
    "nothing": lambda Y: False,
    "even-max-level": lambda Y: Y.levels[-1] % 2 == 0,
}


def test_a4_examples():
    U = Universe.full(2, 5)
    X = EMPTY
    res = a4_step(RULES["everything"], X, U)
    assert res.witness.nodes == U.nodes and res.info["side"] == "inside"
    res = a4_step(RULES["nothing"], X, U)
    assert res.witness.nodes == U.nodes and res.info["side"] == "outside"
    root = T("e")
    res = a4_step(RULES["even-max-level"], root, U)
    assert res.info["side"] == "inside"
    Tp = res.witness
    assert is_initial_segment(root, Tp)
    assert all(k % 2 == 0 for k in Tp.levels)
    ext = enum_extensions(root, Universe.of(Tp))
    assert ext and all(RULES["even-max-level"](Y) for Y in ext)


def test_a4_no_room():
    U = Universe.full(2, 3)
    with pytest.raises(NoRoom):
        a4_step(RULES["everything"], enum_strong_subtrees(U, 3)[0], U)


def seeded_predicate(seed, X, U):
    rng = random.Random(seed)
    inside = {Y for Y in enum_strong_subtrees(U, X.height + 1) if rng.random() < 0.5}
    return inside.__contains__


def test_a4_fifty_seeded_predicates():
    U = Universe.full(2, 5)
    starts = [EMPTY, T("e"), T("0"), T("e", "0", "1")]
    for seed in range(50):
        X = starts[seed % len(starts)]
        O = seeded_predicate(seed, X, U)
        res = a4_step(O, X, U)
        assert res, seed
        Tp = res.witness
        assert U.contains_tree(Tp)
        flags = {O(Y) for Y in enum_extensions(X, Universe.of(Tp))}
        assert flags == {res.info["side"] == "inside"}
        assert a4_dichotomy(O, X, Tp) == res.info["side"]


def test_axioms_clean_and_mutated():
    for d in (1, 2):
        rep = axioms_check(1, 40, 4, d=d)
        assert rep["total_violations"] == 0
        assert rep["total_instances"] > 0
        bad = axioms_check(1, 40, 4, d=d, mutate="fin-leq")
        assert bad["total_violations"] >= 1


def test_axioms_empty_report():
    rep = axioms_check(5, 0, 4)
    assert rep["clauses"] == [] and rep["total_violations"] == 0


def test_axioms_deterministic():
    assert axioms_check(7, 10, 3) == axioms_check(7, 10, 3)


def test_level_product_coloring_requires_shared_levels():
    with pytest.raises(LevelSetMismatch):
        LevelProductColoring([Universe.full(2, 2), Universe.full(2, 3)], lambda t: 0)
