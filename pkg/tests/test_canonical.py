import itertools

import pytest
from hypothesis import given, settings, strategies as st

from strongtree import (
    ABSOLUTE,
    NOT_UNIFORM,
    POSITION,
    Coloring,
    Family,
    NodeLevelSet,
    Universe,
    canonical_family_verify,
    enum_strong_subtrees,
    envelope_union,
    er_classify,
    er_verify,
    milliken_classify,
    milliken_verify,
    restrict,
    set_coloring,
    tree_coloring,
    uniform_rank,
)
from strongtree.canonical import (
    class_partition,
    index_sets,
    lift,
    partition_of,
    position_node_level_sets,
    sets_domain,
    translation_equal,
)
from strongtree.envelopes import position_signature
from strongtree.errors import NonTotalColoring

import oracles


def pos_nls(N=(), L=()):
    return NodeLevelSet(frozenset(N), tuple(L), POSITION)


# -- Erdos-Rado ---------------------------------------------------------------

def test_er_verify_examples():
    const = set_coloring("constant", 5, 2)
    assert er_verify(const, range(5), (), 2)
    ident = set_coloring("injective", 5, 2)
    assert er_verify(ident, range(5), (0, 1), 2)
    mn = set_coloring("min", 6, 2)
    assert er_verify(mn, range(6), (0,), 2)
    assert not er_verify(mn, range(6), (1,), 2)


def test_er_classify_examples():
    res = er_classify(set_coloring("min", 7, 2), 7, 2, 5)
    X, I = res.witness
    assert I == (0,) and len(X) >= 5
    res = er_classify(set_coloring("constant", 6, 2), 6, 2, 4)
    assert res.witness == (tuple(range(6)), ())
    res = er_classify(set_coloring("sum-parity", 5, 2), 5, 2, 5)
    assert res.witness is None and res.exhausted
    assert er_classify(set_coloring("max", 6, 2), 6, 2, 4).witness[1] == (1,)


def test_er_non_total():
    c = Coloring(((0, 1),), {(0, 1): 0}, "sets")
    with pytest.raises(NonTotalColoring):
        er_classify(c, 4, 2, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 3), st.integers(1, 2))
def test_er_soundness_against_oracle(seed, colors, n):
    c = set_coloring("random", 6, n, seed=seed, colors=colors)
    res = er_classify(c, 6, n, n + 1)
    if res:
        X, I = res.witness
        assert oracles.set_agreement_oracle(c, X, I, n)
    else:
        for I in index_sets(n):
            for X in itertools.combinations(range(6), n + 1):
                assert not oracles.set_agreement_oracle(c, X, I, n)


# -- Milliken -----------------------------------------------------------------

def test_milliken_verify_examples(u23):
    T = enum_strong_subtrees(u23, 3)[0]
    level = Coloring.of(enum_strong_subtrees(u23, 1), lambda X: len(X.root))
    assert milliken_verify(level, T, pos_nls(L=[0]))
    inj = tree_coloring("injective", u23, 1)
    assert milliken_verify(inj, T, pos_nls([()]))
    const = tree_coloring("constant", u23, 1)
    assert milliken_verify(const, T, pos_nls())
    assert not milliken_verify(inj, T, pos_nls())


def test_milliken_classify_examples(u23, u24):
    res = milliken_classify(tree_coloring("by-min-level", u24, 1), u24, 1, 3)
    assert (res.witness.nls.N, res.witness.nls.L) == (frozenset(), (0,))
    res = milliken_classify(tree_coloring("constant", u24, 1), u24, 1, 2)
    assert (res.witness.nls.N, res.witness.nls.L) == (frozenset(), ())
    assert res.witness.tree == enum_strong_subtrees(u24, 2)[0]
    res = milliken_classify(tree_coloring("injective", u23, 1), u23, 1, 2)
    assert (res.witness.nls.N, res.witness.nls.L) == (frozenset([()]), ())
    res = milliken_classify(tree_coloring("by-root", u24, 1), u24, 1, 3)
    assert res.witness.nls.N == frozenset([()])


def test_level_parity_has_no_witness_at_height_three(u24):
    res = milliken_classify(tree_coloring("level-parity", u24, 1), u24, 1, 3)
    assert res.witness is None and res.exhausted
    res = milliken_classify(tree_coloring("level-parity", u24, 1), u24, 1, 2)
    assert res.witness is not None


def test_position_sets_respect_level_order():
    for a in position_node_level_sets(2, 3):
        if a.N and a.L:
            assert max(len(p) for p in a.N) < min(a.L)
    keys = [a.sort_key for a in position_node_level_sets(2, 2)]
    assert keys == sorted(keys)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(2, 3))
def test_milliken_soundness_against_oracle(seed, colors):
    U = Universe.full(2, 4)
    c = tree_coloring("random", U, 1, seed=seed, colors=colors)
    res = milliken_classify(c, U, 1, 2)
    table = {X.nodes: c[X] for X in enum_strong_subtrees(U, 1)}
    if res:
        w = res.witness
        assert oracles.tree_agreement_oracle(table, w.tree.nodes, 2, 1, w.nls.N, w.nls.L)


def test_height_two_colorings_oracle(u24):
    for gen in ["constant", "injective", "by-level-set", "by-min-level", "by-root"]:
        c = tree_coloring(gen, u24, 2)
        res = milliken_classify(c, u24, 2, 3)
        assert res, gen
        w = res.witness
        table = {X.nodes: c[X] for X in enum_strong_subtrees(u24, 2)}
        assert oracles.tree_agreement_oracle(table, w.tree.nodes, 2, 2, w.nls.N, w.nls.L)


def test_unary_reduction_to_sets():
    """On 1^{<m} a node position is a level index, so both verifiers coincide."""
    for m in range(2, 7):
        U = Universe.full(1, m)
        for n in (1, 2):
            trees = enum_strong_subtrees(U, n)
            for seed in range(3):
                cs = set_coloring("random", m, n, seed=seed)
                ct = Coloring.of(trees, lambda X: cs[tuple(len(s) for s in sorted(X.nodes))])
                T = enum_strong_subtrees(U, m)[0]
                for I in index_sets(n):
                    N = [(0,) * k for k in I]
                    assert milliken_verify(ct, T, pos_nls(N)) == er_verify(cs, range(m), I, n)


@pytest.mark.parametrize("N0,L0", [((), ()), (((),), ()), ((), (0,)), ((), (1,)),
                                   (((), (1,)), ()), (((0,),), ())])
def test_canonical_witness_stability(u24, N0, L0):
    a = pos_nls(N0, L0)
    dom = enum_strong_subtrees(u24, 2)
    c = Coloring.of(dom, lambda X: repr(position_signature(X, a)))
    res = milliken_classify(c, u24, 2, 3)
    assert res
    w = res.witness
    sub = enum_strong_subtrees(Universe.of(w.tree), 2)
    got = partition_of({X: position_signature(X, w.nls) for X in sub})
    want = partition_of({X: position_signature(X, a) for X in sub})
    assert got == want


# -- general families ---------------------------------------------------------

def lifted(w, n):
    G = Family(Universe.of(w.tree), enum_strong_subtrees(Universe.of(w.tree), n).members)
    return G, {X: lift(w.nls, X) for X in G}


@pytest.mark.parametrize("gen", ["constant", "injective", "by-level-set", "by-min-level", "by-root"])
def test_lifted_witness_is_canonical(u24, gen):
    c = tree_coloring(gen, u24, 1)
    w = milliken_classify(c, u24, 1, 3).witness
    G, f = lifted(w, 1)
    assert canonical_family_verify(G, c, f)


def test_canonical_family_verify_rejections(u23):
    G = Family(u23, enum_strong_subtrees(u23, 1).members)
    c = tree_coloring("constant", u23, 1)
    outside = {X: NodeLevelSet(frozenset([(1, 1)]), ()) for X in G}
    assert not canonical_family_verify(G, c, outside)
    inj = {X: NodeLevelSet(X.nodes, ()) for X in G}
    # constant colors, but the node sets at different levels are not translates
    assert not canonical_family_verify(G, c, inj)
    inj_c = tree_coloring("injective", u23, 1)
    assert canonical_family_verify(G, inj_c, inj)


def test_translation_equal():
    a = NodeLevelSet(frozenset([(0, 0)]), (2,))
    b = NodeLevelSet(frozenset([(1, 0)]), (2,))
    assert translation_equal(a, b)
    assert not translation_equal(a, NodeLevelSet(frozenset([(1,)]), (2,)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_partition_uniqueness(seed):
    """Two certificates for one coloring on one tree induce one partition."""
    U = Universe.full(2, 4)
    c = tree_coloring("random", U, 1, seed=seed, colors=2)
    res = milliken_classify(c, U, 1, 2)
    if not res:
        return
    T = res.witness.tree
    sub = enum_strong_subtrees(Universe.of(T), 1)
    good = [a for a in position_node_level_sets(2, 1) if milliken_verify(c, T, a, n=1)]
    parts = set()
    for a in good:
        G = Family(Universe.of(T), sub.members)
        f = {X: lift(a, X) for X in G}
        assert canonical_family_verify(G, c, f)
        parts.add(partition_of({X: position_signature(X, a) for X in sub}))
    assert parts == {class_partition(c, sub)}


def test_envelope_union_examples(u23):
    fam, rank = envelope_union([], u23)
    assert [X.height for X in fam] == [0] and rank == 0
    fam, rank = envelope_union([NodeLevelSet.make([(0,)], b=2)], u23)
    assert [X.nodes for X in fam] == [frozenset([(0,)])]
    fam, rank = envelope_union([NodeLevelSet.make([], [0, 2], b=2)], u23)
    assert len(fam) == 4 and rank == NOT_UNIFORM
    for X in fam:
        assert uniform_rank(restrict(fam, X)) == 2


def test_coloring_totality(u23):
    c = tree_coloring("constant", u23, 1)
    with pytest.raises(NonTotalColoring):
        c[enum_strong_subtrees(u23, 2)[0]]
    with pytest.raises(NonTotalColoring):
        c.check_total(enum_strong_subtrees(u23, 2))
