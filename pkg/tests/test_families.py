import itertools

import pytest
from hypothesis import given, settings, strategies as st

from strongtree import (
    EMPTY,
    NOT_UNIFORM,
    Family,
    StrongSubtree,
    Universe,
    decompose,
    derive,
    enum_strong_subtrees,
    graft,
    is_initial_segment,
    is_nash_williams,
    parse_node,
    ramsey_witness,
    restrict,
    tree_coloring,
    uniform_rank,
    verify_ramsey,
)
from strongtree.families import omega_family_member, project

import oracles


def T(*texts, b=2):
    return StrongSubtree.from_nodes([parse_node(t) for t in texts], b)


def S(U, n):
    return Family(U, enum_strong_subtrees(U, n).members)


def test_derive_examples(u23):
    G = S(u23, 2)
    D = derive(G, T("e"))
    assert len(D) == 5
    expected = {X.nodes for X in enum_strong_subtrees(u23, 2) if is_initial_segment(T("e"), X)}
    assert {graft(T("e"), Z).nodes for Z in D} == expected
    assert derive(G, T("e", "0", "1")) == []
    assert derive(S(u23, 1), T("e")) == []


def test_derive_graft_duality(u24):
    for n in (2, 3):
        G = S(u24, n)
        for Y in itertools.chain(enum_strong_subtrees(u24, 1), enum_strong_subtrees(u24, 2)):
            D = derive(G, Y)
            for Z in D:
                assert graft(Y, Z) in G.members
            for W in G:
                if is_initial_segment(Y, W) and W != Y:
                    assert decompose(W, Y) in D


def test_projection():
    U = Universe.full(2, 3)
    D = derive(S(U, 2), T("e"))
    assert all(X.root[0] == 0 for X in project(D, 0))
    assert all(X.root[0] == 1 for X in project(D, 1))


def test_nash_williams_examples(u23, u24):
    assert is_nash_williams(S(u24, 2))
    assert not is_nash_williams(Family(u23, list(S(u23, 1)) + list(S(u23, 2))))
    assert is_nash_williams(Family(u23, [EMPTY]))


def test_nash_williams_oracle(u23):
    members = list(S(u23, 1)) + list(S(u23, 2))
    for r in range(1, 4):
        for combo in itertools.combinations(members, r):
            expected = not any(X != Y and X.height < Y.height and Y.slices[: X.height] == X.slices
                               for X in combo for Y in combo)
            assert is_nash_williams(combo) == expected


def test_uniform_rank_examples(u23, u24):
    assert uniform_rank(Family(u23, [EMPTY])) == 0
    assert uniform_rank(S(u24, 2)) == 2
    assert uniform_rank(Family(u23, list(S(u23, 1)) + list(S(u23, 2)))) == NOT_UNIFORM
    partial = list(S(u24, 2))[:-1]
    assert uniform_rank(Family(u24, partial)) == NOT_UNIFORM


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_snapshots_are_uniform_and_thin(m):
    U = Universe.full(2, m)
    for n in range(0, min(3, m) + 1):
        G = S(U, n)
        r = uniform_rank(G)
        assert r == n
        assert is_nash_williams(G)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rank_survives_restriction(u24, n):
    for h in range(n, 5):
        for Tt in enum_strong_subtrees(u24, h):
            R = restrict(S(u24, n), Tt)
            assert uniform_rank(R) == n
            assert set(R.members) == set(enum_strong_subtrees(Universe.of(Tt), n))


def test_restrict_trivial(u24):
    Tt = enum_strong_subtrees(u24, 3)[0]
    assert list(restrict(Family(u24, [EMPTY]), Tt)) == [EMPTY]
    P = restrict(Family(u24, predicate="omega_root_height"), Tt)
    for X in enum_strong_subtrees(Universe.of(Tt), 2):
        assert (X in P) == omega_family_member(X)


def test_omega_examples():
    assert omega_family_member(T("e"))
    assert not omega_family_member(T("e", "0", "1"))
    assert omega_family_member(T("0", "00", "01"))


def test_ramsey_examples(u24):
    G = S(u24, 1)
    const = tree_coloring("constant", u24, 1)
    res = ramsey_witness(G, const, 2)
    assert res.witness == enum_strong_subtrees(u24, 2)[0]
    parity = tree_coloring("level-parity", u24, 1)
    res = ramsey_witness(G, parity, 2)
    assert res.witness.levels in ((0, 2), (1, 3))
    assert verify_ramsey(G, parity, res.witness)
    u22 = Universe.full(2, 2)
    inj = tree_coloring("injective", u22, 1)
    res = ramsey_witness(S(u22, 1), inj, 2)
    assert res.witness is None and res.exhausted


def test_ramsey_budget(u24):
    parity = tree_coloring("level-parity", u24, 1)
    res = ramsey_witness(S(u24, 1), parity, 2, max_candidates=1)
    assert res.witness is None and not res.exhausted and res.examined == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_ramsey_witnesses_verify(seed, colors):
    U = Universe.full(2, 4)
    c = tree_coloring("random", U, 1, seed=seed, colors=colors)
    G = S(U, 1)
    res = ramsey_witness(G, c, 2)
    if res:
        Tn = res.witness.nodes
        assert oracles.monochromatic({X.nodes: c[X] for X in G}, Tn)
    else:
        for Tt in enum_strong_subtrees(U, 2):
            assert not verify_ramsey(G, c, Tt)
