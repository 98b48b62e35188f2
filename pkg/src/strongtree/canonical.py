"""Colorings and canonical forms: Erdos-Rado on [m]^n, Milliken on S_n, and
the node-level-set verifier for colorings of a general family.

Colors are opaque; only equality between them is ever used.  Every verifier
works by comparing two partitions of the domain: the color classes and the
agreement classes.  The biconditional "same color iff agree" holds exactly
when the map (agreement key) -> color is well defined and injective.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .enumeration import enum_strong_subtrees
from .envelopes import (
    ABSOLUTE,
    POSITION,
    NodeLevelSet,
    envelope,
    position_signature,
    shift,
)
from .errors import ConstraintViolation, NonTotalColoring, StrongTreeError
from .families import NOT_UNIFORM, Budget, Family, SearchResult, uniform_rank
from .tree import EMPTY, StrongSubtree, Universe, full_positions, meet_all, node_str


@dataclass
class Coloring:
    """A total map from a finite domain to color labels."""

    domain: tuple
    table: dict
    kind: str = "Sn"

    @classmethod
    def of(cls, domain: Iterable, fn: Callable, kind: str = "Sn") -> "Coloring":
        domain = tuple(domain)
        return cls(domain, {x: fn(x) for x in domain}, kind)

    def __getitem__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise NonTotalColoring(f"no color for {x!r}") from None

    def __call__(self, x):
        return self[x]

    def check_total(self, domain: Iterable | None = None):
        for x in self.domain if domain is None else domain:
            if x not in self.table:
                raise NonTotalColoring(f"no color for {x!r}")

    @property
    def colors(self) -> set:
        return set(self.table.values())


def same_partition(keys: Mapping, colors: Mapping) -> bool:
    """Do ``x -> keys[x]`` and ``x -> colors[x]`` induce the same partition?"""
    k2c: dict = {}
    c2k: dict = {}
    for x, k in keys.items():
        c = colors[x]
        if k2c.setdefault(k, c) != c or c2k.setdefault(c, k) != k:
            return False
    return True


def partition_of(keys: Mapping) -> frozenset:
    classes: dict = {}
    for x, k in keys.items():
        classes.setdefault(k, set()).add(x)
    return frozenset(frozenset(v) for v in classes.values())


# -- Erdos-Rado -------------------------------------------------------------

def sets_domain(X: Iterable[int], n: int) -> list:
    return list(itertools.combinations(sorted(X), n))


def restrict_to(A: tuple, I: Iterable[int]) -> tuple:
    """``A:I``, the elements of ``A`` (increasingly enumerated) indexed by ``I``."""
    return tuple(A[i] for i in sorted(I))


def er_verify(c, X: Iterable[int], I: Iterable[int], n: int | None = None) -> bool:
    """``c(A) = c(B)`` iff ``A:I = B:I`` for all ``A, B`` in ``[X]^n``."""
    if n is None:
        n = len(next(iter(c.table)))
    I = tuple(sorted(I))
    if any(not 0 <= i < n for i in I):
        raise ConstraintViolation("I must be a subset of n")
    dom = sets_domain(X, n)
    return same_partition({A: restrict_to(A, I) for A in dom}, {A: c[A] for A in dom})


def index_sets(n: int) -> list:
    """Subsets of ``n``, smallest first, then lex."""
    return [I for k in range(n + 1) for I in itertools.combinations(range(n), k)]


def er_classify(c, m: int, n: int, min_witness: int,
                max_candidates: int | None = None) -> SearchResult:
    """Search ``(X, I)`` with ``|X| >= min_witness`` on which ``c`` is canonical.

    Order: ``I`` smallest first; for each ``I``, larger ``X`` first, then lex.
    """
    if not n <= min_witness <= m:
        raise StrongTreeError("need n <= min_witness <= m")
    c.check_total(sets_domain(range(m), n))
    budget = Budget(max_candidates)
    bounds = {"m": m, "n": n, "min_witness": min_witness}
    for I in index_sets(n):
        for size in range(m, min_witness - 1, -1):
            for X in itertools.combinations(range(m), size):
                if not budget.take():
                    return SearchResult(None, budget.used, False, bounds)
                if er_verify(c, X, I, n):
                    return SearchResult((X, I), budget.used, True, bounds)
    return SearchResult(None, budget.used, True, bounds)


SET_GENERATORS = {
    "constant": lambda A: "c",
    "injective": lambda A: ",".join(map(str, A)),
    "min": lambda A: A[0],
    "max": lambda A: A[-1],
    "sum-parity": lambda A: sum(A) % 2,
}


def set_coloring(gen: str, m: int, n: int, seed: int | None = None, colors: int = 2) -> Coloring:
    dom = sets_domain(range(m), n)
    if gen == "random":
        rng = random.Random(seed)
        return Coloring(tuple(dom), {A: rng.randrange(colors) for A in dom}, "sets")
    try:
        fn = SET_GENERATORS[gen]
    except KeyError:
        raise StrongTreeError(f"unknown generator {gen!r}") from None
    return Coloring.of(dom, fn, "sets")


# -- Milliken ---------------------------------------------------------------

TREE_GENERATORS = {
    "constant": lambda X: "c",
    "injective": lambda X: ",".join(node_str(s) for s in X),
    "by-level-set": lambda X: ",".join(map(str, X.levels)),
    "by-min-level": lambda X: X.levels[0],
    "by-root": lambda X: node_str(X.root),
    "level-parity": lambda X: X.levels[0] % 2,
}


def tree_coloring(gen: str, universe: Universe, n: int, seed: int | None = None,
                  colors: int = 2) -> Coloring:
    dom = enum_strong_subtrees(universe, n).members
    if gen == "random":
        rng = random.Random(seed)
        return Coloring(tuple(dom), {X: rng.randrange(colors) for X in dom}, "Sn")
    try:
        fn = TREE_GENERATORS[gen]
    except KeyError:
        raise StrongTreeError(f"unknown generator {gen!r}") from None
    return Coloring.of(dom, fn, "Sn")


def _position_nls(N, L) -> NodeLevelSet:
    if isinstance(N, NodeLevelSet):
        if N.coords != POSITION:
            raise StrongTreeError("expected a position node-level set")
        return N
    return NodeLevelSet.make(N, L, POSITION)


def milliken_verify(c, T: StrongSubtree, N, L=(), n: int | None = None) -> bool:
    """``c(X) = c(Y)`` iff ``X:(N,L) = Y:(N,L)`` over all of ``S_n(T)``."""
    nls = _position_nls(N, L)
    if n is None:
        n = next(iter(c.table)).height
    if any(len(p) >= n for p in nls.N) or any(k >= n for k in nls.L):
        raise ConstraintViolation("node-level set does not fit height n")
    dom = enum_strong_subtrees(Universe.of(T), n).members
    c.check_total(dom)
    return same_partition({X: position_signature(X, nls) for X in dom},
                          {X: c[X] for X in dom})


def position_node_level_sets(b: int, n: int) -> list:
    """All position node-level sets for height ``n``, smallest description first."""
    pos = full_positions(b, n)
    out = []
    for r in range(len(pos) + 1):
        for N in itertools.combinations(pos, r):
            top = max((len(p) for p in N), default=-1)
            free = [k for k in range(n) if k > top]
            for q in range(len(free) + 1):
                for L in itertools.combinations(free, q):
                    out.append(NodeLevelSet(frozenset(N), L, POSITION))
    out.sort(key=lambda x: x.sort_key)
    return out


@dataclass
class CanonicalWitness:
    tree: StrongSubtree
    nls: NodeLevelSet
    n: int
    transcript: dict = field(default_factory=dict)


def milliken_classify(c, universe: Universe, n: int, h: int,
                      max_candidates: int | None = None) -> SearchResult:
    """First ``(nls, T)`` with ``T`` in ``S_h`` on which ``c`` is canonical.

    Node-level sets are the outer loop, so the returned description is the
    smallest one that works on some ``T``.
    """
    if not n <= h <= universe.height:
        raise StrongTreeError("need n <= h <= height of the universe")
    c.check_total(enum_strong_subtrees(universe, n).members)
    budget = Budget(max_candidates)
    bounds = {"n": n, "h": h, "universe": repr(universe)}
    trees = enum_strong_subtrees(universe, h).members
    for nls in position_node_level_sets(universe.b, n):
        for T in trees:
            if not budget.take():
                return SearchResult(None, budget.used, False, bounds)
            if milliken_verify(c, T, nls, n=n):
                w = CanonicalWitness(T, nls, n, {"verified": True})
                return SearchResult(w, budget.used, True, bounds)
    return SearchResult(None, budget.used, True, bounds)


def lift(nls: NodeLevelSet, X: StrongSubtree) -> NodeLevelSet:
    """Absolute copy of a position node-level set inside ``X``."""
    return nls.to_absolute(X)


# -- general families -------------------------------------------------------

def translation_equal(a: NodeLevelSet, b: NodeLevelSet) -> bool:
    """Equal level sets and node sets that are horizontal shifts of each other."""
    if a.L != b.L or len(a.N) != len(b.N):
        return False
    if not a.N:
        return True
    ra, rb = meet_all(a.N), meet_all(b.N)
    return len(ra) == len(rb) and shift(a.N, ra, rb) == b.N


def is_inner(nls: NodeLevelSet, X: StrongSubtree) -> bool:
    """``N`` inside ``X``, ``L`` among its levels, and ``L_N < L``."""
    if not nls.N <= X.nodes or not set(nls.L) <= set(X.levels):
        return False
    if nls.N and nls.L and max(len(s) for s in nls.N) >= nls.L[0]:
        return False
    return True


def canonical_family_verify(G, c, f) -> bool:
    """Check that ``f`` certifies ``c`` as a canonical coloring of ``G``.

    Each ``f(X)`` must be inner to ``X``.  The agreement half is checked
    as: ``f(X) -> c(X)`` is a function, and injective up to translation of
    the node set.
    """
    members = list(G)
    fx = {X: f[X] if hasattr(f, "__getitem__") else f(X) for X in members}
    for X in members:
        if fx[X].coords != ABSOLUTE or not is_inner(fx[X], X):
            return False
    key_color: dict = {}
    for X in members:
        if key_color.setdefault(fx[X], c[X]) != c[X]:
            return False
    by_color: dict = {}
    for key, col in key_color.items():
        by_color.setdefault(col, []).append(key)
    for keys in by_color.values():
        first = keys[0]
        if any(not translation_equal(first, k) for k in keys[1:]):
            return False
    return True


def envelope_union(Tset: Sequence[NodeLevelSet], universe: Universe):
    """The family of all envelope members, with its certified rank."""
    if not Tset:
        fam = Family(universe, [EMPTY])
        return fam, 0
    members = set()
    for nls in Tset:
        members.update(envelope(universe, nls))
    fam = Family(universe, members)
    return fam, uniform_rank(fam)


def class_partition(c, domain) -> frozenset:
    return partition_of({x: c[x] for x in domain})


__all__ = [
    "Coloring", "CanonicalWitness", "NOT_UNIFORM", "canonical_family_verify",
    "class_partition", "envelope_union", "er_classify", "er_verify", "index_sets",
    "is_inner", "lift", "milliken_classify", "milliken_verify", "partition_of",
    "position_node_level_sets", "restrict_to", "same_partition", "set_coloring",
    "sets_domain", "translation_equal", "tree_coloring",
]
