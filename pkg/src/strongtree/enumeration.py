"""Exhaustive generation of strong subtrees and their products.

Everything is generated level by level: pick the root, then for every
(terminal node, direction) pair pick one universe node on the next chosen
level.  Subset filtering is never used here; it survives only as a test
oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import LevelSetMismatch, StrongTreeError
from .tree import EMPTY, Node, StrongSubtree, Universe, is_prefix


@dataclass(frozen=True)
class FamilySnapshot:
    """All of ``S_n(universe)`` in canonical order."""

    universe: Universe
    n: int
    members: tuple = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


@dataclass(frozen=True)
class ProductSubtree:
    """A d-tuple of strong subtrees sharing one level set."""

    members: tuple

    def __post_init__(self):
        if len({m.levels for m in self.members}) > 1:
            raise LevelSetMismatch("coordinates of a product subtree need equal level sets")

    @property
    def d(self) -> int:
        return len(self.members)

    @property
    def levels(self) -> tuple:
        return self.members[0].levels if self.members else ()

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def sort_key(self) -> tuple:
        return tuple(m.sort_key for m in self.members)

    def __getitem__(self, i) -> StrongSubtree:
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _by_level(nodes: Iterable[Node]) -> dict:
    out: dict = {}
    for s in nodes:
        out.setdefault(len(s), []).append(s)
    return out


def grow(universe: Universe, levels: Sequence[int],
         required: Iterable[Node] = ()) -> Iterator[StrongSubtree]:
    """Yield every strong subtree with level set ``levels`` containing ``required``.

    Output order: roots in lex order, then by the lex order of the choice
    vector.  Callers that need the canonical order sort afterwards.
    """
    levels = tuple(levels)
    if not levels:
        if not tuple(required):
            yield EMPTY
        return
    if any(a >= c for a, c in zip(levels, levels[1:])):
        raise StrongTreeError("levels must be strictly increasing")
    b = universe.b
    req = frozenset(required)
    req_levels = _by_level(req)
    if any(k not in levels for k in req_levels):
        return

    def fits(cand: Node, pref: Node, level: int) -> bool:
        # every required node above pref must pass through cand
        n = len(pref)
        for k, nodes in req_levels.items():
            if k < level:
                continue
            for s in nodes:
                if s[:n] == pref and not is_prefix(cand, s):
                    return False
        return True

    def extend(slices: list, k: int):
        if k == len(levels):
            yield StrongSubtree(b, tuple(slices))
            return
        level = levels[k]
        options = []
        for t in slices[-1]:
            for i in range(b):
                pref = t + (i,)
                opts = [c for c in universe.above(pref, level) if fits(c, pref, level)]
                if not opts:
                    return
                options.append(opts)
        for choice in itertools.product(*options):
            slices.append(choice)
            yield from extend(slices, k + 1)
            slices.pop()

    for r in universe.at_level(levels[0]):
        if all(is_prefix(r, s) for s in req) and fits(r, (), levels[0]):
            yield from extend([(r,)], 1)


def enum_with_levels(universe: Universe, L: Iterable[int]) -> list:
    """``C^U_L``: the strong subtrees whose level set is exactly ``L``."""
    L = tuple(sorted(set(L)))
    if any(k not in universe.levels for k in L):
        return []
    return sorted(grow(universe, L), key=lambda X: X.sort_key)


def level_sets(universe: Universe, n: int) -> Iterator[tuple]:
    return itertools.combinations(universe.levels, n)


def enum_strong_subtrees(universe: Universe, n: int) -> FamilySnapshot:
    if n < 0:
        raise StrongTreeError("height must be nonnegative")
    if n == 0:
        return FamilySnapshot(universe, 0, (EMPTY,))
    members = [X for L in level_sets(universe, n) for X in grow(universe, L)]
    members.sort(key=lambda X: X.sort_key)
    return FamilySnapshot(universe, n, tuple(members))


def iter_strong_subtrees(universe: Universe, n: int) -> Iterator[StrongSubtree]:
    """Streaming variant: canonical order, one root at a time in memory."""
    if n == 0:
        yield EMPTY
        return
    for r in sorted({s for L in level_sets(universe, n) for s in universe.at_level(L[0])}):
        batch = [X for L in level_sets(universe, n) if len(r) == L[0]
                 for X in grow(universe, L, required=(r,)) if X.root == r]
        batch.sort(key=lambda X: X.sort_key)
        yield from batch


def count_strong_subtrees(universe: Universe, n: int) -> int:
    """Exact count of ``S_n(universe)`` without materializing members."""
    if n == 0:
        return 1
    total = 0
    for L in level_sets(universe, n):
        for r in universe.at_level(L[0]):
            total += _count_from(universe, (r,), L, 1)
    return total


def _count_from(universe: Universe, frontier: tuple, L: tuple, k: int) -> int:
    if k == len(L):
        return 1
    # each (node, direction) choice is independent of the others, so the
    # count factorizes over the frontier
    total = 1
    for t in frontier:
        for i in range(universe.b):
            sub = sum(_count_from(universe, (c,), L, k + 1)
                      for c in universe.above(t + (i,), L[k]))
            if sub == 0:
                return 0
            total *= sub
    return total


def is_initial_segment(X: StrongSubtree, Y: StrongSubtree) -> bool:
    """``X`` is an initial segment of ``Y``."""
    if X.height > Y.height:
        return False
    return Y.slices[: X.height] == X.slices


def fin_leq(X: StrongSubtree, Y: StrongSubtree) -> bool:
    """The finitized inclusion: equal empties, or inclusion with top slice inside top slice."""
    if X.height == 0 or Y.height == 0:
        return X.height == 0 and Y.height == 0
    return X.nodes <= Y.nodes and set(X.top) <= set(Y.top)


def approx(T: StrongSubtree, n: int) -> StrongSubtree:
    """``r_n(T)``: the first ``n`` level slices of ``T``."""
    if not 0 <= n <= T.height:
        raise StrongTreeError(f"cannot take {n} levels of a height {T.height} tree")
    if n == 0:
        return EMPTY
    return StrongSubtree(T.b, T.slices[:n])


def enum_extensions(X: StrongSubtree, universe: Universe) -> list:
    """All height ``|X|+1`` strong subtrees of the universe having X as initial segment."""
    if X.height == 0:
        return list(enum_strong_subtrees(universe, 1))
    top = X.levels[-1]
    out = []
    for level in universe.levels:
        if level <= top:
            continue
        options = [universe.above(t + (i,), level) for t in X.top for i in range(X.b)]
        for choice in itertools.product(*options):
            out.append(StrongSubtree(X.b, X.slices + (tuple(choice),)))
    out.sort(key=lambda Y: Y.sort_key)
    return out


def check_shared_levels(universes: Sequence[Universe]) -> tuple:
    if not universes:
        raise StrongTreeError("need at least one universe")
    levels = {u.levels for u in universes}
    if len(levels) != 1:
        raise LevelSetMismatch("universes of a d-sequence must share their level set")
    return universes[0].levels


def enum_product(universes: Sequence[Universe], n: int) -> list:
    """``S_n`` of a d-sequence: d-tuples with one common level set."""
    check_shared_levels(universes)
    if n == 0:
        return [ProductSubtree(tuple(EMPTY for _ in universes))]
    out = []
    for L in level_sets(universes[0], n):
        per = [sorted(grow(u, L), key=lambda X: X.sort_key) for u in universes]
        out.extend(ProductSubtree(combo) for combo in itertools.product(*per))
    out.sort(key=lambda P: P.sort_key)
    return out


def product_is_initial_segment(X: ProductSubtree, Y: ProductSubtree) -> bool:
    return len(X) == len(Y) and all(is_initial_segment(a, c) for a, c in zip(X, Y))


def product_fin_leq(X: ProductSubtree, Y: ProductSubtree, relation=fin_leq) -> bool:
    return len(X) == len(Y) and all(relation(a, c) for a, c in zip(X, Y))


def product_approx(T: ProductSubtree, n: int) -> ProductSubtree:
    return ProductSubtree(tuple(approx(m, n) for m in T))
