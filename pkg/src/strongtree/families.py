"""Finite-rank uniform families, derived families and the Ramsey check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .enumeration import enum_strong_subtrees, is_initial_segment
from .errors import StrongTreeError
from .tree import EMPTY, StrongSubtree, Universe, as_universe, decompose, relative

NOT_UNIFORM = "NotUniform"


@dataclass
class SearchResult:
    """Outcome of a bounded exhaustive search.

    ``witness`` is ``None`` when nothing was found; ``exhausted`` says
    whether that covers the whole finite search space or the candidate
    budget ran out first.
    """

    witness: object = None
    examined: int = 0
    exhausted: bool = True
    bounds: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.witness is not None


class Budget:
    """Deterministic cutoff on the number of candidates looked at."""

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.used = 0

    def take(self) -> bool:
        if self.limit is not None and self.used >= self.limit:
            return False
        self.used += 1
        return True


def omega_family_member(X: StrongSubtree) -> bool:
    """Membership in the example family: tree height equals root height."""
    if X.height == 0:
        return False
    return X.height == len(X.root) + 1


PREDICATES: dict[str, Callable[[StrongSubtree], bool]] = {
    "omega_root_height": omega_family_member,
}


class Family:
    """A family of finite strong subtrees of one universe.

    Explicit families carry their members; predicate families carry a
    membership test and list members on demand by scanning ``S_{<oo}``.
    """

    def __init__(self, universe, members: Iterable[StrongSubtree] | None = None,
                 predicate: str | None = None):
        self.universe = as_universe(universe)
        if (members is None) == (predicate is None):
            raise StrongTreeError("a family is either explicit or a predicate")
        if predicate is not None and predicate not in PREDICATES:
            raise StrongTreeError(f"unknown predicate {predicate!r}")
        self.predicate = predicate
        self._members = None if members is None else frozenset(members)

    @classmethod
    def snapshot(cls, universe: Universe, n: int) -> "Family":
        return cls(universe, enum_strong_subtrees(universe, n).members)

    @property
    def explicit(self) -> bool:
        return self.predicate is None

    def __contains__(self, X) -> bool:
        if self._members is not None:
            return X in self._members
        if not self.universe.contains_tree(X):
            return False
        return PREDICATES[self.predicate](X)

    @property
    def members(self) -> list:
        if self._members is None:
            out = [X for n in range(1, self.universe.height + 1)
                   for X in enum_strong_subtrees(self.universe, n) if X in self]
        else:
            out = list(self._members)
        return sorted(out, key=lambda X: X.sort_key)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self) -> str:
        if self.predicate:
            return f"Family({self.predicate} on {self.universe!r})"
        return f"Family({len(self._members)} members on {self.universe!r})"


def derive(G: Family, Y: StrongSubtree, include_trivial: bool = False) -> list:
    """``G(Y)``: the tuples ``Z`` with ``graft(Y, Z)`` in ``G``.

    The all-empty tuple (``Y`` itself in ``G``) is left out unless asked for;
    the rank recursion needs it, the examples do not.
    """
    out = set()
    for W in G.members:
        if not is_initial_segment(Y, W):
            continue
        if W == Y:
            if include_trivial and Y.height:
                out.add(tuple(EMPTY for _ in range(Y.b ** Y.height)))
            continue
        out.add(decompose(W, Y))
    return sorted(out, key=lambda Z: tuple(z.sort_key for z in Z))


def project(tuples: Iterable[tuple], i: int) -> list:
    """``pi_i``: the i-th coordinates of a derived family."""
    return sorted({Z[i] for Z in tuples}, key=lambda X: X.sort_key)


def is_nash_williams(G) -> bool:
    """No member is a proper initial segment of another."""
    members = list(G)
    by_height = sorted(members, key=lambda X: X.height)
    for a, X in enumerate(by_height):
        for Y in by_height[a + 1:]:
            if X.height < Y.height and is_initial_segment(X, Y):
                return False
    return True


def _rank(members: frozenset, universe: Universe, memo: dict):
    key = (members, universe)
    if key in memo:
        return memo[key]
    if members == {EMPTY}:
        memo[key] = 0
        return 0
    if not members or EMPTY in members or len({X.height for X in members}) != 1:
        memo[key] = NOT_UNIFORM
        return NOT_UNIFORM
    n = next(iter(members)).height
    # completeness: at finite rank there is only one candidate
    if members != frozenset(enum_strong_subtrees(universe, n).members):
        memo[key] = NOT_UNIFORM
        return NOT_UNIFORM
    fam = Family(universe, members)
    for t in sorted(universe.nodes):
        kids = universe.children(t)
        if len(kids) != universe.b:
            continue
        D = derive(fam, StrongSubtree(universe.b, ((t,),)), include_trivial=True)
        for i, u in enumerate(kids):
            sub = relative(universe, u)
            proj = frozenset(Z[i] for Z in D)
            if not proj:
                # too shallow to hold any rank n-1 tree: vacuous at finite scale
                if sub.height < n - 1:
                    continue
                memo[key] = NOT_UNIFORM
                return NOT_UNIFORM
            if _rank(proj, sub, memo) != n - 1:
                memo[key] = NOT_UNIFORM
                return NOT_UNIFORM
    memo[key] = n
    return n


def uniform_rank(G, universe=None):
    """Certified finite rank of an explicit family, or ``NOT_UNIFORM``.

    Rank 0 is ``{empty}``.  Rank ``n`` needs both the projection recursion
    (every ``pi_i(G(t))`` of rank ``n-1`` on ``U[t^i]``) and equality with
    ``S_n`` of the universe.
    """
    if isinstance(G, Family):
        universe = universe or G.universe
        members = frozenset(G.members)
    else:
        members = frozenset(G)
    if universe is None:
        raise StrongTreeError("need a universe")
    return _rank(members, as_universe(universe), {})


def restrict(G: Family, T) -> Family:
    """``G`` restricted to the strong subtrees of ``T``."""
    U = as_universe(T)
    if G.predicate is not None:
        return Family(U, predicate=G.predicate)
    return Family(U, [X for X in G.members if U.contains_tree(X)])


def _color_of(coloring, X):
    if hasattr(coloring, "__getitem__"):
        return coloring[X]
    return coloring(X)


def ramsey_witness(G: Family, coloring, k: int | None = None,
                   max_candidates: int | None = None) -> SearchResult:
    """A height ``k`` strong subtree ``T`` on which ``G`` meets at most one color.

    With ``k`` omitted the heights are tried from the universe height down.
    """
    U = G.universe
    heights = [k] if k is not None else list(range(U.height, 0, -1))
    members = G.members
    colors = {X: _color_of(coloring, X) for X in members}
    budget = Budget(max_candidates)
    for h in heights:
        for T in enum_strong_subtrees(U, h):
            if not budget.take():
                return SearchResult(None, budget.used, False, {"heights": heights})
            seen = {colors[X] for X in members if X.nodes <= T.nodes}
            if len(seen) <= 1:
                return SearchResult(T, budget.used, True, {"heights": heights},
                                    {"colors": sorted(map(str, seen)), "height": h})
    return SearchResult(None, budget.used, True, {"heights": heights})


def verify_ramsey(G: Family, coloring, T: StrongSubtree) -> bool:
    seen = {_color_of(coloring, X) for X in G.members if X.nodes <= T.nodes}
    return len(seen) <= 1
