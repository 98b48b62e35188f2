"""Nodes, b-branching universes and strong subtrees.

A node is a tuple of digits in ``range(b)``; the root is ``()``.  The level of
a node is its length and its height is ``len(node) + 1``, so ``U(n)`` is the
set of nodes of length ``n``.

With this encoding Python's tuple ordering *is* the lexicographic ordering of
a b-branching tree: two nodes are compared at their first differing digit
(the branch taken at their meet), and a proper prefix sorts first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BranchingViolation,
    EmptySet,
    LevelMismatch,
    LevelSetMismatch,
    NodeOutsideUniverse,
    NotInitialSegment,
    NotRooted,
    RootCollision,
    RoutingViolation,
    StrongTreeError,
)

Node = tuple
ROOT: Node = ()


def node_str(s: Node) -> str:
    """Text form of a node: ``"e"`` for the root, otherwise the digit string."""
    if not s:
        return "e"
    if any(d > 9 for d in s):
        raise ValueError("text form only supports b <= 10")
    return "".join(map(str, s))


def parse_node(text: str) -> Node:
    text = text.strip()
    if text in ("e", ""):
        return ROOT
    if not text.isdigit():
        raise ValueError(f"bad node text {text!r}")
    return tuple(int(ch) for ch in text)


def is_prefix(s: Node, t: Node) -> bool:
    """``s <= t`` in the tree order."""
    return len(s) <= len(t) and t[: len(s)] == s


def meet(s: Node, t: Node) -> Node:
    """Longest common prefix of two nodes."""
    k = 0
    for a, c in zip(s, t):
        if a != c:
            break
        k += 1
    return s[:k]


def meet_all(nodes: Iterable[Node]) -> Node:
    it = iter(nodes)
    try:
        m = next(it)
    except StopIteration:
        raise EmptySet("meet of an empty node set") from None
    for s in it:
        m = meet(m, s)
    return m


def lex_less(s: Node, t: Node) -> bool:
    return s < t


def positions(b: int, k: int):
    """All positions of ``b^k`` (level ``k`` of ``b^{<n}``) in lex order."""
    return itertools.product(range(b), repeat=k)


def full_positions(b: int, n: int) -> list[Node]:
    return [p for k in range(n) for p in positions(b, k)]


@dataclass(frozen=True, eq=False)
class StrongSubtree:
    """A finite strong subtree, stored as its lex-sorted level slices.

    ``slices[k]`` holds the ``b**k`` nodes on the k-th level of the subtree.
    Instances built through :meth:`from_nodes` are validated; the enumeration
    code builds them directly from slices it already knows to be correct.
    """

    b: int
    slices: tuple

    @classmethod
    def from_nodes(cls, nodes: Iterable[Node], b: int) -> "StrongSubtree":
        return cls(b, _strong_slices(frozenset(map(tuple, nodes)), b))

    @cached_property
    def nodes(self) -> frozenset:
        return frozenset(itertools.chain.from_iterable(self.slices))

    @cached_property
    def levels(self) -> tuple:
        return tuple(len(sl[0]) for sl in self.slices)

    @property
    def height(self) -> int:
        return len(self.slices)

    @property
    def root(self) -> Node | None:
        return self.slices[0][0] if self.slices else None

    @property
    def top(self) -> tuple:
        return self.slices[-1] if self.slices else ()

    @cached_property
    def sort_key(self) -> tuple:
        # (root, level set, node list), empty tree first
        if not self.slices:
            return ((), (), ())
        return ((0, self.root), self.levels, tuple(sorted(self.nodes)))

    @cached_property
    def iso(self) -> dict:
        """The strong isomorphism from ``b^{<n}``, as ``{position: node}``."""
        if not self.slices:
            return {}
        out = {ROOT: self.root}
        frontier = [ROOT]
        for k in range(1, self.height):
            nxt = []
            for p in frontier:
                s = out[p]
                for i in range(self.b):
                    pref = s + (i,)
                    # exactly one member of slice k extends s^i
                    child = next(t for t in self.slices[k] if t[: len(pref)] == pref)
                    out[p + (i,)] = child
                    nxt.append(p + (i,))
            frontier = nxt
        return out

    @cached_property
    def position_of(self) -> dict:
        return {v: p for p, v in self.iso.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrongSubtree):
            return NotImplemented
        if not self.slices or not other.slices:
            return self.slices == other.slices
        return self.b == other.b and self.slices == other.slices

    def __hash__(self) -> int:
        return hash((self.b if self.slices else 0, self.slices))

    def __contains__(self, s) -> bool:
        return s in self.nodes

    def __iter__(self):
        return itertools.chain.from_iterable(self.slices)

    def __lt__(self, other: "StrongSubtree") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        body = ",".join(node_str(s) for s in self)
        return f"StrongSubtree({{{body}}})"


EMPTY = StrongSubtree(0, ())


def _strong_slices(nodes: frozenset, b: int) -> tuple:
    if not nodes:
        raise EmptySet("a strong subtree needs at least one node")
    if b < 1:
        raise StrongTreeError("branching degree must be >= 1")
    for s in nodes:
        if any(not 0 <= d < b for d in s):
            raise BranchingViolation(f"node {s} has a digit outside range({b})")
    r = meet_all(nodes)
    if r not in nodes:
        raise NotRooted(f"meet {node_str(r)} of the set is not a member")
    slices = [(r,)]
    remaining = set(nodes) - {r}
    while remaining:
        children = []
        counts = []
        for t in slices[-1]:
            k_t = 0
            for i in range(b):
                pref = t + (i,)
                ext = [s for s in remaining if s[: len(pref)] == pref]
                if not ext:
                    continue
                k_t += 1
                low = min(len(s) for s in ext)
                minimal = [s for s in ext if len(s) == low]
                if len(minimal) != 1 or any(
                    not is_prefix(minimal[0], s) for s in ext
                ):
                    raise BranchingViolation(
                        f"more than one member extension of {node_str(t)} through {i}"
                    )
                children.append(minimal[0])
            counts.append(k_t)
        if any(0 < k < b for k in counts):
            raise BranchingViolation("a non-terminal member lacks a successor direction")
        if 0 in counts:
            raise LevelMismatch("terminal members sit on different levels")
        if len({len(c) for c in children}) != 1:
            raise LevelMismatch("successors of one slice lie on different levels")
        slices.append(tuple(sorted(children)))
        remaining.difference_update(children)
    return tuple(slices)


class Universe:
    """A finite b-branching tree used as ambient space.

    Either the full truncation ``b^{<m}`` or the node set of a strong subtree
    of it.  ``without`` produces a *pruned* universe, which is no longer
    b-branching and exists only so envelopes can be re-enumerated after a
    node has been deleted.
    """

    def __init__(self, b: int, nodes: Iterable[Node], *, m: int | None = None,
                 pruned: bool = False, _trusted: bool = False):
        self.b = b
        self.nodes = frozenset(nodes)
        self.m = m
        self.pruned = pruned
        if not (_trusted or pruned) and self.nodes:
            _strong_slices(self.nodes, b)
        by_level: dict[int, list] = {}
        for s in self.nodes:
            by_level.setdefault(len(s), []).append(s)
        self._by_level = {k: tuple(sorted(v)) for k, v in by_level.items()}
        self.levels = tuple(sorted(self._by_level))
        self._above_cache: dict = {}

    @classmethod
    def full(cls, b: int, m: int) -> "Universe":
        if b < 1 or m < 0:
            raise StrongTreeError("need b >= 1 and m >= 0")
        return cls(b, full_positions(b, m), m=m, _trusted=True)

    @classmethod
    def of(cls, subtree: StrongSubtree) -> "Universe":
        return cls(subtree.b, subtree.nodes, _trusted=True)

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def root(self) -> Node | None:
        return self._by_level[self.levels[0]][0] if self.levels else None

    def at_level(self, level: int) -> tuple:
        return self._by_level.get(level, ())

    def slices(self) -> tuple:
        return tuple(self._by_level[k] for k in self.levels)

    def above(self, prefix: Node, level: int) -> tuple:
        """Universe nodes on ``level`` that extend ``prefix``."""
        key = (prefix, level)
        hit = self._above_cache.get(key)
        if hit is None:
            n = len(prefix)
            hit = tuple(s for s in self.at_level(level) if s[:n] == prefix)
            self._above_cache[key] = hit
        return hit

    def next_level(self, level: int) -> int | None:
        for k in self.levels:
            if k > level:
                return k
        return None

    def successor(self, t: Node, i: int) -> Node | None:
        """The immediate successor of ``t`` in direction ``i``, if any."""
        nl = self.next_level(len(t))
        if nl is None:
            return None
        hit = self.above(t + (i,), nl)
        return hit[0] if hit else None

    def children(self, t: Node) -> tuple:
        nl = self.next_level(len(t))
        if nl is None:
            return ()
        return tuple(c for i in range(self.b) for c in self.above(t + (i,), nl))

    def without(self, v: Node) -> "Universe":
        """This universe with ``v`` and everything above it removed."""
        keep = [s for s in self.nodes if not is_prefix(v, s)]
        return Universe(self.b, keep, pruned=True)

    def contains_tree(self, X: StrongSubtree) -> bool:
        return X.nodes <= self.nodes

    def __contains__(self, s) -> bool:
        return s in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Universe) and self.b == other.b
                and self.nodes == other.nodes)

    def __hash__(self) -> int:
        return hash((self.b, self.nodes))

    def __repr__(self) -> str:
        if self.m is not None:
            return f"Universe({self.b}^<{self.m})"
        return f"Universe(b={self.b}, {len(self.nodes)} nodes, levels={self.levels})"


def validate_strong_subtree(universe: Universe, nodes: Iterable[Node]) -> StrongSubtree:
    nodes = frozenset(map(tuple, nodes))
    if not nodes:
        raise EmptySet("a strong subtree needs at least one node")
    outside = nodes - universe.nodes
    if outside:
        raise NodeOutsideUniverse(
            "nodes outside the universe: " + ", ".join(node_str(s) for s in sorted(outside))
        )
    return StrongSubtree(universe.b, _strong_slices(nodes, universe.b))


def canonical_iso(X: StrongSubtree) -> dict:
    return dict(X.iso)


def graft(Y: StrongSubtree, parts: Sequence[StrongSubtree]) -> StrongSubtree:
    """``Y`` followed by one part per (terminal node, direction) pair."""
    parts = tuple(parts)
    if Y.height == 0:
        if len(parts) != 1:
            raise RoutingViolation("grafting onto the empty tree takes exactly one part")
        return parts[0]
    b = Y.b
    if not parts or all(p.height == 0 for p in parts):
        return Y
    if len(parts) != b ** Y.height:
        raise RoutingViolation(f"expected {b ** Y.height} parts, got {len(parts)}")
    if len({p.levels for p in parts}) != 1:
        raise LevelSetMismatch("grafted parts must share one level set")
    roots = [p.root for p in parts]
    if len(set(roots)) != len(roots):
        raise RootCollision("grafted parts must have distinct roots")
    for j, t in enumerate(Y.top):
        for i in range(b):
            if not is_prefix(t + (i,), parts[j * b + i].root):
                raise RoutingViolation(
                    f"part {j * b + i} is not above {node_str(t + (i,))}"
                )
    height = parts[0].height
    extra = tuple(
        tuple(itertools.chain.from_iterable(p.slices[q] for p in parts))
        for q in range(height)
    )
    return StrongSubtree(b, Y.slices + extra)


def relative(universe: Universe, t: Node) -> Universe:
    """``U[t]``: all universe nodes extending ``t``."""
    t = tuple(t)
    if t not in universe:
        raise NodeOutsideUniverse(f"{node_str(t)} is not in the universe")
    return Universe(universe.b, (s for s in universe.nodes if is_prefix(t, s)),
                    _trusted=True)


def relative_tree(universe: Universe, X: StrongSubtree) -> Universe:
    """``U[X]``: the largest strong subtree of the universe with X as initial segment."""
    if X.height == 0:
        return universe
    if not universe.contains_tree(X):
        raise NodeOutsideUniverse("subtree is not inside the universe")
    nodes = set(X.nodes)
    for t in X.top:
        nodes.update(s for s in universe.nodes if is_prefix(t, s))
    return Universe(universe.b, nodes, _trusted=True)


def _slices_of(W) -> tuple:
    return W.slices if isinstance(W, StrongSubtree) else W.slices()


def decompose(W, Y: StrongSubtree) -> tuple:
    """``W(Y)``: the parts ``Z`` with ``graft(Y, Z) == W``.

    ``W`` may be a :class:`Universe` or a :class:`StrongSubtree`.
    """
    wslices = _slices_of(W)
    k = Y.height
    if k > len(wslices) or any(tuple(Y.slices[q]) != tuple(wslices[q]) for q in range(k)):
        raise NotInitialSegment("Y is not an initial segment of W")
    if k == len(wslices):
        return ()
    b = W.b
    if k == 0:
        return (StrongSubtree(b, tuple(wslices)),)
    rest = wslices[k:]
    parts = []
    for t in Y.top:
        for i in range(b):
            pref = t + (i,)
            n = len(pref)
            parts.append(StrongSubtree(
                b, tuple(tuple(s for s in sl if s[:n] == pref) for sl in rest)
            ))
    return tuple(parts)


def subtree_of(universe: Universe) -> StrongSubtree:
    """The universe itself viewed as a strong subtree."""
    if not universe.levels:
        return EMPTY
    return StrongSubtree(universe.b, universe.slices())


def as_universe(obj) -> Universe:
    if isinstance(obj, Universe):
        return obj
    if isinstance(obj, StrongSubtree):
        return Universe.of(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as a universe")


def parse_nodes(texts: Iterable[str]) -> list[Node]:
    return [parse_node(t) for t in texts]


def tree_json(universe: Universe) -> Mapping:
    if universe.m is not None:
        return {"b": universe.b, "m": universe.m}
    return {"b": universe.b, "nodes": [node_str(s) for s in sorted(universe.nodes)]}


def universe_from_json(obj: Mapping) -> Universe:
    b = int(obj["b"])
    if "m" in obj:
        return Universe.full(b, int(obj["m"]))
    return Universe(b, parse_nodes(obj["nodes"]))
