"""Meet closures, strong subtree envelopes, translations and agreement.

Two coordinate systems are in play.  *Absolute* node-level sets name actual
universe nodes and universe levels.  *Position* node-level sets name
positions of ``b^{<n}`` and level indices ``0..n-1``; they only acquire a
meaning relative to a particular subtree, through its canonical
isomorphism.  The two are kept apart by the ``coords`` flag and converted
only through :meth:`NodeLevelSet.to_absolute` / :meth:`NodeLevelSet.to_position`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .enumeration import ProductSubtree, approx, check_shared_levels, grow
from .errors import (
    ConstraintViolation,
    EmptyInput,
    NodeOutsideUniverse,
    NoSibling,
    SameRoot,
    StrongTreeError,
)
from .tree import EMPTY, Node, StrongSubtree, Universe, meet, meet_all, node_str, parse_node

ABSOLUTE = "absolute"
POSITION = "position"


def wedge_closure(A: Iterable[Node]) -> frozenset:
    A = list(set(map(tuple, A)))
    if not A:
        raise EmptyInput("meet closure of an empty node set")
    return frozenset(meet(s, t) for s, t in itertools.combinations_with_replacement(A, 2))


def norm(A: Iterable[Node]) -> int:
    """``||A||``: how many levels the meet closure of ``A`` touches."""
    A = list(A)
    if not A:
        return 0
    return len({len(s) for s in wedge_closure(A)})


def _levels_of(nodes) -> tuple:
    return tuple(sorted({len(s) for s in nodes}))


@dataclass(frozen=True)
class NodeLevelSet:
    """A pair ``(N, L)`` with every level of ``N`` strictly below ``min L``.

    Absolute instances are normalized on construction: when ``min L`` sits
    directly above the top level of ``N``, the successors of the top nodes
    of ``N`` are forced anyway, so they join ``N`` and that level leaves
    ``L``.  Position instances are left alone, because there consecutive
    indices are not consecutive universe levels.
    """

    N: frozenset
    L: tuple
    coords: str = ABSOLUTE

    @classmethod
    def make(cls, N: Iterable = (), L: Iterable[int] = (), coords: str = ABSOLUTE,
             b: int | None = None, normalize: bool = True) -> "NodeLevelSet":
        if coords not in (ABSOLUTE, POSITION):
            raise StrongTreeError(f"unknown coordinate system {coords!r}")
        N = frozenset(tuple(parse_node(s) if isinstance(s, str) else s) for s in N)
        L = tuple(sorted(set(int(x) for x in L)))
        if any(x < 0 for x in L):
            raise ConstraintViolation("levels must be nonnegative")
        if N and L and max(len(s) for s in N) >= L[0]:
            raise ConstraintViolation("the levels of N must lie below every level of L")
        if normalize and coords == ABSOLUTE and N and L:
            if b is None:
                raise StrongTreeError("normalization needs the branching degree")
            top = max(len(s) for s in N)
            while L and L[0] == top + 1:
                N = N | {s + (i,) for s in N if len(s) == top for i in range(b)}
                L = L[1:]
                top += 1
        return cls(N, L, coords)

    @property
    def LN(self) -> tuple:
        return _levels_of(self.N)

    @property
    def is_node_set(self) -> bool:
        return not self.L

    @property
    def is_level_set(self) -> bool:
        return not self.N

    @property
    def size(self) -> int:
        return len(self.N) + len(self.L)

    @property
    def sort_key(self) -> tuple:
        return (self.size, len(self.N), tuple(sorted(self.N, key=lambda s: (len(s), s))), self.L)

    def to_absolute(self, X: StrongSubtree) -> "NodeLevelSet":
        """Image of a position set under the canonical isomorphism of ``X``."""
        if self.coords != POSITION:
            raise StrongTreeError("already absolute")
        try:
            N = frozenset(X.iso[p] for p in self.N)
            L = tuple(X.levels[k] for k in self.L)
        except (KeyError, IndexError):
            raise ConstraintViolation("node-level set does not fit inside the subtree") from None
        return NodeLevelSet(N, L, ABSOLUTE)

    def to_position(self, X: StrongSubtree) -> "NodeLevelSet":
        if self.coords != ABSOLUTE:
            raise StrongTreeError("already in position coordinates")
        try:
            N = frozenset(X.position_of[s] for s in self.N)
            L = tuple(X.levels.index(k) for k in self.L)
        except (KeyError, ValueError):
            raise ConstraintViolation("node-level set is not inner to the subtree") from None
        return NodeLevelSet(N, L, POSITION)

    def to_json(self) -> dict:
        return {"N": sorted(node_str(s) for s in self.N), "L": list(self.L),
                "coords": self.coords}

    @classmethod
    def from_json(cls, obj, b: int | None = None) -> "NodeLevelSet":
        return cls.make(obj.get("N", ()), obj.get("L", ()), obj.get("coords", ABSOLUTE), b=b)

    def __repr__(self) -> str:
        ns = ",".join(node_str(s) for s in sorted(self.N))
        return f"({{{ns}}},{set(self.L) or '{}'})" + ("" if self.coords == ABSOLUTE else "@pos")


def envelope_levels(nls: NodeLevelSet) -> tuple:
    """Level set shared by every member of the envelope of ``nls``."""
    closure = wedge_closure(nls.N) if nls.N else ()
    return tuple(sorted(set(_levels_of(closure)) | set(nls.L)))


def _check_absolute(universe: Universe, nls: NodeLevelSet):
    if nls.coords != ABSOLUTE:
        raise StrongTreeError("envelopes take absolute node-level sets")
    outside = nls.N - universe.nodes
    if outside:
        raise NodeOutsideUniverse(
            "nodes outside the universe: " + ",".join(node_str(s) for s in sorted(outside)))
    if not set(nls.L) <= set(universe.levels) and not universe.pruned:
        raise NodeOutsideUniverse("levels outside the universe")
    if nls.N and nls.L and max(len(s) for s in nls.N) >= nls.L[0]:
        raise ConstraintViolation("the levels of N must lie below every level of L")


def envelope(universe: Universe, nls: NodeLevelSet) -> list:
    """``C^U_{(N,L)}`` in canonical order.

    Since ``N^\\wedge`` fills the first ``||N||`` levels and ``L`` the rest,
    every member has level set ``L_{N^\\wedge} | L``; the search is a growth
    on that level set with the meet closure as required nodes.
    """
    if universe.pruned and not nls.N <= universe.nodes:
        # a deleted node of N leaves nothing to contain it
        return []
    _check_absolute(universe, nls)
    if not nls.N and not nls.L:
        return [EMPTY]
    levels = envelope_levels(nls)
    required = wedge_closure(nls.N) if nls.N else ()
    if any(k not in universe.levels for k in levels):
        return []
    return sorted(grow(universe, levels, required), key=lambda X: X.sort_key)


def core(universe: Universe, nls: NodeLevelSet) -> frozenset:
    """Nodes lying in every member of the envelope."""
    members = envelope(universe, nls)
    if not members:
        return frozenset()
    out = set(members[0].nodes)
    for X in members[1:]:
        out &= X.nodes
    return frozenset(out)


def shift(nodes: Iterable[Node], old_root: Node, new_root: Node) -> frozenset:
    """Replace the prefix ``old_root`` by ``new_root`` in every node."""
    k = len(old_root)
    return frozenset(new_root + s[k:] for s in nodes)


def translate(X: StrongSubtree, new_root, universe: Universe | None = None) -> StrongSubtree:
    """Horizontal translation of ``X`` to a new root on the same level."""
    if X.height == 0:
        raise NoSibling("the empty tree has no root to move")
    new_root = parse_node(new_root) if isinstance(new_root, str) else tuple(new_root)
    r = X.root
    if len(new_root) != len(r):
        raise NoSibling("the new root must sit on the level of the old root")
    peers = universe.at_level(len(r)) if universe is not None else None
    if not r or (peers is not None and len(peers) < 2):
        raise NoSibling("the root level holds a single node")
    if new_root == r:
        raise SameRoot("a translation must move the root")
    if any(not 0 <= d < X.b for d in new_root):
        raise NodeOutsideUniverse(f"{node_str(new_root)} is not a node of the tree")
    k = len(r)
    slices = tuple(tuple(sorted(new_root + s[k:] for s in sl)) for sl in X.slices)
    Y = StrongSubtree(X.b, slices)
    if universe is not None and not universe.contains_tree(Y):
        raise NodeOutsideUniverse("the translated tree leaves the universe")
    return Y


def node_translates(N: Iterable[Node], X: StrongSubtree) -> list:
    """Copies of ``N`` (itself included) that sit inside ``X``, shifted along ``meet(N)``.

    Copies are listed in lex order of the shifted meet.
    """
    N = frozenset(N)
    if not N:
        return [N]
    r = meet_all(N)
    out = []
    for s in sorted(x for x in X.nodes if len(x) == len(r)):
        cand = shift(N, r, s)
        if cand <= X.nodes:
            out.append(cand)
    # X is closed under meets, so a copy inside X has its meet inside X too
    return out


def _position_images(N, X: StrongSubtree) -> set:
    return {frozenset(X.position_of[s] for s in cand) for cand in node_translates(N, X)}


def agrees_on_nodes(X: StrongSubtree, Y: StrongSubtree, N: Iterable[Node]) -> bool:
    """Both subtrees contain ``N`` up to translation, at equal positions."""
    N = frozenset(N)
    if not N:
        return True
    return bool(_position_images(N, X) & _position_images(N, Y))


def agrees_on_levels(X: StrongSubtree, Y: StrongSubtree, L: Iterable[int]) -> bool:
    lx, ly = set(X.levels), set(Y.levels)
    return all(m in lx and m in ly for m in L)


def agrees(X: StrongSubtree, Y: StrongSubtree, nls: NodeLevelSet) -> bool:
    """``X:(N,L) = Y:(N,L)`` for an absolute node-level set."""
    if nls.coords != ABSOLUTE:
        raise StrongTreeError("agreement takes an absolute node-level set")
    return agrees_on_levels(X, Y, nls.L) and agrees_on_nodes(X, Y, nls.N)


def agrees_position(X: StrongSubtree, Y: StrongSubtree, nls: NodeLevelSet) -> bool:
    """Agreement on a position node-level set, for equal-height subtrees.

    Nodes agree when the canonical isomorphisms send each position to the
    same universe node; levels agree when the indexed slices sit on the
    same universe level.
    """
    if nls.coords != POSITION:
        raise StrongTreeError("expected position coordinates")
    if X.height != Y.height:
        return False
    if any(X.levels[k] != Y.levels[k] for k in nls.L):
        return False
    return all(X.iso[p] == Y.iso[p] for p in nls.N)


def position_signature(X: StrongSubtree, nls: NodeLevelSet) -> tuple:
    """A key whose equality is exactly :func:`agrees_position`."""
    return (X.height, tuple(X.levels[k] for k in nls.L),
            tuple(X.iso[p] for p in sorted(nls.N)))


def inner_part(X: StrongSubtree, nls: NodeLevelSet, universe: Universe):
    """``X^{in}``, or ``None`` where it is undefined."""
    if nls.is_node_set:
        return X
    if nls.N:
        return approx(X, norm(nls.N))
    k = 0
    ul = universe.levels
    while k < X.height and k < len(ul) and X.levels[k] == ul[k]:
        k += 1
    return approx(X, k) if k else None


def product_levels(nls_list: Sequence[NodeLevelSet], j: int) -> tuple:
    """``L^j``: all the ``L_i`` plus the meet-closure levels of the other coordinates."""
    out = set()
    for i, nls in enumerate(nls_list):
        out.update(nls.L)
        if i != j and nls.N:
            out.update(_levels_of(wedge_closure(nls.N)))
    return tuple(sorted(out))


def coordinate_envelope(universe: Universe, nls_list: Sequence[NodeLevelSet], j: int) -> list:
    """Envelope of a d-sequence of node-level sets in coordinate ``j``."""
    N = nls_list[j].N
    Lj = product_levels(nls_list, j)
    closure = wedge_closure(N) if N else frozenset()
    levels = tuple(sorted(set(_levels_of(closure)) | set(Lj)))
    if not levels:
        return [EMPTY]
    if any(k not in universe.levels for k in levels):
        return []
    return sorted(grow(universe, levels, closure), key=lambda X: X.sort_key)


def product_envelope(universes: Sequence[Universe], nls_list: Sequence[NodeLevelSet]) -> list:
    if len(universes) != len(nls_list):
        raise StrongTreeError("need one node-level set per coordinate")
    check_shared_levels(universes)
    for u, nls in zip(universes, nls_list):
        _check_absolute(u, nls)
    per = [coordinate_envelope(u, nls_list, j) for j, u in enumerate(universes)]
    out = [ProductSubtree(combo) for combo in itertools.product(*per)]
    out.sort(key=lambda P: P.sort_key)
    return out


def agrees_product(X: ProductSubtree, Y: ProductSubtree, nls_list: Sequence[NodeLevelSet]) -> bool:
    return all(agrees(a, c, nls) for a, c, nls in zip(X, Y, nls_list))
