"""Bounded witness searches for the pigeonhole principles, and the axiom harness.

All searches walk candidates in canonical order and return the first one
that passes an exhaustive re-check, so answers do not depend on how the
candidates were produced.  A ``None`` witness only speaks about the finite
truncation that was searched.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .enumeration import (
    ProductSubtree,
    check_shared_levels,
    enum_extensions,
    enum_product,
    enum_strong_subtrees,
    fin_leq,
    is_initial_segment,
)
from .errors import NoRoom, StrongTreeError
from .families import Budget, SearchResult
from .tree import EMPTY, StrongSubtree, Universe, graft, node_str, relative


def _color(c, x):
    return c[x] if hasattr(c, "__getitem__") else c(x)


# -- Milliken pigeonhole ----------------------------------------------------

def monochromatic_on(c, T: StrongSubtree, n: int) -> set:
    """Colors taken by ``c`` on ``S_n(T)``."""
    return {_color(c, X) for X in enum_strong_subtrees(Universe.of(T), n)}


def milliken_witness(c, universe: Universe, n: int, k: int,
                     max_candidates: int | None = None) -> SearchResult:
    """First ``T`` in ``S_k`` with ``c`` constant on ``S_n(T)``."""
    if not n <= k <= universe.height:
        raise StrongTreeError("need n <= k <= height of the universe")
    budget = Budget(max_candidates)
    bounds = {"n": n, "k": k, "universe": repr(universe)}
    for T in enum_strong_subtrees(universe, k):
        if not budget.take():
            return SearchResult(None, budget.used, False, bounds)
        seen = monochromatic_on(c, T, n)
        if len(seen) <= 1:
            return SearchResult(T, budget.used, True, bounds, {"color": next(iter(seen), None)})
    return SearchResult(None, budget.used, True, bounds)


# -- level products ---------------------------------------------------------

@dataclass
class LevelProductColoring:
    """Colors of the tuples ``(t_0..t_{p-1})`` with all ``t_j`` on one level."""

    universes: tuple
    fn: Callable

    def __post_init__(self):
        self.universes = tuple(self.universes)
        check_shared_levels(self.universes)
        self._cache: dict = {}

    def __getitem__(self, t: tuple):
        if len({len(s) for s in t}) != 1:
            raise StrongTreeError("level product entries must share one level")
        hit = self._cache.get(t)
        if hit is None:
            hit = self._cache[t] = self.fn(t)
        return hit

    @property
    def p(self) -> int:
        return len(self.universes)

    def level_products(self, level: int):
        return itertools.product(*(u.at_level(level) for u in self.universes))

    def table(self) -> dict:
        return {t: self[t] for k in self.universes[0].levels for t in self.level_products(k)}


def level_product_coloring(gen: str, universes: Sequence[Universe], seed: int | None = None,
                           colors: int = 2) -> LevelProductColoring:
    if gen == "constant":
        return LevelProductColoring(universes, lambda t: "c")
    if gen == "level-parity":
        return LevelProductColoring(universes, lambda t: len(t[0]) % 2)
    if gen == "random":
        # materialize in a fixed order so the table depends on the seed only
        rng = random.Random(seed)
        universes = tuple(universes)
        table = {}
        for k in universes[0].levels:
            for t in itertools.product(*(u.at_level(k) for u in universes)):
                table[t] = rng.randrange(colors)
        return LevelProductColoring(universes, table.__getitem__)
    raise StrongTreeError(f"unknown generator {gen!r}")


def product_colors(c, F: Sequence[StrongSubtree]) -> set:
    """Colors over all level products ``F_0(n) x ... x F_{p-1}(n)``."""
    seen = set()
    for q in range(F[0].height):
        for t in itertools.product(*(X.slices[q] for X in F)):
            seen.add(_color(c, t))
    return seen


def hl_witness(c: LevelProductColoring, k: int, color=None,
               max_candidates: int | None = None) -> SearchResult:
    """Strong subtrees ``F_j`` of height ``k`` with one common level set whose
    level products all take a single color (``color`` if given)."""
    universes = c.universes
    if not 1 <= k <= universes[0].height:
        raise StrongTreeError("target height out of range")
    budget = Budget(max_candidates)
    bounds = {"k": k, "p": c.p, "color": color}
    for P in enum_product(universes, k):
        if not budget.take():
            return SearchResult(None, budget.used, False, bounds)
        seen = product_colors(c, P.members)
        if len(seen) == 1 and (color is None or seen == {color}):
            return SearchResult(P, budget.used, True, bounds, {"color": next(iter(seen))})
    return SearchResult(None, budget.used, True, bounds)


# -- A.4 ---------------------------------------------------------------------

def _in(O, Y) -> bool:
    if callable(O):
        return bool(O(Y))
    return Y in O


def successor_universes(X: StrongSubtree, universe: Universe) -> tuple:
    """``U[u]`` for the immediate successors ``u`` of the top nodes of ``X``."""
    if X.height == 0:
        return (universe,)
    nl = universe.next_level(X.levels[-1])
    if nl is None:
        return ()
    out = []
    for t in X.top:
        for i in range(X.b):
            u = universe.above(t + (i,), nl)
            if not u:
                return ()
            out.append(relative(universe, u[0]))
    return tuple(out)


def a4_step(O, X: StrongSubtree, universe: Universe,
            max_candidates: int | None = None) -> SearchResult:
    """Shrink the universe above ``X`` so that all one-level extensions of ``X``
    fall on one side of ``O``.

    The successors ``u_j`` of the top of ``X`` span subuniverses ``U[u_j]``; a
    one-level extension is a level product of those, so a level-product
    witness ``F`` gives ``T' = X ^ F``.  Heights are tried from the largest
    down; at each height the "inside" side is tried first.
    """
    if not universe.contains_tree(X):
        raise StrongTreeError("X is not inside the universe")
    if X.height and any(s not in universe for s in X.nodes):
        raise StrongTreeError("X is not inside the universe")
    if not enum_extensions(X, universe):
        raise NoRoom("X has no one-level extension in this universe")
    subs = successor_universes(X, universe)
    if X.height == 0:
        def fn(t):
            return _in(O, StrongSubtree(universe.b, ((t[0],),)))
    else:
        def fn(t):
            return _in(O, StrongSubtree(X.b, X.slices + (t,)))
    c = LevelProductColoring(subs, fn)
    budget = Budget(max_candidates)
    height = subs[0].height
    for k in range(height, 0, -1):
        for side, want in (("inside", True), ("outside", False)):
            left = None if budget.limit is None else budget.limit - budget.used
            res = hl_witness(c, k, color=want, max_candidates=left)
            budget.used += res.examined
            if res.witness is not None:
                F = res.witness.members
                T = F[0] if X.height == 0 else graft(X, F)
                return SearchResult(T, budget.used, True,
                                    {"heights_tried_from": height, "k": k},
                                    {"side": side, "height": T.height})
            if not res.exhausted:
                return SearchResult(None, budget.used, False, {"heights_tried_from": height})
    return SearchResult(None, budget.used, True, {"heights_tried_from": height})


def a4_dichotomy(O, X: StrongSubtree, T: StrongSubtree) -> str | None:
    """``"inside"``/``"outside"`` when every extension of ``X`` in ``T`` is on that side."""
    ext = enum_extensions(X, Universe.of(T))
    flags = {_in(O, Y) for Y in ext}
    if flags == {True}:
        return "inside"
    if flags == {False}:
        return "outside"
    return None


# -- A.1 to A.3 harness ------------------------------------------------------

def _rn(P: ProductSubtree, n: int) -> ProductSubtree:
    return ProductSubtree(tuple(StrongSubtree(X.b, X.slices[:n]) if n else EMPTY for X in P))


def _seg(P: ProductSubtree, Q: ProductSubtree) -> bool:
    return all(is_initial_segment(a, c) for a, c in zip(P, Q))


def _subset(P: ProductSubtree, Q: ProductSubtree) -> bool:
    return all(a.nodes <= c.nodes for a, c in zip(P, Q))


def _fin_leq(P: ProductSubtree, Q: ProductSubtree) -> bool:
    if P.height == 0 or Q.height == 0:
        return P.height == 0 and Q.height == 0
    return all(fin_leq(a, c) for a, c in zip(P, Q))


MUTATIONS = {
    None: _fin_leq,
    # argument swap: the relation stays reflexive but points the wrong way
    "fin-leq": lambda P, Q: _fin_leq(Q, P),
}


def _space(universes: Sequence[Universe]) -> list:
    out = []
    for n in range(universes[0].height + 1):
        out.extend(enum_product(universes, n))
    return out


def _sub_space(P: ProductSubtree) -> list:
    """All product subtrees of ``P``, any height."""
    return _space([Universe.of(X) for X in P])


def _describe(P: ProductSubtree) -> str:
    return "|".join("{" + ",".join(node_str(s) for s in X) + "}" for X in P)


def axioms_check(seed: int, trials: int, depth: int, d: int = 1, b: int = 2,
                 mutate: str | None = None) -> dict:
    """Random instances of A.1(1)-(3), A.2(1)-(3), A.3(1)-(2) over ``(b^{<depth})^d``.

    ``S_oo`` is played by all nonempty product subtrees of the finite
    universe and ``[X, T]`` by those product subtrees of ``T`` having ``X``
    as an initial segment.
    """
    if mutate not in MUTATIONS:
        raise StrongTreeError(f"unknown mutation {mutate!r}")
    leq = MUTATIONS[mutate]
    rng = random.Random(seed)
    report = {"seed": seed, "trials": trials, "depth": depth, "d": d, "b": b,
              "mutate": mutate, "clauses": []}
    if trials <= 0:
        report.update(total_instances=0, total_violations=0)
        return report
    U = Universe.full(b, depth)
    universes = [U] * d
    space = _space(universes)
    big = [P for P in space if P.height]
    subs_cache: dict = {}

    def subs(P):
        if P not in subs_cache:
            subs_cache[P] = _sub_space(P)
        return subs_cache[P]

    def open_set(X, T):
        return [Q for Q in subs(T) if Q.height >= X.height and _seg(X, Q)]

    def clause(name, check):
        bad = []
        vacuous = violations = 0
        for _ in range(trials):
            verdict = check()
            if verdict is None:
                vacuous += 1
            elif verdict is not True:
                violations += 1
                if len(bad) < 3:
                    bad.append(verdict)
        report["clauses"].append({"clause": name, "instances": trials - vacuous,
                                  "vacuous": vacuous, "violations": violations,
                                  "examples": bad})

    def a11():
        X, Y = rng.choice(space), rng.choice(space)
        return True if _rn(X, 0) == _rn(Y, 0) else f"r_0 differs for {_describe(X)}, {_describe(Y)}"

    def a12():
        X, Y = rng.choice(space), rng.choice(space)
        if X == Y:
            return None
        top = max(X.height, Y.height)
        for n in range(top + 1):
            rx = _rn(X, n) if n <= X.height else None
            ry = _rn(Y, n) if n <= Y.height else None
            if rx != ry:
                return True
        return f"no separating approximation for {_describe(X)}, {_describe(Y)}"

    def a13():
        X = rng.choice(big)
        # pick Y sharing a prefix with X half the time so the premise can fire
        n = rng.randrange(X.height + 1)
        Y = rng.choice([Q for Q in space if Q.height >= n and _seg(_rn(X, n), Q)])
        m = rng.randrange(Y.height + 1)
        if _rn(X, n) != _rn(Y, m):
            return None
        if n != m or any(_rn(X, k) != _rn(Y, k) for k in range(n + 1)):
            return f"r_{n}(X) = r_{m}(Y) without agreement below"
        return True

    def a21():
        Y = rng.choice(space)
        below = [X for X in space if leq(X, Y)]
        # finiteness is termination; also check the bound by node subsets
        limit = (2 ** sum(len(x.nodes) for x in Y)) if Y.height else 1
        return True if len(below) <= limit else "unbounded"

    def a22():
        T1 = rng.choice(big)
        T0 = rng.choice(subs(T1)) if rng.random() < 0.5 else rng.choice(big)
        if T0.height == 0:
            return None
        lhs = _subset(T0, T1)
        rhs = all(any(leq(_rn(T0, n), _rn(T1, m)) for m in range(T1.height + 1))
                  for n in range(T0.height + 1))
        return True if lhs == rhs else f"T0={_describe(T0)} T1={_describe(T1)} lhs={lhs} rhs={rhs}"

    def a23():
        Z = rng.choice(space)
        Ys = [Y for Y in space if leq(Y, Z)]
        Y = rng.choice(Ys)
        X = _rn(Y, rng.randrange(Y.height + 1))
        if any(leq(X, _rn(Z, k)) for k in range(Z.height + 1)):
            return True
        return f"X={_describe(X)} Y={_describe(Y)} Z={_describe(Z)}"

    def a31():
        T = rng.choice(big)
        X = _rn(T, rng.randrange(T.height + 1))
        opens = open_set(X, T)
        if not opens:
            return None
        Tp = rng.choice(opens)
        return True if open_set(X, Tp) else f"[X,T'] empty for T'={_describe(Tp)}"

    def a32():
        T1 = rng.choice(big)
        T0 = rng.choice([Q for Q in subs(T1) if Q.height])
        X = rng.choice(subs(T0))
        o0 = open_set(X, T0)
        if not o0:
            return None
        target = set(o0)
        for Tp in open_set(X, T1):
            inner = open_set(X, Tp)
            if inner and set(inner) <= target:
                return True
        return f"no T' for X={_describe(X)} T0={_describe(T0)}"

    for name, fn in [("A.1(1)", a11), ("A.1(2)", a12), ("A.1(3)", a13),
                     ("A.2(1)", a21), ("A.2(2)", a22), ("A.2(3)", a23),
                     ("A.3(1)", a31), ("A.3(2)", a32)]:
        clause(name, fn)
    report["total_instances"] = sum(c["instances"] for c in report["clauses"])
    report["total_violations"] = sum(c["violations"] for c in report["clauses"])
    return report
