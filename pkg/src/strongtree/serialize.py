"""JSON forms of trees, colorings and node-level sets.

Everything written is canonical: sorted keys, members in canonical order,
nodes in lex order.  That is what makes reruns byte-identical.
"""

from __future__ import annotations

import hashlib
import itertools
import json

from .canonical import Coloring
from .enumeration import enum_strong_subtrees
from .envelopes import NodeLevelSet
from .errors import StrongTreeError
from .tree import StrongSubtree, Universe, node_str, parse_node, tree_json, universe_from_json


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    raw = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(raw).hexdigest()


def nodes_json(X) -> list:
    nodes = X.nodes if isinstance(X, (StrongSubtree, Universe)) else X
    return [node_str(s) for s in sorted(nodes)]


def subtree_from_json(texts, b: int) -> StrongSubtree:
    return StrongSubtree.from_nodes([parse_node(t) for t in texts], b)


def universe_json(U: Universe) -> dict:
    return dict(tree_json(U))


def coloring_json(c: Coloring, universe: Universe | None = None, n: int | None = None) -> dict:
    entries = []
    for x in c.domain:
        if c.kind == "sets":
            member = list(x)
        else:
            member = nodes_json(x)
        entries.append({"member": member, "color": c[x]})
    out = {"domain": c.kind, "entries": entries}
    if n is not None:
        out["n"] = n
    if universe is not None:
        out["universe"] = universe_json(universe)
    return out


def coloring_from_json(obj: dict) -> tuple:
    """Returns ``(coloring, universe or None, n)``.

    Totality is checked against the full domain (all of ``S_n`` or all of
    ``[m]^n``) by the caller, which knows what the domain should be.
    """
    kind = obj.get("domain", "Sn")
    entries = obj["entries"]
    if kind == "sets":
        table = {tuple(sorted(int(v) for v in e["member"])): e["color"] for e in entries}
        n = int(obj.get("n") or len(next(iter(table))))
        if any(len(A) != n or len(set(A)) != n for A in table):
            raise StrongTreeError("set coloring entries must be n-element sets")
        return Coloring(tuple(sorted(table)), table, "sets"), None, n
    if kind not in ("Sn", "nodes"):
        raise StrongTreeError(f"unknown coloring domain {kind!r}")
    U = universe_from_json(obj["universe"])
    table = {}
    for e in entries:
        member = e["member"]
        if isinstance(member, str):
            member = [member]
        X = subtree_from_json(member, U.b)
        if not U.contains_tree(X):
            raise StrongTreeError("coloring member outside the universe")
        table[X] = e["color"]
    n = int(obj.get("n") or (1 if kind == "nodes" else next(iter(table)).height))
    if any(X.height != n for X in table):
        raise StrongTreeError("coloring members must all have height n")
    dom = tuple(sorted(table, key=lambda X: X.sort_key))
    return Coloring(dom, table, "Sn"), U, n


def full_domain(c: Coloring, universe: Universe | None, n: int, m: int | None = None):
    if c.kind == "sets":
        m = m if m is not None else max(max(A) for A in c.table) + 1
        return list(itertools.combinations(range(m), n))
    return list(enum_strong_subtrees(universe, n))


def nls_json(nls: NodeLevelSet) -> dict:
    return nls.to_json()


def nls_from_json(obj: dict, b: int | None = None, normalize: bool = True) -> NodeLevelSet:
    return NodeLevelSet.make(obj.get("N", ()), obj.get("L", ()), obj.get("coords", "absolute"),
                             b=b, normalize=normalize)
