"""Graphviz DOT rendering of a universe with highlighted subtrees."""

from __future__ import annotations

from typing import Iterable, Sequence

from .tree import Universe, node_str

HIGHLIGHT = "#d62728"


def _ident(prefix: str, s) -> str:
    return f'"{prefix}{node_str(s)}"'


def _cluster(lines: list, U: Universe, marked: frozenset, prefix: str, indent: str):
    for k in U.levels:
        row = " ".join(_ident(prefix, s) + ";" for s in U.at_level(k))
        lines.append(f"{indent}{{ rank=same; {row} }}")
    for s in sorted(U.nodes):
        label = node_str(s)
        if s in marked:
            style = f'style=filled, fillcolor="{HIGHLIGHT}", fontcolor=white'
        else:
            style = 'style=filled, fillcolor="#d9d9d9", color="#a0a0a0"'
        lines.append(f'{indent}{_ident(prefix, s)} [label="{label}", {style}];')
    for s in sorted(U.nodes):
        for c in U.children(s):
            lines.append(f"{indent}{_ident(prefix, s)} -> {_ident(prefix, c)};")


def render(universes: Sequence[Universe], marked: Sequence[Iterable] = (),
           name: str = "strongtree") -> str:
    """One universe copy per coordinate; ``marked[j]`` nodes are highlighted."""
    marked = [frozenset(m) for m in marked] + [frozenset()] * (len(universes) - len(marked))
    lines = [f"digraph {name} {{", "  node [shape=circle, fontsize=10];"]
    if len(universes) == 1:
        _cluster(lines, universes[0], marked[0], "", "  ")
    else:
        for j, U in enumerate(universes):
            lines.append(f"  subgraph cluster_{j} {{")
            lines.append(f'    label="coordinate {j}";')
            _cluster(lines, U, marked[j], f"{j}:", "    ")
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
