"""Command line interface.

Exit codes: 0 success (a search that finds nothing is still a success),
2 bad input, 3 contract violation (non-total coloring, failed
re-verification, axiom violations), 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .canonical import (
    Coloring,
    er_classify,
    er_verify,
    milliken_classify,
    milliken_verify,
    set_coloring,
    tree_coloring,
)
from .dot import render
from .enumeration import (
    enum_extensions,
    enum_strong_subtrees,
    enum_with_levels,
    iter_strong_subtrees,
)
from .envelopes import POSITION, NodeLevelSet
from .errors import NonTotalColoring, StrongTreeError
from .families import Family, ramsey_witness, verify_ramsey
from .pigeonhole import (
    LevelProductColoring,
    a4_dichotomy,
    a4_step,
    axioms_check,
    hl_witness,
    level_product_coloring,
    milliken_witness,
    monochromatic_on,
    product_colors,
)
from .serialize import (
    coloring_from_json,
    coloring_json,
    digest,
    dumps,
    full_domain,
    nodes_json,
    subtree_from_json,
    universe_json,
)
from .tree import StrongSubtree, Universe, node_str, parse_node, universe_from_json

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    pass


class ContractError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("STRONGTREE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"STRONGTREE_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InputError("STRONGTREE_THREADS must be positive")
    # the engine runs sequentially; the cap is accepted so scripts can set it
    return n


def _levels_arg(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None


def _nodes_arg(text: str) -> list:
    try:
        return [parse_node(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _universe(args) -> Universe:
    if args.b is None or args.m is None:
        raise InputError("--b and --m are required")
    if args.b < 1 or args.b > 10 or args.m < 0:
        raise InputError("need 1 <= b <= 10 and m >= 0")
    return Universe.full(args.b, args.m)


def _manifest(command: str, params: dict, result: dict, seed, bounds=None, examined=None) -> dict:
    return {
        "tool": "strongtree",
        "version": __version__,
        "command": command,
        "parameters": params,
        "seed": seed,
        "bounds": bounds or {},
        "candidates": examined,
        "result_digest": digest(result),
    }


def _emit(args, doc: dict, summary: list):
    text = dumps(doc) if args.format == "json" else _dot_for(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        for line in summary:
            print(line)
        print(f"output: {args.out}")
    else:
        sys.stdout.write(text)


def _params(args, *names) -> dict:
    return {k: getattr(args, k) for k in names}


# -- coloring input ----------------------------------------------------------

def _tree_coloring(args, U: Universe, n: int) -> Coloring:
    if args.coloring:
        c, cu, cn = coloring_from_json(_read_json(args.coloring))
        if c.kind != "Sn" or cu != U or cn != n:
            raise InputError("coloring file does not match --b/--m/--n")
    elif args.gen:
        c = tree_coloring(args.gen, U, n, seed=args.seed, colors=args.colors)
    else:
        raise InputError("give --gen or --coloring")
    c.check_total(enum_strong_subtrees(U, n))
    return c


def _set_coloring(args) -> Coloring:
    if args.coloring:
        c, _, n = coloring_from_json(_read_json(args.coloring))
        if c.kind != "sets" or n != args.n:
            raise InputError("coloring file does not match --n")
    elif args.gen:
        c = set_coloring(args.gen, args.m, args.n, seed=args.seed, colors=args.colors)
    else:
        raise InputError("give --gen or --coloring")
    c.check_total(full_domain(c, None, args.n, args.m))
    return c


# -- commands ------------------------------------------------------------------

def cmd_enumerate(args):
    U = _universe(args)
    if (args.n is None) == (args.levels is None):
        raise InputError("give exactly one of --n and --levels")
    if args.n is not None:
        if not 0 <= args.n <= U.height:
            raise InputError(f"--n must lie in 0..{U.height}")
        members = iter_strong_subtrees(U, args.n) if args.stream else enum_strong_subtrees(U, args.n)
    else:
        if any(k not in U.levels for k in args.levels):
            raise InputError("--levels must be levels of the universe")
        members = enum_with_levels(U, args.levels)
    if args.stream:
        return _stream_snapshot(args, U, members)
    rows = [nodes_json(X) for X in members]
    result = {"kind": "snapshot", "universe": universe_json(U), "n": args.n,
              "levels": args.levels, "count": len(rows), "members": rows}
    params = _params(args, "b", "m", "n", "levels")
    doc = {"manifest": _manifest("enumerate", params, result, None), "result": result}
    _emit(args, doc, [f"count: {len(rows)}"])
    return EXIT_OK


def _stream_snapshot(args, U, members):
    """One JSON array of node strings per line, then a manifest line."""
    import hashlib
    h = hashlib.sha256()
    out = open(args.out, "w") if args.out else sys.stdout
    count = 0
    try:
        for X in members:
            line = json.dumps(nodes_json(X), separators=(",", ":"))
            h.update(line.encode() + b"\n")
            out.write(line + "\n")
            count += 1
        params = _params(args, "b", "m", "n", "levels")
        manifest = {"tool": "strongtree", "version": __version__, "command": "enumerate",
                    "parameters": params, "seed": None, "count": count,
                    "result_digest": h.hexdigest()}
        out.write(json.dumps({"manifest": manifest}, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out:
        print(f"count: {count}")
        print(f"output: {args.out}")
    return EXIT_OK


def cmd_classify(args):
    if args.mode == "milliken":
        U = _universe(args)
        if args.n is None or args.h is None:
            raise InputError("milliken mode needs --n and --h")
        if not 1 <= args.n <= args.h <= U.height:
            raise InputError("need 1 <= n <= h <= m")
        c = _tree_coloring(args, U, args.n)
        res = milliken_classify(c, U, args.n, args.h, max_candidates=args.bound_candidates)
        result = {"kind": "classify", "mode": "milliken", "universe": universe_json(U),
                  "n": args.n, "h": args.h, "coloring": coloring_json(c, U, args.n),
                  "status": "found" if res else "none", "exhausted": res.exhausted}
        if res:
            w = res.witness
            result["witness"] = {"tree": nodes_json(w.tree),
                                 "N": sorted(node_str(p) for p in w.nls.N),
                                 "L": list(w.nls.L), "coords": POSITION}
        params = _params(args, "mode", "b", "m", "n", "h", "gen", "seed", "colors",
                         "bound_candidates")
    else:
        if args.m is None or args.n is None or args.min_witness is None:
            raise InputError("er mode needs --m, --n and --min-witness")
        if not 1 <= args.n <= args.min_witness <= args.m:
            raise InputError("need 1 <= n <= min-witness <= m")
        c = _set_coloring(args)
        res = er_classify(c, args.m, args.n, args.min_witness, max_candidates=args.bound_candidates)
        result = {"kind": "classify", "mode": "er", "m": args.m, "n": args.n,
                  "min_witness": args.min_witness, "coloring": coloring_json(c, n=args.n),
                  "status": "found" if res else "none", "exhausted": res.exhausted}
        if res:
            X, I = res.witness
            result["witness"] = {"X": list(X), "I": list(I)}
        params = _params(args, "mode", "m", "n", "min_witness", "gen", "seed", "colors",
                         "bound_candidates")
    doc = {"manifest": _manifest("classify", params, result, args.seed, res.bounds, res.examined),
           "result": result}
    _emit(args, doc, [f"status: {result['status']}"])
    return EXIT_OK


A4_RULES = ("all", "none", "even-max-level", "random")


def a4_predicate(rule: str, X: StrongSubtree, U: Universe, seed):
    if rule == "all":
        return lambda Y: True
    if rule == "none":
        return lambda Y: False
    if rule == "even-max-level":
        return lambda Y: Y.levels[-1] % 2 == 0
    if rule == "random":
        rng = random.Random(seed)
        inside = {Y for Y in enum_strong_subtrees(U, X.height + 1) if rng.random() < 0.5}
        return inside.__contains__
    raise InputError(f"unknown rule {rule!r}")


def cmd_witness(args):
    kind = args.kind
    U = _universe(args)
    bounds, examined = {}, None
    if kind in ("pigeonhole", "ramsey"):
        if args.n is None or args.k is None or not 1 <= args.n <= args.k <= U.height:
            raise InputError("need 1 <= n <= k <= m")
        c = _tree_coloring(args, U, args.n)
        if kind == "pigeonhole":
            res = milliken_witness(c, U, args.n, args.k, max_candidates=args.bound_candidates)
        else:
            res = ramsey_witness(Family(U, c.domain), c, args.k,
                                 max_candidates=args.bound_candidates)
        result = {"kind": kind, "universe": universe_json(U), "n": args.n, "k": args.k,
                  "coloring": coloring_json(c, U, args.n)}
        if res:
            result["witness"] = {"tree": nodes_json(res.witness)}
        params = _params(args, "kind", "b", "m", "n", "k", "gen", "seed", "colors",
                         "bound_candidates")
    elif kind == "hl":
        if args.k is None or not 1 <= args.k <= U.height:
            raise InputError("hl needs 1 <= k <= m")
        gen = args.gen or "constant"
        c = level_product_coloring(gen, [U] * args.d, seed=args.seed, colors=args.colors)
        res = hl_witness(c, args.k, max_candidates=args.bound_candidates)
        result = {"kind": kind, "universe": universe_json(U), "d": args.d, "k": args.k,
                  "coloring": {"entries": [{"tuple": [node_str(s) for s in t], "color": col}
                                           for t, col in sorted(c.table().items())]}}
        if res:
            result["witness"] = {"trees": [nodes_json(X) for X in res.witness]}
        params = _params(args, "kind", "b", "m", "d", "k", "gen", "seed", "colors",
                         "bound_candidates")
    elif kind == "a4":
        X = StrongSubtree.from_nodes(args.x, U.b) if args.x else StrongSubtree(U.b, ())
        if not U.contains_tree(X):
            raise InputError("--x is not inside the universe")
        rule = args.rule or "all"
        O = a4_predicate(rule, X, U, args.seed)
        res = a4_step(O, X, U, max_candidates=args.bound_candidates)
        result = {"kind": kind, "universe": universe_json(U), "x": nodes_json(X),
                  "rule": rule}
        if res:
            result["witness"] = {"tree": nodes_json(res.witness), "side": res.info["side"]}
        params = _params(args, "kind", "b", "m", "rule", "seed", "bound_candidates")
        params["x"] = nodes_json(X)
    else:
        raise InputError(f"unknown witness kind {kind!r}")
    result["status"] = "found" if res else "none"
    result["exhausted"] = res.exhausted
    bounds, examined = res.bounds, res.examined
    doc = {"manifest": _manifest("witness", params, result, args.seed, bounds, examined),
           "result": result}
    _emit(args, doc, [f"status: {result['status']}"])
    return EXIT_OK


def cmd_axioms(args):
    if args.trials < 0 or not 1 <= args.depth <= 5 or args.d not in (1, 2, 3):
        raise InputError("need trials >= 0, 1 <= depth <= 5, d in 1..3")
    rep = axioms_check(args.seed, args.trials, args.depth, d=args.d, b=args.b or 2,
                       mutate=args.mutate)
    result = {"kind": "axioms", **rep}
    params = _params(args, "seed", "trials", "depth", "d", "b", "mutate")
    doc = {"manifest": _manifest("axioms", params, result, args.seed), "result": result}
    _emit(args, doc, [f"violations: {rep.get('total_violations', 0)}"])
    if args.mutate is None and rep.get("total_violations", 0):
        return EXIT_CONTRACT
    return EXIT_OK


# -- verification ------------------------------------------------------------

def verify_document(doc: dict) -> bool:
    """Re-check a result document from scratch."""
    result = doc["result"]
    kind = result["kind"]
    if kind == "snapshot":
        U = universe_from_json(result["universe"])
        if result.get("levels") is not None:
            members = enum_with_levels(U, result["levels"])
        else:
            members = enum_strong_subtrees(U, result["n"])
        return [nodes_json(X) for X in members] == result["members"]
    if kind == "axioms":
        rep = axioms_check(result["seed"], result["trials"], result["depth"],
                           d=result["d"], b=result["b"], mutate=result["mutate"])
        return {"kind": "axioms", **rep} == result
    if result.get("status") != "found":
        return True
    w = result["witness"]
    if kind == "classify" and result["mode"] == "er":
        c, _, n = coloring_from_json(result["coloring"])
        c.check_total(full_domain(c, None, n, result["m"]))
        return er_verify(c, w["X"], w["I"], n)
    U = universe_from_json(result["universe"])
    if kind == "classify":
        c, _, n = coloring_from_json(result["coloring"])
        T = subtree_from_json(w["tree"], U.b)
        nls = NodeLevelSet.make(w["N"], w["L"], POSITION)
        return U.contains_tree(T) and milliken_verify(c, T, nls, n=n)
    if kind in ("pigeonhole", "ramsey"):
        c, _, n = coloring_from_json(result["coloring"])
        T = subtree_from_json(w["tree"], U.b)
        if not U.contains_tree(T) or T.height != result["k"]:
            return False
        if kind == "pigeonhole":
            return len(monochromatic_on(c, T, n)) <= 1
        return verify_ramsey(Family(U, c.domain), c, T)
    if kind == "hl":
        table = {tuple(parse_node(s) for s in e["tuple"]): e["color"]
                 for e in result["coloring"]["entries"]}
        c = LevelProductColoring([U] * result["d"], table.__getitem__)
        F = [subtree_from_json(t, U.b) for t in w["trees"]]
        if len({X.levels for X in F}) != 1 or any(not U.contains_tree(X) for X in F):
            return False
        return len(product_colors(c, F)) == 1
    if kind == "a4":
        X = StrongSubtree.from_nodes([parse_node(s) for s in result["x"]], U.b) \
            if result["x"] else StrongSubtree(U.b, ())
        seed = doc["manifest"]["seed"]
        O = a4_predicate(result["rule"], X, U, seed)
        T = subtree_from_json(w["tree"], U.b)
        return U.contains_tree(T) and a4_dichotomy(O, X, T) == w["side"] \
            and bool(enum_extensions(X, Universe.of(T)))
    raise InputError(f"cannot verify documents of kind {kind!r}")


def cmd_verify(args):
    doc = _read_json(args.file)
    if not isinstance(doc, dict) or "result" not in doc:
        raise InputError("not a strongtree result document")
    if digest(doc["result"]) != doc.get("manifest", {}).get("result_digest"):
        print("digest mismatch")
        return EXIT_CONTRACT
    if verify_document(doc):
        print("verified")
        return EXIT_OK
    print("verification FAILED")
    return EXIT_CONTRACT


# -- DOT ---------------------------------------------------------------------

def _dot_for(doc: dict) -> str:
    result = doc["result"]
    if "universe" not in result:
        raise InputError("this document has no tree to draw")
    U = universe_from_json(result["universe"])
    w = result.get("witness") or {}
    if result["kind"] == "snapshot":
        marked = [{parse_node(s) for row in result["members"] for s in row}]
        return render([U], marked)
    if "trees" in w:
        marked = [{parse_node(s) for s in t} for t in w["trees"]]
        return render([U] * len(marked), marked)
    if "tree" in w:
        return render([U], [{parse_node(s) for s in w["tree"]}])
    return render([U], [])


def cmd_export_dot(args):
    doc = _read_json(args.file)
    if not isinstance(doc, dict) or "result" not in doc:
        raise InputError("not a strongtree result document")
    text = _dot_for(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"output: {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="strongtree", description="Strong subtree combinatorics at finite scale.")
    p.add_argument("--version", action="version", version=f"strongtree {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, universe=True):
        if universe:
            sp.add_argument("--b", type=int, default=2, help="branching degree")
            sp.add_argument("--m", type=int, help="universe depth (levels 0..m-1)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bound-candidates", type=int, default=None,
                        help="stop after this many candidates")
        sp.add_argument("--format", choices=("json", "dot"), default="json")
        sp.add_argument("--out", help="output file (default: stdout)")

    def coloring(sp):
        sp.add_argument("--gen", help="built-in coloring generator")
        sp.add_argument("--coloring", help="coloring JSON file")
        sp.add_argument("--colors", type=int, default=2, help="colors for --gen random")

    e = sub.add_parser("enumerate", help="list S_n or a level-constrained family")
    common(e)
    e.add_argument("--n", type=int)
    e.add_argument("--levels", type=_levels_arg)
    e.add_argument("--stream", action="store_true", help="one member per line")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", help="canonical-form search")
    common(c)
    coloring(c)
    c.add_argument("--mode", choices=("er", "milliken"), default="milliken")
    c.add_argument("--n", type=int)
    c.add_argument("--h", type=int, help="witness height (milliken)")
    c.add_argument("--min-witness", type=int, help="smallest witness set (er)")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("witness", help="pigeonhole, level-product, Ramsey and A.4 searches")
    w.add_argument("kind", choices=("pigeonhole", "hl", "ramsey", "a4"))
    common(w)
    coloring(w)
    w.add_argument("--n", type=int)
    w.add_argument("--k", type=int)
    w.add_argument("--d", type=int, default=2, help="number of coordinates (hl)")
    w.add_argument("--x", type=_nodes_arg, help="comma separated nodes of X (a4)")
    w.add_argument("--rule", choices=A4_RULES, help="predicate O (a4)")
    w.set_defaults(func=cmd_witness)

    v = sub.add_parser("verify", help="re-verify a result document")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("export-dot", help="draw a result document")
    x.add_argument("file")
    x.add_argument("--out")
    x.set_defaults(func=cmd_export_dot)

    a = sub.add_parser("axioms", help="randomized A.1-A.3 harness")
    common(a, universe=False)
    a.add_argument("--trials", type=int, default=100)
    a.add_argument("--depth", type=int, default=4)
    a.add_argument("--d", type=int, default=1)
    a.add_argument("--b", type=int, default=2)
    a.add_argument("--mutate", choices=("fin-leq",), default=None)
    a.set_defaults(func=cmd_axioms)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads()
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (NonTotalColoring, ContractError) as e:
        print(f"contract violation: {e}", file=sys.stderr)
        return EXIT_CONTRACT
    except (StrongTreeError, KeyError, TypeError) as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as e:
        print(f"internal assertion failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
