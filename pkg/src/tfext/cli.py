"""Command line interface: ``tfext <command> ...``.

Every command prints one JSON document on stdout.  Positional inputs are
file paths (``-`` for stdin) unless ``--inline`` is given, in which case
they are JSON text.  Exit codes: 0 success, 1 internal error, 2 malformed
input, 3 a verdict that is inconclusive at the available truncation.
"""

import argparse
import json
import sys
import warnings

from . import completions as cp
from . import ext, groups, lim1, serialize as ser, towers
from .errors import MalformedInput, TfextError
from .lattices import annihilator


class Inconclusive(Exception):
    """Raised after printing a result whose verdict is not definitive."""


def _load(arg, inline):
    if inline:
        text = arg
    elif arg == "-":
        text = sys.stdin.read()
    else:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _literal(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"bad JSON literal {text!r}: {e.msg}") from None


# -- commands -------------------------------------------------------------------


def cmd_dual(args, load):
    d = load(args.input)
    if isinstance(d, dict) and "kind" in d:
        return ser.tower_to_json(towers.dualize(ser.tower_from_json(d)))
    return ser.lattice_to_json(annihilator(ser.lattice_from_json(d)))


def cmd_corank(args, load):
    g = ser.group_from_json(load(args.group))
    return {"p": args.p, "corank": groups.p_corank(g, args.p)}


def cmd_invariant(args, load):
    g = ser.group_from_json(load(args.group))
    return ser.divisible_type_to_json(ext.ext_invariant(g))


def cmd_iso(args, load):
    g = ser.group_from_json(load(args.g))
    h = ser.group_from_json(load(args.h))
    if args.mode == "discrete":
        return {"mode": "discrete", "isomorphic": ext.ext_iso_discrete(g, h)}
    perm = ext.ext_iso_definable(g, h)
    out = {"mode": "definable", "isomorphic": perm is not None, "witness": None, "matrix": None}
    if perm is not None:
        out["witness"] = list(perm)
        out["matrix"] = ser.matrix_to_json(ext.ext_iso_definable_matrix(g, h))
    return out


def cmd_ml_check(args, load):
    d = load(args.tower)
    if isinstance(d, dict) and "bondings" in d:
        bondings = [[[int(x) for x in row] for row in m] for m in d["bondings"]]
    elif isinstance(d, dict) and "kind" in d:
        bondings = towers.inclusion_bondings(ser.tower_from_json(d))
    else:
        raise MalformedInput('expected {"bondings": [...]} or a filtration')
    verdicts = towers.ml_check(bondings, args.window)
    stable = all(v.verdict == towers.STABILIZED for v in verdicts)
    out = {
        "window": args.window,
        "levels": [ser.ml_verdict_to_json(v) for v in verdicts],
        "verdict": "STABILIZED" if stable else towers.NOT_STABLE,
    }
    if not stable:
        raise Inconclusive(out)
    return out


def cmd_lim1_sigma(args, load):
    a = ser.cocycle_from_json(load(args.cocycle))
    return ser.element_to_json(lim1.sigma(a))


def cmd_lim1_solve(args, load):
    a = ser.cocycle_from_json(load(args.cocycle))
    return ser.cochain_to_json(lim1.coboundary_solve(a))


def cmd_ext_validate(args, load):
    return {"valid": ext.validate(ser.ext_cocycle_from_json(load(args.cocycle)))}


def _witness_json(c, h):
    return {str(c.base.index_of(x)): list(v) for x, v in sorted(h.items(), key=lambda kv: c.base.index_of(kv[0]))}


def cmd_ext_solve(args, load):
    c = ser.ext_cocycle_from_json(load(args.cocycle))
    h = ext.coboundary_decide(c)
    return {"coboundary": h is not None, "witness": None if h is None else _witness_json(c, h)}


def cmd_ext_build(args, load):
    c = ser.ext_cocycle_from_json(load(args.cocycle))
    e = ext.build_extension(c)
    return {
        "invariants": list(e.invariants),
        "order": len(e.elements),
        "split": ext.coboundary_decide(c) is not None,
        "pure": ext.purity_check(c),
    }


def cmd_ext_type(args, load):
    b = ser.fin_group_from_json(load(args.base))
    f = ser.fin_group_from_json(load(args.fiber))
    return ser.fin_group_to_json(ext.ext_group(b, f))


def cmd_complete(args, load):
    g = ser.group_from_json(load(args.group))
    f = towers.dual_filtration(g, args.depth)
    return ser.element_to_json(cp.embed(f, ser.vector_from_json(_literal(args.embed))))


def _element_for_group(g, d):
    if isinstance(d, dict) and "filtration" in d:
        return ser.element_from_json(d)
    if isinstance(d, dict) and "chain" in d:
        f = towers.dual_filtration(g, len(d["chain"]))
        return cp.from_chain(f, [ser.vector_from_json(v) for v in d["chain"]])
    if isinstance(d, dict) and "vector" in d and "depth" in d:
        return cp.embed(towers.dual_filtration(g, d["depth"]), ser.vector_from_json(d["vector"]))
    raise MalformedInput('expected an element, {"chain": ...} or {"vector": ..., "depth": ...}')


def cmd_divide(args, load):
    g = ser.group_from_json(load(args.group))
    x = _element_for_group(g, load(args.x))
    res = cp.divide_correct(x, args.n, args.bound)
    if res is None:
        return {"found": False, "r": None, "y": None}
    y, r = res
    return {"found": True, "r": list(r), "y": ser.element_to_json(y)}


def cmd_padic_act(args, load):
    d = load(args.x)
    if isinstance(d, dict) and d.get("p") != args.p:
        raise MalformedInput(f"element is over p={d.get('p')}, --p is {args.p}")
    x = ser.padic_from_json(d)
    g = ser.matrix_from_json(_literal(args.g))
    v = ser.vector_from_json(_literal(args.v))
    return ser.padic_to_json(cp.padic_affine_apply(g, v, x))


def cmd_towermap_check(args, load):
    t = ser.tower_map_from_json(load(args.map))
    problems = towers.tower_map_problems(t)
    out = {"valid": not problems, "problems": problems}
    if args.inverse is not None:
        u = ser.tower_map_from_json(load(args.inverse))
        ok = not problems and towers.is_valid(u)
        if ok:
            ok = towers.congruent(
                towers.compose(t, u), towers.identity_map(t.source)
            ) and towers.congruent(towers.compose(u, t), towers.identity_map(t.target))
        out["isomorphism"] = ok
    return out


def cmd_towermap_adj(args, load):
    return ser.tower_map_to_json(towers.adj(ser.tower_map_from_json(load(args.map))))


def cmd_coset_equal(args, load):
    dx, dy = load(args.x), load(args.y)
    if "p" in dx:
        x, y = ser.padic_from_json(dx), ser.padic_from_json(dy)
    else:
        x, y = ser.element_from_json(dx), ser.element_from_json(dy)
    v = cp.coset_equal(x, y, bound=args.bound)
    out = ser.coset_verdict_to_json(v)
    if v.verdict == cp.INCONCLUSIVE:
        raise Inconclusive(out)
    return out


# -- parser ---------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="tfext", description=__doc__.splitlines()[0])
    p.add_argument("--inline", action="store_true", help="positional inputs are JSON text")
    p.add_argument("--verbose", action="store_true", help="human summary on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, help=None):
        s = sub.add_parser(name, help=help)
        for arg in positional:
            s.add_argument(arg)
        s.set_defaults(func=fn)
        return s

    add("dual", cmd_dual, "input", help="annihilator of a lattice or tower")
    s = add("corank", cmd_corank, "group", help="p-corank of a type-presented group")
    s.add_argument("-p", type=int, required=True)
    add("invariant", cmd_invariant, "group", help="divisible invariant of Ext(G, Z)")
    s = add("iso", cmd_iso, "g", "h", help="compare Ext(G, Z) and Ext(H, Z)")
    s.add_argument("--mode", choices=["discrete", "definable"], required=True)
    s = add("ml-check", cmd_ml_check, "tower", help="Mittag-Leffler window verdicts")
    s.add_argument("--window", type=int, required=True)
    add("lim1-sigma", cmd_lim1_sigma, "cocycle", help="image of a cocycle in the completion")
    add("lim1-solve", cmd_lim1_solve, "cocycle", help="coboundary witness at truncation")
    add("ext-validate", cmd_ext_validate, "cocycle", help="check the cocycle identities")
    add("ext-solve", cmd_ext_solve, "cocycle", help="decide whether a cocycle is a coboundary")
    add("ext-build", cmd_ext_build, "cocycle", help="isomorphism type of the extension")
    add("ext-type", cmd_ext_type, "base", "fiber", help="Ext(B, F) for finitely generated groups")
    s = add("complete", cmd_complete, "group", help="embed a vector in the completion")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--embed", required=True, help="JSON vector")
    s = add("divide", cmd_divide, "group", "x", help="division with integer correction")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s = add("padic-act", cmd_padic_act, "x", help="apply x -> g x + v on Q_p^d")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--g", required=True, help="JSON matrix")
    s.add_argument("--v", required=True, help="JSON vector")
    s = add("towermap-check", cmd_towermap_check, "map", help="validate a tower map")
    s.add_argument("--inverse", help="second map; checks both composites are identities")
    add("towermap-adj", cmd_towermap_adj, "map", help="transpose tower map between duals")
    s = add("coset-equal", cmd_coset_equal, "x", "y", help="coset verdict modulo the dense subgroup")
    s.add_argument("--bound", type=int, default=None)
    return p


def _summary(command, result):
    if isinstance(result, dict) and "verdict" in result:
        return f"{command}: {result['verdict']}"
    return f"{command}: ok"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    def load(arg):
        return _load(arg, args.inline)

    code = 0
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = args.func(args, load)
    except Inconclusive as e:
        result, code = e.args[0], 3
        caught = []
    except (TfextError, ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.verbose:
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        print(_summary(args.command, result), file=sys.stderr)
    print(ser.dumps(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
