"""JSON encoding of every tfext value.

Rationals are strings ``"p/q"`` (``"p"`` when q = 1), matrices are arrays
of rows.  ``dumps`` sorts keys, so equal values always serialize to the
same bytes.
"""

import json
from fractions import Fraction

from .completions import CosetVerdict, PadicElement, ProfiniteElement, from_chain, padic_make
from .errors import MalformedInput
from .ext import DivisibleType, ExtCocycle, FinAbGroup
from .groups import INF, BaerType, TypePresentation
from .lattices import Lattice, lattice_from_rows
from .lim1 import CochainVector, TruncatedCocycle
from .rational import format_rational, parse_rational
from .towers import Cofiltration, Filtration, MLVerdict, TowerMap


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _require(d, *keys):
    if not isinstance(d, dict):
        raise MalformedInput(f"expected a JSON object, got {type(d).__name__}")
    missing = [k for k in keys if k not in d]
    if missing:
        raise MalformedInput(f"missing field(s): {', '.join(missing)}")


def rat(x):
    if isinstance(x, bool):
        raise MalformedInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise MalformedInput(f"not a rational: {x!r}")


def vector_from_json(v):
    if not isinstance(v, list):
        raise MalformedInput("vectors are JSON arrays")
    return tuple(rat(x) for x in v)


def matrix_from_json(m):
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise MalformedInput("matrices are arrays of arrays")
    return tuple(vector_from_json(r) for r in m)


def vector_to_json(v):
    return [format_rational(Fraction(x)) for x in v]


def matrix_to_json(m):
    return [vector_to_json(r) for r in m]


# -- lattices, groups ---------------------------------------------------------


def lattice_to_json(a):
    return {"dim": a.dim, "den": a.den, "rows": [list(r) for r in a.hmat]}


def lattice_from_json(d):
    _require(d, "dim", "rows")
    den = d.get("den", 1)
    if not isinstance(den, int) or den < 1:
        raise MalformedInput("den must be a positive integer")
    rows = [[rat(x) / den for x in r] for r in d["rows"]]
    return lattice_from_rows(d["dim"], rows)


def _value_from_json(v):
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return INF
        if v.isdigit():
            return int(v)
        raise MalformedInput(f"bad type value {v!r}")
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise MalformedInput(f"bad type value {v!r}")


def _value_to_json(v):
    return "inf" if v == INF else v


def baer_type_to_json(t):
    return {
        "default": "inf" if t.default == INF else str(t.default),
        "exceptions": {str(p): _value_to_json(v) for p, v in t.exceptions},
    }


def baer_type_from_json(d):
    _require(d, "default")
    exc = d.get("exceptions", {})
    if not isinstance(exc, dict):
        raise MalformedInput("exceptions must be an object")
    try:
        pairs = tuple((int(p), _value_from_json(v)) for p, v in exc.items())
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    return BaerType(_value_from_json(d["default"]), pairs)


def group_to_json(g):
    return {"rank": g.rank, "types": [baer_type_to_json(t) for t in g.types]}


def group_from_json(d):
    _require(d, "types")
    g = TypePresentation(tuple(baer_type_from_json(t) for t in d["types"]))
    if "rank" in d and d["rank"] != g.rank:
        raise MalformedInput(f"rank {d['rank']} but {g.rank} types")
    return g


# -- towers -------------------------------------------------------------------


def tower_to_json(t):
    out = {"kind": t.kind, "dim": t.dim, "levels": [lattice_to_json(a) for a in t.levels]}
    if isinstance(t, Filtration):
        out["trivial_intersection"] = t.trivial_intersection
    else:
        out["no_free_summand"] = t.no_free_summand
    return out


def tower_from_json(d):
    _require(d, "kind", "dim", "levels")
    levels = tuple(lattice_from_json(a) for a in d["levels"])
    if d["kind"] == "filtration":
        return Filtration(d["dim"], levels, d.get("trivial_intersection"))
    if d["kind"] == "cofiltration":
        return Cofiltration(d["dim"], levels, d.get("no_free_summand"))
    raise MalformedInput(f"unknown tower kind {d['kind']!r}")


def tower_map_to_json(t):
    return {
        "source": tower_to_json(t.source),
        "target": tower_to_json(t.target),
        "indices": list(t.indices),
        "maps": [matrix_to_json(m) for m in t.maps],
    }


def tower_map_from_json(d):
    _require(d, "source", "target", "indices", "maps")
    return TowerMap(
        tower_from_json(d["source"]),
        tower_from_json(d["target"]),
        tuple(d["indices"]),
        tuple(matrix_from_json(m) for m in d["maps"]),
    )


def ml_verdict_to_json(v):
    return {"level": v.level, "verdict": v.verdict, "stable_from": v.stable_from}


# -- completions ----------------------------------------------------------------


def element_to_json(x):
    return {"filtration": tower_to_json(x.filtration), "chain": [vector_to_json(v) for v in x.chain]}


def element_from_json(d):
    _require(d, "filtration", "chain")
    f = tower_from_json(d["filtration"])
    if not isinstance(f, Filtration):
        raise MalformedInput("elements live over a filtration")
    chain = [vector_from_json(v) for v in d["chain"]]
    if len(chain) != f.depth:
        raise MalformedInput(f"chain has {len(chain)} entries, filtration depth {f.depth}")
    return from_chain(f, chain)


def padic_to_json(x):
    digits = x.digit_lists()
    return {
        "p": x.p,
        "d": x.dim,
        "digits": digits[0] if x.dim == 1 else digits,
        "shift": x.shift,
        "precision": x.precision,
    }


def padic_from_json(d):
    _require(d, "p", "d", "digits")
    return padic_make(d["p"], d["d"], d["digits"], d.get("shift", 0))


def coset_verdict_to_json(v):
    w = None if v.witness is None else vector_to_json(v.witness)
    return {"verdict": v.verdict, "witness": w, "bound": v.bound}


# -- lim^1 ----------------------------------------------------------------------


def cocycle_to_json(a):
    return {"tower": tower_to_json(a.tower), "consecutive": [vector_to_json(v) for v in a.consecutive]}


def cocycle_from_json(d):
    _require(d, "tower", "consecutive")
    return TruncatedCocycle(tower_from_json(d["tower"]), tuple(vector_from_json(v) for v in d["consecutive"]))


def cochain_to_json(b):
    return {"tower": tower_to_json(b.tower), "entries": [vector_to_json(v) for v in b.entries]}


def cochain_from_json(d):
    _require(d, "tower", "entries")
    return CochainVector(tower_from_json(d["tower"]), tuple(vector_from_json(v) for v in d["entries"]))


# -- Ext ------------------------------------------------------------------------


def fin_group_to_json(g):
    return {"orders": list(g.orders), "free_rank": g.free_rank}


def fin_group_from_json(d):
    _require(d, "orders")
    return FinAbGroup(tuple(d["orders"]), d.get("free_rank", 0))


def _pair_key(i, j):
    return f"({i},{j})"


def _parse_pair(key):
    s = key.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MalformedInput(f"bad table key {key!r}")
    try:
        i, j = (int(t) for t in s[1:-1].split(","))
    except ValueError:
        raise MalformedInput(f"bad table key {key!r}") from None
    return i, j


def ext_cocycle_to_json(c):
    idx = c.base.index_of
    return {
        "base": fin_group_to_json(c.base),
        "fiber": fin_group_to_json(c.fiber),
        "table": {_pair_key(idx(x), idx(y)): list(v) for (x, y), v in c.table},
    }


def ext_cocycle_from_json(d):
    _require(d, "base", "fiber")
    base = fin_group_from_json(d["base"])
    fiber = fin_group_from_json(d["fiber"])
    if not base.is_finite:
        raise MalformedInput("cocycle tables need a finite base")
    els = base.elements()
    table = {}
    for key, v in d.get("table", {}).items():
        i, j = _parse_pair(key)
        if not (0 <= i < len(els) and 0 <= j < len(els)):
            raise MalformedInput(f"table key {key!r} outside the base")
        if not isinstance(v, list) or len(v) != fiber.ncoords:
            raise MalformedInput(f"value at {key!r} must have {fiber.ncoords} coordinates")
        table[(els[i], els[j])] = tuple(int(a) for a in v)
    return ExtCocycle(base, fiber, table)


def divisible_type_to_json(t):
    return {
        "continuum_free": t.continuum_free,
        "primary_default": t.primary_default,
        "primary_exceptions": {str(p): n for p, n in t.primary_exceptions},
    }


def divisible_type_from_json(d):
    _require(d, "continuum_free", "primary_default")
    exc = tuple(sorted((int(p), n) for p, n in d.get("primary_exceptions", {}).items()))
    return DivisibleType(bool(d["continuum_free"]), d["primary_default"], exc)


_ENCODERS = [
    (Lattice, lattice_to_json),
    (BaerType, baer_type_to_json),
    (TypePresentation, group_to_json),
    (Filtration, tower_to_json),
    (Cofiltration, tower_to_json),
    (TowerMap, tower_map_to_json),
    (MLVerdict, ml_verdict_to_json),
    (ProfiniteElement, element_to_json),
    (PadicElement, padic_to_json),
    (CosetVerdict, coset_verdict_to_json),
    (TruncatedCocycle, cocycle_to_json),
    (CochainVector, cochain_to_json),
    (FinAbGroup, fin_group_to_json),
    (ExtCocycle, ext_cocycle_to_json),
    (DivisibleType, divisible_type_to_json),
]


def to_json(obj):
    """Encode any supported value (dispatch on type)."""
    for cls, enc in _ENCODERS:
        if isinstance(obj, cls):
            return enc(obj)
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")
