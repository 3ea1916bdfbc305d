"""Symmetric 2-cocycles, abelian extensions and Ext invariants.

A cocycle on a finite abelian group B with values in F is a table
``c : B x B -> F`` that is normalized, symmetric and satisfies
``c(x,y) + c(x+y,z) = c(x,y+z) + c(y,z)``.  It is a coboundary when
``c(x,y) = h(x) + h(y) - h(x+y)`` for some function ``h : B -> F``; the
quotient of cocycles by coboundaries is Ext(B, F).
"""

import warnings
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import prod

from sympy import factorint

from .errors import BadHomomorphism, DimensionMismatch, InvalidCocycle, MalformedInput
from .groups import (
    INF,
    ZERO,
    TypePresentation,
    baer_equivalent,
    group_isomorphic,
    isomorphism_matrix,
    p_corank,
)
from .rational import snf, solve_integer_linear


class FreeSummandWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FinAbGroup:
    """``Z/n_1 + ... + Z/n_k + Z^free_rank``; elements are integer tuples."""

    orders: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise MalformedInput("cyclic orders must be positive")
        if self.free_rank < 0:
            raise MalformedInput("free rank must be nonnegative")
        object.__setattr__(self, "orders", orders)

    @property
    def ncoords(self):
        return len(self.orders) + self.free_rank

    @property
    def moduli(self):
        """Per-coordinate modulus, 0 for free coordinates."""
        return self.orders + (0,) * self.free_rank

    @property
    def is_finite(self):
        return self.free_rank == 0

    @property
    def order(self):
        if not self.is_finite:
            raise ValueError("infinite group")
        return prod(self.orders)

    def reduce(self, x):
        if len(x) != self.ncoords:
            raise DimensionMismatch(f"element of length {len(x)}, group has {self.ncoords} coordinates")
        return tuple(int(a) % n if n else int(a) for a, n in zip(x, self.moduli))

    def zero(self):
        return (0,) * self.ncoords

    def add(self, x, y):
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x):
        return self.reduce([-a for a in x])

    def sub(self, x, y):
        return self.reduce([a - b for a, b in zip(x, y)])

    def mul(self, k, x):
        return self.reduce([k * a for a in x])

    def elements(self):
        """All elements in the canonical order (itertools.product)."""
        if not self.is_finite:
            raise ValueError("infinite group has no element list")
        return [tuple(x) for x in product(*(range(n) for n in self.orders))]

    @cached_property
    def _index(self):
        return {x: i for i, x in enumerate(self.elements())}

    def index_of(self, x):
        return self._index[self.reduce(x)]

    def generators(self):
        return [tuple(int(i == j) for j in range(self.ncoords)) for i in range(self.ncoords)]

    def invariants(self):
        """Invariant factors (each dividing the next, 1s dropped)."""
        k = len(self.orders)
        if not k:
            return ()
        diag = snf([[self.orders[i] if i == j else 0 for j in range(k)] for i in range(k)]).diag
        return tuple(d for d in diag if d != 1)

    def canonical(self):
        return FinAbGroup(self.invariants(), self.free_rank)


def cyclic(n):
    return FinAbGroup((n,))


Z = FinAbGroup((), 1)


def isomorphic(g, h):
    return g.canonical() == h.canonical()


# -- cocycles ------------------------------------------------------------------


@dataclass(frozen=True)
class ExtCocycle:
    """A table on B x B stored sparsely: ``table`` lists nonzero entries."""

    base: FinAbGroup
    fiber: FinAbGroup
    table: tuple = ()

    def __post_init__(self):
        if not self.base.is_finite:
            raise MalformedInput("cocycle tables need a finite base")
        items = dict(self.table).items() if not isinstance(self.table, dict) else self.table.items()
        norm = {}
        for (x, y), v in items:
            key = (self.base.reduce(x), self.base.reduce(y))
            val = self.fiber.reduce(v)
            if any(val):
                norm[key] = val
        object.__setattr__(self, "table", tuple(sorted(norm.items())))

    @cached_property
    def _lookup(self):
        return dict(self.table)

    def __call__(self, x, y):
        return self._lookup.get((self.base.reduce(x), self.base.reduce(y)), self.fiber.zero())


def cocycle_from_function(base, fiber, fn):
    els = base.elements()
    return ExtCocycle(base, fiber, {(x, y): fn(x, y) for x in els for y in els})


def coboundary(base, fiber, h):
    """delta(h)(x, y) = h(x) + h(y) - h(x + y) for h given as a dict."""
    def val(x):
        return tuple(h.get(base.reduce(x), fiber.zero()))

    return cocycle_from_function(
        base, fiber, lambda x, y: [a + b - c for a, b, c in zip(val(x), val(y), val(base.add(x, y)))]
    )


def cocycle_add(c, d):
    if c.base != d.base or c.fiber != d.fiber:
        raise DimensionMismatch("cocycles on different groups")
    els = c.base.elements()
    return ExtCocycle(c.base, c.fiber, {(x, y): c.fiber.add(c(x, y), d(x, y)) for x in els for y in els})


def validate(c):
    """Normalization, symmetry and the cocycle identity, checked exhaustively."""
    b, f = c.base, c.fiber
    els = b.elements()
    zero = b.zero()
    for x in els:
        if any(c(x, zero)) or any(c(zero, x)):
            return False
        for y in els:
            if c(x, y) != c(y, x):
                return False
    for x in els:
        for y in els:
            cxy = c(x, y)
            xy = b.add(x, y)
            for z in els:
                lhs = f.add(cxy, c(xy, z))
                rhs = f.add(c(x, b.add(y, z)), c(y, z))
                if lhs != rhs:
                    return False
    return True


def _solve_coboundary(c, elements, gens):
    """h on ``elements`` with delta(h) = c there, or None.

    Matching c on the pairs (x, g) for x in the subgroup and g among its
    generators is enough: a cocycle vanishing on those pairs satisfies
    ``c(x, y) = c(x, y + g)`` and so vanishes everywhere.
    """
    b, f = c.base, c.fiber
    zero = b.zero()
    unknowns = [x for x in elements if x != zero]
    pos = {x: i for i, x in enumerate(unknowns)}
    rows, pairs = [], []
    for x in elements:
        for g in gens:
            row = [0] * len(unknowns)
            for e, s in ((x, 1), (g, 1), (b.add(x, g), -1)):
                if e != zero:
                    row[pos[e]] += s
            rows.append(row)
            pairs.append((x, g))
    h = {x: [0] * f.ncoords for x in unknowns}
    if not unknowns:
        return {} if all(not any(c(x, g)) for x, g in pairs) else None
    for j, q in enumerate(f.moduli):
        rhs = [c(x, g)[j] for x, g in pairs]
        sol = solve_integer_linear(rows, rhs, [q] * len(rows))
        if sol is None:
            return None
        for x, v in zip(unknowns, sol):
            h[x][j] = v
    return {x: f.reduce(v) for x, v in h.items()}


def coboundary_decide(c):
    """A function h with delta(h) = c, or None when c is not a coboundary."""
    if not validate(c):
        raise InvalidCocycle("table is not a normalized symmetric cocycle")
    h = _solve_coboundary(c, c.base.elements(), c.base.generators())
    if h is not None:
        assert coboundary(c.base, c.fiber, h) == c
    return h


def _span(b, gens):
    zero = b.zero()
    out, todo = {zero}, [zero]
    while todo:
        x = todo.pop()
        for g in gens:
            y = b.add(x, g)
            if y not in out:
                out.add(y)
                todo.append(y)
    return frozenset(out)


def subgroups(b):
    """Every subgroup of a finite group, each as (elements, generators).

    Subgroups are grown one generator at a time from the trivial group, so
    each is recorded with the first generator tuple that reaches it.
    """
    trivial = frozenset([b.zero()])
    seen = {trivial: ()}
    frontier = [trivial]
    els = b.elements()
    while frontier:
        nxt = []
        for s in frontier:
            for x in els:
                if x in s:
                    continue
                gens = seen[s] + (x,)
                key = _span(b, gens)
                if key not in seen:
                    seen[key] = gens
                    nxt.append(key)
        frontier = nxt
    ordered = sorted(seen.items(), key=lambda kv: (len(kv[0]), sorted(map(b.index_of, kv[0]))))
    return [(sorted(s, key=b.index_of), gens) for s, gens in ordered]


def weak_coboundary_check(c):
    """True iff c restricts to a coboundary on every subgroup of B."""
    if not validate(c):
        raise InvalidCocycle("table is not a normalized symmetric cocycle")
    return all(_solve_coboundary(c, els, gens) is not None for els, gens in subgroups(c.base))


def _check_hom(eta, f, g):
    if len(eta) != g.ncoords or any(len(row) != f.ncoords for row in eta):
        raise BadHomomorphism(f"matrix must be {g.ncoords}x{f.ncoords}")
    for j, n in enumerate(f.moduli):
        if n and any(g.reduce([n * row[j] for row in eta])):
            raise BadHomomorphism(f"generator {j} has order {n} but its image does not")


def apply_hom(eta, g, x):
    return g.reduce([sum(a * b for a, b in zip(row, x)) for row in eta])


def pushforward(eta, c, target):
    """eta o c for a homomorphism eta: F -> target given by an integer matrix."""
    _check_hom(eta, c.fiber, target)
    return ExtCocycle(c.base, target, {k: apply_hom(eta, target, v) for k, v in c.table})


# -- extensions ------------------------------------------------------------------


def _invariants_from_census(orders):
    """Invariant factors of a finite abelian group from its element orders.

    For each prime p, ``#{x : p^k x = 0} = p^(a_k)`` and ``a_k - a_(k-1)``
    counts the cyclic p-factors of order at least p^k.
    """
    n = len(orders)
    factors = []
    for p, e in factorint(n).items():
        logs = [0]
        while logs[-1] < e:
            k = len(logs)
            cnt = sum(1 for o in orders if p**k % o == 0)
            logs.append(factorint(cnt).get(p, 0))
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        exps = []
        for k in range(len(at_least) - 1, 0, -1):
            exps += [k] * (at_least[k - 1] - at_least[k])
        factors.append((p, exps))
    width = max((len(x) for _, x in factors), default=0)
    inv = [prod(p ** x[i] for p, x in factors if i < len(x)) for i in range(width)]
    return tuple(sorted(inv))


@dataclass(frozen=True)
class Extension:
    """The group F x B with addition twisted by a cocycle."""

    cocycle: ExtCocycle
    elements: tuple
    invariants: tuple

    def add(self, u, v):
        c = self.cocycle
        (f1, b1), (f2, b2) = u, v
        f = c.fiber
        return (f.add(f.add(f1, f2), c(b1, b2)), c.base.add(b1, b2))

    def mul(self, k, u):
        out = (self.cocycle.fiber.zero(), self.cocycle.base.zero())
        for _ in range(k):
            out = self.add(out, u)
        return out

    def embed(self, f):
        return (self.cocycle.fiber.reduce(f), self.cocycle.base.zero())

    def project(self, u):
        return u[1]

    @property
    def group(self):
        return FinAbGroup(self.invariants)


def _element_order(ext, u):
    zero = (ext.cocycle.fiber.zero(), ext.cocycle.base.zero())
    k, v = 1, u
    while v != zero:
        v = ext.add(v, u)
        k += 1
    return k


def build_extension(c, check_axioms=True):
    if not c.fiber.is_finite:
        raise InvalidCocycle("the extension group is only built for a finite fiber")
    if not validate(c):
        raise InvalidCocycle("table is not a normalized symmetric cocycle")
    els = tuple((f, b) for f in c.fiber.elements() for b in c.base.elements())
    ext = Extension(c, els, ())
    if check_axioms:
        zero = (c.fiber.zero(), c.base.zero())
        for u in els:
            if ext.add(u, zero) != u:
                raise InvalidCocycle("(0, 0) is not neutral")
            if not any(ext.add(u, v) == zero for v in els):
                raise InvalidCocycle("element without inverse")
            for v in els:
                uv = ext.add(u, v)
                if uv != ext.add(v, u):
                    raise InvalidCocycle("twisted addition is not commutative")
                for w in els:
                    if ext.add(uv, w) != ext.add(u, ext.add(v, w)):
                        raise InvalidCocycle("twisted addition is not associative")
    orders = [_element_order(ext, u) for u in els]
    return Extension(c, els, _invariants_from_census(orders))


def purity_check(c):
    """Whether F is a pure subgroup of the extension: F & lE = lF for all l."""
    ext = build_extension(c, check_axioms=False)
    f = c.fiber
    exponent = max(ext.invariants, default=1)
    zero_b = c.base.zero()
    for ell in range(1, exponent + 1):
        multiples = {ext.mul(ell, u) for u in ext.elements}
        in_f = {u[0] for u in multiples if u[1] == zero_b}
        ell_f = {f.mul(ell, x) for x in f.elements()}
        if in_f != ell_f:
            return False
    return True


def ext_group(b, f):
    """Ext(B, F) for finitely generated B and F, as a FinAbGroup.

    Ext(Z/n, F) = F/nF and Ext(Z, F) = 0, summed over the cyclic factors of B.
    """
    out = []
    for n in b.orders:
        if n == 1:
            continue
        k = f.ncoords
        rel = [[f.moduli[i] if i == j else 0 for j in range(k)] for i in range(k)]
        rel += [[n if i == j else 0 for j in range(k)] for i in range(k)]
        out += [d for d in snf(rel).diag if d != 1] if k else []
    return FinAbGroup(tuple(out)).canonical()


# -- invariants of Ext(G, Z) for type-presented G ---------------------------


@dataclass(frozen=True)
class DivisibleType:
    """Q^(continuum) (when present) plus Z(p^inf)^{n_p} at every prime p."""

    continuum_free: bool
    primary_default: int
    primary_exceptions: tuple = ()

    def n_p(self, p):
        return dict(self.primary_exceptions).get(p, self.primary_default)


def strip_free(g):
    kept = tuple(t for t in g.types if not baer_equivalent(t, ZERO))
    if len(kept) != g.rank:
        warnings.warn("free summands removed; they do not contribute to Ext(G, Z)", FreeSummandWarning, stacklevel=3)
    return TypePresentation(kept)


def ext_invariant(g):
    core = strip_free(g)
    default = sum(1 for t in core.types if t.default != INF)
    exc = {}
    for p in core.primes:
        n = p_corank(core, p)
        if n != default:
            exc[p] = n
    return DivisibleType(core.rank > 0, default, tuple(sorted(exc.items())))


def ext_iso_discrete(g, h):
    return ext_invariant(g) == ext_invariant(h)


def ext_iso_definable(g, h):
    """Permutation matching the Baer classes of g and h (free parts removed)."""
    return group_isomorphic(strip_free(g), strip_free(h))


def ext_iso_definable_matrix(g, h):
    return isomorphism_matrix(strip_free(g), strip_free(h))
