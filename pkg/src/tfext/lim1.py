"""Truncated cochain complex computing lim^1 of a lattice filtration.

For a filtration ``L_0 >= L_1 >= ...`` with inclusion bonding maps, a
0-cochain is a sequence ``b_m in L_m`` and a 1-cocycle is determined by its
consecutive entries ``a_{m,m+1} in L_m``; every other entry is a telescoping
sum.  At any finite depth every cocycle is a coboundary, so only the
boundary map to the completion (``sigma``) carries information.
"""

from dataclasses import dataclass

from .completions import ProfiniteElement
from .errors import DimensionMismatch, Incompatible, IndexOutOfRange, NotMember
from .lattices import contains, reduce_mod
from .rational import as_fraction
from .towers import Filtration


def _vec(v):
    return tuple(as_fraction(x) for x in v)


def _check_members(tower, vectors, what):
    for m, v in enumerate(vectors):
        if len(v) != tower.dim:
            raise DimensionMismatch(f"{what} {m} has length {len(v)}")
        if not contains(tower.levels[m], v):
            raise NotMember(f"{what} {m} is not in level {m}")


@dataclass(frozen=True)
class CochainVector:
    tower: Filtration
    entries: tuple

    def __post_init__(self):
        entries = tuple(_vec(v) for v in self.entries)
        if len(entries) != self.tower.depth:
            raise DimensionMismatch(f"{len(entries)} entries for depth {self.tower.depth}")
        _check_members(self.tower, entries, "entry")
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class TruncatedCocycle:
    tower: Filtration
    consecutive: tuple

    def __post_init__(self):
        cons = tuple(_vec(v) for v in self.consecutive)
        if len(cons) != self.tower.depth - 1:
            raise DimensionMismatch(
                f"{len(cons)} consecutive entries for depth {self.tower.depth}"
            )
        _check_members(self.tower, cons, "consecutive entry")
        object.__setattr__(self, "consecutive", cons)

    @property
    def depth(self):
        return self.tower.depth

    def __add__(self, other):
        return cocycle_add(self, other)


def zero_cocycle(tower):
    return TruncatedCocycle(tower, ((0,) * tower.dim,) * (tower.depth - 1))


def cocycle_add(a, b):
    if a.tower != b.tower:
        raise Incompatible("cocycles over different towers")
    return TruncatedCocycle(
        a.tower, tuple(tuple(x + y for x, y in zip(u, v)) for u, v in zip(a.consecutive, b.consecutive))
    )


def cocycle_neg(a):
    return TruncatedCocycle(a.tower, tuple(tuple(-x for x in u) for u in a.consecutive))


def delta1(b):
    e = b.entries
    return TruncatedCocycle(
        b.tower, tuple(tuple(x - y for x, y in zip(e[m], e[m + 1])) for m in range(len(e) - 1))
    )


def expand_entries(a, m0, m1):
    """The entry a_{m0,m1}, rebuilt from consecutive entries."""
    if not 0 <= m0 <= m1 < a.depth:
        raise IndexOutOfRange(f"need 0 <= m0 <= m1 < {a.depth}, got ({m0}, {m1})")
    total = [as_fraction(0)] * a.tower.dim
    for k in range(m0, m1):
        total = [x + y for x, y in zip(total, a.consecutive[k])]
    return tuple(total)


def full_entries(a):
    """Every entry a_{m0,m1} with m0 <= m1 < depth, keyed by index pair."""
    out = {}
    for m0 in range(a.depth):
        acc = [as_fraction(0)] * a.tower.dim
        out[(m0, m0)] = tuple(acc)
        for m1 in range(m0 + 1, a.depth):
            acc = [x + y for x, y in zip(acc, a.consecutive[m1 - 1])]
            out[(m0, m1)] = tuple(acc)
    return out


def validate_full(tower, entries):
    """Check a full table of 1-cochain entries is a cocycle.

    Requires the zero diagonal, membership of ``x_{m0,m1}`` in level m0, and
    ``x_{m0,m1} - x_{m0,m2} + x_{m1,m2} = 0`` for all ``m0 <= m1 <= m2``.
    """
    n = tower.depth
    try:
        x = {k: _vec(v) for k, v in entries.items()}
        for m0 in range(n):
            if any(x[(m0, m0)]):
                return False
            for m1 in range(m0, n):
                v = x[(m0, m1)]
                if len(v) != tower.dim or not contains(tower.levels[m0], v):
                    return False
                for m2 in range(m1, n):
                    w = x[(m0, m2)]
                    u = x[(m1, m2)]
                    if any(p - q + r for p, q, r in zip(v, w, u)):
                        return False
    except KeyError:
        return False
    return True


def coboundary_solve(a):
    """b with delta1(b) = a, normalized by b_{M-1} = 0."""
    last = a.depth - 1
    return CochainVector(a.tower, tuple(expand_entries(a, k, last) for k in range(a.depth)))


def sigma(a):
    """Image of a cocycle in the completion: the limit of ``a_{0,k}``.

    The tail beyond the last stored entry lies in the deepest level, so the
    partial sum ``a_{0,M-1}`` already determines every stored level.
    """
    s = expand_entries(a, 0, a.depth - 1)
    f = a.tower
    return ProfiniteElement(f, tuple(reduce_mod(lv, s) for lv in f.levels))


def sigma_section(x):
    """A cocycle mapped to x by sigma: consecutive differences of x's chain."""
    c = x.chain
    return TruncatedCocycle(
        x.filtration, tuple(tuple(q - p for p, q in zip(c[m], c[m + 1])) for m in range(len(c) - 1))
    )


__all__ = [
    "CochainVector",
    "TruncatedCocycle",
    "coboundary_solve",
    "cocycle_add",
    "cocycle_neg",
    "delta1",
    "expand_entries",
    "full_entries",
    "sigma",
    "sigma_section",
    "validate_full",
    "zero_cocycle",
]
