"""Truncated filtrations and cofiltrations of Z^d and maps between them.

A filtration is a decreasing chain ``Z^d = L_0 >= L_1 >= ...`` of full-rank
sublattices, a cofiltration an increasing chain ``Z^d = L_0 <= L_1 <= ...``
of full-rank lattices in Q^d.  Only finitely many levels are ever stored.

Tower maps between lattice towers are restrictions of a single Q-linear map
(all bonding maps are inclusions, hence injective), so each one is stored as
an index sequence plus one matrix per level and acts on column vectors.
"""

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from sympy import prime

from .errors import DimensionMismatch, Incompatible, InvalidTowerMap
from .groups import has_free_summand, type_value
from .lattices import (
    Lattice,
    annihilator,
    coordinates,
    integer_image_span,
    lattice_from_rows,
    leq,
    scaled,
    standard,
)
from .rational import as_fraction, identity, mat_mul, mat_vec, shape, transpose


class FreeSummandWarning(UserWarning):
    pass


def _check_chain(dim, levels, increasing):
    if not levels:
        raise DimensionMismatch("a tower needs at least one level")
    for lv in levels:
        if not isinstance(lv, Lattice) or lv.dim != dim:
            raise DimensionMismatch(f"every level must be a lattice in dimension {dim}")
    if levels[0] != standard(dim):
        raise InvalidTowerMap("level 0 must be Z^d")
    for a, b in zip(levels, levels[1:]):
        if not (leq(a, b) if increasing else leq(b, a)):
            word = "increase" if increasing else "decrease"
            raise InvalidTowerMap(f"levels must {word}")


@dataclass(frozen=True)
class Filtration:
    """Decreasing chain of finite-index sublattices of Z^d.

    ``trivial_intersection`` is True when the chain is known to intersect
    to zero (dual of a cofiltration of a group without free summands) and
    None when that cannot be certified from the stored levels.
    """

    dim: int
    levels: tuple
    trivial_intersection: object = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        _check_chain(self.dim, self.levels, increasing=False)

    kind = "filtration"

    @property
    def depth(self):
        return len(self.levels)

    def truncate(self, depth):
        return Filtration(self.dim, self.levels[:depth], self.trivial_intersection)


@dataclass(frozen=True)
class Cofiltration:
    """Increasing chain of full-rank lattices in Q^d starting at Z^d.

    ``no_free_summand`` records whether the union is known to have no free
    summand (True), known to have one (False), or unknown (None).
    """

    dim: int
    levels: tuple
    no_free_summand: object = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        _check_chain(self.dim, self.levels, increasing=True)

    kind = "cofiltration"

    @property
    def depth(self):
        return len(self.levels)

    def truncate(self, depth):
        return Cofiltration(self.dim, self.levels[:depth], self.no_free_summand)


def scalar_filtration(dim, factors):
    """Filtration with levels ``q * Z^d`` for q in factors (factors[0] = 1)."""
    return Filtration(dim, tuple(scaled(dim, q) for q in factors))


def scalar_cofiltration(dim, factors):
    return Cofiltration(dim, tuple(scaled(dim, as_fraction(1) / q) for q in factors))


def dyadic_filtration(depth, dim=1):
    """Z^d >= 2Z^d >= 4Z^d >= ..., the filtration whose completion is Z_2^d."""
    return Filtration(dim, tuple(scaled(dim, 2**m) for m in range(depth)), True)


def p_power_filtration(p, depth, dim=1):
    return Filtration(dim, tuple(scaled(dim, p**m) for m in range(depth)), True)


def level_denominator(t, m):
    """Denominator of the generator added to a summand of type t at level m."""
    return prod(p ** min(type_value(t, p), m) for p in (prime(k) for k in range(1, m + 1)))


def canonical_cofiltration(g, depth):
    """Cofiltration whose union is the type-presented group g.

    Level m is generated by Z^d and e_i / q_i(m), where q_i(m) is the product
    over the first m primes p of p^min(t_i(p), m).
    """
    free = has_free_summand(g)
    if free:
        warnings.warn("group has a free summand", FreeSummandWarning, stacklevel=2)
    d = g.rank
    levels = []
    for m in range(depth):
        rows = [
            [Fraction(1, level_denominator(t, m)) if j == i else 0 for j in range(d)]
            for i, t in enumerate(g.types)
        ]
        levels.append(lattice_from_rows(d, rows))
    return Cofiltration(d, tuple(levels), not free)


def dualize(tower):
    """Levelwise annihilator; swaps filtrations and cofiltrations."""
    levels = tuple(annihilator(lv) for lv in tower.levels)
    if isinstance(tower, Cofiltration):
        return Filtration(tower.dim, levels, tower.no_free_summand)
    if isinstance(tower, Filtration):
        return Cofiltration(tower.dim, levels, tower.trivial_intersection)
    raise TypeError(f"cannot dualize {type(tower).__name__}")


def dual_filtration(g, depth):
    """The filtration of Z^d attached to a type-presented group."""
    return dualize(canonical_cofiltration(g, depth))


# -- tower maps ----------------------------------------------------------------


def _matrix(m):
    return tuple(tuple(as_fraction(x) for x in row) for row in m)


@dataclass(frozen=True)
class TowerMap:
    """Morphism between two filtrations or between two cofiltrations.

    Filtrations: ``maps[k]`` carries ``source.levels[indices[k]]`` into
    ``target.levels[k]``.  Cofiltrations: ``maps[k]`` carries
    ``source.levels[k]`` into ``target.levels[indices[k]]``.
    """

    source: object
    target: object
    indices: tuple
    maps: tuple = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "maps", tuple(_matrix(m) for m in self.maps))

    @property
    def kind(self):
        return self.source.kind

    @property
    def length(self):
        return len(self.indices)


def tower_map(source, target, indices, matrix):
    """Tower map given by one matrix at every listed index."""
    return TowerMap(source, target, tuple(indices), tuple(matrix for _ in indices))


def identity_map(tower, length=None):
    n = tower.depth if length is None else length
    return tower_map(tower, tower, range(n), identity(tower.dim))


def tower_map_problems(t):
    """Reasons t fails to be a valid tower map (empty when valid)."""
    out = []
    s, u = t.source, t.target
    if s.kind != u.kind:
        return ["source and target must be of the same kind"]
    if len(t.maps) != len(t.indices):
        return ["indices and maps differ in length"]
    if any(a > b for a, b in zip(t.indices, t.indices[1:])):
        out.append("indices must be nondecreasing")
    if any(shape(m) != (u.dim, s.dim) for m in t.maps):
        return out + [f"every map must be a {u.dim}x{s.dim} matrix"]
    if any(m != t.maps[0] for m in t.maps):
        out.append("maps must agree (bonding maps are inclusions)")
    for k, (i, m) in enumerate(zip(t.indices, t.maps)):
        if t.kind == "filtration":
            if i >= s.depth or k >= u.depth:
                out.append(f"level {k}: index beyond tower depth")
                continue
            dom, cod = s.levels[i], u.levels[k]
        else:
            if k >= s.depth or i >= u.depth:
                out.append(f"level {k}: index beyond tower depth")
                continue
            dom, cod = s.levels[k], u.levels[i]
        if not all(mat_vec(m, v) in cod for v in dom.basis):
            out.append(f"level {k}: image not contained in target level")
    return out


def is_valid(t):
    return not tower_map_problems(t)


def check_tower_map(t):
    problems = tower_map_problems(t)
    if problems:
        raise InvalidTowerMap("; ".join(problems))
    return t


def compose(t, u):
    """The tower map "t, then u"."""
    if t.kind != u.kind:
        raise Incompatible("cannot compose a filtration map with a cofiltration map")
    if t.target != u.source:
        raise Incompatible("target of the first map is not the source of the second")
    idx, maps = [], []
    if t.kind == "filtration":
        for j, g in zip(u.indices, u.maps):
            if j >= t.length:
                break
            idx.append(t.indices[j])
            maps.append(mat_mul(g, t.maps[j]))
    else:
        for i, f in zip(t.indices, t.maps):
            if i >= u.length:
                break
            idx.append(u.indices[i])
            maps.append(mat_mul(u.maps[i], f))
    return TowerMap(t.source, u.target, tuple(idx), tuple(maps))


def congruent(t, u):
    """Congruence of tower maps between the same towers.

    Both maps are restrictions of Q-linear maps to full-rank lattices, so
    they are congruent iff the matrices agree wherever both are defined.
    """
    if t.kind != u.kind or t.source != u.source or t.target != u.target:
        raise Incompatible("tower maps have different source or target")
    n = min(t.length, u.length)
    return all(t.maps[k] == u.maps[k] for k in range(n))


def adj(t):
    """Transpose a tower map into a map between the dual towers."""
    check_tower_map(t)
    return TowerMap(
        dualize(t.target),
        dualize(t.source),
        t.indices,
        tuple(transpose(m) for m in t.maps),
    )


# -- Mittag-Leffler ------------------------------------------------------------


STABILIZED = "STABILIZED_AT"
NOT_STABLE = "NOT_STABLE_IN_WINDOW"


@dataclass(frozen=True)
class MLVerdict:
    level: int
    verdict: str
    stable_from: object = None


def ml_check(bondings, window, min_confirm=2):
    """Window verdicts on the Mittag-Leffler condition.

    ``bondings[k]`` is the integer matrix of the map Z^{r_{k+1}} -> Z^{r_k}.
    For each level m < window the image chain of the composite bonding maps
    is followed up to level ``window - 1 + min_confirm``, and stabilization
    is claimed only when the last ``min_confirm`` steps are all constant.
    """
    last = window - 1 + min_confirm
    if len(bondings) < last:
        raise DimensionMismatch(
            f"window {window} needs {last + 1} levels, tower has {len(bondings) + 1}"
        )
    for k in range(len(bondings) - 1):
        if shape(bondings[k])[1] != shape(bondings[k + 1])[0]:
            raise DimensionMismatch(f"bonding maps {k} and {k + 1} do not compose")
    out = []
    for m in range(window):
        rank = shape(bondings[m])[0]
        prod_m = identity(rank)
        chain = [integer_image_span(prod_m)]
        for k in range(m, last):
            prod_m = mat_mul(prod_m, bondings[k])
            chain.append(integer_image_span(prod_m))
        k0 = len(chain) - 1
        while k0 > 0 and chain[k0 - 1] == chain[-1]:
            k0 -= 1
        if len(chain) - 1 - k0 >= min_confirm:
            out.append(MLVerdict(m, STABILIZED, m + k0))
        else:
            out.append(MLVerdict(m, NOT_STABLE))
    return out


def inclusion_bondings(f):
    """Bonding matrices of a lattice filtration in level-basis coordinates.

    Column j of the k-th matrix holds the coordinates of the j-th basis
    vector of level k+1 in the basis of level k.
    """
    out = []
    for a, b in zip(f.levels, f.levels[1:]):
        cols = [coordinates(a, v) for v in b.basis]
        out.append(tuple(tuple(int(cols[j][i]) for j in range(len(cols))) for i in range(a.dim)))
    return out


def ml_check_filtration(f, window, min_confirm=2):
    return ml_check(inclusion_bondings(f), window, min_confirm)


__all__ = [
    "Cofiltration",
    "Filtration",
    "FreeSummandWarning",
    "MLVerdict",
    "NOT_STABLE",
    "STABILIZED",
    "TowerMap",
    "adj",
    "canonical_cofiltration",
    "check_tower_map",
    "compose",
    "congruent",
    "dual_filtration",
    "dualize",
    "dyadic_filtration",
    "identity_map",
    "inclusion_bondings",
    "is_valid",
    "level_denominator",
    "ml_check",
    "ml_check_filtration",
    "p_power_filtration",
    "scalar_cofiltration",
    "scalar_filtration",
    "tower_map",
    "tower_map_problems",
]
