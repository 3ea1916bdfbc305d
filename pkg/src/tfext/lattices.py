"""Full-rank finitely generated subgroups of Q^d.

A :class:`Lattice` is stored canonically as ``(1/den) * rowspan(hmat)`` with
``hmat`` a square nonsingular integer matrix in row Hermite normal form and
``den`` minimal.  Two lattices are equal as groups iff their fields agree,
so ``==`` and ``hash`` are structural.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd, prod

from .errors import DimensionMismatch, NotFullRank, NotSublattice
from .rational import (
    as_fraction,
    common_denominator,
    hnf,
    rat_inverse,
    snf,
    transpose,
)


@dataclass(frozen=True)
class Lattice:
    dim: int
    den: int
    hmat: tuple

    @property
    def basis(self):
        """Rational basis rows."""
        return tuple(tuple(Fraction(x, self.den) for x in row) for row in self.hmat)

    @property
    def covolume(self):
        """|det(basis)|."""
        return Fraction(prod(self.hmat[i][i] for i in range(self.dim)), self.den**self.dim)

    def __contains__(self, v):
        return contains(self, v)

    def __le__(self, other):
        return leq(self, other)

    def __repr__(self):
        return f"Lattice(dim={self.dim}, den={self.den}, hmat={self.hmat})"


def standard(d):
    """Z^d."""
    return Lattice(d, 1, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


def scaled(d, q):
    """q * Z^d for a nonzero rational q."""
    q = as_fraction(q)
    return lattice_from_rows(d, [[q if i == j else 0 for j in range(d)] for i in range(d)])


def lattice_from_rows(d, rows):
    """Canonical lattice generated by the given rational vectors."""
    rows = [tuple(as_fraction(x) for x in r) for r in rows]
    for r in rows:
        if len(r) != d:
            raise DimensionMismatch(f"vector of length {len(r)} in dimension {d}")
    if d == 0:
        return Lattice(0, 1, ())
    den = common_denominator(x for r in rows for x in r)
    ints = [[int(x * den) for x in r] for r in rows]
    h, _ = (hnf(ints) if ints else ((), ()))
    h = [row for row in h if any(row)]
    if len(h) < d:
        raise NotFullRank(f"rows span a rank {len(h)} subgroup of Q^{d}")
    g = den
    for row in h:
        for x in row:
            g = gcd(g, x)
    return Lattice(d, den // g, tuple(tuple(x // g for x in row) for row in h))


def _check_dims(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim}")


def coordinates(a, v):
    """Rational coordinates of v in the HNF basis of a."""
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {a.dim}")
    w = [as_fraction(x) * a.den for x in v]
    h = a.hmat
    y = []
    for j in range(a.dim):
        s = w[j] - sum(y[i] * h[i][j] for i in range(j))
        y.append(s / h[j][j])
    return tuple(y)


def contains(a, v):
    return all(c.denominator == 1 for c in coordinates(a, v))


def leq(a, b):
    """a is a subgroup of b."""
    _check_dims(a, b)
    return all(contains(b, row) for row in a.basis)


def lattice_sum(a, b):
    _check_dims(a, b)
    return lattice_from_rows(a.dim, list(a.basis) + list(b.basis))


def annihilator(a):
    """{x : <x, y> in Z for all y in a}, with basis (M^-1)^T."""
    if a.dim == 0:
        return a
    inv = rat_inverse(a.basis)
    return lattice_from_rows(a.dim, transpose(inv))


def intersect(a, b):
    _check_dims(a, b)
    return annihilator(lattice_sum(annihilator(a), annihilator(b)))


def index(a, b):
    """[a : b] for b a sublattice of a."""
    _check_dims(a, b)
    if not leq(b, a):
        raise NotSublattice("second lattice is not contained in the first")
    q = b.covolume / a.covolume
    assert q.denominator == 1
    return q.numerator


def quotient_invariants(a, b):
    """Elementary divisors d_i > 1 with a/b = sum of Z/d_i."""
    _check_dims(a, b)
    if not leq(b, a):
        raise NotSublattice("second lattice is not contained in the first")
    change = [coordinates(a, row) for row in b.basis]
    ints = [[int(x) for x in row] for row in change]
    return tuple(d for d in snf(ints).diag if d != 1)


def reduce_mod(a, v):
    """Representative of v + a in the half-open HNF fundamental domain."""
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {a.dim}")
    w = [as_fraction(x) * a.den for x in v]
    for j, row in enumerate(a.hmat):
        k = floor(w[j] / row[j])
        if k:
            w = [x - k * y for x, y in zip(w, row)]
    return tuple(x / a.den for x in w)


def box_points(a, v, bound):
    """All points of v + a with every coordinate in [-bound, bound].

    Enumerated by back-substitution along the triangular HNF basis, so the
    cost is proportional to the output plus the number of partial prefixes.
    """
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {a.dim}")
    base = [as_fraction(x) * a.den for x in v]
    lo, hi = -bound * a.den, bound * a.den
    h = a.hmat
    out = []

    def rec(j, cur):
        if j == a.dim:
            out.append(tuple(x / a.den for x in cur))
            return
        p = h[j][j]
        kmin = -floor((cur[j] - lo) / p)
        kmax = floor((hi - cur[j]) / p)
        for k in range(kmin, kmax + 1):
            rec(j + 1, [x + k * y for x, y in zip(cur, h[j])] if k else cur)

    rec(0, base)
    return out


def integer_image_span(m):
    """Canonical HNF rows for the column span of an integer matrix m.

    Used for subgroups of Z^r that need not have full rank.
    """
    cols = transpose(m) if m and m[0] else ()
    if not cols:
        return ()
    h, _ = hnf([list(c) for c in cols])
    return tuple(row for row in h if any(row))
