"""Completely decomposable torsion-free groups Z^d <= G <= Q^d.

A rank-1 summand is described by a characteristic ``t``: a function from
primes to ``{0, 1, 2, ...} | {INF}`` that equals a fixed default at all but
finitely many primes.  It denotes ``{a/b : v_p(b) <= t(p) for all p}``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import inf as INF
from math import prod

from sympy import factorint, isprime

from .errors import DimensionMismatch, MalformedInput, NotPrime
from .rational import as_fraction, shape, transpose


def _check_prime(p):
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise NotPrime(f"{p!r} is not a prime")


def _check_value(v):
    if v == INF:
        return INF
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise MalformedInput(f"type value must be a nonnegative integer or INF, got {v!r}")
    return v


@dataclass(frozen=True)
class BaerType:
    default: object = 0
    exceptions: tuple = ()

    def __post_init__(self):
        d = _check_value(self.default)
        exc = dict(self.exceptions)
        for p, v in exc.items():
            _check_prime(p)
            exc[p] = _check_value(v)
        norm = tuple(sorted((p, v) for p, v in exc.items() if v != d))
        object.__setattr__(self, "default", d)
        object.__setattr__(self, "exceptions", norm)

    def __call__(self, p):
        return type_value(self, p)

    @property
    def primes(self):
        return tuple(p for p, _ in self.exceptions)


def baer_type(default=0, exceptions=None):
    return BaerType(default, tuple((exceptions or {}).items()))


ZERO = BaerType(0)
FULL = BaerType(INF)


def localization(*primes):
    """Z[1/p1, 1/p2, ...]."""
    return BaerType(0, tuple((p, INF) for p in primes))


@dataclass(frozen=True)
class TypePresentation:
    types: tuple

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        for t in self.types:
            if not isinstance(t, BaerType):
                raise MalformedInput(f"expected BaerType, got {t!r}")

    @property
    def rank(self):
        return len(self.types)

    @property
    def primes(self):
        """Every prime at which some component leaves its default."""
        return tuple(sorted({p for t in self.types for p in t.primes}))


def presentation(*types):
    return TypePresentation(tuple(types))


def type_value(t, p):
    _check_prime(p)
    for q, v in t.exceptions:
        if q == p:
            return v
    return t.default


def _inf_set(t):
    """Primes where t differs from its default in INF-ness."""
    return frozenset(p for p, v in t.exceptions if (v == INF) != (t.default == INF))


def equivalence_key(t):
    """Hashable key with key(t) == key(u) iff t and u are Baer equivalent."""
    return (t.default, _inf_set(t))


def baer_equivalent(t, u):
    return equivalence_key(t) == equivalence_key(u)


def has_free_summand(g):
    return any(baer_equivalent(t, ZERO) for t in g.types)


def p_corank(g, p):
    """Dimension of G/pG over F_p."""
    _check_prime(p)
    return sum(1 for t in g.types if type_value(t, p) != INF)


def _valuation(q, p):
    q = as_fraction(q)
    v, n, d = 0, q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _scalar_ok(q, s, t):
    """Multiplication by q maps the group of type s into the group of type t."""
    q = as_fraction(q)
    if q == 0:
        return True
    primes = set(s.primes) | set(t.primes)
    primes |= set(factorint(abs(q.numerator))) | set(factorint(q.denominator))
    for p in primes:
        tv, sv = type_value(t, p), type_value(s, p)
        if tv == INF:
            continue
        if sv == INF or _valuation(q, p) < sv - tv:
            return False
    # all remaining primes see the defaults and valuation 0
    if t.default == INF:
        return True
    return s.default != INF and s.default <= t.default


def is_homomorphism(m, source, target):
    """The matrix m (target.rank x source.rank) maps source into target.

    Column i is the image of the i-th coordinate line, so entry ``m[j][i]``
    must carry the i-th summand of the source into the j-th of the target.
    """
    r, c = shape(m)
    if (r, c) != (target.rank, source.rank) and not (r == 0 and target.rank == 0):
        raise DimensionMismatch(
            f"matrix is {r}x{c}, expected {target.rank}x{source.rank}"
        )
    return all(
        _scalar_ok(m[j][i], source.types[i], target.types[j])
        for j in range(target.rank)
        for i in range(source.rank)
    )


def is_t_homomorphism(m, source, target):
    """m and its transpose are both homomorphisms (in opposite directions)."""
    return is_homomorphism(m, source, target) and is_homomorphism(
        transpose(m), target, source
    )


def group_isomorphic(g, h):
    """Permutation pi with t_i equivalent to u_pi(i), or None.

    Baer equivalence is an equivalence relation, so a matching exists iff
    both sides have the same multiset of classes, and a greedy pass finds one.
    """
    if g.rank != h.rank:
        return None
    pool = {}
    for j, u in enumerate(h.types):
        pool.setdefault(equivalence_key(u), []).append(j)
    perm = []
    for t in g.types:
        js = pool.get(equivalence_key(t))
        if not js:
            return None
        perm.append(js.pop(0))
    return tuple(perm)


def scaling_factor(t, u):
    """Rational q with q * G_t = G_u, for Baer equivalent t and u."""
    if not baer_equivalent(t, u):
        raise ValueError("types are not Baer equivalent")
    primes = set(t.primes) | set(u.primes)
    return prod(
        (Fraction(p) ** (type_value(t, p) - type_value(u, p))
         for p in primes if type_value(t, p) != INF),
        start=Fraction(1),
    )


def isomorphism_matrix(g, h):
    """Matrix of an isomorphism g -> h, or None when none exists."""
    perm = group_isomorphic(g, h)
    if perm is None:
        return None
    d = g.rank
    m = [[Fraction(0)] * d for _ in range(d)]
    for i, j in enumerate(perm):
        m[j][i] = scaling_factor(g.types[i], h.types[j])
    return tuple(tuple(row) for row in m)


def format_value(v):
    return "inf" if v == INF else v
