import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tfext.groups import INF, BaerType, TypePresentation
from tfext.lattices import lattice_from_rows
from tfext.rational import det

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


@st.composite
def int_matrices(draw, max_dim=6, lo=-9, hi=9):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]


@st.composite
def full_rank_lattices(draw, max_dim=4, max_den=30, dim=None):
    """Row span of a random triangular rational matrix (every lattice has one)."""
    d = dim if dim is not None else draw(st.integers(1, max_dim))
    dens = st.integers(1, max_den)
    rows = []
    for i in range(d):
        row = [Fraction(0)] * d
        sign = draw(st.sampled_from([1, -1]))
        row[i] = Fraction(sign * draw(st.integers(1, 6)), draw(dens))
        for j in range(i + 1, d):
            row[j] = Fraction(draw(st.integers(-6, 6)), draw(dens))
        rows.append(row)
    return lattice_from_rows(d, rows)


@st.composite
def baer_types(draw, primes=SMALL_PRIMES, allow_finite_default=True):
    defaults = [0, INF] + ([1, 2] if allow_finite_default else [])
    default = draw(st.sampled_from(defaults))
    values = st.one_of(st.integers(0, 4), st.just(INF))
    exc = draw(st.dictionaries(st.sampled_from(primes), values, max_size=3))
    return BaerType(default, tuple(exc.items()))


@st.composite
def presentations(draw, max_rank=3, **kw):
    r = draw(st.integers(1, max_rank))
    return TypePresentation(tuple(draw(baer_types(**kw)) for _ in range(r)))


@pytest.fixture
def rng():
    return random.Random(20261014)


def random_lattice(rng, d, max_den=30, lo=-6, hi=6):
    while True:
        rows = [[Fraction(rng.randint(lo, hi), rng.randint(1, max_den)) for _ in range(d)] for _ in range(d)]
        if det(rows) != 0:
            return lattice_from_rows(d, rows)


def random_int_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
