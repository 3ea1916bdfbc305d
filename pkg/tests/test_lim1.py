import pytest

from tfext.completions import add, embed, from_chain, truncate, zero
from tfext.errors import DimensionMismatch, IndexOutOfRange, NotMember
from tfext.lattices import contains
from tfext.lim1 import (
    CochainVector,
    TruncatedCocycle,
    coboundary_solve,
    cocycle_add,
    cocycle_neg,
    delta1,
    expand_entries,
    full_entries,
    sigma,
    sigma_section,
    validate_full,
    zero_cocycle,
)
from tfext.towers import dyadic_filtration, scalar_filtration


def random_filtration(rng, depth, dim=None):
    d = dim or rng.randint(1, 2)
    factors = [1]
    for _ in range(depth - 1):
        factors.append(factors[-1] * rng.choice([1, 2, 3]))
    return scalar_filtration(d, factors)


def random_cochain(rng, f):
    entries = []
    for lv in f.levels:
        coeffs = [rng.randint(-5, 5) for _ in range(f.dim)]
        entries.append([sum(c * b[j] for c, b in zip(coeffs, lv.basis)) for j in range(f.dim)])
    return CochainVector(f, entries)


def random_cocycle(rng, f):
    b = random_cochain(rng, f)
    return TruncatedCocycle(f, b.entries[:-1])


def random_element(rng, f):
    return embed(f, [rng.randint(-(10**6), 10**6) for _ in range(f.dim)])


def ints(x):
    return [int(v[0]) for v in x.chain]


def test_membership_checked():
    f = dyadic_filtration(3)
    with pytest.raises(NotMember):
        CochainVector(f, [[0], [1], [0]])
    with pytest.raises(DimensionMismatch):
        TruncatedCocycle(f, [[0]])


def test_delta1_examples():
    f = dyadic_filtration(5)
    assert delta1(CochainVector(f, [[0]] * 5)) == zero_cocycle(f)
    a = delta1(CochainVector(f, [[2**m] for m in range(5)]))
    assert [v[0] for v in a.consecutive] == [-(2**m) for m in range(4)]


def test_expand_entries():
    f = dyadic_filtration(5)
    b = CochainVector(f, [[2**m * 3] for m in range(5)])
    a = delta1(b)
    for m in range(5):
        assert expand_entries(a, m, m) == (0,)
    for m0 in range(5):
        for m1 in range(m0, 5):
            assert expand_entries(a, m0, m1) == (b.entries[m0][0] - b.entries[m1][0],)
    with pytest.raises(IndexOutOfRange):
        expand_entries(a, 3, 2)
    with pytest.raises(IndexOutOfRange):
        expand_entries(a, 0, 5)


def test_validate_full_detects_corruption():
    f = dyadic_filtration(5)
    a = TruncatedCocycle(f, [[1], [2], [4], [8]])
    entries = full_entries(a)
    assert validate_full(f, entries)
    bad = dict(entries)
    bad[(1, 3)] = (bad[(1, 3)][0] + 2,)
    assert not validate_full(f, bad)
    diag = dict(entries)
    diag[(2, 2)] = (4,)
    assert not validate_full(f, diag)
    missing = dict(entries)
    del missing[(0, 4)]
    assert not validate_full(f, missing)


def test_delta2_of_delta1_vanishes(rng):
    for _ in range(500):
        f = random_filtration(rng, rng.randint(2, 6))
        assert validate_full(f, full_entries(delta1(random_cochain(rng, f))))


def test_coboundary_solve_examples():
    f = dyadic_filtration(6)
    assert coboundary_solve(zero_cocycle(f)) == CochainVector(f, [[0]] * 6)
    # vanishing above n0 = 2: b_k = a_{k,2}, independent of the truncation
    cons = [[1], [2]] + [[0]] * 3
    b = coboundary_solve(TruncatedCocycle(f, cons))
    a2 = TruncatedCocycle(f, cons)
    assert [v[0] for v in b.entries] == [expand_entries(a2, k, 2)[0] if k <= 2 else 0 for k in range(6)]
    g = dyadic_filtration(9)
    deeper = coboundary_solve(TruncatedCocycle(g, cons + [[0]] * 3))
    assert deeper.entries[:6] == b.entries


def test_coboundary_solve_random(rng):
    for _ in range(300):
        f = random_filtration(rng, rng.randint(2, 7))
        a = random_cocycle(rng, f)
        b = coboundary_solve(a)
        assert delta1(b) == a
        assert b.entries[-1] == (0,) * f.dim


def test_sigma_examples():
    f = dyadic_filtration(6)
    a = TruncatedCocycle(f, [[2**m] for m in range(5)])
    assert ints(sigma(a)) == [0, 1, 3, 7, 15, 31]
    assert sigma(a) == embed(f, [-1])
    assert sigma(zero_cocycle(f)) == zero(f)


def test_sigma_additive(rng):
    for _ in range(200):
        f = random_filtration(rng, rng.randint(2, 6))
        a, b = random_cocycle(rng, f), random_cocycle(rng, f)
        assert sigma(cocycle_add(a, b)) == add(sigma(a), sigma(b))
        assert sigma(cocycle_add(a, cocycle_neg(a))) == zero(f)


def test_sigma_of_coboundary(rng):
    for _ in range(200):
        f = random_filtration(rng, rng.randint(2, 6))
        b = random_cochain(rng, f)
        depth = f.depth - 1
        got = truncate(sigma(delta1(b)), depth)
        assert got == truncate(embed(f, b.entries[0]), depth)


def test_sigma_section_examples():
    f = dyadic_filtration(6)
    assert sigma_section(zero(f)) == zero_cocycle(f)
    for v in (13, -77, 1000):
        a = sigma_section(embed(f, [v]))
        b0 = coboundary_solve(a).entries[0]
        assert contains(f.levels[-1], (b0[0] - v,))
    minus_one = sigma_section(embed(f, [-1]))
    reference = TruncatedCocycle(f, [[2**m] for m in range(5)])
    diff = cocycle_add(minus_one, cocycle_neg(reference))
    assert sigma(diff) == zero(f)


def test_sigma_round_trip(rng):
    for _ in range(200):
        f = random_filtration(rng, rng.randint(2, 7))
        x = random_element(rng, f)
        assert sigma(sigma_section(x)) == x
        y = from_chain(f, [v for v in x.chain])
        assert sigma(sigma_section(y)) == y
