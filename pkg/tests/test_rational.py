from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from conftest import int_matrices, random_int_matrix
from tfext.errors import DimensionMismatch, MalformedInput, SingularMatrix
from tfext.rational import (
    det,
    format_rational,
    hnf,
    identity,
    is_unimodular,
    mat_mul,
    mat_vec,
    parse_rational,
    rat_inverse,
    snf,
    solve_integer_linear,
    transpose,
)

F = Fraction


def same_row_span(a, b):
    """Every row of a is an integer combination of the rows of b and back."""
    def spans(x, y):
        ys = [r for r in y if any(r)]
        if not ys:
            return not any(any(r) for r in x)
        cols = transpose(ys)
        return all(solve_integer_linear(cols, list(r)) is not None for r in x)

    return spans(a, b) and spans(b, a)


def is_row_hnf(h):
    last = -1
    seen_zero = False
    for row in h:
        nz = [j for j, v in enumerate(row) if v]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        j = nz[0]
        if j <= last or row[j] <= 0:
            return False
        last = j
        for prev in h:
            if prev is row:
                break
            if not 0 <= prev[j] < row[j]:
                return False
    return True


# -- rational parsing -------------------------------------------------------


def test_format_and_parse_round_trip():
    assert format_rational(F(3, 1)) == "3"
    assert format_rational(F(-2, 6)) == "-1/3"
    assert parse_rational("-1/3") == F(-1, 3)
    assert parse_rational(" 4 ") == F(4)


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", ""])
def test_parse_rejects_garbage(bad):
    with pytest.raises(MalformedInput):
        parse_rational(bad)


# -- hnf ----------------------------------------------------------------------


def test_hnf_identity():
    h, u = hnf(identity(3))
    assert h == identity(3) and u == identity(3)


def test_hnf_two_by_two():
    # oracle: elementary row operations; the HNF is unique for the row span
    h, u = hnf([[2, 4], [6, 8]])
    assert h == ((2, 0), (0, 4))
    assert mat_mul(u, [[2, 4], [6, 8]]) == h


def test_hnf_zero():
    h, _ = hnf([[0, 0], [0, 0]])
    assert h == ((0, 0), (0, 0))


@given(int_matrices())
def test_hnf_properties(m):
    h, u = hnf(m)
    assert mat_mul(u, m) == h
    assert is_unimodular(u)
    assert is_row_hnf(h)
    assert same_row_span(h, m)


def test_hnf_matches_sympy_row_span(rng):
    for _ in range(40):
        d = rng.randint(1, 4)
        m = random_int_matrix(rng, d, d)
        if det(m) == 0:
            continue
        ref = transpose([list(r) for r in hermite_normal_form_cols(m)])
        assert same_row_span(hnf(m)[0], ref)


def hermite_normal_form_cols(m):
    from sympy.matrices.normalforms import hermite_normal_form

    return hermite_normal_form(Matrix(m).T).tolist()


# -- snf ----------------------------------------------------------------------


def test_snf_identity():
    assert snf(identity(3)).diag == (1, 1, 1)


def test_snf_two_by_two():
    # oracle: d1 = gcd of entries = 2, d1 * d2 = |det| = 8
    assert snf([[2, 4], [6, 8]]).diag == (2, 4)


def test_snf_zero():
    assert snf([[0, 0], [0, 0]]).diag == (0, 0)


@given(int_matrices())
def test_snf_properties(m):
    res = snf(m)
    assert is_unimodular(res.left) and is_unimodular(res.right)
    prod_ = mat_mul(mat_mul(res.left, m), res.right)
    for i, row in enumerate(prod_):
        for j, v in enumerate(row):
            expected = res.diag[i] if i == j and i < len(res.diag) else 0
            assert v == expected
    nz = [d for d in res.diag if d]
    assert all(d > 0 for d in nz)
    assert res.diag[: len(nz)] == tuple(nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_snf_matches_sympy(rng):
    for _ in range(60):
        m = random_int_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        ref = smith_normal_form(Matrix(m), domain=ZZ)
        k = min(ref.shape)
        ref_diag = tuple(abs(int(ref[i, i])) for i in range(k))
        assert snf(m).diag == ref_diag


# -- inverse ----------------------------------------------------------------------


def test_inverse_examples():
    assert rat_inverse(identity(2)) == identity(2)
    assert rat_inverse([[F(1, 2), 0], [0, 3]]) == ((2, 0), (0, F(1, 3)))
    assert rat_inverse([[1, 1], [0, 1]]) == ((1, -1), (0, 1))


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        rat_inverse([[1, 2], [2, 4]])


def test_inverse_random(rng):
    done = 0
    while done < 200:
        d = rng.randint(1, 5)
        m = [[F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(d)] for _ in range(d)]
        if det(m) == 0:
            continue
        assert mat_mul(rat_inverse(m), m) == identity(d)
        assert mat_mul(m, rat_inverse(m)) == identity(d)
        done += 1


# -- integer linear systems ------------------------------------------------------


def test_solve_examples():
    assert solve_integer_linear([[2]], [1]) is None
    assert solve_integer_linear([[2]], [4]) == (2,)
    # oracle: exhaustive search over Z/3 finds x = 2 as the unique residue
    assert solve_integer_linear([[2]], [1], [3]) == (2,)


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_integer_linear([[1, 2]], [1, 2])


def _brute(a, b, moduli, box=6):
    n = len(a[0])
    for x in product(range(-box, box + 1), repeat=n):
        ok = True
        for row, bi, q in zip(a, b, moduli):
            v = sum(r * xi for r, xi in zip(row, x)) - bi
            if (q and v % q) or (not q and v):
                ok = False
                break
        if ok:
            return x
    return None


def _check(a, b, moduli, x):
    for row, bi, q in zip(a, b, moduli):
        v = sum(r * xi for r, xi in zip(row, x)) - bi
        if (q and v % q) or (not q and v):
            return False
    return True


@settings(max_examples=300)
@given(
    st.integers(1, 3).flatmap(
        lambda r: st.integers(1, 3).flatmap(
            lambda c: st.tuples(
                st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r),
                st.lists(st.integers(-6, 6), min_size=r, max_size=r),
                st.one_of(
                    st.lists(st.integers(0, 6), min_size=r, max_size=r),
                    st.integers(1, 6).map(lambda q: [q] * r),
                ),
            )
        )
    )
)
def test_solve_agrees_with_exhaustive_search(system):
    a, b, moduli = system
    x = solve_integer_linear(a, b, moduli)
    brute = _brute(a, b, moduli)
    if x is None:
        assert brute is None
    else:
        assert _check(a, b, moduli, x)
    if brute is not None:
        assert x is not None


def test_mat_vec_shape():
    assert mat_vec([[1, 2], [3, 4]], [1, 1]) == (3, 7)
    with pytest.raises(DimensionMismatch):
        mat_vec([[1, 2]], [1])
