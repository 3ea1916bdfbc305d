"""Exact rational arithmetic and integer matrix normal forms.

Matrices are plain tuples of row tuples.  Integer matrices hold ``int``
entries, rational matrices hold :class:`fractions.Fraction` entries.  Every
routine here is exact; nothing touches floating point.

>>> hnf([[2, 4], [6, 8]])[0]
((2, 0), (0, 4))
>>> snf([[2, 4], [6, 8]]).diag
(2, 4)
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import DimensionMismatch, MalformedInput, SingularMatrix

__all__ = [
    "Fraction",
    "SnfResult",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "identity",
    "zeros",
    "transpose",
    "mat_mul",
    "mat_vec",
    "vec_mat",
    "to_int_matrix",
    "to_fraction_matrix",
    "shape",
    "det",
    "egcd",
    "hnf",
    "snf",
    "rat_inverse",
    "solve_integer_linear",
    "is_unimodular",
    "common_denominator",
    "content",
]


def as_fraction(x):
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise MalformedInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise MalformedInput(f"not a rational: {x!r}")


def parse_rational(s):
    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"not a rational: {s!r}") from exc
    return q


def format_rational(q):
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- small matrix helpers ----------------------------------------------------


def shape(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for row in m:
        if len(row) != cols:
            raise DimensionMismatch("ragged matrix")
    return rows, cols


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows, cols):
    return tuple((0,) * cols for _ in range(rows))


def transpose(m):
    rows, cols = shape(m)
    return tuple(tuple(m[i][j] for i in range(rows)) for j in range(cols))


def mat_mul(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise DimensionMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b) if rb else ((),) * cb
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m, v):
    """Matrix times column vector."""
    rows, cols = shape(m)
    if cols != len(v):
        raise DimensionMismatch(f"{rows}x{cols} matrix, vector of length {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v, m):
    """Row vector times matrix."""
    rows, cols = shape(m)
    if rows != len(v):
        raise DimensionMismatch(f"vector of length {len(v)}, {rows}x{cols} matrix")
    return tuple(sum(v[i] * m[i][j] for i in range(rows)) for j in range(cols))


def to_fraction_matrix(m):
    return tuple(tuple(as_fraction(x) for x in row) for row in m)


def to_int_matrix(m):
    out = []
    for row in m:
        new = []
        for x in row:
            q = as_fraction(x)
            if q.denominator != 1:
                raise MalformedInput(f"non-integer entry {q}")
            new.append(q.numerator)
        out.append(tuple(new))
    return tuple(out)


def det(m):
    """Exact determinant by fraction-valued Gaussian elimination."""
    n, cols = shape(m)
    if n != cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    a = [[as_fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result


def is_unimodular(m):
    return abs(det(m)) == 1


def egcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


# -- Hermite normal form -----------------------------------------------------


def hnf(m):
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``h = u * m``, ``u`` unimodular.  ``h`` is in row
    echelon form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows at the bottom.  It depends only on the row
    span of ``m``.
    """
    rows, cols = shape(m)
    a = [[int(x) for x in row] for row in m]
    u = [list(row) for row in identity(rows)]
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        for i in range(pr + 1, rows):
            if a[i][c] == 0:
                continue
            p, q = a[pr][c], a[i][c]
            if p == 0:
                a[pr], a[i] = a[i], a[pr]
                u[pr], u[i] = u[i], u[pr]
                continue
            if q % p == 0:
                f = q // p
                a[i] = [y - f * x for x, y in zip(a[pr], a[i])]
                u[i] = [y - f * x for x, y in zip(u[pr], u[i])]
                continue
            g, x, y = egcd(p, q)
            s, t = q // g, p // g
            a[pr], a[i] = (
                [x * v + y * w for v, w in zip(a[pr], a[i])],
                [-s * v + t * w for v, w in zip(a[pr], a[i])],
            )
            u[pr], u[i] = (
                [x * v + y * w for v, w in zip(u[pr], u[i])],
                [-s * v + t * w for v, w in zip(u[pr], u[i])],
            )
        if a[pr][c] == 0:
            continue
        if a[pr][c] < 0:
            a[pr] = [-v for v in a[pr]]
            u[pr] = [-v for v in u[pr]]
        p = a[pr][c]
        for r in range(pr):
            f = a[r][c] // p
            if f:
                a[r] = [v - f * w for v, w in zip(a[r], a[pr])]
                u[r] = [v - f * w for v, w in zip(u[r], u[pr])]
        pr += 1
    return tuple(map(tuple, a)), tuple(map(tuple, u))


# -- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """``left * m * right`` is diagonal with ``diag`` on its diagonal."""

    diag: tuple
    left: tuple
    right: tuple


def snf(m):
    """Smith normal form with unimodular transforms on both sides."""
    rows, cols = shape(m)
    a = [[int(x) for x in row] for row in m]
    left = [list(row) for row in identity(rows)]
    right = [list(row) for row in identity(cols)]

    def row_combine(i, j, x, y, s, t):
        # (row_i, row_j) <- (x row_i + y row_j, s row_i + t row_j)
        for mat in (a, left):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * v + y * w for v, w in zip(ri, rj)]
            mat[j] = [s * v + t * w for v, w in zip(ri, rj)]

    def col_combine(i, j, x, y, s, t):
        for mat in (a, right):
            for row in mat:
                vi, vj = row[i], row[j]
                row[i] = x * vi + y * vj
                row[j] = s * vi + t * vj

    n = min(rows, cols)
    for t in range(n):
        entries = [
            (abs(a[i][j]), i, j)
            for i in range(t, rows)
            for j in range(t, cols)
            if a[i][j]
        ]
        if not entries:
            break
        _, i0, j0 = min(entries)
        if i0 != t:
            row_combine(t, i0, 0, 1, 1, 0)
        if j0 != t:
            col_combine(t, j0, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, rows):
                if a[i][t] == 0:
                    continue
                p, q = a[t][t], a[i][t]
                if q % p == 0:
                    row_combine(t, i, 1, 0, -(q // p), 1)
                else:
                    g, x, y = egcd(p, q)
                    row_combine(t, i, x, y, -(q // g), p // g)
            for j in range(t + 1, cols):
                if a[t][j] == 0:
                    continue
                p, q = a[t][t], a[t][j]
                if q % p == 0:
                    col_combine(t, j, 1, 0, -(q // p), 1)
                else:
                    g, x, y = egcd(p, q)
                    col_combine(t, j, x, y, -(q // g), p // g)
            if any(a[i][t] for i in range(t + 1, rows)):
                continue
            p = a[t][t]
            bad = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if a[i][j] % p
                ),
                None,
            )
            if bad is None:
                break
            row_combine(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            left[t] = [-v for v in left[t]]
    diag = tuple(a[i][i] for i in range(n))
    return SnfResult(diag, tuple(map(tuple, left)), tuple(map(tuple, right)))


# -- rational inverse --------------------------------------------------------


def rat_inverse(m):
    n, cols = shape(m)
    if n != cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    a = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


# -- integer linear systems --------------------------------------------------


def solve_integer_linear(a, b, moduli=None):
    """Solve ``a x = b`` over Z, row ``i`` taken modulo ``moduli[i]``.

    A modulus of 0 means the row is an equation over Z.  Returns ``None``
    when there is no integer solution, otherwise the canonical solution:
    the representative of the solution coset reduced against the Hermite
    form of the solution lattice.
    """
    rows = len(a)
    n = len(a[0]) if rows else 0
    if any(len(row) != n for row in a):
        raise DimensionMismatch("ragged coefficient matrix")
    if len(b) != rows:
        raise DimensionMismatch(f"{rows} equations but {len(b)} right-hand sides")
    if moduli is None:
        moduli = [0] * rows
    if len(moduli) != rows:
        raise DimensionMismatch(f"{rows} equations but {len(moduli)} moduli")
    if any(q < 0 for q in moduli):
        raise ValueError("moduli must be nonnegative")
    if rows == 0:
        return (0,) * n

    if n and moduli[0] and all(q == moduli[0] for q in moduli):
        return _solve_uniform_modulus(a, b, moduli[0])

    mod_rows = [i for i, q in enumerate(moduli) if q]
    aug = []
    for i, row in enumerate(a):
        extra = [moduli[i] if k == i else 0 for k in mod_rows]
        aug.append([int(x) for x in row] + extra)
    width = n + len(mod_rows)
    if width == 0:
        return () if not any(b) else None

    res = snf(aug)
    c = mat_vec(res.left, [int(x) for x in b])
    w = [0] * width
    for i in range(rows):
        d = res.diag[i] if i < len(res.diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            w[i] = c[i] // d
    z = mat_vec(res.right, w)
    x = list(z[:n])

    kernel = [
        [res.right[r][j] for r in range(n)]
        for j in range(width)
        if j >= len(res.diag) or res.diag[j] == 0
    ]
    if kernel:
        h, _ = hnf(kernel)
        for row in h:
            piv = next((k for k, v in enumerate(row) if v), None)
            if piv is None:
                break
            f = x[piv] // row[piv]
            if f:
                x = [v - f * r for v, r in zip(x, row)]
    return tuple(x)


def _solve_uniform_modulus(a, b, q):
    """``a x = b (mod q)`` from the SNF of ``a`` alone.

    A unimodular change of rows preserves congruences mod q, so the system
    splits into ``d_i w_i = c_i (mod q)``.  The solution is reduced mod q.
    """
    res = snf([[int(x) for x in row] for row in a])
    c = mat_vec(res.left, [int(x) for x in b])
    n = len(a[0])
    w = [0] * n
    for i, ci in enumerate(c):
        d = res.diag[i] if i < len(res.diag) else 0
        g = gcd(d, q)
        if ci % g:
            return None
        if d:
            qq = q // g
            w[i] = (ci // g) * pow(d // g, -1, qq) % qq if qq > 1 else 0
    return tuple(x % q for x in mat_vec(res.right, w))


def common_denominator(values):
    den = 1
    for v in values:
        den = lcm(den, as_fraction(v).denominator)
    return den


def content(values):
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
