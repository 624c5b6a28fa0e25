"""Exact integer and rational linear algebra helpers.

Everything in here works over Python ints and fractions.Fraction; nothing
ever rounds.  Matrices are lists/tuples of row tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g


def lcm_list(values) -> int:
    out = 1
    for v in values:
        v = abs(v)
        if v == 0:
            return 0
        out = out * v // gcd(out, v)
    return out


def primitive(vector):
    """Divide an integer vector by the gcd of its entries (gcd 0 -> error)."""
    g = gcd_list(vector)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(v // g for v in vector)


def dot(w, m):
    return sum(wi * mi for wi, mi in zip(w, m))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# Rational elimination
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form over Fraction.  Returns (rref rows, pivot cols)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    n_rows = len(mat)
    n_cols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(n_rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return mat[:r], pivots


def rank(rows) -> int:
    reduced, _ = rref(rows)
    return len(reduced)


def nullspace_one(rows, width: int):
    """A nonzero kernel vector of a rank-(width-1) rational matrix.

    The caller guarantees the rows are independent and number width-1;
    with no rows at all the first unit vector is returned.
    """
    reduced, pivots = rref(rows)
    if len(reduced) != width - 1:
        raise ValueError("expected a one-dimensional kernel")
    free = next(c for c in range(width) if c not in pivots)
    vec = [Fraction(0)] * width
    vec[free] = Fraction(1)
    for row, p in zip(reduced, pivots):
        vec[p] = -row[free]
    return tuple(vec)


def solve_exact(rows, rhs):
    """Solve rows * x = rhs exactly; None when inconsistent.

    The matrix must have full column rank, so the solution is unique when
    it exists.
    """
    width = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(aug)
    if width in pivots:
        return None
    if len(pivots) != width:
        raise ValueError("matrix does not have full column rank")
    sol = [Fraction(0)] * width
    for row, p in zip(reduced, pivots):
        sol[p] = row[-1]
    return tuple(sol)


def in_row_span(target, rows) -> bool:
    """Exact membership of an integer/rational vector in the span of rows."""
    if all(x == 0 for x in target):
        return True
    if not rows:
        return False
    reduced, pivots = rref(rows)
    vec = [Fraction(x) for x in target]
    for row, p in zip(reduced, pivots):
        if vec[p] != 0:
            f = vec[p]
            vec = [x - f * y for x, y in zip(vec, row)]
    return all(x == 0 for x in vec)


# ---------------------------------------------------------------------------
# Integer (unimodular) elimination
# ---------------------------------------------------------------------------

def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def unimodular_to_unit(vector):
    """A unimodular U with U @ v = gcd(v) * e1, as a list of rows."""
    v = list(vector)
    n = len(v)
    u = _identity(n)
    for i in range(1, n):
        a, b = v[0], v[i]
        if b == 0:
            continue
        g, x, y = xgcd(a, b)
        # rows 0 and i are combined by an SL2(Z) block
        r0 = [x * u[0][j] + y * u[i][j] for j in range(n)]
        ri = [(-b // g) * u[0][j] + (a // g) * u[i][j] for j in range(n)]
        u[0], u[i] = r0, ri
        v[0], v[i] = g, 0
    return u


def smith_normal_form(matrix):
    """Smith normal form S = U A V with U, V unimodular.

    Returns (U, S, V) as lists of rows; the diagonal of S is non-negative
    with each entry dividing the next.  Classic smallest-pivot reduction:
    the pivot magnitude strictly drops whenever a division is inexact, so
    the loop terminates.
    """
    a = [list(row) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [
                (abs(a[i][j]), i, j)
                for i in range(t, m)
                for j in range(t, n)
                if a[i][j] != 0
            ]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            pivot = a[t][t]
            progress = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    addmul_row(i, t, -(a[i][t] // pivot))
                    progress = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    addmul_col(j, t, -(a[t][j] // pivot))
                    progress = True
            if progress:
                continue
            # pivot clears its row and column; fold in any entry it does not
            # divide, which will shrink the pivot on the next sweep
            offender = next(
                (
                    (i, j)
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if a[i][j] % pivot != 0
                ),
                None,
            )
            if offender is None:
                break
            addmul_row(t, offender[0], 1)
        if t < min(m, n) and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def mat_mul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def mat_inverse_int(matrix):
    """Inverse of a unimodular integer matrix, again with integer entries."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    reduced, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    inv = []
    for row in reduced:
        entries = row[n:]
        if any(x.denominator != 1 for x in entries):
            raise ValueError("matrix is not unimodular")
        inv.append([int(x) for x in entries])
    return inv
