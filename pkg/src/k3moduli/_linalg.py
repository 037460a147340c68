"""Small exact integer/rational linear algebra for rank <= 4 lattices.

Everything here works on plain nested lists of ``int`` or ``Fraction``; no
floating point is ever involved.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def det(matrix) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * result


def signature(matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric matrix.

    Symmetric Gaussian elimination (congruence), so Sylvester's law of
    inertia makes the diagonal signs the answer.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    diag = []
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            # all remaining diagonal entries vanish: find an off-diagonal entry
            pair = next(((k, m) for k in active for m in active
                         if k != m and a[k][m] != 0), None)
            if pair is None:
                diag.extend(0 for _ in active)
                break
            k, m = pair
            # e_k -> e_k + e_m makes a[k][k] = 2 a[k][m] != 0
            for c in range(n):
                a[k][c] += a[m][c]
            for r in range(n):
                a[r][k] += a[r][m]
            i = k
        p = a[i][i]
        diag.append(p)
        rest = [k for k in active if k != i]
        for r in rest:
            f = a[r][i] / p
            if f:
                for c in range(n):
                    a[r][c] -= f * a[i][c]
        for r in rest:
            a[r][i] = a[i][r] = Fraction(0)
        active = rest
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return pos, neg, n - pos - neg


def integer_kernel_of_row(row: list[int]) -> list[list[int]]:
    """Basis of {u in Z^n : row . u = 0} for a nonzero integer row.

    Column operations by extended gcd build a unimodular U with
    row @ U = (g, 0, ..., 0); the last n-1 columns of U span the kernel,
    which is therefore saturated.
    """
    n = len(row)
    c = list(row)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    lead = next(j for j in range(n) if c[j] != 0)
    if lead != 0:
        c[0], c[lead] = c[lead], c[0]
        for r in u:
            r[0], r[lead] = r[lead], r[0]
    for j in range(1, n):
        if c[j] == 0:
            continue
        g, x, y = egcd(c[0], c[j])
        p, q = c[j] // g, c[0] // g
        for r in u:
            r0, rj = r[0], r[j]
            r[0] = x * r0 + y * rj
            r[j] = p * r0 - q * rj
        c[0], c[j] = g, 0
    return [[u[i][j] for i in range(n)] for j in range(1, n)]


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of a full-row-rank integer matrix."""
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return a
    n = len(a[0])
    pr = 0
    for col in range(n):
        if pr == m:
            break
        # gcd-combine column entries of rows pr.. into row pr
        for r in range(pr + 1, m):
            if a[r][col] == 0:
                continue
            g, x, y = egcd(a[pr][col], a[r][col])
            p, q = a[pr][col] // g, a[r][col] // g
            top = [x * s + y * t for s, t in zip(a[pr], a[r])]
            bot = [-q * s + p * t for s, t in zip(a[pr], a[r])]
            a[pr], a[r] = top, bot
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-v for v in a[pr]]
        piv = a[pr][col]
        for r in range(pr):
            f = a[r][col] // piv
            if f:
                a[r] = [s - f * t for s, t in zip(a[r], a[pr])]
        pr += 1
    return a
