"""Independent brute-force oracles used by the test suite.

Everything here is deliberately written against the package: exact
integer determinants by fraction-free elimination, point enumeration by
plain search, and a one-dimensional dual bisection.  Tests compare these
against the library implementations, so nothing in this module may call
the code paths it checks.
"""

import math
from itertools import combinations

import numpy as np


def int_det(rows):
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    M = [list(map(int, row)) for row in rows]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def minors_gcd(A):
    """gcd of all d x d minors of an integer d x n matrix."""
    A = np.asarray(A, dtype=np.int64)
    d, n = A.shape
    g = 0
    for cols in combinations(range(n), d):
        g = math.gcd(g, abs(int_det([[int(A[i, j]) for j in cols] for i in range(d)])))
        if g == 1:
            return 1
    return g


def float_det(M):
    """Cofactor-expansion determinant for small float matrices."""
    M = [list(map(float, row)) for row in M]
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += ((-1) ** j) * M[0][j] * float_det(minor)
    return total


def enumerate_binary_points(A, b):
    """All 0-1 vectors x with A x = b, as an (m, n) int array."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = A.shape[1]
    X = ((np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    return X[(X @ A.T == b).all(axis=1)]


def enumerate_integer_points(A, b):
    """All non-negative integer vectors x with A x = b (A >= 0, no zero column)."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    d, n = A.shape
    assert np.all(A >= 0) and np.all(np.abs(A).sum(axis=0) > 0)
    cols = [tuple(int(A[i, j]) for i in range(d)) for j in range(n)]
    rest = [tuple(int(A[i, j + 1:].sum()) for i in range(d)) for j in range(n)]
    points = []
    prefix = []

    def rec(j, r):
        if j == n:
            if not any(r):
                points.append(tuple(prefix))
            return
        col = cols[j]
        support = rest[j]
        kmax = min((r[i] // col[i] for i in range(d) if col[i]),
                   default=max(r) if any(r) else 0)
        for k in range(kmax + 1):
            r2 = tuple(r[i] - k * col[i] for i in range(d))
            if any(r2[i] > 0 and support[i] == 0 for i in range(d)):
                continue
            prefix.append(k)
            rec(j + 1, r2)
            prefix.pop()

    rec(0, tuple(int(v) for v in b))
    return np.array(points, dtype=np.int64).reshape(len(points), n)


def count_tables_free_cells(row_sums, col_sums):
    """Count non-negative integer tables by looping over the free block.

    The first (m-1) x (n-1) entries range freely; the last row and column
    are forced by the margins and only need a non-negativity check.
    """
    R = list(map(int, row_sums))
    C = list(map(int, col_sums))
    m, n = len(R), len(C)
    free_rows, free_cols = m - 1, n - 1
    count = 0
    block = [0] * (free_rows * free_cols)

    def rec(pos):
        nonlocal count
        if pos == len(block):
            table = np.zeros((m, n), dtype=int)
            table[:free_rows, :free_cols] = np.array(block).reshape(free_rows, free_cols)
            table[:free_rows, n - 1] = [R[i] - table[i, :free_cols].sum() for i in range(free_rows)]
            table[m - 1, :] = np.array(C) - table[:free_rows, :].sum(axis=0)
            if (table >= 0).all() and table[m - 1].sum() == R[m - 1]:
                count += 1
            return
        i = pos // free_cols
        for v in range(R[i] + 1):
            block[pos] = v
            rec(pos + 1)
        block[pos] = 0

    rec(0)
    return count


def geometric_means_by_bisection(coeffs, target, lo=1e-9, hi=60.0, iters=200):
    """Solve the one-constraint geometric system by dual bisection.

    For a single row of positive integer coefficients a_j, the dual is a
    scalar t with means 1/(exp(a_j t) - 1); bisect on the constraint
    residual sum(a_j * mean_j) = target.
    """
    coeffs = [int(c) for c in coeffs]

    def constraint(t):
        return sum(a / math.expm1(a * t) for a in coeffs) - target

    assert constraint(lo) > 0 > constraint(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if constraint(mid) > 0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return np.array([1.0 / math.expm1(a * t) for a in coeffs]), t
