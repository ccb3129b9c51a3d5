"""Benchmark families: margin systems and their lattice solution sets.

Two constructions cover the classical test cases:

* :func:`gen_transport` -- m x n tables with prescribed row and column
  sums, written as the non-redundant system that fixes the first m-1 row
  sums, the first n-1 column sums, and the total sum.
* :func:`gen_multiway` -- k_1 x ... x k_v arrays with prescribed
  sectional sums along every axis, fixing all but the last sectional sum
  per axis plus the total sum.

Row ordering is axis by axis with the total-sum row last and cells in
row-major (lexicographic) order, which keeps the solution-set
constructions below index-stable.

For each constraint row i the Y-family holds a finite set of integer
vectors y with A y = e_i; the largest eigenvalue of their second-moment
form is the quantity rho that controls the additive error bound of the
counting estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import MarginMismatch
from .linalg import sym_eig_range
from .model import DomainKind, PolytopeSpec


def transport_matrix(m: int, n: int) -> np.ndarray:
    """Constraint matrix of the m x n margin system (no right-hand side)."""
    if m < 2 or n < 2:
        raise MarginMismatch("need at least 2 rows and 2 columns")
    d = m + n - 1
    A = np.zeros((d, m * n), dtype=np.int64)
    for i in range(m):
        for j in range(n):
            cell = i * n + j
            if i < m - 1:
                A[i, cell] = 1
            if j < n - 1:
                A[m - 1 + j, cell] = 1
            A[d - 1, cell] = 1
    return A


def gen_transport(row_sums: Sequence[int], col_sums: Sequence[int],
                  domain: DomainKind = DomainKind.INTEGER,
                  name: Optional[str] = None) -> PolytopeSpec:
    """Margin system for m x n tables with the given row/column sums."""
    R = [int(r) for r in row_sums]
    C = [int(c) for c in col_sums]
    if any(r <= 0 for r in R) or any(c <= 0 for c in C):
        raise MarginMismatch("margins must be positive integers")
    if sum(R) != sum(C):
        raise MarginMismatch("row sums total %d but column sums total %d"
                             % (sum(R), sum(C)))
    m, n = len(R), len(C)
    A = transport_matrix(m, n)
    b = np.array(R[:-1] + C[:-1] + [sum(R)], dtype=float)
    return PolytopeSpec(A.astype(float), b, DomainKind(domain), name=name)


def multiway_matrix(dims: Sequence[int]) -> np.ndarray:
    """Constraint matrix of the sectional-sum system for a dims array."""
    dims = tuple(int(k) for k in dims)
    if len(dims) < 2 or any(k < 2 for k in dims):
        raise MarginMismatch("need at least two axes, each of extent >= 2")
    d = sum(k - 1 for k in dims) + 1
    cells = int(np.prod(dims))
    A = np.zeros((d, cells), dtype=np.int64)
    offsets = np.cumsum([0] + [k - 1 for k in dims[:-1]])
    for cell, idx in enumerate(np.ndindex(*dims)):
        for axis, j in enumerate(idx):
            if j < dims[axis] - 1:
                A[offsets[axis] + j, cell] = 1
        A[d - 1, cell] = 1
    return A


def gen_multiway(dims: Sequence[int], margins: Sequence[Sequence[int]],
                 domain: DomainKind = DomainKind.INTEGER,
                 name: Optional[str] = None) -> PolytopeSpec:
    """Sectional-sum system for a k_1 x ... x k_v array.

    ``margins[i]`` lists the k_i prescribed sectional sums along axis i;
    every axis must sum to the same total.
    """
    dims = tuple(int(k) for k in dims)
    A = multiway_matrix(dims)
    if len(margins) != len(dims):
        raise MarginMismatch("need one margin vector per axis")
    margin_lists = [[int(v) for v in axis_margins] for axis_margins in margins]
    totals = []
    for k, axis_margins in zip(dims, margin_lists):
        if len(axis_margins) != k:
            raise MarginMismatch("axis of extent %d needs %d margins" % (k, k))
        if any(v <= 0 for v in axis_margins):
            raise MarginMismatch("margins must be positive integers")
        totals.append(sum(axis_margins))
    if len(set(totals)) != 1:
        raise MarginMismatch("axis totals differ: %s" % totals)
    b = [v for axis_margins in margin_lists for v in axis_margins[:-1]]
    b.append(totals[0])
    return PolytopeSpec(A.astype(float), np.array(b, dtype=float),
                        DomainKind(domain), name=name)


def gen_polystochastic(k: int, order: int,
                       domain: DomainKind = DomainKind.VOLUME,
                       name: Optional[str] = None) -> PolytopeSpec:
    """Dilated k x ... x k system with every sectional sum k^(order-1)."""
    if order < 2 or k < 2:
        raise MarginMismatch("need order >= 2 and k >= 2")
    margin = k ** (order - 1)
    return gen_multiway((k,) * order, [[margin] * k] * order, domain, name=name)


@dataclass(frozen=True)
class YFamily:
    """Per-constraint sets of integer vectors y with A y = e_i.

    ``sets[s]`` stacks the members of one set as rows; ``target_index[s]``
    is the constraint row they map to.  The second-moment form of a set is
    ``(1/|Y|) sum_y y yᵀ``; its largest eigenvalue bounds the set's
    contribution to the additive error of the counting estimates.
    """

    sets: Tuple[np.ndarray, ...]
    target_index: Tuple[int, ...]

    def psi_matrix(self, s: int) -> np.ndarray:
        Y = self.sets[s]
        return Y.T.astype(float) @ Y.astype(float) / Y.shape[0]

    def rho_values(self) -> np.ndarray:
        return np.array([sym_eig_range(self.psi_matrix(s)).max_eigenvalue
                         for s in range(len(self.sets))])

    def rho(self) -> float:
        return float(self.rho_values().max())


def _verified_family(A: np.ndarray, sets: List[np.ndarray],
                     targets: List[int]) -> YFamily:
    d = A.shape[0]
    for Y, i in zip(sets, targets):
        if Y.shape[0] == 0:
            raise MarginMismatch("empty solution set for constraint %d" % i)
        images = Y @ A.T
        want = np.zeros(d, dtype=np.int64)
        want[i] = 1
        if not np.all(images == want):
            raise MarginMismatch("solution-set identity A y = e_%d failed" % i)
    return YFamily(tuple(sets), tuple(targets))


def gen_yfamily_transport(m: int, n: int) -> YFamily:
    """Solution sets for the m x n margin system, one per constraint row.

    Row-sum constraints get n vectors with pairwise disjoint support
    (+1 in the target row, -1 in the last row of the same column), column
    constraints the transposed pattern, and the total-sum row gets the
    (m-1)(n-1) three-entry vectors supported on a free cell and its two
    slack-line partners.
    """
    A = transport_matrix(m, n)
    sets: List[np.ndarray] = []
    targets: List[int] = []

    def cell(i: int, j: int) -> int:
        return i * n + j

    for k in range(m - 1):
        Y = np.zeros((n, m * n), dtype=np.int64)
        for l in range(n):
            Y[l, cell(k, l)] = 1
            Y[l, cell(m - 1, l)] = -1
        sets.append(Y)
        targets.append(k)
    for k in range(n - 1):
        Y = np.zeros((m, m * n), dtype=np.int64)
        for l in range(m):
            Y[l, cell(l, k)] = 1
            Y[l, cell(l, n - 1)] = -1
        sets.append(Y)
        targets.append(m - 1 + k)
    Y0 = np.zeros(((m - 1) * (n - 1), m * n), dtype=np.int64)
    row = 0
    for k in range(m - 1):
        for l in range(n - 1):
            Y0[row, cell(k, l)] = -1
            Y0[row, cell(k, n - 1)] = 1
            Y0[row, cell(m - 1, l)] = 1
            row += 1
    sets.append(Y0)
    targets.append(m + n - 2)
    return _verified_family(A, sets, targets)


def gen_yfamily_multiway(dims: Sequence[int]) -> YFamily:
    """Solution sets for the sectional-sum system of a dims array."""
    dims = tuple(int(k) for k in dims)
    A = multiway_matrix(dims)
    nu = len(dims)
    cells = int(np.prod(dims))
    strides = np.zeros(nu, dtype=np.int64)
    acc = 1
    for axis in range(nu - 1, -1, -1):
        strides[axis] = acc
        acc *= dims[axis]

    def flat(idx: Sequence[int]) -> int:
        return int(sum(strides[a] * idx[a] for a in range(nu)))

    sets: List[np.ndarray] = []
    targets: List[int] = []
    offsets = np.cumsum([0] + [k - 1 for k in dims[:-1]])

    for axis in range(nu):
        other_ranges = [range(dims[a]) for a in range(nu) if a != axis]
        for j in range(dims[axis] - 1):
            members = []
            for rest in np.ndindex(*[len(r) for r in other_ranges]):
                idx = list(rest[:axis]) + [j] + list(rest[axis:])
                idx_last = list(rest[:axis]) + [dims[axis] - 1] + list(rest[axis:])
                y = np.zeros(cells, dtype=np.int64)
                y[flat(idx)] = 1
                y[flat(idx_last)] = -1
                members.append(y)
            sets.append(np.stack(members))
            targets.append(int(offsets[axis] + j))

    members = []
    for idx in np.ndindex(*[k - 1 for k in dims]):
        y = np.zeros(cells, dtype=np.int64)
        y[flat(idx)] = 1 - nu
        for axis in range(nu):
            shifted = list(idx)
            shifted[axis] = dims[axis] - 1
            y[flat(shifted)] += 1
        members.append(y)
    sets.append(np.stack(members))
    targets.append(A.shape[0] - 1)
    return _verified_family(A, sets, targets)


def detect_family(A) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """Recognize a generated margin system from its constraint matrix.

    Returns ``("transport", (m, n))`` or ``("multiway", dims)`` when A is
    exactly the matrix a generator would emit, else None.
    """
    arr = np.asarray(A)
    if arr.ndim != 2 or np.any(arr != np.rint(arr)):
        return None
    arr = arr.astype(np.int64)
    d, cells = arr.shape
    for m in range(2, d):
        n = d + 1 - m
        if n < 2 or m * n != cells:
            continue
        if np.array_equal(arr, transport_matrix(m, n)):
            return ("transport", (m, n))

    def factorizations(total: int, rows_left: int, min_axes: int):
        # ordered tuples of extents >= 2 with product=total, sum(k-1)=rows_left
        if rows_left == 0 and total == 1 and min_axes <= 0:
            yield ()
            return
        if total <= 1 or rows_left <= 0:
            return
        for k in range(2, total + 1):
            if total % k or k - 1 > rows_left:
                continue
            for rest in factorizations(total // k, rows_left - (k - 1), min_axes - 1):
                yield (k,) + rest

    for dims in factorizations(cells, d - 1, 2):
        if len(dims) >= 2 and np.array_equal(arr, multiway_matrix(dims)):
            return ("multiway", dims)
    return None


def builtin_yfamily(spec: PolytopeSpec) -> Optional[YFamily]:
    """Y-family for a recognized generated system, else None."""
    match = detect_family(spec.A)
    if match is None:
        return None
    kind, dims = match
    if kind == "transport":
        return gen_yfamily_transport(*dims)
    return gen_yfamily_multiway(dims)
