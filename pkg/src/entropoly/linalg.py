"""Dense real linear algebra and integer lattice computations.

Matrices are plain 2-D numpy arrays; generators produce exact small
integers that float64 holds losslessly.  Every determinant that feeds an
estimate is kept in natural-log scale because the generated systems have
Gram determinants that overflow double precision long before the
estimates themselves stop being meaningful.

The three entry points are

* :func:`logdet_gram` -- ln det(M Mᵀ) through a Cholesky factorization,
* :func:`sym_eig_range` -- eigenvalue extremes of a symmetric matrix via
  cyclic Jacobi sweeps,
* :func:`hnf_lattice_index` -- index of the image lattice A(Zⁿ) in Zᵈ
  through an exact column-style Hermite normal form.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficient,
    UnsupportedMatrix,
)


class SymmetricSpectrum(NamedTuple):
    """Smallest and largest eigenvalue of a symmetric matrix."""

    min_eigenvalue: float
    max_eigenvalue: float


def _as_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch("expected a 2-D matrix, got ndim=%d" % arr.ndim)
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch("matrix must have at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("matrix entries must be finite")
    return arr


def logdet_gram(M) -> float:
    """Return ln det(M Mᵀ) for a full-row-rank matrix M.

    The Gram matrix is factored by Cholesky; a failed factorization means
    some pivot was not positive, which signals rank deficiency and raises
    :class:`NotPositiveDefinite`.
    """
    M = _as_matrix(M)
    d, n = M.shape
    if d > n:
        raise DimensionMismatch("need rows <= cols, got %dx%d" % (d, n))
    gram = M @ M.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("Gram matrix is not positive definite: %s" % exc) from None
    diag = np.diagonal(chol)
    if np.any(diag <= 0.0):
        raise NotPositiveDefinite("non-positive Cholesky pivot")
    return float(2.0 * np.sum(np.log(diag)))


def sym_eig_range(S) -> SymmetricSpectrum:
    """Eigenvalue extremes of a symmetric matrix via cyclic Jacobi sweeps.

    Rotations are applied until the off-diagonal Frobenius mass drops
    below 1e-12 times the Frobenius norm of the input; the diagonal then
    carries the spectrum to well below the documented 1e-9 accuracy.
    Raises :class:`NotSymmetric` when the input is asymmetric beyond
    1e-12 times its norm.
    """
    S = _as_matrix(S)
    d, n = S.shape
    if d != n:
        raise DimensionMismatch("symmetric input must be square, got %dx%d" % (d, n))
    fro = float(np.linalg.norm(S))
    asym = float(np.max(np.abs(S - S.T))) if d > 1 else 0.0
    if asym > 1e-12 * max(fro, 1e-300):
        raise NotSymmetric("max asymmetry %.3e exceeds 1e-12 * ||S||" % asym)

    A = 0.5 * (S + S.T)
    if d == 1 or fro == 0.0:
        diag = np.diagonal(A)
        return SymmetricSpectrum(float(diag.min()), float(diag.max()))

    thresh = 1e-12 * fro
    tiny = thresh / (d * d)
    for _ in range(60):
        off = float(np.sqrt(max(np.sum(A * A) - np.sum(np.diagonal(A) ** 2), 0.0)))
        if off <= thresh:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) <= tiny:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
    diag = np.diagonal(A)
    return SymmetricSpectrum(float(diag.min()), float(diag.max()))


def _exgcd(a: int, b: int):
    """Extended gcd: returns (g, x, y) with x*a + y*b = g and g >= 0."""
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


def integer_entries(A) -> np.ndarray:
    """Validate that a matrix/vector holds exact integers; return int64 copy."""
    arr = np.asarray(A, dtype=float)
    rounded = np.rint(arr)
    if not np.all(np.abs(arr - rounded) < 1e-9):
        raise UnsupportedMatrix("entries must be exact integers")
    if np.any(np.abs(rounded) > 2**62):
        raise UnsupportedMatrix("integer entries too large for exact arithmetic")
    return rounded.astype(np.int64)


def hnf_lattice_index(A) -> int:
    """Index of the image lattice A(Zⁿ) inside Zᵈ.

    Computed as the product of the diagonal pivots of a column-style
    Hermite normal form over arbitrary-precision integers; equals 1
    exactly when the d x d minors of A have gcd 1.  Raises
    :class:`RankDeficient` when fewer than d pivots exist.
    """
    arr = integer_entries(_as_matrix(A))
    d, n = arr.shape
    if d > n:
        raise RankDeficient("more rows than columns: cannot have full row rank")
    cols = [[int(arr[i, j]) for i in range(d)] for j in range(n)]

    index = 1
    piv = 0
    for r in range(d):
        j0 = next((j for j in range(piv, n) if cols[j][r] != 0), None)
        if j0 is None:
            raise RankDeficient("no pivot for row %d" % r)
        cols[piv], cols[j0] = cols[j0], cols[piv]
        for j in range(piv + 1, n):
            if cols[j][r] == 0:
                continue
            a, b = cols[piv][r], cols[j][r]
            g, x, y = _exgcd(a, b)
            u, v = a // g, b // g
            cp, cj = cols[piv], cols[j]
            # the 2x2 column operation [[x, -v], [y, u]] has determinant 1
            new_p = [x * cp[i] + y * cj[i] for i in range(d)]
            new_j = [u * cj[i] - v * cp[i] for i in range(d)]
            cols[piv], cols[j] = new_p, new_j
        if cols[piv][r] < 0:
            cols[piv] = [-e for e in cols[piv]]
        index *= cols[piv][r]
        piv += 1
    return index
