"""Exact linear algebra over the prime field GF(p).

Matrices are plain numpy arrays holding residues in [0, p).  The storage
dtype depends only on p (see :func:`dtype_for`) so that the inner update
of Gaussian elimination cannot overflow.  The modulus is never stored on
the array; callers pass it explicitly.

Pivoting is deterministic: columns are scanned left to right and the
first nonzero entry from the top is used.  Every basis produced downstream
is therefore reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = [
    "dtype_for",
    "reduce",
    "zeros",
    "identity",
    "matmul",
    "rref",
    "rank",
    "kernel",
    "kernel_basis",
    "column_space",
    "image_basis",
    "solve",
    "inverse",
    "complement_indices",
    "is_zero",
]

# above this many multiply-adds a product goes through scipy.sparse
_SPARSE_WORK = 2_000_000


def dtype_for(p: int) -> np.dtype:
    """Smallest integer dtype in which ``a + (p - f) * b`` cannot overflow."""
    if p < 2:
        raise ValueError(f"modulus must be a prime >= 2, got {p}")
    if p <= 15:
        return np.dtype(np.uint8)
    if p <= 46_340:
        return np.dtype(np.int32)
    if p <= 3_037_000_499:
        return np.dtype(np.int64)
    raise ValueError(f"modulus {p} too large for int64 elimination")


def reduce(a, p: int) -> np.ndarray:
    """Reduce an integer array (any dtype, any sign) into [0, p)."""
    a = np.asarray(a)
    if a.dtype == dtype_for(p) and (a.size == 0 or (a.min() >= 0 and a.max() < p)):
        return a
    return np.mod(a.astype(np.int64, copy=False), p).astype(dtype_for(p))


def zeros(shape, p: int) -> np.ndarray:
    return np.zeros(shape, dtype=dtype_for(p))


def identity(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=dtype_for(p))


def is_zero(a) -> bool:
    a = np.asarray(a)
    return a.size == 0 or not a.any()


def matmul(a, b, p: int) -> np.ndarray:
    """Exact product ``a @ b`` reduced mod p."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch in product: {a.shape} @ {b.shape}")
    m, k = a.shape
    n = b.shape[1]
    if m == 0 or n == 0 or k == 0:
        return zeros((m, n), p)
    work = m * k * n
    if work > _SPARSE_WORK:
        sa = sp.csr_matrix(a.astype(np.int64))
        # sparse @ dense keeps the result dense; fine for our shapes
        if np.count_nonzero(b) * 4 < b.size:
            out = (sa @ sp.csr_matrix(b.astype(np.int64))).toarray()
        else:
            out = sa @ b.astype(np.int64)
        return np.mod(out, p).astype(dtype_for(p))
    if k * (p - 1) ** 2 < 2**52:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(out.astype(np.int64), p).astype(dtype_for(p))
    out = a.astype(object) @ b.astype(object)
    return np.mod(out, p).astype(dtype_for(p))


def rref(a, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form of ``a`` over GF(p).

    Returns ``(R, pivot_columns, rank)``.
    """
    a = np.array(reduce(a, p), copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[:, c])
        below = nz[nz >= r]
        if below.size == 0:
            continue
        piv = int(below[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
            nz = np.flatnonzero(a[:, c])
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r].astype(np.int64) * pow(lead, -1, p)) % p
        others = nz[nz != r]
        if others.size:
            if p == 2:
                a[others] ^= a[r]
            else:
                f = (p - a[others, c]).astype(a.dtype)
                a[others] = (a[others] + f[:, None] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # elimination cost scales with the long side; work on the wide shape
    if a.shape[0] > a.shape[1]:
        a = a.T
    return rref(a, p)[2]


def kernel(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Kernel basis of ``a`` together with its coordinate rows.

    The returned ``K`` has ``K[free] == I``, so the coordinates of a kernel
    vector ``v`` in this basis are simply ``v[free]``.
    """
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols, p), list(range(cols))
    R, piv, r = rref(a, p)
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    K = zeros((cols, len(free)), p)
    if free:
        K[free, np.arange(len(free))] = 1
        if r:
            K[piv, :] = (p - R[:r][:, free].astype(np.int64)) % p
    return K, free


def kernel_basis(a, p: int) -> np.ndarray:
    """Columns spanning ker(a); linearly independent."""
    return kernel(a, p)[0]


def column_space(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Echelon basis ``B`` of the column span of ``a`` and rows with ``B[rows] == I``."""
    a = np.asarray(a)
    if a.shape[1] == 0:
        return zeros((a.shape[0], 0), p), []
    R, piv, r = rref(np.ascontiguousarray(a.T), p)
    return np.ascontiguousarray(R[:r].T), piv


def image_basis(a, p: int) -> np.ndarray:
    return column_space(a, p)[0]


def solve(a, b, p: int):
    """One solution ``x`` of ``a x = b`` or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (solved jointly;
    ``None`` if any column is inconsistent).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {a.shape[0]} rows, rhs has {b.shape[0]}")
    n = a.shape[1]
    R, piv, r = rref(np.hstack([reduce(a, p), reduce(b, p)]), p)
    if any(c >= n for c in piv):
        return None
    x = zeros((n, b.shape[1]), p)
    if r:
        x[piv, :] = R[:r, n:]
    return x[:, 0] if vec else x


def inverse(a, p: int):
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"inverse of non-square matrix {a.shape}")
    R, piv, r = rref(np.hstack([reduce(a, p), identity(n, p)]), p)
    if piv[:n] != list(range(n)):
        return None
    return np.ascontiguousarray(R[:, n:])


def complement_indices(basis, n: int, p: int) -> list[int]:
    """Standard basis indices that extend span(basis) to GF(p)^n, greedily."""
    basis = np.asarray(basis)
    k = basis.shape[1] if basis.ndim == 2 else 0
    if k == 0:
        return list(range(n))
    _, piv, _ = rref(np.hstack([reduce(basis, p), identity(n, p)]), p)
    return [c - k for c in piv if c >= k]
