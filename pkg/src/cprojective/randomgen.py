"""Seeded random modules, complexes and chain maps for property checks."""

from __future__ import annotations

import numpy as np

from . import gfp
from .algebra import Algebra, ring_matrix_action
from .complexes import ChainComplex, ChainMap, direct_sum_complex, free_ring_matrix
from .modrep import (
    FinModule,
    direct_sum,
    free,
    generated_submodule,
    hom_module,
    power,
    quotient,
    submodule,
    zero_module,
)


def random_quotient(M: FinModule, rng: np.random.Generator, max_gens: int = 2) -> FinModule:
    """M modulo the submodule generated by a few random elements."""
    if M.dim == 0:
        return M
    g = int(rng.integers(0, max_gens + 1))
    if g == 0:
        return M
    gens = gfp.reduce(rng.integers(0, M.p, size=(M.dim, g)), M.p)
    N = generated_submodule(M, gens)
    return quotient(M, N).module


def random_module(A: Algebra, rng: np.random.Generator, max_dim: int = 6,
                  C: FinModule | None = None) -> FinModule:
    """Random nonzero module of dim <= max_dim built from R, C and quotients."""
    pieces = [free(A, 1)] + ([C] if C is not None else [])
    for _ in range(20):
        kind = int(rng.integers(0, 4))
        base = pieces[int(rng.integers(0, len(pieces)))]
        if kind == 0:
            M = power(base, int(rng.integers(1, 3)))
        elif kind == 1:
            M = random_quotient(power(base, int(rng.integers(1, 3))), rng)
        elif kind == 2:
            a = random_quotient(base, rng)
            b = pieces[int(rng.integers(0, len(pieces)))]
            M = direct_sum(a, b) if a.dim else b
        else:
            M = random_quotient(base, rng)
        if 0 < M.dim <= max_dim:
            return M
    return pieces[0]


def random_map(M: FinModule, N: FinModule, rng: np.random.Generator) -> np.ndarray:
    """Uniform random element of Hom_R(M, N), as a matrix."""
    if M.dim == 0 or N.dim == 0:
        return gfp.zeros((N.dim, M.dim), M.p)
    H = hom_module(M, N)
    if H.dim == 0:
        return gfp.zeros((N.dim, M.dim), M.p)
    c = gfp.reduce(rng.integers(0, M.p, size=H.dim), M.p)
    return H.to_map(c).matrix


def random_complex(A: Algebra, rng: np.random.Generator, max_dim: int = 6, max_degrees: int = 4,
                   lo: int = 0) -> ChainComplex:
    """Bounded complex with random modules; each ∂_n is a random map into ker ∂_{n-1}."""
    n = int(rng.integers(1, max_degrees + 1))
    mods = [random_module(A, rng, max_dim) if rng.random() > 0.1 else zero_module(A) for _ in range(n)]
    diffs = []
    for k in range(1, n):
        src, tgt = mods[k], mods[k - 1]
        if k == 1:
            K = submodule(tgt, gfp.identity(tgt.dim, A.p), check=False)
        else:
            K = submodule(tgt, gfp.kernel_basis(diffs[-1], A.p), check=False)
        f = random_map(src, K.module, rng)
        diffs.append(gfp.matmul(K.basis, f, A.p))
    return ChainComplex(A, lo, mods, diffs, check=False)


def random_chain_map(X: ChainComplex, Y: ChainComplex, rng: np.random.Generator) -> ChainMap:
    """Uniform random chain map X -> Y, from the solution space of ∂f = f∂."""
    p = X.p
    degs = [n for n in range(max(X.lo, Y.lo), min(X.hi, Y.hi) + 1)
            if X.module(n).dim and Y.module(n).dim]
    Hs = {n: hom_module(X.module(n), Y.module(n)) for n in degs}
    degs = [n for n in degs if Hs[n].dim]
    if not degs:
        return ChainMap(X, Y, {}, check=False)
    offs, o = {}, 0
    for n in degs:
        offs[n] = o
        o += Hs[n].dim
    total = o
    blocks = []
    for n in range(min(X.lo, Y.lo) + 1, max(X.hi, Y.hi) + 1):
        rows = Y.module(n - 1).dim * X.module(n).dim
        if rows == 0:
            continue
        M = np.zeros((rows, total), dtype=np.int64)
        if n in Hs:
            H = Hs[n]
            lhs = np.matmul(Y.d(n).astype(np.int64), H.maps.astype(np.int64)) % p  # ∂ f_n
            M[:, offs[n]:offs[n] + H.dim] += lhs.reshape(H.dim, -1).T
        if n - 1 in Hs:
            H = Hs[n - 1]
            rhs = np.matmul(H.maps.astype(np.int64), X.d(n).astype(np.int64)) % p  # f_{n-1} ∂
            M[:, offs[n - 1]:offs[n - 1] + H.dim] -= rhs.reshape(H.dim, -1).T
        blocks.append(M % p)
    K = gfp.kernel_basis(np.vstack(blocks), p) if blocks else gfp.identity(total, p)
    c = gfp.matmul(K, gfp.reduce(rng.integers(0, p, size=(K.shape[1], 1)), p), p)[:, 0]
    comps = {n: Hs[n].to_map(c[offs[n]:offs[n] + Hs[n].dim]).matrix for n in degs}
    return ChainMap(X, Y, comps, check=False)


def random_quasiiso_pair(X: ChainComplex, rng: np.random.Generator):
    """Inclusion X -> X ⊕ (contractible), a map that is always a quasi-isomorphism."""
    A = X.algebra
    n = int(rng.integers(X.lo + 1, X.hi + 2))
    R = free(A, 1)
    E = ChainComplex(A, n - 1, [R, R], [gfp.identity(A.d, A.p)], check=False)
    Y = direct_sum_complex(X, E)
    comps = {}
    for k in X.degrees():
        M = gfp.zeros((Y.module(k).dim, X.module(k).dim), A.p)
        M[:X.module(k).dim] = gfp.identity(X.module(k).dim, A.p)
        comps[k] = M
    return Y, ChainMap(X, Y, comps, check=False)


# -- free complexes ------------------------------------------------------------------


def _intersection(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    if U.shape[1] == 0 or V.shape[1] == 0:
        return gfp.zeros((U.shape[0], 0), p)
    K = gfp.kernel_basis(np.hstack([U, gfp.reduce(-V.astype(np.int64), p)]), p)
    return gfp.image_basis(gfp.matmul(U, K[:U.shape[1]], p), p)


def random_minimal_free_complex(A: Algebra, rng: np.random.Generator, max_rank: int = 3,
                                max_degrees: int = 4) -> ChainComplex:
    """Free complex whose differentials have entries in m."""
    from .modrep import radical_basis

    p = A.p
    n = int(rng.integers(2, max_degrees + 1))
    ranks = [int(rng.integers(1, max_rank + 1)) for _ in range(n)]
    mods = [free(A, r) for r in ranks]
    diffs = []
    for k in range(1, n):
        tgt = mods[k - 1]
        rad = radical_basis(tgt)
        if k == 1:
            room = rad
        else:
            room = _intersection(gfp.kernel_basis(diffs[-1], p), rad, p)
        cols = []
        for _ in range(ranks[k]):
            if room.shape[1]:
                c = gfp.reduce(rng.integers(0, p, size=(room.shape[1], 1)), p)
                cols.append(gfp.matmul(room, c, p)[:, 0])
            else:
                cols.append(gfp.zeros(tgt.dim, p))
        X = np.stack(cols, axis=1)  # images of generators
        ring = X.reshape(ranks[k - 1], A.d, ranks[k]).transpose(0, 2, 1)
        diffs.append(ring_matrix_action(A, ring, A.regular))
    return ChainComplex(A, 0, mods, diffs, check=False)


def random_invertible_ring_matrix(A: Algebra, n: int, rng: np.random.Generator) -> np.ndarray:
    p = A.p
    while True:
        X = gfp.reduce(rng.integers(0, p, size=(n, n, A.d)), p)
        if gfp.rank(X[..., 0], p) == n:
            return X


def pad_and_scramble(X: ChainComplex, rng: np.random.Generator, pads: int = 2):
    """X ⊕ (random contractible R -> R pieces), then random basis changes.

    Returns the new complex and a chain isomorphism-onto-summand X -> padded.
    """
    A = X.algebra
    p = A.p
    Y = X
    R = free(A, 1)
    for _ in range(pads):
        n = int(rng.integers(X.lo + 1, X.hi + 1))
        E = ChainComplex(A, n - 1, [R, R], [gfp.identity(A.d, p)], check=False)
        Y = direct_sum_complex(Y, E)
    incl = {}
    for k in X.degrees():
        M = gfp.zeros((Y.module(k).dim, X.module(k).dim), p)
        M[:X.module(k).dim] = gfp.identity(X.module(k).dim, p)
        incl[k] = M
    P, Pinv = {}, {}
    for k in Y.degrees():
        r = Y.module(k).copies if Y.module(k).dim else 0
        if r == 0:
            P[k] = Pinv[k] = gfp.zeros((0, 0), p)
            continue
        G = ring_matrix_action(A, random_invertible_ring_matrix(A, r, rng), A.regular)
        P[k], Pinv[k] = G, gfp.inverse(G, p)
    diffs = [gfp.matmul(P[n - 1], gfp.matmul(Y.d(n), Pinv[n], p), p) for n in range(Y.lo + 1, Y.hi + 1)]
    Z = ChainComplex(A, Y.lo, list(Y.modules), diffs, check=False)
    embed = ChainMap(X, Z, {k: gfp.matmul(P[k], incl[k], p) for k in X.degrees()}, check=False)
    return Z, embed


def to_ring_matrices(X: ChainComplex) -> list[np.ndarray]:
    return [free_ring_matrix(D, X.algebra.d) for D in X.diffs]
