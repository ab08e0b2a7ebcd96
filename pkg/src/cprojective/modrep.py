"""Finitely generated modules over a validated algebra, as GF(p)-spaces.

A :class:`FinModule` is ``copies`` direct copies of one block whose action
matrices are stored in ``base``.  Free modules R^n, the powers C^n of a
semidualizing module and Hom(R^n, B) all use this block form, so large
resolutions never materialize dense action matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gfp
from .algebra import Algebra, ring_matrix_action


class ModuleError(ValueError):
    pass


class AlgebraMismatch(ModuleError):
    pass


class CapExceeded(RuntimeError):
    pass


class _Unknown:
    """Result of an isomorphism search that could not decide.

    Truth-testing raises so that an undecided search is never silently
    read as "not isomorphic".
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("Unknown isomorphism result has no truth value; compare with `is UNKNOWN`")

    def __repr__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()


@dataclass(frozen=True, eq=False)
class FinModule:
    algebra: Algebra
    base: np.ndarray = field(repr=False)
    copies: int = 1
    name: str = ""

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def block(self) -> int:
        return self.base.shape[1]

    @property
    def dim(self) -> int:
        return self.block * self.copies

    @cached_property
    def action(self) -> np.ndarray:
        """Dense action matrices, shape ``(d, dim, dim)``."""
        if self.copies == 1:
            return self.base
        out = gfp.zeros((self.algebra.d, self.dim, self.dim), self.p)
        k = self.block
        for g in range(self.copies):
            out[:, g * k:(g + 1) * k, g * k:(g + 1) * k] = self.base
        return out

    def act(self, i: int, V) -> np.ndarray:
        """``A_i @ V`` for a matrix (or vector) ``V`` of elements."""
        V = np.asarray(V)
        vec = V.ndim == 1
        if vec:
            V = V[:, None]
        if self.copies == 1:
            out = gfp.matmul(self.base[i], V, self.p)
        else:
            k, m = self.block, V.shape[1]
            V3 = V.reshape(self.copies, k, m).astype(np.int64)
            out = gfp.reduce(np.matmul(self.base[i].astype(np.int64), V3), self.p).reshape(self.dim, m)
        return out[:, 0] if vec else out

    def ract(self, V, i: int) -> np.ndarray:
        """``V @ A_i``."""
        return np.ascontiguousarray(self.act_transpose(i, np.asarray(V).T).T)

    def act_transpose(self, i: int, V) -> np.ndarray:
        V = np.asarray(V)
        if self.copies == 1:
            return gfp.matmul(self.base[i].T, V, self.p)
        k, m = self.block, V.shape[1]
        V3 = V.reshape(self.copies, k, m).astype(np.int64)
        return gfp.reduce(np.matmul(self.base[i].T.astype(np.int64), V3), self.p).reshape(self.dim, m)

    def act_element(self, r, V) -> np.ndarray:
        r = np.asarray(r)
        V = np.asarray(V)
        out = np.zeros(V.shape, dtype=np.int64)
        for i in np.flatnonzero(r):
            out += int(r[i]) * self.act(int(i), V).astype(np.int64)
        return gfp.reduce(out, self.p)

    def element_matrix(self, r) -> np.ndarray:
        return self.act_element(r, gfp.identity(self.dim, self.p))

    def power_of(self, C: "FinModule") -> int | None:
        """``n`` when this module is literally C^n (standard block form), else None."""
        if C.algebra is not self.algebra:
            return None
        if C.copies == 1 and self.base.shape == C.base.shape and np.array_equal(self.base, C.base):
            return self.copies
        if C.dim == 0:
            return None
        if self.dim % C.dim == 0 and self.dim // C.dim >= 0:
            n = self.dim // C.dim
            if n and np.array_equal(self.action, power(C, n).action):
                return n
        if self.dim == 0:
            return 0
        return None

    @property
    def is_free(self) -> bool:
        return self.free_rank is not None

    @property
    def free_rank(self) -> int | None:
        if self.dim == 0:
            return 0
        A = self.algebra
        if self.base.shape == A.regular.shape and np.array_equal(self.base, A.regular):
            return self.copies
        return None

    def check(self) -> None:
        A = self.algebra
        d, k = A.d, self.block
        if self.base.shape != (d, k, k):
            raise ModuleError(f"action has shape {self.base.shape}, expected {(d, k, k)}")
        if k and not np.array_equal(self.base[0], gfp.identity(k, self.p)):
            raise ModuleError("unit of the ring does not act as the identity")
        B = self.base.astype(np.int64)
        lhs = np.einsum("iab,jbc->ijac", B, B) % self.p
        rhs = np.einsum("ijl,lac->ijac", A.table.astype(np.int64), B) % self.p
        bad = np.argwhere((lhs != rhs).any(axis=(2, 3)))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            raise ModuleError(f"module axiom fails: A_{i} A_{j} != action of e{i}*e{j}")

    def to_json(self) -> dict:
        return {"dim": self.dim, "action": self.action.astype(int).tolist()}

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinModule{label} dim={self.dim} over {self.algebra.name or 'R'}>"


def module_from_action(A: Algebra, action, name: str = "", check: bool = True) -> FinModule:
    action = gfp.reduce(np.asarray(action), A.p)
    if action.ndim != 3:
        if action.size == 0:
            action = gfp.zeros((A.d, 0, 0), A.p)
        else:
            raise ModuleError(f"action must be a list of {A.d} square matrices")
    M = FinModule(A, np.ascontiguousarray(action), 1, name)
    if check:
        M.check()
    return M


def zero_module(A: Algebra) -> FinModule:
    return FinModule(A, gfp.zeros((A.d, 0, 0), A.p), 1, "0")


def ring_module(A: Algebra) -> FinModule:
    return FinModule(A, A.regular, 1, "R")


def free(A: Algebra, n: int) -> FinModule:
    if n == 0:
        return zero_module(A)
    return FinModule(A, A.regular, n, f"R^{n}" if n != 1 else "R")


def residue_field(A: Algebra) -> FinModule:
    base = gfp.zeros((A.d, 1, 1), A.p)
    base[0, 0, 0] = 1
    return FinModule(A, base, 1, "k")


def dual_of_ring(A: Algebra) -> FinModule:
    """Hom_k(R, k) with the contragredient action."""
    return FinModule(A, np.ascontiguousarray(A.regular.transpose(0, 2, 1)), 1, "omega")


def power(M: FinModule, n: int) -> FinModule:
    if n == 0 or M.dim == 0:
        return zero_module(M.algebra)
    name = f"{M.name}^{n * M.copies}" if M.name else ""
    return FinModule(M.algebra, M.base, M.copies * n, name)


def direct_sum(*mods: FinModule) -> FinModule:
    mods = [M for M in mods if M.dim]
    if not mods:
        raise ModuleError("direct_sum needs at least one nonzero module")
    A = mods[0].algebra
    if len(mods) == 1:
        return mods[0]
    if all(M.base is mods[0].base or np.array_equal(M.base, mods[0].base) for M in mods):
        return FinModule(A, mods[0].base, sum(M.copies for M in mods))
    n = sum(M.dim for M in mods)
    out = gfp.zeros((A.d, n, n), A.p)
    o = 0
    for M in mods:
        _same_algebra(M, mods[0])
        out[:, o:o + M.dim, o:o + M.dim] = M.action
        o += M.dim
    return FinModule(A, out, 1)


def _same_algebra(M: FinModule, N: FinModule) -> None:
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("modules live over different algebras")


# -- maps --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: FinModule
    target: FinModule
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        _same_algebra(self.source, self.target)
        m = np.asarray(self.matrix)
        if m.shape != (self.target.dim, self.source.dim):
            raise ModuleError(f"map matrix has shape {m.shape}, expected {(self.target.dim, self.source.dim)}")

    @property
    def p(self) -> int:
        return self.source.p

    def is_linear(self) -> bool:
        F = self.matrix
        for i in range(1, self.source.algebra.d):
            if not np.array_equal(self.target.act(i, F), self.source.ract(F, i)):
                return False
        return True

    def check(self) -> "ModuleMap":
        if not self.is_linear():
            raise ModuleError("map is not R-linear")
        return self

    def __call__(self, v) -> np.ndarray:
        return gfp.matmul(self.matrix, np.asarray(v).reshape(self.source.dim, -1), self.p).reshape(
            (self.target.dim,) + np.asarray(v).shape[1:]
        )

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        return ModuleMap(other.source, self.target, gfp.matmul(self.matrix, other.matrix, self.p))

    def rank(self) -> int:
        return gfp.rank(self.matrix, self.p)

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.rank() == self.source.dim

    def inverse(self) -> "ModuleMap":
        inv = gfp.inverse(self.matrix, self.p)
        if inv is None:
            raise ModuleError("map is not invertible")
        return ModuleMap(self.target, self.source, inv)


def identity_map(M: FinModule) -> ModuleMap:
    return ModuleMap(M, M, gfp.identity(M.dim, M.p))


def zero_map(M: FinModule, N: FinModule) -> ModuleMap:
    return ModuleMap(M, N, gfp.zeros((N.dim, M.dim), M.p))


def block_map(rows: list[list[ModuleMap | None]], sources: list[FinModule], targets: list[FinModule]) -> np.ndarray:
    p = sources[0].p if sources else targets[0].p
    out = gfp.zeros((sum(T.dim for T in targets), sum(S.dim for S in sources)), p)
    r0 = 0
    for i, T in enumerate(targets):
        c0 = 0
        for j, S in enumerate(sources):
            f = rows[i][j]
            if f is not None:
                out[r0:r0 + T.dim, c0:c0 + S.dim] = f.matrix if isinstance(f, ModuleMap) else f
            c0 += S.dim
        r0 += T.dim
    return out


# -- sub- and quotient modules ----------------------------------------------


@dataclass(frozen=True, eq=False)
class Submodule:
    """An R-stable subspace with echelon basis (``basis[pivots] == I``)."""

    ambient: FinModule
    basis: np.ndarray = field(repr=False)
    pivots: list[int] = field(repr=False)
    module: FinModule = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def inclusion(self) -> ModuleMap:
        return ModuleMap(self.module, self.ambient, self.basis)

    def coords(self, V) -> np.ndarray:
        return np.asarray(V)[self.pivots]

    def key(self) -> bytes:
        return canonical_key(self.basis, self.ambient.p)


def canonical_key(basis, p: int) -> bytes:
    B = np.asarray(basis)
    if B.shape[1] == 0:
        return b"0:" + str(B.shape[0]).encode()
    R, _, r = gfp.rref(B.T, p)
    return str(B.shape[0]).encode() + b":" + R[:r].astype(np.uint8 if p < 256 else np.int64).tobytes()


def _as_columns(V, n: int) -> np.ndarray:
    V = np.asarray(V)
    if V.ndim == 1:
        return V[:, None] if V.size else V.reshape(n, 0)
    if V.shape[0] != n:
        raise ModuleError(f"vectors have length {V.shape[0]}, module has dim {n}")
    return V


def _echelon(vectors, p: int):
    """Echelon basis (B[piv] = I) of the column span."""
    return gfp.column_space(vectors, p)


def submodule(M: FinModule, vectors, *, check: bool = True, echelon=None) -> Submodule:
    """Submodule spanned (as a vector space) by ``vectors``, which must be R-stable."""
    p = M.p
    vectors = gfp.reduce(_as_columns(vectors, M.dim), p)
    B, piv = echelon if echelon is not None else _echelon(vectors, p)
    s = B.shape[1]
    A = M.algebra
    base = gfp.zeros((A.d, s, s), p)
    for i in range(A.d):
        img = M.act(i, B)
        base[i] = img[piv]
        if check and i and s and not np.array_equal(gfp.matmul(B, base[i], p), img):
            raise ModuleError("subspace is not stable under the ring action")
    return Submodule(M, B, list(piv), FinModule(A, base, 1))


def generated_submodule(M: FinModule, gens) -> Submodule:
    """R-span of the given elements: span of e_i * g over all basis e_i."""
    gens = _as_columns(gens, M.dim)
    cols = [M.act(i, gens) for i in range(M.algebra.d)]
    return submodule(M, np.hstack(cols), check=False)


def radical_basis(M: FinModule) -> np.ndarray:
    """Basis of mM."""
    A = M.algebra
    if M.dim == 0 or A.d == 1:
        return gfp.zeros((M.dim, 0), M.p)
    if M.copies > 1:
        one = radical_basis(FinModule(A, M.base, 1))
        out = gfp.zeros((M.dim, one.shape[1] * M.copies), M.p)
        k, s = M.block, one.shape[1]
        for g in range(M.copies):
            out[g * k:(g + 1) * k, g * s:(g + 1) * s] = one
        return out
    imgs = np.hstack([M.base[i] for i in range(1, A.d)])
    return gfp.image_basis(imgs, M.p)


def socle_basis(M: FinModule) -> np.ndarray:
    A = M.algebra
    if A.d == 1:
        return gfp.identity(M.dim, M.p)
    stacked = np.vstack([M.action[i] for i in range(1, A.d)])
    return gfp.kernel_basis(stacked, M.p)


@dataclass(frozen=True, eq=False)
class Quotient:
    ambient: FinModule
    sub_basis: np.ndarray = field(repr=False)
    module: FinModule = field(repr=False)
    projection: np.ndarray = field(repr=False)
    section: np.ndarray = field(repr=False)

    @property
    def map(self) -> ModuleMap:
        return ModuleMap(self.ambient, self.module, self.projection)


def quotient(M: FinModule, sub) -> Quotient:
    """M / N for N given as a Submodule or as spanning columns of an R-stable subspace."""
    p = M.p
    n = M.dim
    if isinstance(sub, Submodule):
        N, piv = sub.basis, sub.pivots
    else:
        N, piv = _echelon(gfp.reduce(_as_columns(sub, n), p), p)
    pset = set(piv)
    comp = [j for j in range(n) if j not in pset]
    q = len(comp)
    P = gfp.zeros((q, n), p)
    P[np.arange(q), comp] = 1
    if piv:
        P[:, piv] = (p - N[comp, :].astype(np.int64)) % p
    S = gfp.zeros((n, q), p)
    S[comp, np.arange(q)] = 1
    A = M.algebra
    base = gfp.zeros((A.d, q, q), p)
    for i in range(A.d):
        base[i] = gfp.matmul(P, M.act(i, S), p)
    return Quotient(M, N, FinModule(A, base, 1), P, S)


def quotient_by_element(M: FinModule, x) -> Quotient:
    """M / xM."""
    return quotient(M, gfp.image_basis(M.act_element(x, gfp.identity(M.dim, M.p)), M.p))


def annihilated_by(M: FinModule, x) -> Submodule:
    """{m : x m = 0}."""
    return submodule(M, gfp.kernel_basis(M.element_matrix(x), M.p), check=False)


# -- Hom and tensor ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomModule(FinModule):
    """Hom_R(source, target) with an explicit basis of R-linear maps.

    ``maps[j]`` is the matrix of the j-th basis map; the coordinates of a
    map F are ``F.ravel()[pivots]``.
    """

    source: FinModule = None
    target: FinModule = None
    maps: np.ndarray = field(default=None, repr=False)
    pivots: np.ndarray = field(default=None, repr=False)

    @property
    def module(self) -> FinModule:
        return self

    def coords(self, F) -> np.ndarray:
        F = np.asarray(F)
        if F.ndim == 3:
            return np.ascontiguousarray(F.reshape(F.shape[0], -1)[:, self.pivots].T)
        return F.ravel()[self.pivots]

    def to_map(self, c) -> ModuleMap:
        c = np.asarray(c, dtype=np.int64)
        F = np.tensordot(c, self.maps.astype(np.int64), axes=(0, 0))
        return ModuleMap(self.source, self.target, gfp.reduce(F, self.p))

    def basis_map(self, j: int) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.maps[j])


def _hom_generic(M: FinModule, N: FinModule) -> HomModule:
    A = M.algebra
    p = A.p
    m, n = M.dim, N.dim
    rows = []
    for i in range(1, A.d):
        Ai = M.action[i].astype(np.int64)
        Bi = N.action[i].astype(np.int64)
        rows.append(np.kron(np.eye(n, dtype=np.int64), Ai.T) - np.kron(Bi, np.eye(m, dtype=np.int64)))
    if rows and m * n:
        K, free_cols = gfp.kernel(np.vstack(rows) % p, p)
    else:
        K, free_cols = gfp.identity(m * n, p), list(range(m * n))
    h = K.shape[1]
    maps = np.ascontiguousarray(K.T.reshape(h, n, m))
    pivots = np.array(free_cols, dtype=np.int64)
    base = gfp.zeros((A.d, h, h), p)
    for i in range(A.d):
        img = np.matmul(N.action[i].astype(np.int64), maps.astype(np.int64)) % p
        base[i] = img.reshape(h, -1)[:, pivots].T
    return HomModule(A, base, 1, "", M, N, maps, pivots)


def _hom_from_ring(N: FinModule) -> HomModule:
    A = N.algebra
    n, d = N.dim, A.d
    # basis map a sends 1 to e_a, hence e_j to A_j e_a
    maps = np.ascontiguousarray(N.action.transpose(2, 1, 0))
    pivots = np.arange(n, dtype=np.int64) * d
    Nd = FinModule(A, N.action, 1)
    return HomModule(A, Nd.base, 1, "", ring_module(A), N, maps, pivots)


def _hom_power_source(H: HomModule, M: FinModule, copies: int) -> HomModule:
    """Hom(B^c, N) from H = Hom(B, N)."""
    h, n, kb = H.maps.shape
    p = H.p
    maps = gfp.zeros((copies * h, n, copies * kb), p)
    pivots = np.zeros(copies * h, dtype=np.int64)
    rr, cc = np.divmod(H.pivots, kb)
    for g in range(copies):
        maps[g * h:(g + 1) * h, :, g * kb:(g + 1) * kb] = H.maps
        pivots[g * h:(g + 1) * h] = rr * (copies * kb) + g * kb + cc
    return HomModule(H.algebra, H.base, H.copies * copies, "", M, H.target, maps, pivots)


def _hom_power_target(H: HomModule, N: FinModule, copies: int) -> HomModule:
    """Hom(M, D^c) from H = Hom(M, D)."""
    h, kd, m = H.maps.shape
    p = H.p
    maps = gfp.zeros((copies * h, copies * kd, m), p)
    pivots = np.zeros(copies * h, dtype=np.int64)
    rr, cc = np.divmod(H.pivots, m)
    for g in range(copies):
        maps[g * h:(g + 1) * h, g * kd:(g + 1) * kd, :] = H.maps
        pivots[g * h:(g + 1) * h] = (g * kd + rr) * m + cc
    return HomModule(H.algebra, H.base, H.copies * copies, "", H.source, N, maps, pivots)


def hom_module(M: FinModule, N: FinModule) -> HomModule:
    """Hom_R(M, N): solution space of F A_i^M = A_i^N F."""
    _same_algebra(M, N)
    A = M.algebra
    if M.dim == 0 or N.dim == 0:
        return HomModule(A, gfp.zeros((A.d, 0, 0), A.p), 1, "", M, N,
                         gfp.zeros((0, N.dim, M.dim), A.p), np.zeros(0, dtype=np.int64))
    if M.copies > 1:
        H = hom_module(FinModule(A, M.base, 1), N)
        return _hom_power_source(H, M, M.copies)
    if N.copies > 1:
        H = hom_module(M, FinModule(A, N.base, 1))
        return _hom_power_target(H, N, N.copies)
    if M.free_rank == 1:
        H = _hom_from_ring(N)
        return HomModule(A, H.base, 1, "", M, N, H.maps, H.pivots)
    return _hom_generic(M, N)


def hom_post(H1: HomModule, H2: HomModule, phi: ModuleMap) -> ModuleMap:
    """Hom(M, phi): Hom(M, N) -> Hom(M, N'), f -> phi f."""
    p = H1.p
    if H1.dim == 0 or H2.dim == 0:
        return zero_map(H1, H2)
    imgs = np.matmul(phi.matrix.astype(np.int64), H1.maps.astype(np.int64)) % p
    return ModuleMap(H1, H2, gfp.reduce(H2.coords(imgs), p))


def hom_pre(H1: HomModule, H2: HomModule, psi: ModuleMap) -> ModuleMap:
    """Hom(psi, N): Hom(M, N) -> Hom(M', N), f -> f psi."""
    p = H1.p
    if H1.dim == 0 or H2.dim == 0:
        return zero_map(H1, H2)
    imgs = np.matmul(H1.maps.astype(np.int64), psi.matrix.astype(np.int64)) % p
    return ModuleMap(H1, H2, gfp.reduce(H2.coords(imgs), p))


@dataclass(frozen=True, eq=False)
class TensorModule(FinModule):
    """M ⊗_R N as a quotient of M ⊗_k N (index ``a * N.dim + b``)."""

    left: FinModule = None
    right: FinModule = None
    projection: np.ndarray = field(default=None, repr=False)
    section: np.ndarray = field(default=None, repr=False)

    @property
    def module(self) -> FinModule:
        return self

    def pure(self, u, v) -> np.ndarray:
        """Class of u ⊗ v."""
        t = np.kron(np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)) % self.p
        return gfp.matmul(self.projection, gfp.reduce(t, self.p)[:, None], self.p)[:, 0]


def _tensor_generic(M: FinModule, N: FinModule) -> TensorModule:
    A = M.algebra
    p = A.p
    m, n = M.dim, N.dim
    Im = np.eye(m, dtype=np.int64)
    In = np.eye(n, dtype=np.int64)
    rel = [np.kron(M.action[i].astype(np.int64), In) - np.kron(Im, N.action[i].astype(np.int64))
           for i in range(1, A.d)]
    span = gfp.image_basis(np.hstack(rel) % p, p) if rel else gfp.zeros((m * n, 0), p)
    big = FinModule(A, gfp.reduce(np.stack([np.kron(M.action[i].astype(np.int64), In) for i in range(A.d)]), p))
    Q = quotient(big, span)
    return TensorModule(A, Q.module.base, 1, "", M, N, Q.projection, Q.section)


def _tensor_with_free(M: FinModule, b: int, free_on_right: bool) -> TensorModule:
    """M ⊗ R^b ≅ M^b (or R^b ⊗ M), with the identification made explicit."""
    A = M.algebra
    p, d, m = A.p, A.d, M.dim
    P = gfp.zeros((b * m, m * d * b), p)  # onto M^b, copy-major
    S = gfp.zeros((m * d * b, b * m), p)
    acts = M.action
    for g in range(b):
        for j in range(d):
            # u ⊗ (e_j in copy g) -> A_j u in copy g
            for a in range(m):
                col = a * d * b + g * d + j if free_on_right else (g * d + j) * m + a
                P[g * m:(g + 1) * m, col] = acts[j][:, a]
        for a in range(m):
            row = a * d * b + g * d if free_on_right else (g * d) * m + a
            S[row, g * m + a] = 1
    T = power(M, b)
    if free_on_right:
        left, right = M, free(A, b)
    else:
        left, right = free(A, b), M
    return TensorModule(A, T.base, T.copies, "", left, right, P, S)


def tensor_module(M: FinModule, N: FinModule) -> TensorModule:
    _same_algebra(M, N)
    A = M.algebra
    if M.dim == 0 or N.dim == 0:
        z = zero_module(A)
        return TensorModule(A, z.base, 1, "", M, N, gfp.zeros((0, M.dim * N.dim), A.p),
                            gfp.zeros((M.dim * N.dim, 0), A.p))
    if N.free_rank is not None and M.dim * N.dim <= 4096:
        return _tensor_with_free(M, N.free_rank, True)
    if M.free_rank is not None and M.dim * N.dim <= 4096:
        return _tensor_with_free(N, M.free_rank, False)
    return _tensor_generic(M, N)


def tensor_map(T1: TensorModule, T2: TensorModule, phi: ModuleMap) -> ModuleMap:
    """C ⊗ phi : C ⊗ N -> C ⊗ N' (left factors must agree)."""
    p = T1.p
    c = T1.left.dim
    big = np.kron(np.eye(c, dtype=np.int64), phi.matrix.astype(np.int64)) % p
    mat = gfp.matmul(T2.projection, gfp.matmul(gfp.reduce(big, p), T1.section, p), p)
    return ModuleMap(T1, T2, mat)


# -- natural maps --------------------------------------------------------------


def natural_eval(C: FinModule, M: FinModule) -> ModuleMap:
    """C ⊗ Hom(C, M) -> M, c ⊗ f -> f(c)."""
    H = hom_module(C, M)
    T = tensor_module(C, H)
    c, h = C.dim, H.dim
    p = C.p
    E = gfp.zeros((M.dim, c * h), p)
    for a in range(c):
        for j in range(h):
            E[:, a * h + j] = H.maps[j][:, a]
    return ModuleMap(T, M, gfp.matmul(E, T.section, p))


def natural_bidual(C: FinModule, M: FinModule) -> ModuleMap:
    """M -> Hom(Hom(M, C), C), m -> (f -> f(m))."""
    H1 = hom_module(M, C)
    H2 = hom_module(H1, C)
    p = C.p
    # image of e_m is the map H1 -> C whose j-th column is f_j(e_m)
    G = np.ascontiguousarray(H1.maps.transpose(2, 1, 0))  # (m, c, h)
    return ModuleMap(M, H2, H2.coords(G) if H2.dim else gfp.zeros((0, M.dim), p))


def homothety(C: FinModule) -> ModuleMap:
    """R -> Hom(C, C), r -> multiplication by r."""
    A = C.algebra
    H = hom_module(C, C)
    imgs = C.action if C.copies == 1 else np.stack([C.element_matrix(A.basis_element(i)) for i in range(A.d)])
    return ModuleMap(ring_module(A), H, H.coords(imgs) if H.dim else gfp.zeros((0, A.d), A.p))


# -- generators, covers, resolutions -----------------------------------------


def min_generators(M: FinModule) -> int:
    """ν(M) = dim M/mM."""
    if M.copies > 1:
        return M.copies * min_generators(FinModule(M.algebra, M.base, 1))
    return M.dim - radical_basis(M).shape[1]


def top_lifts(M: FinModule) -> list[int]:
    """Standard basis vectors of M whose classes form a basis of M/mM."""
    return gfp.complement_indices(radical_basis(M), M.dim, M.p)


@dataclass(frozen=True, eq=False)
class Cover:
    module: FinModule
    free: FinModule
    generators: np.ndarray = field(repr=False)  # columns in M
    surjection: ModuleMap = field(repr=False)
    kernel: Submodule | None = field(repr=False)

    @property
    def rank(self) -> int:
        return self.free.copies if self.free.dim else 0

    @property
    def inclusion(self) -> ModuleMap:
        return self.kernel.inclusion


def _surjection_matrix(M: FinModule, G: np.ndarray) -> np.ndarray:
    A = M.algebra
    nu = G.shape[1]
    imgs = np.stack([M.act(j, G) for j in range(A.d)], axis=2)  # (n, nu, d)
    return np.ascontiguousarray(imgs.reshape(M.dim, nu * A.d))


def minimal_cover(M: FinModule, with_kernel: bool = True) -> Cover:
    A = M.algebra
    p = M.p
    if M.dim == 0:
        F = zero_module(A)
        z = gfp.zeros((0, 0), p)
        return Cover(M, F, z, ModuleMap(F, M, z), submodule(F, gfp.zeros((0, 0), p), check=False))
    idx = top_lifts(M)
    G = gfp.zeros((M.dim, len(idx)), p)
    G[idx, np.arange(len(idx))] = 1
    F = free(A, len(idx))
    S = _surjection_matrix(M, G)
    surj = ModuleMap(F, M, S)
    K = None
    if with_kernel:
        Kb, piv = gfp.kernel(S, p)
        K = submodule(F, Kb, check=False, echelon=(Kb, piv))
    return Cover(M, F, G, surj, K)


@dataclass(eq=False)
class FreeResolution:
    """Minimal free resolution F_L -> ... -> F_0 -> M stored via ring matrices.

    ``ring_matrices[i]`` is ∂_{i+1} : F_{i+1} -> F_i of shape
    ``(betti[i], betti[i+1], d)``.
    """

    module: FinModule
    length: int
    betti: list[int]
    ring_matrices: list[np.ndarray] = field(repr=False)
    augmentation: ModuleMap = field(repr=False)
    syzygies: list[FinModule] = field(repr=False)
    terminated: bool = False
    period: tuple[int, int] | None = None

    @property
    def algebra(self) -> Algebra:
        return self.module.algebra

    def free_module(self, i: int) -> FinModule:
        return free(self.algebra, self.betti[i]) if 0 <= i < len(self.betti) else zero_module(self.algebra)

    def differential(self, i: int) -> np.ndarray:
        """GF(p) matrix of ∂_i : F_i -> F_{i-1}."""
        A = self.algebra
        return ring_matrix_action(A, self.ring_matrices[i - 1], A.regular)

    @cached_property
    def complex(self):
        from .complexes import ChainComplex

        A = self.algebra
        mods = [self.free_module(i) for i in range(len(self.betti))]
        diffs = [self.differential(i) for i in range(1, len(self.betti))]
        return ChainComplex(A, 0, mods, diffs, check=False)

    def is_minimal(self) -> bool:
        return not any(X[..., 0].any() for X in self.ring_matrices if X.size)


def minimal_free_resolution(M: FinModule, length: int, detect_period: bool = True,
                            iso_limit: int = 24) -> FreeResolution:
    """Iterated minimal covers up to F_length (stops early when a syzygy is 0)."""
    A = M.algebra
    betti: list[int] = []
    mats: list[np.ndarray] = []
    syz: list[FinModule] = [M]
    period = None
    cover = minimal_cover(M, with_kernel=length > 0)
    betti.append(cover.rank)
    aug = cover.surjection
    terminated = False
    prev = cover
    for i in range(1, length + 1):
        K = prev.kernel
        if K is None or K.dim == 0:
            terminated = True
            break
        Om = K.module
        syz.append(Om)
        cov = minimal_cover(Om, with_kernel=i < length)
        b_prev, b = prev.rank, cov.rank
        cols = gfp.matmul(K.basis, cov.generators, A.p) if cov.generators.shape[1] else gfp.zeros(
            (K.basis.shape[0], 0), A.p)
        mats.append(np.ascontiguousarray(cols.reshape(b_prev, A.d, b).transpose(0, 2, 1)))
        betti.append(b)
        if detect_period and period is None and Om.dim <= iso_limit:
            for j in range(len(syz) - 1):
                S = syz[j]
                if S.dim == Om.dim and min_generators(S) == b:
                    found = module_iso(S, Om)
                    if isinstance(found, ModuleMap):
                        period = (j, len(syz) - 1 - j)
                        break
        prev = cov
    else:
        if prev.kernel is not None and prev.kernel.dim == 0:
            terminated = True
    return FreeResolution(M, length, betti, mats, aug, syz, terminated, period)


def pd(M: FinModule) -> float:
    """Projective dimension over a depth-0 local ring: 0 if free, else infinity."""
    cover = minimal_cover(M)
    return 0 if cover.kernel.dim == 0 else math.inf


def betti_numbers(M: FinModule, length: int) -> list[int]:
    return minimal_free_resolution(M, length, detect_period=False).betti


# -- isomorphism search ----------------------------------------------------------


def _top(M: FinModule):
    Q = quotient(M, radical_basis(M))
    return Q.projection, Q.section


def _batched_full_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Which of the square matrices ``mats[k]`` are invertible mod p."""
    a = mats.astype(np.int64) % p
    N, n, _ = a.shape
    ok = np.ones(N, dtype=bool)
    for c in range(n):
        col = a[:, c:, c]
        has = col != 0
        ok &= has.any(axis=1)
        piv = np.argmax(has, axis=1) + c
        idx = np.arange(N)
        rows_c = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = rows_c
        lead = a[idx, c, c]
        inv = np.array([pow(int(v), -1, p) if v else 0 for v in lead], dtype=np.int64) \
            if p > 2 else lead
        a[:, c] = (a[:, c] * inv[:, None]) % p
        f = a[:, c + 1:, c].copy()
        a[:, c + 1:] = (a[:, c + 1:] - f[:, :, None] * a[:, c][:, None, :]) % p
    return ok


def module_iso(M: FinModule, N: FinModule, seed: int = 0, exhaustive_limit: int = 2**16,
               samples: int = 256):
    """Search Hom(M, N) for an isomorphism.

    Returns a certified :class:`ModuleMap`, ``None`` when no isomorphism
    exists, or :data:`UNKNOWN` when random sampling failed to find one.
    A map is an isomorphism iff dims agree and it is onto N/mN (Nakayama).
    """
    _same_algebra(M, N)
    p = M.p
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return ModuleMap(M, N, gfp.zeros((0, 0), p))
    nu = min_generators(M)
    if nu != min_generators(N):
        return None
    H = hom_module(M, N)
    h = H.dim
    if h == 0:
        return None
    PN, _ = _top(N)
    _, SM = _top(M)
    tops = np.matmul(np.matmul(PN.astype(np.int64), H.maps.astype(np.int64)) % p,
                     SM.astype(np.int64)) % p  # (h, nu, nu)
    flat = tops.reshape(h, nu * nu)
    if not flat.any():
        return None
    # work only in the span of the top matrices
    tb, _ = gfp.column_space(flat.T, p)
    r = tb.shape[1]

    def certify(coeffs):
        F = H.to_map(coeffs)
        if F.is_iso() and F.is_linear():
            return F
        return None

    def lift(c_top):
        # coefficients on H whose top equals tb @ c_top
        target = gfp.matmul(tb, c_top[:, None], p)[:, 0]
        return gfp.solve(gfp.reduce(flat.T, p), target, p)

    if p**r <= exhaustive_limit:
        chunk = 4096
        total = p**r
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk))
            digits = np.stack([(idx // p**k) % p for k in range(r)], axis=1)
            mats = (digits @ tb.T.astype(np.int64)) % p
            good = np.flatnonzero(_batched_full_rank(mats.reshape(-1, nu, nu), p))
            if good.size:
                c = lift(gfp.reduce(digits[good[0]], p))
                found = certify(c)
                if found is not None:
                    return found
        return None
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        c = gfp.reduce(rng.integers(0, p, size=h), p)
        top = (c.astype(np.int64) @ flat.astype(np.int64)) % p
        if _batched_full_rank(top.reshape(1, nu, nu), p)[0]:
            found = certify(c)
            if found is not None:
                return found
    return UNKNOWN


def are_isomorphic(M: FinModule, N: FinModule, seed: int = 0):
    res = module_iso(M, N, seed=seed)
    if res is UNKNOWN:
        return UNKNOWN
    return res is not None


# -- submodule lattice -----------------------------------------------------------


def submodules(M: FinModule, cap: int = 10_000) -> list[Submodule]:
    """All submodules of a small module: cyclic ones, then closure under sums."""
    p = M.p
    if M.p**M.dim > 2**12:
        raise CapExceeded(f"module has {M.p}^{M.dim} elements; enumeration limited to 2^12")
    found: dict[bytes, np.ndarray] = {}

    def add(B):
        key = canonical_key(B, p)
        if key not in found:
            found[key] = B
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} submodules")
            return True
        return False

    add(gfp.zeros((M.dim, 0), p))
    for coords in itertools.product(range(p), repeat=M.dim):
        v = gfp.reduce(np.array(coords), p)
        if not v.any():
            continue
        add(gfp.image_basis(np.stack([M.act(i, v) for i in range(M.algebra.d)], axis=1), p))
    frontier = list(found.values())
    while frontier:
        current = list(found.values())
        new = []
        for B1 in frontier:
            for B2 in current:
                if B1.shape[1] == 0 or B2.shape[1] == 0:
                    continue
                S = gfp.image_basis(np.hstack([B1, B2]), p)
                if add(S):
                    new.append(S)
        frontier = new
    subs = [submodule(M, B, check=False) for B in found.values()]
    subs.sort(key=lambda s: (s.dim, s.key()))
    return subs


def random_element(M: FinModule, rng) -> np.ndarray:
    return gfp.reduce(rng.integers(0, M.p, size=M.dim), M.p)
