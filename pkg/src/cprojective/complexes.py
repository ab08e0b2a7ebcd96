"""Bounded chain complexes of finite modules (homological indexing).

``X.modules[k]`` sits in degree ``X.lo + k`` and ``X.diffs[k]`` is the
matrix of ∂_{lo+k+1} : X_{lo+k+1} -> X_{lo+k}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gfp
from .algebra import Algebra, ring_identity, ring_matrix_action, ring_matrix_mul
from .modrep import (
    FinModule,
    ModuleMap,
    Submodule,
    TensorModule,
    _tensor_with_free,
    direct_sum,
    free,
    hom_module,
    hom_post,
    hom_pre,
    power,
    quotient,
    radical_basis,
    submodule,
    tensor_map,
    tensor_module,
    zero_module,
)


class ComplexError(ValueError):
    pass


class NonFreeInput(ComplexError):
    pass


def _mat(f) -> np.ndarray:
    return f.matrix if isinstance(f, ModuleMap) else np.asarray(f)


@dataclass(eq=False)
class ChainComplex:
    algebra: Algebra
    lo: int
    modules: list[FinModule]
    diffs: list[np.ndarray] = field(repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        p = self.algebra.p
        if not self.modules:
            self.modules = [zero_module(self.algebra)]
        self.diffs = [gfp.reduce(_mat(f), p) for f in self.diffs]
        if len(self.diffs) != len(self.modules) - 1:
            raise ComplexError(f"{len(self.modules)} modules need {len(self.modules) - 1} differentials")
        for k, D in enumerate(self.diffs):
            src, tgt = self.modules[k + 1], self.modules[k]
            if D.shape != (tgt.dim, src.dim):
                raise ComplexError(f"∂_{self.lo + k + 1} has shape {D.shape}, expected {(tgt.dim, src.dim)}")
        if self.check:
            self.validate()

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    @property
    def p(self) -> int:
        return self.algebra.p

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def module(self, n: int) -> FinModule:
        if self.lo <= n <= self.hi:
            return self.modules[n - self.lo]
        return zero_module(self.algebra)

    def d(self, n: int) -> np.ndarray:
        """Matrix of ∂_n : X_n -> X_{n-1} (zero outside the support)."""
        if self.lo < n <= self.hi:
            return self.diffs[n - self.lo - 1]
        return gfp.zeros((self.module(n - 1).dim, self.module(n).dim), self.p)

    def differential(self, n: int) -> ModuleMap:
        return ModuleMap(self.module(n), self.module(n - 1), self.d(n))

    def validate(self) -> None:
        p = self.p
        for n in range(self.lo + 2, self.hi + 1):
            if not gfp.is_zero(gfp.matmul(self.d(n - 1), self.d(n), p)):
                raise ComplexError(f"∂_{n - 1} ∘ ∂_{n} != 0")
        for n in range(self.lo + 1, self.hi + 1):
            if not self.differential(n).is_linear():
                raise ComplexError(f"∂_{n} is not R-linear")

    def dims(self) -> list[int]:
        return [M.dim for M in self.modules]

    @cached_property
    def _ranks(self) -> dict[int, int]:
        return {n: gfp.rank(self.d(n), self.p) for n in range(self.lo + 1, self.hi + 1)}

    def rank_d(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def homology_dim(self, n: int) -> int:
        return self.module(n).dim - self.rank_d(n) - self.rank_d(n + 1)

    def homology_dims(self) -> dict[int, int]:
        return {n: self.homology_dim(n) for n in self.degrees()}

    def is_exact(self, degrees=None) -> bool:
        degs = self.degrees() if degrees is None else degrees
        return all(self.homology_dim(n) == 0 for n in degs)

    def first_nonexact(self, degrees=None):
        degs = self.degrees() if degrees is None else degrees
        for n in degs:
            if self.homology_dim(n):
                return n
        return None

    def support(self) -> tuple[int, int] | None:
        nz = [n for n in self.degrees() if self.module(n).dim]
        return (nz[0], nz[-1]) if nz else None

    def length(self) -> int:
        s = self.support()
        return 0 if s is None else s[1] - s[0]

    def truncate(self, lo: int, hi: int) -> "ChainComplex":
        mods = [self.module(n) for n in range(lo, hi + 1)]
        diffs = [self.d(n) for n in range(lo + 1, hi + 1)]
        return ChainComplex(self.algebra, lo, mods, diffs, check=False)

    def trimmed(self) -> "ChainComplex":
        s = self.support()
        if s is None:
            return ChainComplex(self.algebra, 0, [zero_module(self.algebra)], [], check=False)
        return self.truncate(*s)

    def to_json(self, ring_ref: str | None = None) -> dict:
        return {
            "ring": ring_ref or self.algebra.name,
            "lo": self.lo,
            "hi": self.hi,
            "modules": [M.to_json() for M in self.modules],
            "differentials": [D.astype(int).tolist() for D in self.diffs],
        }

    def __repr__(self):
        return f"<ChainComplex degrees {self.lo}..{self.hi} dims {self.dims()}>"


def complex_from_json(data: dict, A: Algebra) -> ChainComplex:
    from .modrep import module_from_action

    mods = []
    for m in data["modules"]:
        act = np.asarray(m["action"], dtype=np.int64)
        if act.size == 0:
            act = np.zeros((A.d, 0, 0), dtype=np.int64)
        mods.append(module_from_action(A, act))
    lo = int(data["lo"])
    if "hi" in data and int(data["hi"]) != lo + len(mods) - 1:
        raise ComplexError("hi does not match the number of modules")
    diffs = []
    for k, D in enumerate(data["differentials"]):
        D = np.asarray(D, dtype=np.int64)
        if D.size == 0:
            D = D.reshape(mods[k].dim, mods[k + 1].dim)
        diffs.append(D)
    return ChainComplex(A, lo, mods, diffs)


def concentrated(M: FinModule, n: int = 0) -> ChainComplex:
    return ChainComplex(M.algebra, n, [M], [], check=False)


def shift(X: ChainComplex, s: int = 1) -> ChainComplex:
    """(Σ^s X)_n = X_{n-s} with differential (-1)^s ∂."""
    sign = -1 if s % 2 else 1
    diffs = [gfp.reduce(sign * D.astype(np.int64), X.p) for D in X.diffs]
    return ChainComplex(X.algebra, X.lo + s, list(X.modules), diffs, check=False)


def direct_sum_complex(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    mods = [_sum2(X.module(n), Y.module(n)) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo + 1, hi + 1):
        D = gfp.zeros((mods[n - 1 - lo].dim, mods[n - lo].dim), X.p)
        a, b = X.module(n - 1).dim, X.module(n).dim
        D[:a, :b] = X.d(n)
        D[a:, b:] = Y.d(n)
        diffs.append(D)
    return ChainComplex(X.algebra, lo, mods, diffs, check=False)


def _sum2(M: FinModule, N: FinModule) -> FinModule:
    if M.dim == 0:
        return N
    if N.dim == 0:
        return M
    return direct_sum(M, N)


# -- chain maps -----------------------------------------------------------------


@dataclass(eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict[int, np.ndarray] = field(repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        p = self.source.p
        comps = {}
        for n, f in self.components.items():
            f = gfp.reduce(_mat(f), p)
            if f.shape != (self.target.module(n).dim, self.source.module(n).dim):
                raise ComplexError(f"component {n} has shape {f.shape}")
            comps[n] = f
        self.components = comps
        if self.check:
            self.validate()

    @property
    def p(self) -> int:
        return self.source.p

    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def f(self, n: int) -> np.ndarray:
        if n in self.components:
            return self.components[n]
        return gfp.zeros((self.target.module(n).dim, self.source.module(n).dim), self.p)

    def component(self, n: int) -> ModuleMap:
        return ModuleMap(self.source.module(n), self.target.module(n), self.f(n))

    def commutes(self) -> bool:
        p = self.p
        for n in range(min(self.source.lo, self.target.lo) + 1, max(self.source.hi, self.target.hi) + 1):
            lhs = gfp.matmul(self.target.d(n), self.f(n), p)
            rhs = gfp.matmul(self.f(n - 1), self.source.d(n), p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def validate(self) -> None:
        if not self.commutes():
            raise ComplexError("chain map does not commute with the differentials")
        for n in self.degrees():
            if not self.component(n).is_linear():
                raise ComplexError(f"component {n} is not R-linear")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        degs = set(self.components) | set(other.components)
        comps = {n: gfp.matmul(self.f(n), other.f(n), self.p) for n in degs}
        return ChainMap(other.source, self.target, comps, check=False)

    def is_degreewise_iso(self) -> bool:
        return all(self.component(n).is_iso() for n in self.degrees())


def identity_chain_map(X: ChainComplex) -> ChainMap:
    return ChainMap(X, X, {n: gfp.identity(X.module(n).dim, X.p) for n in X.degrees()}, check=False)


def zero_chain_map(X: ChainComplex, Y: ChainComplex) -> ChainMap:
    return ChainMap(X, Y, {}, check=False)


# -- augmented complexes ----------------------------------------------------------


@dataclass(eq=False)
class AugmentedComplex:
    """X with ε : X_0 -> M (``kind="resolution"``) or ε : M -> X_0 (``"coresolution"``)."""

    complex: ChainComplex
    module: FinModule
    augmentation: ModuleMap = field(repr=False)
    kind: str = "resolution"

    def __post_init__(self):
        X, p = self.complex, self.complex.p
        eps = self.augmentation.matrix
        if self.kind == "resolution":
            comp = gfp.matmul(eps, X.d(1), p)
        else:
            comp = gfp.matmul(X.d(0), eps, p)
        if not gfp.is_zero(comp):
            raise ComplexError("augmentation does not compose to zero with the differential")

    def augmented(self) -> ChainComplex:
        """X⁺ (M in degree -1) or ⁺Y (M in degree +1)."""
        X = self.complex
        if self.kind == "resolution":
            lo = min(X.lo, 0)
            mods = [X.module(n) for n in range(lo, X.hi + 1)]
            diffs = [X.d(n) for n in range(lo + 1, X.hi + 1)]
            if lo < 0:
                raise ComplexError("resolution complexes live in degrees >= 0")
            return ChainComplex(X.algebra, -1, [self.module] + mods, [self.augmentation.matrix] + diffs, check=False)
        hi = max(X.hi, 0)
        mods = [X.module(n) for n in range(X.lo, hi + 1)] + [self.module]
        diffs = [X.d(n) for n in range(X.lo + 1, hi + 1)] + [self.augmentation.matrix]
        return ChainComplex(X.algebra, X.lo, mods, diffs, check=False)


# -- cone and homology ----------------------------------------------------------------


def cone(alpha: ChainMap) -> ChainComplex:
    """Cone_n = B_n ⊕ A_{n-1}, ∂ = [[∂B_n, α_{n-1}], [0, -∂A_{n-1}]]."""
    A, B = alpha.source, alpha.target
    p = alpha.p
    lo = min(B.lo, A.lo + 1)
    hi = max(B.hi, A.hi + 1)
    mods = [_sum2(B.module(n), A.module(n - 1)) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo + 1, hi + 1):
        bn, an1 = B.module(n).dim, A.module(n - 1).dim
        bn1, an2 = B.module(n - 1).dim, A.module(n - 2).dim
        D = gfp.zeros((bn1 + an2, bn + an1), p)
        D[:bn1, :bn] = B.d(n)
        D[:bn1, bn:] = alpha.f(n - 1)
        D[bn1:, bn:] = gfp.reduce(-A.d(n - 1).astype(np.int64), p)
        diffs.append(D)
    C = ChainComplex(A.algebra, lo, mods, diffs, check=False)
    for n in range(lo + 2, hi + 1):
        if not gfp.is_zero(gfp.matmul(C.d(n - 1), C.d(n), p)):
            raise ComplexError("cone differential does not square to zero; input is not a chain map")
    return C


@dataclass(eq=False)
class HomologyData:
    degree: int
    cycles: Submodule = field(repr=False)
    module: FinModule = field(repr=False)
    projection: np.ndarray = field(repr=False)  # cycle coords -> homology
    section: np.ndarray = field(repr=False)  # homology -> cycle coords

    @property
    def dim(self) -> int:
        return self.module.dim


def homology_data(X: ChainComplex, n: int) -> HomologyData:
    p = X.p
    Xn = X.module(n)
    Z = submodule(Xn, gfp.kernel_basis(X.d(n), p), check=False)
    B = gfp.image_basis(X.d(n + 1), p)
    Bz = B[Z.pivots] if B.shape[1] else gfp.zeros((Z.dim, 0), p)
    Q = quotient(Z.module, Bz)
    return HomologyData(n, Z, Q.module, Q.projection, Q.section)


def homology(X: ChainComplex, n: int) -> FinModule:
    """H_n(X) = ker ∂_n / im ∂_{n+1} with the induced action."""
    return homology_data(X, n).module


def induced_map(alpha: ChainMap, n: int, hs: HomologyData | None = None,
                ht: HomologyData | None = None) -> ModuleMap:
    """H_n(α) : H_n(A) -> H_n(B)."""
    p = alpha.p
    hs = hs or homology_data(alpha.source, n)
    ht = ht or homology_data(alpha.target, n)
    reps = gfp.matmul(hs.cycles.basis, hs.section, p)
    imgs = gfp.matmul(alpha.f(n), reps, p)
    mat = gfp.matmul(ht.projection, ht.cycles.coords(imgs), p)
    return ModuleMap(hs.module, ht.module, mat)


@dataclass
class QuasiIsoCertificate:
    is_quasiiso: bool
    method: str
    ranks: dict[int, int] = field(repr=False)
    dims: dict[int, int] = field(repr=False)
    witness_degree: int | None = None
    map: ChainMap | None = field(default=None, repr=False)

    def recheck(self) -> bool:
        return all(self.dims[n] == self.ranks.get(n, 0) + self.ranks.get(n + 1, 0) for n in self.dims)


def is_quasiiso(alpha: ChainMap) -> QuasiIsoCertificate:
    """Quasi-isomorphism test through acyclicity of the cone."""
    C = cone(alpha)
    ranks = {n: C.rank_d(n) for n in range(C.lo + 1, C.hi + 1)}
    dims = {n: C.module(n).dim for n in C.degrees()}
    bad = C.first_nonexact()
    # H_n(cone) ≠ 0 corresponds to H_{n-1}(α) failing; report the α degree
    return QuasiIsoCertificate(bad is None, "cone-acyclicity", ranks, dims,
                               None if bad is None else bad - 1, alpha)


def homology_isos(alpha: ChainMap) -> bool:
    """Independent check: every H_n(α) is an isomorphism."""
    for n in alpha.degrees():
        f = induced_map(alpha, n)
        if not (f.source.dim == f.target.dim and f.rank() == f.source.dim):
            return False
    return True


# -- functors ----------------------------------------------------------------------------


def hom_from(C: FinModule, X: ChainComplex) -> ChainComplex:
    """Hom(C, X) degreewise."""
    Hs = {n: hom_module(C, X.module(n)) for n in X.degrees()}
    diffs = [hom_post(Hs[n], Hs[n - 1], X.differential(n)) for n in range(X.lo + 1, X.hi + 1)]
    return ChainComplex(X.algebra, X.lo, [Hs[n] for n in X.degrees()], diffs, check=False)


def hom_from_map(C: FinModule, alpha: ChainMap, HA: ChainComplex, HB: ChainComplex) -> ChainMap:
    comps = {n: hom_post(HA.module(n), HB.module(n), alpha.component(n)).matrix
             for n in alpha.degrees() if HA.module(n).dim and HB.module(n).dim}
    return ChainMap(HA, HB, comps, check=False)


def hom_into(X: ChainComplex, C: FinModule) -> ChainComplex:
    """Hom(X, C) reindexed homologically: degree n holds Hom(X_{-n}, C)."""
    Hs = {n: hom_module(X.module(-n), C) for n in range(-X.hi, -X.lo + 1)}
    diffs = [hom_pre(Hs[n], Hs[n - 1], X.differential(1 - n)) for n in range(-X.hi + 1, -X.lo + 1)]
    return ChainComplex(X.algebra, -X.hi, [Hs[n] for n in range(-X.hi, -X.lo + 1)], diffs, check=False)


def free_ring_matrix(phi: np.ndarray, d: int) -> np.ndarray:
    """Ring matrix of a GF(p) map between free modules (image of each e_h)."""
    rows, cols = phi.shape[0] // d, phi.shape[1] // d
    X = np.asarray(phi)[:, ::d].reshape(rows, d, cols)
    return np.ascontiguousarray(X.transpose(0, 2, 1))


def tensor_with(C: FinModule, X: ChainComplex) -> ChainComplex:
    """C ⊗ X degreewise; free modules R^b become C^b."""
    A = X.algebra
    if all(M.free_rank is not None for M in X.modules):
        mods = [power(C, M.free_rank) for M in X.modules]
        diffs = [ring_matrix_action(A, free_ring_matrix(D, A.d), C.action) for D in X.diffs]
        return ChainComplex(A, X.lo, mods, diffs, check=False)
    Ts = {n: tensor_module(C, X.module(n)) for n in X.degrees()}
    diffs = [tensor_map(Ts[n], Ts[n - 1], X.differential(n)) for n in range(X.lo + 1, X.hi + 1)]
    return ChainComplex(A, X.lo, [Ts[n] for n in X.degrees()], diffs, check=False)


def _as_tensor(C: FinModule, T: FinModule, M: FinModule) -> TensorModule:
    if isinstance(T, TensorModule):
        return T
    # literal powers C^b share coordinates with the explicit C ⊗ R^b
    return _tensor_with_free(C, M.free_rank, True)


def tensor_with_map(C: FinModule, alpha: ChainMap, TA: ChainComplex, TB: ChainComplex) -> ChainMap:
    A = alpha.source.algebra
    comps = {}
    for n in alpha.degrees():
        S, T = alpha.source.module(n), alpha.target.module(n)
        if not (S.dim and T.dim):
            continue
        if S.free_rank is not None and T.free_rank is not None:
            comps[n] = ring_matrix_action(A, free_ring_matrix(alpha.f(n), A.d), C.action)
        else:
            t1 = _as_tensor(C, TA.module(n), S)
            t2 = _as_tensor(C, TB.module(n), T)
            comps[n] = tensor_map(t1, t2, alpha.component(n)).matrix
    return ChainMap(TA, TB, comps, check=False)


# -- minimality and minimization -------------------------------------------------------------


def _in_radical(M: FinModule, V: np.ndarray) -> bool:
    if V.shape[1] == 0 or not V.any():
        return True
    if M.copies > 1:
        one = FinModule(M.algebra, M.base, 1)
        k = M.block
        V = V.reshape(M.copies, k, -1).transpose(1, 0, 2).reshape(k, -1)
        return _in_radical(one, V)
    R = radical_basis(M)
    return gfp.rank(np.hstack([R, V]), M.p) == R.shape[1]


def is_minimal(X: ChainComplex) -> bool:
    """im ∂_n ⊆ m X_{n-1} for every n."""
    for n in range(X.lo + 1, X.hi + 1):
        if not _in_radical(X.module(n - 1), X.d(n)):
            return False
    return True


@dataclass(eq=False)
class MinimizeResult:
    complex: ChainComplex
    forward: ChainMap = field(repr=False)  # input -> minimal
    backward: ChainMap = field(repr=False)  # minimal -> input
    certificate: QuasiIsoCertificate = field(repr=False)
    steps: int = 0


def _ring_matrices(X: ChainComplex, C: FinModule | None):
    """Ranks and ring matrices of a complex of free (or C-power) modules."""
    A = X.algebra
    ranks = []
    for M in X.modules:
        if C is None:
            r = M.free_rank
        else:
            r = M.power_of(C) if M.dim else 0
        if r is None:
            raise NonFreeInput(f"module of dim {M.dim} is not {'free' if C is None else 'a power of C'}")
        ranks.append(r)
    if C is None:
        mats = [free_ring_matrix(D, A.d) for D in X.diffs]
    else:
        mats = [_solve_homothety_blocks(C, D, ranks[k], ranks[k + 1]) for k, D in enumerate(X.diffs)]
    return ranks, mats


def _solve_homothety_blocks(C: FinModule, D: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Ring matrix X with ring_matrix_action(X, C) = D (each block a homothety)."""
    A = C.algebra
    c = C.dim
    basis = C.action.reshape(A.d, c * c).T  # columns vec(A_j)
    blocks = D.reshape(rows, c, cols, c).transpose(1, 3, 0, 2).reshape(c * c, rows * cols)
    sol = gfp.solve(basis, blocks, A.p)
    if sol is None:
        raise NonFreeInput("a differential block is not multiplication by a ring element")
    return np.ascontiguousarray(sol.reshape(A.d, rows, cols).transpose(1, 2, 0))


def minimize(X: ChainComplex, C: FinModule | None = None) -> MinimizeResult:
    """Strip contractible R -> R (or C -> C) summands until no unit entry remains.

    Pivot order: lowest degree first, then row-major within the differential.
    """
    A = X.algebra
    p = A.p
    ranks, mats = _ring_matrices(X, C)
    lo = X.lo
    nd = len(ranks)
    fwd = [ring_identity(A, r) for r in ranks]
    bwd = [ring_identity(A, r) for r in ranks]
    steps = 0

    def unit_inv(u):
        return A.inverse(u)

    while True:
        loc = None
        for k, D in enumerate(mats):  # mats[k]: degree lo+k+1 -> lo+k
            nz = np.argwhere(D[..., 0] % p != 0)
            if nz.size:
                loc = (k, int(nz[0][0]), int(nz[0][1]))
                break
        if loc is None:
            break
        k, g, h = loc
        D = mats[k].astype(np.int64)
        u = D[g, h]
        ui = unit_inv(u)
        rk = [i for i in range(D.shape[0]) if i != g]
        ck = [j for j in range(D.shape[1]) if j != h]
        b = D[g][ck][None]  # 1 x (c-1)
        c_ = D[rk][:, h][:, None]  # (r-1) x 1
        cu = ring_matrix_mul(A, c_, ui[None, None])
        newD = (D[np.ix_(rk, ck)] - ring_matrix_mul(A, cu, b).astype(np.int64)) % p
        # forward pieces
        f_top = ring_identity(A, D.shape[1])[ck]  # degree k+1 drops h
        f_bot = np.zeros((len(rk), D.shape[0], A.d), dtype=np.int64)
        f_bot[np.arange(len(rk)), rk, 0] = 1
        f_bot[:, g, :] = (-cu[:, 0, :].astype(np.int64)) % p
        # backward pieces
        g_top = ring_identity(A, D.shape[1])[:, ck].astype(np.int64)
        g_top[h] = (-ring_matrix_mul(A, ui[None, None], b)[0].astype(np.int64)) % p
        g_bot = np.zeros((D.shape[0], len(rk), A.d), dtype=np.int64)
        g_bot[rk, np.arange(len(rk)), 0] = 1
        mats[k] = gfp.reduce(newD, p)
        if k + 1 < len(mats):
            mats[k + 1] = np.ascontiguousarray(mats[k + 1][ck])
        if k > 0:
            mats[k - 1] = np.ascontiguousarray(mats[k - 1][:, rk])
        fwd[k + 1] = ring_matrix_mul(A, f_top, fwd[k + 1])
        fwd[k] = ring_matrix_mul(A, gfp.reduce(f_bot, p), fwd[k])
        bwd[k + 1] = ring_matrix_mul(A, bwd[k + 1], gfp.reduce(g_top, p))
        bwd[k] = ring_matrix_mul(A, bwd[k], gfp.reduce(g_bot, p))
        ranks[k] -= 1
        ranks[k + 1] -= 1
        steps += 1

    base = A.regular if C is None else C.action

    def build(r):
        return free(A, r) if C is None else power(C, r)

    mods = [build(r) for r in ranks]
    diffs = [ring_matrix_action(A, m, base) for m in mats]
    Y = ChainComplex(A, lo, mods, diffs, check=False)
    forward = ChainMap(X, Y, {lo + k: ring_matrix_action(A, fwd[k], base) for k in range(nd)}, check=False)
    backward = ChainMap(Y, X, {lo + k: ring_matrix_action(A, bwd[k], base) for k in range(nd)}, check=False)
    cert = is_quasiiso(forward)
    return MinimizeResult(Y, forward, backward, cert, steps)


def complex_iso_certified(f: ChainMap) -> bool:
    """f is a chain map whose components are all isomorphisms."""
    return f.commutes() and f.is_degreewise_iso() and all(
        f.component(n).is_linear() for n in f.degrees())
