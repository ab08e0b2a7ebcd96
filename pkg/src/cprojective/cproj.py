"""C-projective modules, P_C-resolutions and coresolutions, and the hereditary probe."""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .algebra import Algebra, ring_matrix_action, ring_matrix_transpose
from .complexes import AugmentedComplex, ChainComplex, hom_from, hom_into, is_minimal
from .modrep import (
    UNKNOWN,
    CapExceeded,
    FinModule,
    FreeResolution,
    ModuleMap,
    hom_module,
    min_generators,
    minimal_free_resolution,
    module_iso,
    natural_bidual,
    pd,
    power,
    residue_field,
    ring_module,
    submodules,
    zero_module,
)
from .semidual import ExtCalculator, SemidualReport, verify_semidualizing


class SemidualNotVerified(ValueError):
    def __init__(self, message: str, report: SemidualReport | None = None):
        super().__init__(message)
        self.report = report


class InconsistentAnswer(AssertionError):
    """Two independent code paths disagreed."""


_semidual_cache: "weakref.WeakKeyDictionary[FinModule, dict[int, SemidualReport]]" = weakref.WeakKeyDictionary()


def require_semidualizing(C: FinModule, bound: int = 10) -> SemidualReport | None:
    if C.free_rank == 1:
        return None
    per = _semidual_cache.setdefault(C, {})
    if bound not in per:
        per[bound] = verify_semidualizing(C, bound)
    rep = per[bound]
    if not rep.verified:
        raise SemidualNotVerified(f"candidate is not semidualizing: {rep.witness}", rep)
    return rep


# -- C-projectivity ------------------------------------------------------------


@dataclass(eq=False)
class CProjective:
    rank: int
    iso: ModuleMap = field(repr=False)  # C^rank -> M


def cproj_test(M: FinModule, C: FinModule, *, cross_check: bool = False, seed: int = 0):
    """Rank n with an explicit isomorphism C^n -> M, ``None``, or ``UNKNOWN``."""
    if M.dim == 0:
        Z = zero_module(M.algebra)
        return CProjective(0, ModuleMap(Z, M, gfp.zeros((0, 0), M.p)))
    answer = None
    if M.dim % C.dim == 0:
        n = M.dim // C.dim
        if min_generators(M) == n * min_generators(C):
            found = module_iso(power(C, n), M, seed=seed)
            if found is UNKNOWN:
                answer = UNKNOWN
            elif found is not None:
                answer = CProjective(n, found)
    if cross_check and answer is not UNKNOWN:
        other = pd(hom_module(C, M)) == 0
        if other != (answer is not None):
            raise InconsistentAnswer(
                f"cproj_test says {answer is not None}, pd(Hom(C, M)) = 0 says {other}")
    return answer


def pc_pd(M: FinModule, C: FinModule) -> float:
    """P_C-projective dimension, via pd Hom(C, M); two-valued at depth 0."""
    return pd(hom_module(C, M))


# -- resolutions -------------------------------------------------------------------


@dataclass(eq=False)
class ResolutionReport:
    kind: str
    complex: ChainComplex = field(repr=False)
    augmented: AugmentedComplex = field(repr=False)
    is_minimal: bool
    proper: str  # Exact | HomCExactOnly | Failed
    witness_degree: int | None
    betti: list[int]
    truncated_at: int
    free_resolution: FreeResolution = field(repr=False)
    hom_exact: bool = False
    augmented_exact: bool = False
    period: tuple[int, int] | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "betti": self.betti,
            "is_minimal": self.is_minimal,
            "proper": self.proper,
            "witness_degree": self.witness_degree,
            "hom_exact": self.hom_exact,
            "augmented_exact": self.augmented_exact,
            "truncated_at": self.truncated_at,
            "period": None,
            "notes": self.notes,
            "complex": self.complex.to_json(),
        }
        if self.period is not None:
            j, t = self.period
            out["period"] = {"from_degree": j, "length": t, "text": f"periodic with period {t} from degree {j}"}
        return out


def _proper(hom_exact_first_bad, aug_exact_first_bad):
    if hom_exact_first_bad is not None:
        return "Failed", hom_exact_first_bad
    if aug_exact_first_bad is not None:
        return "HomCExactOnly", aug_exact_first_bad
    return "Exact", None


def minimal_pc_resolution(M: FinModule, C: FinModule, length: int = 8, *, bound: int = 10) -> ResolutionReport:
    """X = C ⊗ F for F a minimal free resolution of Hom(C, M).

    The report keeps ``length`` terms X_0..X_{length-1}; one extra term is
    computed so that exactness is checked at every reported degree.
    """
    require_semidualizing(C, bound)
    A = M.algebra
    H = hom_module(C, M)
    F = minimal_free_resolution(H, length)
    n = len(F.betti)
    mods = [power(C, b) for b in F.betti]
    diffs = [ring_matrix_action(A, F.ring_matrices[i], C.action) for i in range(n - 1)]
    X_full = ChainComplex(A, 0, mods, diffs, check=False)
    b0 = F.betti[0]
    cols = [H.to_map(F.augmentation.matrix[:, g * A.d]).matrix for g in range(b0)]
    eps = np.hstack(cols) if cols else gfp.zeros((M.dim, 0), A.p)
    eps = ModuleMap(mods[0], M, eps)
    Xp = AugmentedComplex(X_full, M, eps, "resolution").augmented()
    top = min(length, n)
    degs = range(-1, top)
    hb = hom_from(C, Xp).first_nonexact(degs)
    ab = Xp.first_nonexact(degs)
    proper, witness = _proper(hb, ab)
    X = X_full.truncate(0, top - 1)
    aug = AugmentedComplex(X, M, eps, "resolution")
    notes = ["Hom(P_C, -)-exactness checked through Hom(C, -) (finite free adjunction)"]
    if not F.terminated:
        notes.append(f"truncated to {length} terms; exactness checked in degrees -1..{top - 1}")
    return ResolutionReport("resolution", X, aug, is_minimal(X_full), proper, witness, list(F.betti[:top]),
                            length, F, hb is None, ab is None, F.period, notes)


def minimal_pc_coresolution(M: FinModule, C: FinModule, length: int = 8, *, bound: int = 10) -> ResolutionReport:
    """Y_{-i} = Hom(G_i, C) = C^{m_i} for G a minimal free resolution of Hom(M, C).

    Y is stored in degrees -(length-1)..0 with M in degree 1 of ⁺Y.
    """
    require_semidualizing(C, bound)
    A = M.algebra
    H = hom_module(M, C)
    G = minimal_free_resolution(H, length)
    n = len(G.betti)
    mods = [power(C, G.betti[i]) for i in range(n - 1, -1, -1)]
    diffs = [ring_matrix_action(A, ring_matrix_transpose(G.ring_matrices[i]), C.action)
             for i in range(n - 2, -1, -1)]
    Y_full = ChainComplex(A, -(n - 1), mods, diffs, check=False)
    m0 = G.betti[0]
    rows = [H.to_map(G.augmentation.matrix[:, g * A.d]).matrix for g in range(m0)]
    gamma = np.vstack(rows) if rows else gfp.zeros((0, M.dim), A.p)
    gamma = ModuleMap(M, Y_full.module(0), gamma)
    Yp = AugmentedComplex(Y_full, M, gamma, "coresolution").augmented()
    top = min(length, n)
    hb = hom_into(Yp, C).first_nonexact(range(-1, top))
    ab = Yp.first_nonexact(range(1, -top, -1))
    proper, witness = _proper(hb, ab)
    Y = Y_full.truncate(-(top - 1), 0)
    aug = AugmentedComplex(Y, M, gamma, "coresolution")
    notes = ["Hom(-, P_C)-exactness checked through Hom(-, C) (finite free reduction)",
             "coresolution stored in degrees <= 0; M sits in degree 1"]
    return ResolutionReport("coresolution", Y, aug, is_minimal(Y_full), proper, witness, list(G.betti[:top]),
                            length, G, hb is None, ab is None, G.period, notes)


# -- Bass-class style criterion --------------------------------------------------------


@dataclass
class CriterionReport:
    verdict: str  # Admits | Refuted | UnknownBeyondBound
    bidual_iso: bool
    ext_dims: list[int]
    bound: int
    witness: dict | None = None
    tail_argument: str | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def coresolution_criterion(M: FinModule, C: FinModule, bound: int = 10) -> CriterionReport:
    """δ_M iso and Ext^{1..bound}(Hom(M, C), C) = 0, with a tail argument when available."""
    delta = natural_bidual(C, M)
    iso = delta.is_iso()
    H = hom_module(M, C)
    calc = ExtCalculator(H, C, bound)
    dims = [calc.dim(i) for i in range(1, bound + 1)]
    if not iso:
        return CriterionReport("Refuted", False, dims, bound,
                               {"kind": "bidual", "source_dim": M.dim, "target_dim": delta.target.dim,
                                "rank": delta.rank()})
    if any(dims):
        i = next(k for k, v in enumerate(dims, start=1) if v)
        return CriterionReport("Refuted", True, dims, bound, {"kind": "ext", "degree": i, "dim": dims[i - 1]})
    F = calc.resolution
    if F.terminated:
        return CriterionReport("Admits", True, dims, bound, None, "Hom(M, C) has a finite free resolution")
    full = minimal_free_resolution(H, bound, iso_limit=64)
    if full.period is not None:
        j, t = full.period
        if j + t <= bound:
            return CriterionReport("Admits", True, dims, bound, None,
                                   f"syzygies of Hom(M, C) periodic with period {t} from degree {j}")
    if ExtCalculator(residue_field(M.algebra), C, 1).dim(1) == 0:
        return CriterionReport("Admits", True, dims, bound, None, "Ext^1(k, C) = 0, so C is injective")
    return CriterionReport("UnknownBeyondBound", True, dims, bound)


# -- hereditary probe ------------------------------------------------------------------------


@dataclass
class ProbeReport:
    verdict: str  # Hereditary-evidence | Refuted
    checked: int
    witness: np.ndarray | None = field(default=None, repr=False)
    witness_dim: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked": self.checked,
            "witness_dim": self.witness_dim,
            "witness_basis": None if self.witness is None else self.witness.astype(int).T.tolist(),
            "notes": self.notes,
        }


def hereditary_probe(A: Algebra, C: FinModule | None = None, s: int = 1) -> ProbeReport:
    """Test every submodule of C^s for C-projectivity."""
    C = C if C is not None else ring_module(A)
    ambient = power(C, s)
    if A.p ** ambient.dim > 2**12:
        raise CapExceeded(f"C^{s} has {A.p}^{ambient.dim} elements; limit is 2^12")
    subs = submodules(ambient)
    for k, S in enumerate(subs, start=1):
        res = cproj_test(S.module, C)
        if res is UNKNOWN:
            raise RuntimeError("isomorphism search inconclusive during hereditary probe")
        if res is None:
            return ProbeReport("Refuted", k, S.basis, S.dim,
                               ["a submodule of a C-projective module is not C-projective"])
    return ProbeReport("Hereditary-evidence", len(subs), None, None,
                       [f"all {len(subs)} submodules of C^{s} are C-projective; evidence only, not a proof"])


def pd_value_text(v: float) -> str:
    return "∞" if v == math.inf else str(int(v))
