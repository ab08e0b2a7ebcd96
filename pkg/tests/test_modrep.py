import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cprojective import gfp, modrep, randomgen
from cprojective.corpus import RING_IDS, load_ring

import oracles


def oracle_ring(A):
    return oracles.Ring(A.table.tolist(), A.p)


def test_module_axioms_for_constructors(r3):
    for M in (modrep.ring_module(r3), modrep.residue_field(r3), modrep.dual_of_ring(r3),
              modrep.free(r3, 3), modrep.direct_sum(modrep.residue_field(r3), modrep.ring_module(r3))):
        M.check()


def test_bad_action_rejected(r1):
    bad = np.zeros((2, 2, 2), dtype=np.int64)
    bad[0] = np.eye(2)
    bad[1] = np.eye(2)  # x acting invertibly contradicts x^2 = 0
    with pytest.raises(modrep.ModuleError):
        modrep.module_from_action(r1, bad)


def test_hom_omega_omega_and_homothety(r3, omega3):
    H = modrep.hom_module(omega3, omega3)
    assert H.dim == 3
    assert oracles.hom_dim_brute(oracle_ring(r3), omega3.action.tolist(), omega3.action.tolist()) == 3
    assert modrep.homothety(omega3).is_iso()


def test_min_generators(r3, omega3):
    m = modrep.submodule(modrep.ring_module(r3), np.eye(3, dtype=np.int64)[:, 1:])
    assert modrep.min_generators(m.module) == 2
    assert modrep.min_generators(omega3) == 2
    assert modrep.min_generators(modrep.free(r3, 4)) == 4


def test_minimal_cover_of_maximal_ideal(r3):
    m = modrep.submodule(modrep.ring_module(r3), np.eye(3, dtype=np.int64)[:, 1:]).module
    cov = modrep.minimal_cover(m)
    assert cov.free.dim == 6
    assert cov.kernel.dim == 4
    assert cov.surjection.is_linear()
    assert gfp.rank(cov.surjection.matrix, 2) == m.dim


def test_betti_k_over_r3(r3):
    F = modrep.minimal_free_resolution(modrep.residue_field(r3), 4)
    assert F.betti[:4] == [1, 2, 4, 8]
    assert F.betti == oracles.betti_oracle(oracle_ring(r3), modrep.residue_field(r3).action.tolist(), 4)
    assert F.period is None
    assert F.is_minimal()
    F.complex.validate()


def test_betti_matches_oracle_on_random_modules():
    rng = np.random.default_rng(11)
    for rid in ("r1", "r2", "r3", "r2_gf3"):
        A = load_ring(rid)
        for _ in range(4):
            M = randomgen.random_module(A, rng, 5)
            F = modrep.minimal_free_resolution(M, 3, detect_period=False)
            ref = oracles.betti_oracle(oracle_ring(A), M.action.tolist(), 3)
            assert F.betti == ref[:len(F.betti)]


def test_resolution_is_exact(r2):
    M = modrep.quotient_by_element(modrep.ring_module(r2), r2.element("x+y")).module
    F = modrep.minimal_free_resolution(M, 4)
    X = F.complex
    X.validate()
    assert X.is_exact(range(1, 4))
    assert gfp.is_zero(gfp.matmul(F.augmentation.matrix, X.d(1), 2))
    assert gfp.rank(F.augmentation.matrix, 2) == M.dim


def test_period_of_k_over_r1(r1):
    F = modrep.minimal_free_resolution(modrep.residue_field(r1), 5)
    assert F.betti == [1] * 6
    assert F.period == (0, 1)


def test_pd(r1, gf2):
    assert modrep.pd(modrep.free(r1, 2)) == 0
    assert modrep.pd(modrep.residue_field(r1)) == float("inf")
    assert modrep.pd(modrep.residue_field(gf2)) == 0


def test_module_iso_fast_reject(r3, omega3):
    assert modrep.module_iso(omega3, modrep.ring_module(r3)) is None


def test_module_iso_finds_certified_map(r3, omega3):
    # omega ≅ Hom(R, omega) built through the Hom fast path
    H = modrep.hom_module(modrep.ring_module(r3), omega3)
    f = modrep.module_iso(omega3, H)
    assert isinstance(f, modrep.ModuleMap)
    assert f.is_iso() and f.is_linear()


def test_unknown_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(modrep.UNKNOWN)


def test_submodules_of_r3(r3):
    subs = modrep.submodules(modrep.ring_module(r3))
    assert len(subs) == 6
    assert [s.dim for s in subs] == [0, 1, 1, 1, 2, 3]
    assert len(subs) == oracles.submodule_count_brute(oracle_ring(r3), r3.regular.tolist())


def test_submodule_counts_match_brute_force():
    for rid in ("r1", "r2", "gf3"):
        A = load_ring(rid)
        for M in (modrep.ring_module(A), modrep.dual_of_ring(A)):
            assert len(modrep.submodules(M)) == oracles.submodule_count_brute(oracle_ring(A), M.action.tolist())


def test_submodules_cap(r2):
    with pytest.raises(modrep.CapExceeded):
        modrep.submodules(modrep.free(r2, 4))


def test_bidual_of_k_is_iso(r3, omega3):
    assert modrep.natural_bidual(omega3, modrep.residue_field(r3)).is_iso()


@pytest.mark.parametrize("rid", RING_IDS)
def test_hom_fast_paths_agree_with_generic(rid):
    A = load_ring(rid)
    rng = np.random.default_rng(5)
    C = modrep.dual_of_ring(A)
    for _ in range(3):
        M = randomgen.random_module(A, rng, 5, C)
        for src, tgt in ((modrep.free(A, 2), M), (modrep.power(C, 2), M), (M, modrep.power(C, 2))):
            fast = modrep.hom_module(src, tgt)
            generic = modrep._hom_generic(modrep.FinModule(A, src.action), modrep.FinModule(A, tgt.action))
            assert fast.dim == generic.dim
            for j in range(fast.dim):
                f = fast.basis_map(j)
                assert f.is_linear()
                # coordinates round-trip
                assert np.array_equal(fast.coords(f.matrix), np.eye(fast.dim, dtype=np.int64)[j])
            assert modrep.module_iso(fast, generic) is not None


def test_hom_dims_match_list_oracle():
    rng = np.random.default_rng(9)
    for rid in ("r1", "r2", "r3", "r2_gf3"):
        A = load_ring(rid)
        for _ in range(4):
            M = randomgen.random_module(A, rng, 4)
            N = randomgen.random_module(A, rng, 4)
            assert modrep.hom_module(M, N).dim == oracles.hom_dim_brute(
                oracle_ring(A), M.action.tolist(), N.action.tolist())


def test_tensor_free_fast_path(r3, omega3):
    T = modrep.tensor_module(omega3, modrep.free(r3, 2))
    G = modrep._tensor_generic(omega3, modrep.FinModule(r3, modrep.free(r3, 2).action))
    assert T.dim == G.dim == 6
    u, v = np.array([1, 1, 0]), np.array([0, 1, 1, 1, 0, 0])
    # r u ⊗ v = u ⊗ r v in the fast identification
    x = r3.element("x")
    lhs = T.pure(omega3.act_element(x, u), v)
    rhs = T.pure(u, modrep.free(r3, 2).act_element(x, v))
    assert np.array_equal(lhs, rhs)


def test_tensor_with_k(r2):
    k = modrep.residue_field(r2)
    T = modrep.tensor_module(modrep.dual_of_ring(r2), k)
    assert T.dim == modrep.min_generators(modrep.dual_of_ring(r2))


def test_natural_eval_on_c_projectives(r3, omega3):
    for n in (1, 2):
        assert modrep.natural_eval(omega3, modrep.power(omega3, n)).is_iso()


def test_quotient_and_submodule_maps(r2):
    R = modrep.ring_module(r2)
    Q = modrep.quotient_by_element(R, r2.element("x"))
    assert Q.module.dim == 2
    assert Q.map.is_linear()
    K = modrep.annihilated_by(R, r2.element("x"))
    assert K.dim == 2
    assert K.inclusion.is_linear()


@given(st.sampled_from(["r1", "r2", "r3", "r2_gf3"]), st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_hom_basis_maps_are_linear(rid, seed):
    A = load_ring(rid)
    rng = np.random.default_rng(seed)
    M = randomgen.random_module(A, rng, 4)
    N = randomgen.random_module(A, rng, 4)
    H = modrep.hom_module(M, N)
    H.check()
    for j in range(H.dim):
        assert H.basis_map(j).is_linear()
